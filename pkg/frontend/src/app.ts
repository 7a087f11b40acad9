/**
 * The browser IDE: four regions (navigation bar, tabbed editor, output
 * panel, collapsible options panel) wired to the gateway socket.
 *
 * All durable state lives in the workspace, persisted on every mutation
 * under one local-storage key; transient run/connection/highlight state
 * lives in UiState.
 */

import { AutoRunScheduler } from "./autorun";
import { EditorFactory, EditorHost } from "./editor";
import {
  applyHighlight,
  NAME_TOKEN_CLASS,
  renderOutput,
  scanNames,
} from "./highlight";
import {
  composeRequest,
  Envelope,
  EngineListing,
  exportWorkspace,
  IDENTIFIER_RE,
  importWorkspace,
  isFault,
  OPTION_NAME_RE,
  OptionEntry,
  Tab,
  Workspace,
} from "./protocol";
import {
  Connection,
  initialUiState,
  KeyValueStore,
  saveWorkspace,
  UiState,
} from "./state";
import { GatewaySocket, RunOutcome, SocketFactory, Timers } from "./socket";

const LAYOUT_OPTIONS_PANEL = "options_panel";

export interface AppDeps {
  storage: KeyValueStore;
  socketFactory: SocketFactory;
  editorFactory: EditorFactory;
  timers: Timers;
  socketUrl: string;
}

export class App {
  readonly state: UiState;
  private readonly socket: GatewaySocket;
  private readonly autoRun: AutoRunScheduler;
  private readonly autoRunIds = new Set<string>();
  private editor!: EditorHost;
  private activeTab = 0;
  private engines: EngineListing = { engines: [] };

  // regions
  private nav!: HTMLElement;
  private editorRegion!: HTMLElement;
  private outputRegion!: HTMLElement;
  private optionsRegion!: HTMLElement;
  // controls
  private tabBar!: HTMLElement;
  private editorMount!: HTMLElement;
  private outputEl!: HTMLElement;
  private statusEl!: HTMLElement;
  private busyEl!: HTMLElement;
  private connectionEl!: HTMLElement;
  private uploadInput!: HTMLInputElement;
  private engineList!: HTMLDataListElement;

  private readonly keyHandler = (event: KeyboardEvent) => {
    if ((event.ctrlKey || event.metaKey) && event.key === "Enter") {
      event.preventDefault();
      this.runCurrent();
    }
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly deps: AppDeps,
  ) {
    this.state = initialUiState(deps.storage);
    this.socket = new GatewaySocket(
      deps.socketUrl,
      {
        onConnection: (c) => this.onConnection(c),
        onRunSettled: (id, outcome) => this.onRunSettled(id, outcome),
        onEngines: (listing) => this.onEngines(listing),
      },
      deps.socketFactory,
      deps.timers,
    );
    this.autoRun = new AutoRunScheduler(() => {
      this.autoRunIds.add(this.runCurrent());
    }, deps.timers);
    this.renderLayout();
    this.socket.start();
  }

  get workspace(): Workspace {
    return this.state.workspace;
  }

  dispose(): void {
    this.root.ownerDocument.removeEventListener("keydown", this.keyHandler);
    this.autoRun.cancel();
    this.editor.destroy();
    this.socket.stop();
    this.root.textContent = "";
  }

  // --- layout ----------------------------------------------------------------

  private renderLayout(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.root.classList.add("loide-app");

    this.nav = doc.createElement("header");
    this.nav.className = "nav-region";
    const brand = doc.createElement("span");
    brand.className = "brand";
    brand.textContent = "loide";
    const runBtn = this.button(doc, "run-btn", "Run", () => this.runCurrent());
    const uploadBtn = this.button(doc, "upload-btn", "Upload", () =>
      this.uploadInput.click(),
    );
    const downloadBtn = this.button(doc, "download-btn", "Download", () =>
      this.downloadWorkspace(),
    );
    const optionsBtn = this.button(doc, "options-toggle", "Options", () =>
      this.toggleOptionsPanel(),
    );
    this.uploadInput = doc.createElement("input");
    this.uploadInput.type = "file";
    this.uploadInput.accept = ".json,application/json";
    this.uploadInput.hidden = true;
    this.uploadInput.addEventListener("change", () => {
      const file = this.uploadInput.files?.[0];
      if (file) void this.importFile(file);
      this.uploadInput.value = "";
    });
    this.connectionEl = doc.createElement("span");
    this.connectionEl.id = "connection";
    this.connectionEl.className = "badge";
    this.nav.append(
      brand,
      runBtn,
      uploadBtn,
      downloadBtn,
      optionsBtn,
      this.uploadInput,
      this.connectionEl,
    );

    this.editorRegion = doc.createElement("section");
    this.editorRegion.className = "editor-region";
    this.tabBar = doc.createElement("div");
    this.tabBar.className = "tabbar";
    this.editorMount = doc.createElement("div");
    this.editorMount.className = "editor-mount";
    this.editorRegion.append(this.tabBar, this.editorMount);
    this.editorRegion.addEventListener("dragover", (event) => {
      event.preventDefault();
    });
    this.editorRegion.addEventListener("drop", (event) => {
      event.preventDefault();
      const file = (event as DragEvent).dataTransfer?.files?.[0];
      if (file) void this.importFile(file);
    });

    this.outputRegion = doc.createElement("section");
    this.outputRegion.className = "output-region";
    const outputHead = doc.createElement("div");
    outputHead.className = "output-head";
    this.statusEl = doc.createElement("span");
    this.statusEl.id = "output-status";
    this.busyEl = doc.createElement("span");
    this.busyEl.id = "busy";
    this.busyEl.hidden = true;
    this.busyEl.textContent = "running…";
    outputHead.append(this.statusEl, this.busyEl);
    this.outputEl = doc.createElement("div");
    this.outputEl.id = "output";
    this.outputEl.addEventListener("click", (event) => {
      const token = (event.target as HTMLElement).closest?.(
        `.${NAME_TOKEN_CLASS}`,
      ) as HTMLElement | null;
      if (token?.dataset.name) this.toggleHighlight(token.dataset.name);
    });
    this.outputRegion.append(outputHead, this.outputEl);

    this.optionsRegion = doc.createElement("aside");
    this.optionsRegion.className = "options-region";
    this.engineList = doc.createElement("datalist");
    this.engineList.id = "engine-names";

    const main = doc.createElement("main");
    main.className = "main-columns";
    main.append(this.editorRegion, this.outputRegion, this.optionsRegion);
    this.root.append(this.nav, main, this.engineList);

    this.editor = this.deps.editorFactory(
      this.editorMount,
      this.currentTab().text,
    );
    this.editor.onChange(() => this.onEdit());
    this.root.ownerDocument.addEventListener("keydown", this.keyHandler);

    this.renderTabs();
    this.renderOptionsPanel();
    this.applyLayout();
    this.renderConnection();
    if (this.workspace.last_output) {
      this.showModel(this.workspace.last_output.model, this.workspace.last_output.error);
      this.statusEl.textContent = "last saved output";
    }
  }

  private button(
    doc: Document,
    id: string,
    label: string,
    onClick: () => void,
  ): HTMLButtonElement {
    const btn = doc.createElement("button");
    btn.id = id;
    btn.type = "button";
    btn.textContent = label;
    btn.addEventListener("click", onClick);
    return btn;
  }

  // --- tabs ------------------------------------------------------------------

  private currentTab(): Tab {
    return this.workspace.tabs[this.activeTab]!;
  }

  private renderTabs(): void {
    const doc = this.root.ownerDocument;
    this.tabBar.textContent = "";
    this.workspace.tabs.forEach((tab, index) => {
      const el = doc.createElement("div");
      el.className = "tab" + (index === this.activeTab ? " active" : "");
      const select = doc.createElement("input");
      select.type = "checkbox";
      select.className = "run-select";
      select.title = "include in runs";
      select.checked = tab.run_selected;
      select.addEventListener("change", () => {
        tab.run_selected = select.checked;
        this.persist();
      });
      const name = doc.createElement("span");
      name.className = "tab-name";
      name.textContent = tab.name;
      name.addEventListener("click", () => this.switchTab(index));
      const close = doc.createElement("button");
      close.className = "tab-close";
      close.type = "button";
      close.textContent = "×";
      close.addEventListener("click", () => this.closeTab(index));
      el.append(select, name, close);
      this.tabBar.appendChild(el);
    });
    const add = doc.createElement("button");
    add.id = "add-tab";
    add.type = "button";
    add.textContent = "+";
    add.addEventListener("click", () => this.addTab());
    this.tabBar.appendChild(add);
  }

  private switchTab(index: number): void {
    if (index === this.activeTab || !this.workspace.tabs[index]) return;
    this.activeTab = index;
    this.editor.setText(this.currentTab().text);
    this.renderTabs();
  }

  private addTab(): void {
    const names = new Set(this.workspace.tabs.map((t) => t.name));
    let n = this.workspace.tabs.length + 1;
    while (names.has(`tab-${n}`)) n += 1;
    this.workspace.tabs.push({ name: `tab-${n}`, text: "", run_selected: true });
    this.activeTab = this.workspace.tabs.length - 1;
    this.editor.setText("");
    this.persist();
    this.renderTabs();
  }

  private closeTab(index: number): void {
    if (this.workspace.tabs.length <= 1) return;
    this.workspace.tabs.splice(index, 1);
    if (this.activeTab >= this.workspace.tabs.length) {
      this.activeTab = this.workspace.tabs.length - 1;
    } else if (index < this.activeTab) {
      this.activeTab -= 1;
    }
    this.editor.setText(this.currentTab().text);
    this.persist();
    this.renderTabs();
  }

  private onEdit(): void {
    const text = this.editor.getText();
    this.currentTab().text = text;
    this.persist();
    if (this.workspace.settings.auto_run) this.autoRun.noteEdit(text);
  }

  // --- running ---------------------------------------------------------------

  /** Dispatch the composed workspace; returns the run's correlation id. */
  runCurrent(): string {
    const id = this.socket.dispatchRun(composeRequest(this.workspace));
    this.state.busyRuns.add(id);
    this.renderBusy();
    return id;
  }

  private onRunSettled(id: string, outcome: RunOutcome): void {
    if (!this.state.busyRuns.delete(id)) return;
    this.renderBusy();
    if (outcome.kind === "result") {
      this.workspace.last_output = outcome.result;
      this.persist();
      this.statusEl.textContent = "";
      this.showModel(outcome.result.model, outcome.result.error);
    } else {
      this.statusEl.textContent = "";
      this.showProblem(outcome.problem.code, outcome.problem.detail);
    }
    if (this.autoRunIds.delete(id)) this.autoRun.noteRunSettled();
  }

  private showModel(model: string, error: string): void {
    renderOutput(this.outputEl, model);
    if (error) {
      const errEl = this.root.ownerDocument.createElement("div");
      errEl.className = "run-error";
      errEl.textContent = error;
      this.outputEl.appendChild(errEl);
    }
    // Keep the selection only if the name still occurs in this output.
    if (
      this.state.highlightName !== null &&
      !scanNames(model).includes(this.state.highlightName)
    ) {
      this.state.highlightName = null;
    }
    applyHighlight(this.outputEl, this.state.highlightName);
  }

  private showProblem(code: string, detail: string): void {
    this.state.highlightName = null;
    this.outputEl.textContent = "";
    const el = this.root.ownerDocument.createElement("div");
    el.className = "problem";
    el.textContent = `${code}: ${detail}`;
    this.outputEl.appendChild(el);
  }

  private renderBusy(): void {
    const n = this.state.busyRuns.size;
    this.busyEl.hidden = n === 0;
    this.busyEl.textContent = n > 1 ? `running ${n}…` : "running…";
  }

  private toggleHighlight(name: string): void {
    this.state.highlightName = this.state.highlightName === name ? null : name;
    applyHighlight(this.outputEl, this.state.highlightName);
  }

  // --- connection / engines ----------------------------------------------------

  private onConnection(connection: Connection): void {
    this.state.connection = connection;
    this.renderConnection();
  }

  private renderConnection(): void {
    this.connectionEl.dataset.state = this.state.connection;
    this.connectionEl.textContent = this.state.connection;
  }

  private onEngines(message: Envelope): void {
    this.engines = message.payload as EngineListing;
    this.renderEngineChoices();
  }

  private renderEngineChoices(): void {
    const doc = this.root.ownerDocument;
    this.engineList.textContent = "";
    for (const info of this.engines.engines) {
      if (info.language !== this.workspace.settings.language) continue;
      const opt = doc.createElement("option");
      opt.value = info.engine;
      this.engineList.appendChild(opt);
    }
  }

  // --- options panel -----------------------------------------------------------

  private renderOptionsPanel(): void {
    const doc = this.root.ownerDocument;
    const s = this.workspace.settings;
    this.optionsRegion.textContent = "";

    const title = doc.createElement("h2");
    title.textContent = "Options";

    const languageField = this.textField(doc, "language", "Language", s.language, (v) => {
      if (IDENTIFIER_RE.test(v)) {
        s.language = v;
        this.persist();
        this.renderEngineChoices();
      }
    });
    const engineField = this.textField(doc, "engine", "Engine", s.engine, (v) => {
      if (IDENTIFIER_RE.test(v)) {
        s.engine = v;
        this.persist();
      }
    });
    (engineField.querySelector("input") as HTMLInputElement).setAttribute(
      "list",
      "engine-names",
    );

    const autoLabel = doc.createElement("label");
    autoLabel.className = "field";
    const auto = doc.createElement("input");
    auto.type = "checkbox";
    auto.id = "auto-run";
    auto.checked = s.auto_run;
    auto.addEventListener("change", () => {
      s.auto_run = auto.checked;
      if (!auto.checked) this.autoRun.cancel();
      this.persist();
    });
    autoLabel.append(auto, doc.createTextNode(" run on statement end"));

    const optionsList = doc.createElement("div");
    optionsList.id = "options-list";
    s.options.forEach((opt, index) =>
      optionsList.appendChild(this.optionRow(doc, opt, index)),
    );
    const addOption = this.button(doc, "add-option", "Add option", () => {
      // A fresh row starts blank; it reaches settings once the name is valid.
      this.workspace.settings.options.push({ name: "", values: [] });
      this.renderOptionsPanel();
    });

    this.optionsRegion.append(
      title,
      languageField,
      engineField,
      autoLabel,
      optionsList,
      addOption,
    );
  }

  private textField(
    doc: Document,
    id: string,
    label: string,
    value: string,
    commit: (value: string) => void,
  ): HTMLElement {
    const wrap = doc.createElement("label");
    wrap.className = "field";
    wrap.append(doc.createTextNode(label + " "));
    const input = doc.createElement("input");
    input.type = "text";
    input.id = id;
    input.value = value;
    input.addEventListener("change", () => commit(input.value.trim()));
    wrap.appendChild(input);
    return wrap;
  }

  private optionRow(doc: Document, opt: OptionEntry, index: number): HTMLElement {
    const row = doc.createElement("div");
    row.className = "option-row";
    const name = doc.createElement("input");
    name.type = "text";
    name.className = "opt-name";
    name.placeholder = "name";
    name.value = opt.name;
    const values = doc.createElement("input");
    values.type = "text";
    values.className = "opt-values";
    values.placeholder = "value,value";
    values.value = opt.values.join(",");
    const commit = () => {
      const n = name.value.trim();
      name.classList.toggle("invalid", !OPTION_NAME_RE.test(n));
      opt.name = n;
      opt.values = values.value === "" ? [] : values.value.split(",");
      this.persist();
    };
    name.addEventListener("change", commit);
    values.addEventListener("change", commit);
    const remove = doc.createElement("button");
    remove.type = "button";
    remove.className = "opt-remove";
    remove.textContent = "×";
    remove.addEventListener("click", () => {
      this.workspace.settings.options.splice(index, 1);
      this.persist();
      this.renderOptionsPanel();
    });
    row.append(name, values, remove);
    return row;
  }

  toggleOptionsPanel(): void {
    const collapsed = this.optionsRegion.classList.toggle("collapsed");
    this.workspace.settings.layout[LAYOUT_OPTIONS_PANEL] = collapsed
      ? "collapsed"
      : "open";
    this.persist();
  }

  private applyLayout(): void {
    this.optionsRegion.classList.toggle(
      "collapsed",
      this.workspace.settings.layout[LAYOUT_OPTIONS_PANEL] === "collapsed",
    );
  }

  // --- persistence / import / export --------------------------------------------

  /** The workspace as written to storage and to downloaded files.  Options
   * whose names are not yet valid stay UI-only: persisting them would make
   * the stored document fail validation on reload. */
  exportText(): string {
    const ws = this.workspace;
    const exportable: Workspace = {
      ...ws,
      settings: {
        ...ws.settings,
        options: ws.settings.options.filter((o) => OPTION_NAME_RE.test(o.name)),
      },
    };
    return exportWorkspace(exportable);
  }

  private persist(): void {
    saveWorkspace(this.deps.storage, this.exportText());
  }

  importText(text: string): boolean {
    const ws = importWorkspace(text);
    if (isFault(ws)) {
      this.showProblem(ws.code, ws.detail);
      return false;
    }
    this.state.workspace = ws;
    this.activeTab = 0;
    this.editor.setText(this.currentTab().text);
    this.persist();
    this.renderTabs();
    this.renderOptionsPanel();
    this.applyLayout();
    this.renderEngineChoices();
    this.statusEl.textContent = "";
    if (ws.last_output) {
      this.showModel(ws.last_output.model, ws.last_output.error);
      this.statusEl.textContent = "last saved output";
    } else {
      this.outputEl.textContent = "";
    }
    return true;
  }

  private async importFile(file: File): Promise<void> {
    this.importText(await file.text());
  }

  private downloadWorkspace(): void {
    const doc = this.root.ownerDocument;
    const view = doc.defaultView;
    if (!view?.URL?.createObjectURL) return; // not available (tests)
    const blob = new Blob([this.exportText()], { type: "application/json" });
    const url = view.URL.createObjectURL(blob);
    const anchor = doc.createElement("a");
    anchor.href = url;
    anchor.download = "workspace.json";
    anchor.click();
    view.URL.revokeObjectURL(url);
  }
}
