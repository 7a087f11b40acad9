"""Job bookkeeping and the parallelism cap for solver runs."""

from __future__ import annotations

import asyncio
import os
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..protocol import RunRequest


class JobState(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    FINISHED = "finished"


@dataclass
class Job:
    id: str  # correlation string from the run envelope
    request: RunRequest
    state: JobState = JobState.QUEUED
    started_at: Optional[float] = None  # time.monotonic
    deadline: Optional[float] = None
    key: int = 0  # manager-internal, unique across the process

    def start(self, timeout: float) -> None:
        if self.state is not JobState.QUEUED:
            raise RuntimeError(f"job {self.id}: cannot start from {self.state}")
        self.state = JobState.RUNNING
        self.started_at = time.monotonic()
        self.deadline = self.started_at + timeout

    def finish(self) -> None:
        if self.state is not JobState.RUNNING:
            raise RuntimeError(f"job {self.id}: cannot finish from {self.state}")
        self.state = JobState.FINISHED


def default_max_jobs() -> int:
    return os.cpu_count() or 1


@dataclass
class JobManager:
    """Tracks live jobs and bounds how many execute at once.

    Correlation ids are caller-chosen and may repeat across runs, so live
    jobs are keyed by an internal sequence number; finished jobs are
    dropped once their result is handed back.
    """

    max_jobs: int = field(default_factory=default_max_jobs)

    def __post_init__(self):
        self._live: dict[int, Job] = {}
        self._slots = asyncio.Semaphore(self.max_jobs)
        self._counter = 0

    def create(self, request: RunRequest, job_id: str = "") -> Job:
        self._counter += 1
        job = Job(id=job_id or f"job-{self._counter}", request=request, key=self._counter)
        self._live[job.key] = job
        return job

    def release(self, job: Job) -> None:
        if job.state is JobState.RUNNING:
            job.finish()
        self._live.pop(job.key, None)

    def slot(self) -> asyncio.Semaphore:
        return self._slots

    def live(self) -> list[Job]:
        return list(self._live.values())
