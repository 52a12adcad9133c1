"""Run manager for executing independent replications without losing determinism."""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


class RunState(Enum):
    """Enumeration of run states."""

    STOPPED = "stopped"
    RUNNING = "running"
    CANCELLED = "cancelled"
    ERROR = "error"


class RunCancelled(Exception):
    """Raised inside a run after ``cancel`` was requested."""


class ManagedRun:
    """A named batch of independent work items mapped over a thread pool.

    Results always come back in item order, so a reduction over them does not
    depend on the thread count.
    """

    def __init__(self, name: str, threads: int = 1):
        """Initialize a managed run.

        Args:
            name: Human-readable name for this run.
            threads: Worker threads; 1 runs items inline.
        """
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        self.name = name
        self.threads = threads
        self._state = RunState.STOPPED
        self._cancel = threading.Event()
        self._lock = threading.Lock()
        self._completed = 0

    @property
    def state(self) -> RunState:
        """Get the current run state."""
        return self._state

    @state.setter
    def state(self, value: RunState) -> None:
        if self._state != value:
            logger.debug("[%s] %s -> %s", self.name, self._state.value, value.value)
            self._state = value

    @property
    def completed(self) -> int:
        """Number of work items finished by the most recent ``map``."""
        return self._completed

    def is_running(self) -> bool:
        """Check if the run is currently mapping."""
        return self._state is RunState.RUNNING

    def cancel(self) -> None:
        """Request cancellation; pending items raise RunCancelled."""
        self._cancel.set()

    def map(self, fn: Callable[[T], R], items: Iterable[T], label: str = "") -> list[R]:
        """Apply ``fn`` to every item and return the results in item order.

        Args:
            fn: Function of one work item.
            items: Work items.
            label: Short description for the start/finish log lines.

        Returns:
            List of results, one per item, in the order of ``items``.
        """
        work: Sequence[T] = list(items)
        what = label or f"{len(work)} items"
        self._cancel.clear()
        self._completed = 0
        self.state = RunState.RUNNING
        logger.debug("[%s] Started: %s on %d thread(s)", self.name, what, self.threads)

        def run_one(item: T) -> R:
            if self._cancel.is_set():
                raise RunCancelled(self.name)
            result = fn(item)
            with self._lock:
                self._completed += 1
            return result

        try:
            if self.threads == 1 or len(work) <= 1:
                results = [run_one(item) for item in work]
            else:
                with ThreadPoolExecutor(
                    max_workers=self.threads, thread_name_prefix=self.name
                ) as pool:
                    results = list(pool.map(run_one, work))
        except RunCancelled:
            self.state = RunState.CANCELLED
            logger.warning("[%s] Cancelled after %d of %d", self.name, self._completed, len(work))
            raise
        except Exception as e:
            self.state = RunState.ERROR
            logger.error("[%s] Error: %s", self.name, e)
            raise
        self.state = RunState.STOPPED
        logger.debug("[%s] Finished: %s", self.name, what)
        return results


class RunManager:
    """Manages multiple named runs."""

    def __init__(self, threads: int = 1):
        """Initialize the run manager.

        Args:
            threads: Default worker count for new runs.
        """
        self.threads = threads
        self._runs: dict[str, ManagedRun] = {}

    def create_run(self, name: str, threads: Optional[int] = None) -> ManagedRun:
        """Create or get a managed run.

        Args:
            name: Unique name for the run.
            threads: Worker count, defaults to the manager's.

        Returns:
            The ManagedRun instance.
        """
        if name not in self._runs:
            self._runs[name] = ManagedRun(name, threads or self.threads)
        return self._runs[name]

    def get_run(self, name: str) -> Optional[ManagedRun]:
        """Get a managed run by name."""
        return self._runs.get(name)

    def cancel_all(self) -> None:
        """Cancel all running runs."""
        for run in self._runs.values():
            if run.is_running():
                run.cancel()

    def get_running_runs(self) -> list[str]:
        """Get names of all running runs."""
        return [name for name, run in self._runs.items() if run.is_running()]
