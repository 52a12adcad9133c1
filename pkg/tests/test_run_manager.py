import threading

import pytest

from contagion.core.run_manager import ManagedRun, RunCancelled, RunManager, RunState


class TestManagedRun:
    @pytest.mark.parametrize("threads", [1, 4])
    def test_results_keep_item_order(self, threads) -> None:
        run = ManagedRun("squares", threads=threads)
        assert run.map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
        assert run.state is RunState.STOPPED
        assert run.completed == 20

    def test_error_state(self) -> None:
        run = ManagedRun("broken")

        def fail(x: int) -> int:
            if x == 2:
                raise ZeroDivisionError("boom")
            return x

        with pytest.raises(ZeroDivisionError):
            run.map(fail, range(5))
        assert run.state is RunState.ERROR

    def test_cancel_stops_pending_items(self) -> None:
        run = ManagedRun("cancelled")

        def work(x: int) -> int:
            if x == 1:
                run.cancel()
            return x

        with pytest.raises(RunCancelled):
            run.map(work, range(5))
        assert run.state is RunState.CANCELLED
        assert run.completed == 2

    def test_map_clears_a_previous_cancel(self) -> None:
        run = ManagedRun("again")
        run.cancel()
        assert run.map(str, [1, 2]) == ["1", "2"]

    def test_running_while_mapping(self) -> None:
        run = ManagedRun("busy")
        seen = []
        run.map(lambda _: seen.append(run.is_running()), range(3))
        assert seen == [True, True, True]
        assert not run.is_running()

    def test_worker_threads_are_named(self) -> None:
        run = ManagedRun("pool", threads=2)
        names = run.map(lambda _: threading.current_thread().name, range(4))
        assert all(name.startswith("pool") for name in names)

    def test_threads_must_be_positive(self) -> None:
        with pytest.raises(ValueError):
            ManagedRun("none", threads=0)


class TestRunManager:
    def test_create_run_is_idempotent(self) -> None:
        manager = RunManager(threads=3)
        run = manager.create_run("bounds")
        assert manager.create_run("bounds") is run
        assert run.threads == 3
        assert manager.create_run("other", threads=1).threads == 1
        assert manager.get_run("bounds") is run
        assert manager.get_run("missing") is None

    def test_running_runs_and_cancel_all(self) -> None:
        manager = RunManager()
        run = manager.create_run("long")
        observed = []

        def work(x: int) -> int:
            observed.append(manager.get_running_runs())
            manager.cancel_all()
            return x

        with pytest.raises(RunCancelled):
            run.map(work, range(3))
        assert observed == [["long"]]
        assert manager.get_running_runs() == []
