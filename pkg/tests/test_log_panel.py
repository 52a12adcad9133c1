import io
import logging

import pytest

from contagion.core.log_panel import SUCCESS, LogPanel, log_success, setup_logging


@pytest.fixture
def stream() -> io.StringIO:
    return io.StringIO()


@pytest.fixture(autouse=True)
def restore_package_logger():
    logger = logging.getLogger("contagion")
    handlers, level, propagate = list(logger.handlers), logger.level, logger.propagate
    yield
    logger.handlers = handlers
    logger.setLevel(level)
    logger.propagate = propagate


def test_lines_are_tagged(stream) -> None:
    setup_logging(0, stream)
    log = logging.getLogger("contagion.test")
    log.info("loaded %d vertices", 5)
    log_success(log, "done")
    log.debug("hidden")
    assert stream.getvalue() == "[INFO] loaded 5 vertices\n[SUCCESS] done\n"


@pytest.mark.parametrize("verbosity, level", [(-1, logging.WARNING), (0, logging.INFO), (2, logging.DEBUG)])
def test_verbosity(stream, verbosity, level) -> None:
    setup_logging(verbosity, stream)
    assert logging.getLogger("contagion").level == level


def test_setup_replaces_previous_panel(stream) -> None:
    first = setup_logging(0, io.StringIO())
    second = setup_logging(0, stream)
    handlers = logging.getLogger("contagion").handlers
    assert second in handlers and first not in handlers


def test_history_is_bounded() -> None:
    panel = LogPanel(io.StringIO(), color=False)
    record = logging.LogRecord("contagion", logging.INFO, __file__, 1, "line %d", (0,), None)
    for i in range(LogPanel.MAX_LINES + 5):
        record.args = (i,)
        panel.emit(record)
    assert len(panel.lines) == LogPanel.MAX_LINES
    assert panel.lines[0] == "[INFO] line 5"
    panel.clear()
    assert panel.lines == []


def test_color_wraps_but_history_stays_plain() -> None:
    stream = io.StringIO()
    panel = LogPanel(stream, color=True)
    panel.emit(logging.LogRecord("contagion", SUCCESS, __file__, 1, "ok", None, None))
    assert stream.getvalue().startswith("\033[")
    assert panel.lines == ["[SUCCESS] ok"]
