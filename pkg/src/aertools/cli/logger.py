"""Root logging for the `aertools` command line.

Records emitted before `init` runs (option parsing, configuration loading) are held by
a pending handler and replayed into the handlers `init` attaches, so a run's log file
starts at the invocation line whatever verbosity the flags select.
"""
import logging
import sys
import tempfile
import time
from pathlib import Path
from typing import Iterable, List, Optional

# need to keep this at the top due to it being an annotated global (python issue34939)
initialised: bool = False
level: Optional[int] = None

LEVELS = (logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL)
NAME_WIDTH = 32
CONSOLE_FORMAT = "%(name)-{width}s %(levelname)-8s %(message)s"
FILE_FORMAT = "%(asctime)s.%(msecs)03dZ " + CONSOLE_FORMAT
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S"

_log = logging.getLogger(__name__)


class PendingRecords(logging.Handler):
    """Keeps every record it receives until `replay` hands them on."""

    def __init__(self):
        super().__init__()
        self.records: List[logging.LogRecord] = []

    def emit(self, record: logging.LogRecord):
        self.records.append(record)

    def replay(self, handlers: Iterable[logging.Handler]):
        handlers = list(handlers)
        self.acquire()
        try:
            for record in self.records:
                for handler in handlers:
                    if record.levelno >= handler.level:
                        handler.handle(record)
            self.records.clear()
        finally:
            self.release()


def level_for(verbose: bool = False, quiet: bool = False) -> int:
    """Map the CLI verbosity flags to a log level; `quiet` wins over `verbose`."""
    if quiet:
        return logging.WARNING
    return logging.DEBUG if verbose else logging.INFO


def fallback_dir() -> Path:
    return Path(tempfile.gettempdir())


def open_log_file(file: Path, mode: str = "a") -> Optional[logging.FileHandler]:
    """File handler on `file`, else on `fallback_<name>` in the temp dir.

    Returns None when neither location can be opened.
    """
    fallback = fallback_dir() / f"fallback_{file.name}"
    for candidate in (file, fallback):
        try:
            return logging.FileHandler(candidate, mode=mode, encoding="utf-8")
        except OSError as e:
            _log.warning(f"Cannot write log to '{candidate}': {e}")
    return None


def _file_formatter(width: int) -> logging.Formatter:
    formatter = logging.Formatter(
        FILE_FORMAT.format(width=width), datefmt=TIMESTAMP_FORMAT
    )
    formatter.converter = time.gmtime
    return formatter


def _attach_console(log_level: int, width: int):
    fmt = CONSOLE_FORMAT.format(width=width)
    try:
        import coloredlogs  # type: ignore
    except ImportError:
        handler = logging.StreamHandler(sys.stdout)
        handler.setLevel(log_level)
        handler.setFormatter(logging.Formatter(fmt))
        _root.addHandler(handler)
    else:
        coloredlogs.install(level=log_level, logger=_root, fmt=fmt, stream=sys.stdout)


def init(
    file: Optional[Path] = None,
    stdout: bool = True,
    mode: str = "a",
    log_level: int = logging.INFO,
    name_col_width: int = NAME_WIDTH,
):
    """Attach the file and/or stdout handlers and replay the pending records.

    Timestamps in the log file are UTC. Warnings raised through `warnings` (e.g. WAV
    header quirks reported by scipy) are routed into the log as well. If the log file
    cannot be opened anywhere, stdout logging is forced on.
    """
    global initialised, level

    if initialised:
        _log.warning("Attempting to reinitialise the log; ignoring")
        return
    if file is None and not stdout:
        # only CRITICAL records still reach the pending handler
        logging.disable(logging.ERROR)
        return
    if log_level not in LEVELS:
        raise ValueError(f"'{log_level}' is not a valid log level")
    level = log_level

    if file is not None:
        handler = open_log_file(Path(file), mode)
        if handler is None:
            _log.error("No writable log file; logging to stdout instead")
            stdout = True
        else:
            handler.setLevel(log_level)
            handler.setFormatter(_file_formatter(name_col_width))
            _root.addHandler(handler)
    if stdout:
        _attach_console(log_level, name_col_width)

    logging.captureWarnings(True)
    _root.removeHandler(_pending)
    _pending.replay(_root.handlers)
    _pending.close()
    initialised = True


# everything logged before `init` waits in `_pending`
_root = logging.getLogger()
_root.setLevel(logging.DEBUG)
_pending = PendingRecords()
_root.addHandler(_pending)
