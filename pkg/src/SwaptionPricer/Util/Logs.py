class _FontColor:
    _ESC = "\033"
    RESET = f"{_ESC}[0m"
    BOLD = f"{_ESC}[1m"
    RED = f"{_ESC}[31m"
    GREEN = f"{_ESC}[32m"
    YELLOW = f"{_ESC}[33m"
    MAGENTA = f"{_ESC}[35m"


# Elements can be concatenated: {RED}{BOLD} - red bold font


_logs_file = None
_verbose: bool = False

################################################################################


def init(logs_path: str | None, verbose: bool) -> None:
    global _logs_file, _verbose
    close()
    _logs_file = open(logs_path, "w") if logs_path is not None else None
    _verbose = verbose


def close() -> None:
    global _logs_file
    if _logs_file is not None:
        _logs_file.close()
    _logs_file = None


def detach(verbose: bool) -> None:
    """Console-only logging for a forked worker; the parent owns the file."""
    global _logs_file, _verbose
    _logs_file = None
    _verbose = verbose


def is_verbose() -> bool:
    return _verbose


def user(msg: str, flush: bool = False) -> None:
    _emit("[log]", msg or "USER_LOG WITH EMPTY MESSAGE", "", True, flush)


def dev(msg: str, flush: bool = True) -> None:
    _emit(
        "[dev]",
        msg or "DEV_LOG WITH EMPTY MESSAGE",
        _FontColor.MAGENTA,
        _verbose,
        flush,
    )


def warning(msg: str, flush: bool = True) -> None:
    _emit(
        "[warning]",
        msg or "WARNING WITH EMPTY MESSAGE",
        _FontColor.YELLOW,
        True,
        flush,
    )


def error(msg: str, flush: bool = True) -> None:
    _emit("[error]", msg, _FontColor.RED, True, flush)


################################################################################


def _emit(tag: str, msg: str, color: str, console: bool, flush: bool) -> None:
    splitted = msg.split("\n")
    pad = " " * (len(tag) + 1)

    # log
    if _logs_file is not None:
        _logs_file.write(f"{tag} {splitted[0]}\n")
        for line in splitted[1:]:
            _logs_file.write(f"{pad}{line}\n")
        if flush:
            _logs_file.flush()

    # console
    if not console:
        return
    head = f"{color}{tag}{_FontColor.RESET}" if color else tag
    print(f"{head} {splitted[0]}", flush=flush)
    for line in splitted[1:]:
        print(f"{pad}{line}", flush=flush)
