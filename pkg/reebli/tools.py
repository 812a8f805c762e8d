"""
Helper functions shared by the modules of reebli. The logging setup is derived
from ``tools.py`` of Lab (<https://lab.readthedocs.io>).
"""
from fractions import Fraction
import logging
import numbers
import sys


def configure_logging(level=logging.INFO):
    """
    Set up internal loggers to only print messages at least as important as the
    given log level. Warnings and less important messages are printed on
    stdout, errors on stderr, and critical messages terminate the program.
    All messages are prefixed with the current time.
    """
    # Python adds a default handler if some log is written before this
    # function is called. We therefore remove all handlers that have
    # been added automatically.
    root_logger = logging.getLogger("")
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)

    class ErrorAbortHandler(logging.StreamHandler):
        """
        Logging handler that exits when a critical error is encountered.
        """

        def emit(self, record):
            logging.StreamHandler.emit(self, record)
            if record.levelno >= logging.CRITICAL:
                sys.exit("aborting")

    class StdoutFilter(logging.Filter):
        def filter(self, record):
            return record.levelno <= logging.WARNING

    class StderrFilter(logging.Filter):
        def filter(self, record):
            return record.levelno > logging.WARNING

    formatter = logging.Formatter("%(asctime)-s %(levelname)-8s %(message)s")

    stdout_handler = logging.StreamHandler(sys.stdout)
    stdout_handler.setFormatter(formatter)
    stdout_handler.addFilter(StdoutFilter())

    stderr_handler = ErrorAbortHandler(sys.stderr)
    stderr_handler.setFormatter(formatter)
    stderr_handler.addFilter(StderrFilter())

    root_logger.addHandler(stdout_handler)
    root_logger.addHandler(stderr_handler)
    root_logger.setLevel(level)


def to_rational(value, allow_decimal=False):
    """
    Convert *value* to an exact :class:`fractions.Fraction`.

    Accepted are integers, fractions, strings of the form ``"P"`` or ``"P/Q"``
    and pairs ``[P, Q]``. Floats and decimal strings such as ``"0.25"`` are only
    accepted with *allow_decimal*; they are converted from their decimal
    representation, so ``0.1`` becomes ``1/10``.

    :Example:

    .. code-block:: python

        to_rational("3/4")                     # Fraction(3, 4)
        to_rational([6, -8])                   # Fraction(-3, 4)
        to_rational("0.5", allow_decimal=True) # Fraction(1, 2)

    """
    if isinstance(value, bool):
        raise ValueError(f"{value!r} is not a rational number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(
                isinstance(part, numbers.Integral) and not isinstance(part, bool)
                for part in value):
            raise ValueError(f"{value!r} is not a [numerator, denominator] pair")
        if value[1] == 0:
            raise ValueError(f"{value!r} has a zero denominator")
        return Fraction(int(value[0]), int(value[1]))
    if isinstance(value, float):
        if not allow_decimal:
            raise ValueError(f"{value!r} is a float; decimals are not enabled")
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        is_decimal = any(char in text for char in ".eE")
        if is_decimal and not allow_decimal:
            raise ValueError(f"{value!r} is a decimal; decimals are not enabled")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{value!r} is not a rational number")
    raise ValueError(f"{value!r} is not a rational number")


def rational_pair(value):
    """
    Return the ``[numerator, denominator]`` pair used to store *value* in graph
    documents.
    """
    value = Fraction(value)
    return [value.numerator, value.denominator]


def format_rational(value):
    """
    Format a rational for display: ``"3"``, ``"-7/2"``, or ``"inf"`` for
    ``None``.
    """
    if value is None:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def node_key(node):
    """
    Sort key for node ids. Integer ids sort before string ids, so graphs mixing
    both kinds have a deterministic order.
    """
    if isinstance(node, numbers.Integral) and not isinstance(node, bool):
        return (0, int(node), "")
    return (1, 0, str(node))
