"""
Tunable limits of reebli. Every operation that depends on one of them takes an
optional *settings* argument; without it, :meth:`Settings.from_environment` is
used, so that the defaults below can be changed for a whole run through
environment variables.
"""

import logging
import os

from reebli.errors import ReebliError


class Settings:
    """
    Collection of the limits and knobs used by the algorithms. All arguments
    default to the class constants of the same name.

    :param cycle_bound: maximal first Betti number for which simple cycles are
        enumerated.
    :param isomorphism_limit: maximal number of nodes accepted by the
        isomorphism test.
    :param max_leaves: maximal number of leaves per tree accepted by the
        enumeration of labelings.
    :param event_divisors: divisors *k* used to build the candidate values
        ``|f(a) - f(b)| / k`` of the distance search.
    :param bisect_iterations: number of halvings in the bisection audit mode.
    :param max_extensions: largest number of extensions of a labeled map to a
        tree that are enumerated for one probe. Trees with more extensions
        raise :class:`SizeLimitError <reebli.errors.SizeLimitError>`.
    :param upper_bound_doublings: how often the upper bound of the distance
        search is doubled before the distance is reported as infinite.
    """

    DEFAULT_CYCLE_BOUND = 6
    """
    Simple cycles are enumerated by combining the fundamental cycles of a
    spanning tree, which takes time exponential in the first Betti number.
    """
    DEFAULT_ISOMORPHISM_LIMIT = 64
    """
    Node limit of :func:`reebli.core.function_preserving_isomorphic`.
    """
    DEFAULT_MAX_LEAVES = 7
    """
    Leaf limit of :func:`reebli.merge.min_over_labelings`.
    """
    DEFAULT_EVENT_DIVISORS = (1, 2, 3, 4)
    """
    Divisors of the event set searched by the contour tree distance.
    """
    DEFAULT_BISECT_ITERATIONS = 32
    """
    Iterations of the dense bisection used to audit the event search.
    """
    DEFAULT_MAX_EXTENSIONS = 16
    """
    On trees a labeled map extends in at most one way, so only one extension
    per side is expected.
    """
    DEFAULT_UPPER_BOUND_DOUBLINGS = 4

    CYCLE_BOUND_VARIABLE = "REEBLI_CYCLE_BOUND"
    """
    Name of the environment variable overriding :attr:`DEFAULT_CYCLE_BOUND`.
    """

    def __init__(self, cycle_bound=None, isomorphism_limit=None,
                 max_leaves=None, event_divisors=None, bisect_iterations=None,
                 max_extensions=None, upper_bound_doublings=None):
        self.cycle_bound = _pick(cycle_bound, self.DEFAULT_CYCLE_BOUND)
        self.isomorphism_limit = _pick(isomorphism_limit,
                                       self.DEFAULT_ISOMORPHISM_LIMIT)
        self.max_leaves = _pick(max_leaves, self.DEFAULT_MAX_LEAVES)
        self.event_divisors = tuple(
            _pick(event_divisors, self.DEFAULT_EVENT_DIVISORS))
        self.bisect_iterations = _pick(bisect_iterations,
                                       self.DEFAULT_BISECT_ITERATIONS)
        self.max_extensions = _pick(max_extensions, self.DEFAULT_MAX_EXTENSIONS)
        self.upper_bound_doublings = _pick(upper_bound_doublings,
                                           self.DEFAULT_UPPER_BOUND_DOUBLINGS)
        if self.cycle_bound < 0:
            raise ReebliError("The cycle bound must not be negative.")
        if not self.event_divisors or min(self.event_divisors) < 1:
            raise ReebliError("Event divisors must be positive integers.")

    @classmethod
    def from_environment(cls, **overrides):
        """
        Create settings from the environment. Explicit keyword arguments take
        precedence over environment variables.
        """
        if overrides.get("cycle_bound") is None:
            raw = os.environ.get(cls.CYCLE_BOUND_VARIABLE)
            if raw is not None:
                try:
                    overrides["cycle_bound"] = int(raw)
                except ValueError:
                    raise ReebliError(
                        f"{cls.CYCLE_BOUND_VARIABLE} must be an integer, "
                        f"got {raw!r}.")
                logging.debug(f"Cycle bound set to {raw} from the environment.")
        return cls(**overrides)

    def __repr__(self):
        return (f"Settings(cycle_bound={self.cycle_bound}, "
                f"isomorphism_limit={self.isomorphism_limit}, "
                f"max_leaves={self.max_leaves}, "
                f"event_divisors={self.event_divisors}, "
                f"bisect_iterations={self.bisect_iterations}, "
                f"max_extensions={self.max_extensions}, "
                f"upper_bound_doublings={self.upper_bound_doublings})")


def _pick(value, default):
    return default if value is None else value


def resolve(settings):
    """
    Return *settings*, or the settings taken from the environment if it is
    ``None``.
    """
    return Settings.from_environment() if settings is None else settings
