"""Decision-time partitions 0 = t_0 < ... < t_K = horizon."""
from dataclasses import dataclass

import numpy as np

from contregime.errors import InvalidArgumentError

SCHEMES = ("uniform",)
_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class Partition(object):
    """Ordered grid of times on [0, horizon]"""

    times: tuple

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        object.__setattr__(self, "times", times)
        if len(times) < 2:
            raise InvalidArgumentError("a partition needs at least two times")
        if times[0] != 0.0:
            raise InvalidArgumentError("partition must start at 0, got %r"
                                       % times[0])
        if not all(b > a for a, b in zip(times, times[1:])):
            raise InvalidArgumentError("partition times must be strictly "
                                       "increasing")

    @property
    def horizon(self):
        return self.times[-1]

    @property
    def K(self):
        """Number of intervals"""
        return len(self.times) - 1

    @property
    def mesh(self):
        return float(np.max(np.diff(self.times)))

    def as_array(self):
        return np.asarray(self.times)

    def __len__(self):
        return len(self.times)

    def indices_in(self, fine):
        """Returns the indices of these times inside a finer partition

        :param fine: Partition which must contain every time of self
        :return numpy array of fine-grid indices, one per time of self
        """
        fine_times = fine.as_array()
        idx = np.searchsorted(fine_times, self.as_array() - _MATCH_TOL)
        idx = np.clip(idx, 0, len(fine_times) - 1)
        if (not np.allclose(fine_times[idx], self.as_array(), rtol=0.0,
                            atol=1e-9) or
                abs(self.horizon - fine.horizon) > 1e-9):
            raise InvalidArgumentError(
                "decision times %s are not a sub-grid of the simulation grid "
                "(horizon %g, %d steps)" % (list(self.times), fine.horizon,
                                            fine.K))
        return idx

    def is_subgrid_of(self, fine):
        try:
            self.indices_in(fine)
        except InvalidArgumentError:
            return False
        return True


def make_partition(horizon, K, scheme="uniform"):
    """Builds a partition of [0, horizon] with K intervals

    :param horizon: positive end time tau
    :param K: positive number of intervals
    :param scheme: spacing scheme, only "uniform" is available
    :return Partition with K + 1 times
    """
    if scheme not in SCHEMES:
        raise InvalidArgumentError("unknown partition scheme %r" % (scheme,))
    if not horizon > 0:
        raise InvalidArgumentError("horizon must be positive, got %r"
                                   % (horizon,))
    if int(K) != K or K < 1:
        raise InvalidArgumentError("K must be a positive integer, got %r"
                                   % (K,))
    K = int(K)
    times = [horizon * k / K for k in range(K)] + [float(horizon)]
    return Partition(tuple(times))


def refine(p):
    """Inserts the midpoint of every gap of p"""
    t = p.as_array()
    mids = 0.5 * (t[:-1] + t[1:])
    merged = np.empty(2 * len(t) - 1)
    merged[0::2] = t
    merged[1::2] = mids
    return Partition(tuple(merged))
