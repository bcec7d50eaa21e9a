"""Per-step discrete hazards for censoring and terminal events."""
from dataclasses import dataclass

import numpy as np

from contregime.errors import InvalidArgumentError

MAX_HAZARD = 0.99


@dataclass(frozen=True)
class DiscreteHazard(object):
    """Hazard of one fine-grid step as a function of the observed state.

    lambda(l, a) = clip(base + covariate * l + treatment * a, 0, MAX_HAZARD)

    Only the current covariate and treatment enter, so censoring built from
    this hazard is conditionally independent given the observed history.
    """

    base: float
    covariate: float = 0.0
    treatment: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.base < 1.0:
            raise InvalidArgumentError("hazard base must lie in [0, 1), got %r"
                                       % (self.base,))

    def hazard(self, l, a):
        l = np.asarray(l, dtype=float)
        a = np.asarray(a, dtype=float)
        value = self.base + self.covariate * l + self.treatment * a
        return np.clip(value, 0.0, MAX_HAZARD)

    @classmethod
    def from_config(cls, block):
        unknown = set(block) - {"base", "covariate", "treatment"}
        if unknown:
            raise InvalidArgumentError("unknown hazard keys %s"
                                       % sorted(unknown))
        if "base" not in block:
            raise InvalidArgumentError("hazard block needs 'base'")
        return cls(**dict((k, float(v)) for k, v in block.items()))


CensoringHazard = DiscreteHazard
