"""Base class of fully specified data-generating processes.

Concrete processes (``DiscreteChainDgp``, ``EulerDiffusionDgp``) combine this
base with one of the propensity mixins.
"""
import re
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Optional

import numpy as np

from contregime.errors import DomainError, InvalidArgumentError

SUMMARY_MAPS = ("markov",)
OUTCOME_KINDS = ("final", "final_above")


@dataclass(frozen=True)
class OutcomeFunctional(object):
    """nu(Y) evaluated on the covariate path at the horizon.

    ``final`` returns L(tau); ``final_above`` returns 1{L(tau) > cut}.
    """

    kind: str = "final"
    cut: float = 0.0

    def __post_init__(self):
        if self.kind not in OUTCOME_KINDS:
            raise InvalidArgumentError("unknown outcome functional %r"
                                       % (self.kind,))

    def __call__(self, l_final):
        l_final = np.asarray(l_final, dtype=float)
        if self.kind == "final":
            return l_final.copy()
        return (l_final > self.cut).astype(float)


KNOBS = ("transition_shift", "propensity_drop_covariate", "censoring_ignore",
         "identity")
_KNOB_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


@dataclass(frozen=True)
class Knob(object):
    """A misspecification perturbation, e.g. transition_shift(0.1)"""

    name: str
    value: Optional[float] = None

    def __post_init__(self):
        if self.name not in KNOBS:
            raise InvalidArgumentError("unknown misspecification knob %r"
                                       % (self.name,))
        if self.name == "transition_shift" and self.value is None:
            raise InvalidArgumentError("transition_shift needs a shift value")
        if self.name != "transition_shift" and self.value is not None:
            raise InvalidArgumentError("knob %s takes no value" % self.name)

    def __str__(self):
        if self.value is None:
            return self.name
        return "%s(%r)" % (self.name, self.value)


def parse_knob(text):
    """Parses 'transition_shift(0.15)' style knob strings"""
    if isinstance(text, Knob):
        return text
    match = _KNOB_RE.match(str(text))
    if not match:
        raise InvalidArgumentError("cannot parse knob %r" % (text,))
    name, value = match.groups()
    if value:
        try:
            value = float(value)
        except ValueError:
            raise InvalidArgumentError("knob %r has a non-numeric value"
                                       % (text,))
    else:
        value = None
    return Knob(name, value)


class BaseDgp(object):
    """Data-generating law with closed-form conditionals.

    Subclasses are frozen dataclasses carrying ``params``, ``fine_grid``,
    ``censoring``, ``terminal``, ``outcome_functional`` and ``summary_map``.
    Array methods take the current covariate ``l`` and treatment ``a`` as
    equally shaped arrays, one entry per subject or grid node.
    """

    kind = None
    DEFAULTS = {}

    def _init_params(self):
        unknown = set(self.params) - set(self.DEFAULTS)
        if unknown:
            raise InvalidArgumentError("unknown %s parameters %s"
                                       % (self.kind, sorted(unknown)))
        merged = dict(self.DEFAULTS)
        merged.update((k, float(v)) for k, v in self.params.items())
        object.__setattr__(self, "params", MappingProxyType(merged))
        if self.summary_map not in SUMMARY_MAPS:
            raise InvalidArgumentError("unknown summary map %r"
                                       % (self.summary_map,))

    def baseline_nodes(self):
        """Nodes and weights integrating over the baseline covariate law"""
        raise NotImplementedError

    def draw_baseline(self, rng, count):
        raise NotImplementedError

    def transition_pdf(self, l, a, l_new, dt):
        raise NotImplementedError

    def transition_nodes(self, l, a, dt):
        """Nodes and weights integrating over L(t + dt) | l, a.

        :return (nodes, weights), both shaped l.shape + (number of nodes,)
        """
        raise NotImplementedError

    def draw_transition(self, l, a, dt, rng):
        raise NotImplementedError

    def state_nodes(self):
        """Covariate grid on which value functions are tabulated"""
        raise NotImplementedError

    def action_nodes(self):
        """Treatment grid on which value functions are tabulated"""
        raise NotImplementedError

    def _shift_transition(self, shift):
        raise NotImplementedError

    def _drop_propensity_covariate(self):
        raise NotImplementedError

    def outcome(self, l_final):
        return self.outcome_functional(l_final)

    def censoring_hazard(self, l, a):
        if self.censoring is None:
            return np.zeros(np.shape(l))
        return self.censoring.hazard(l, a)

    def terminal_hazard(self, l, a):
        if self.terminal is None:
            return np.zeros(np.shape(l))
        return self.terminal.hazard(l, a)

    def step_length(self, index):
        """Length of the fine step starting at grid index ``index``"""
        times = self.fine_grid.times
        index = min(int(index), len(times) - 2)
        return times[index + 1] - times[index]

    def without_censoring(self):
        return replace(self, censoring=None)

    def transition_density(self, h, l_new):
        """Probability (discrete) or density (diffusion) of the next covariate

        :param h: treatment-aware HistoryView
        :param l_new: candidate covariate value one fine step ahead
        :return non-negative float
        """
        if not h.treatment_aware:
            raise InvalidArgumentError("transition density needs a view "
                                       "carrying the current treatment")
        value = self.transition_pdf(np.array([h.covariate]),
                                    np.array([h.treatment]),
                                    np.array([float(l_new)]),
                                    self.step_length(h.upto_index))
        return float(value[0])

    def propensity_density(self, h, a_new):
        """Probability or density of treatment a_new given the view h

        :param h: HistoryView without current treatment
        """
        if h.treatment_aware:
            raise InvalidArgumentError("propensity density needs a view "
                                       "without the current treatment")
        value = self.treatment_pdf(np.array([h.covariate]),
                                   np.array([float(a_new)]))
        return float(value[0])

    def censoring_survival(self, tr, j, decisions=None):
        """Probability of staying uncensored through decision interval j

        Product of (1 - lambda_C) over the fine steps of intervals 0..j at
        which the subject was still under observation.

        :param tr: Trajectory
        :param j: decision index
        :param decisions: decision Partition, the fine grid by default
        """
        decisions = decisions if decisions is not None else self.fine_grid
        if int(j) != j or not 0 <= j < decisions.K:
            raise InvalidArgumentError("decision index %r out of range" % (j,))
        if self.censoring is None:
            return 1.0
        idx = decisions.indices_in(self.fine_grid)
        end = min(int(idx[int(j) + 1]), int(tr.last_index) + 1)
        l = tr.covariate[:end, 0]
        a = tr.treatment[:end, 0]
        return float(np.prod(1.0 - self.censoring.hazard(l, a)))

    def misspecify(self, knob):
        """Returns a perturbed copy usable as a wrong nuisance model

        :param knob: Knob or knob string
        """
        knob = parse_knob(knob)
        if knob.name == "identity":
            return self
        if knob.name == "transition_shift":
            return self._shift_transition(knob.value)
        if knob.name == "propensity_drop_covariate":
            return self._drop_propensity_covariate()
        if self.censoring is None:
            raise InvalidArgumentError("censoring_ignore does not apply to a "
                                       "process without censoring")
        return self.without_censoring()

    def _check_binary(self, values, what):
        values = np.asarray(values, dtype=float)
        if not np.all((values == 0.0) | (values == 1.0)):
            raise DomainError("%s value outside the support {0, 1}" % what)
