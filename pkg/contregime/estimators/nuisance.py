"""Nuisance models feeding the value and weight processes.

A NuisanceSet holds three components, each tagged with where it came from:

* ``transition``: a DgpSpec (exact or perturbed) used for backward
  integration, or FITTED for sequential regression on the cohort,
* ``propensity``: anything with the propensity mixin interface,
* ``censoring``: anything with ``censoring_hazard(l, a)``.
"""
import logging
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from sklearn.linear_model import LinearRegression, LogisticRegression
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import PolynomialFeatures

from contregime.dgp.base_dgp import parse_knob
from contregime.dgp.hazards import MAX_HAZARD
from contregime.dgp.propensity import BinaryPropensityMixin, \
    GaussianPropensityMixin
from contregime.errors import InvalidArgumentError, NumericalError

logger = logging.getLogger(__name__)

FITTED = "fitted"
EXACT = "exact"
LINKS = ("identity", "logit")
COMPONENTS = ("transition", "propensity", "censoring")
KNOB_COMPONENT = {
    "transition_shift": "transition",
    "propensity_drop_covariate": "propensity",
    "censoring_ignore": "censoring",
}


def misspecified(knob):
    return "misspecified(%s)" % parse_knob(knob)


def saturated_design(degree=2):
    """Polynomial design; degree 2 with interactions only is saturated for
    binary inputs"""
    return PolynomialFeatures(degree=degree, interaction_only=True,
                              include_bias=False)


def _fit_probability(x, y, link, what):
    if len(y) == 0:
        raise NumericalError("no subjects to fit the %s model" % what)
    if link == "logit":
        if np.all(y == y[0]):
            raise NumericalError("%s outcome is constant, the logit fit "
                                 "does not exist" % what)
        model = Pipeline([("design", saturated_design()),
                          ("fit", LogisticRegression(C=1e6,
                                                     max_iter=1000))])
    else:
        model = Pipeline([("design", saturated_design()),
                          ("fit", LinearRegression())])
    return model.fit(x, y)


def _predict_probability(model, x, link):
    if link == "logit":
        return model.predict_proba(x)[:, 1]
    return model.predict(x)


class FittedBinaryPropensity(BinaryPropensityMixin):
    """Stage-specific regression of A_k on L_k among subjects observed at t_k

    The identity link on the [1, l] design reproduces the cell frequencies of
    a binary covariate exactly.

    :param panel: DecisionPanel
    :param link: "identity" or "logit"
    :param margin: probabilities are clipped to [margin, 1 - margin]
    """

    def __init__(self, panel, link="identity", margin=0.01):
        self.link = link
        self.margin = margin
        self.models = []
        for k in range(panel.K):
            rows = panel.observed[:, k]
            x = panel.covariate[rows, k][:, np.newaxis]
            self.models.append(_fit_probability(x, panel.treatment[rows, k],
                                                link, "propensity"))
        logger.debug("fitted %d propensity stages (%s link)", panel.K, link)

    def treatment_probability(self, l, stage=None):
        if stage is None:
            raise InvalidArgumentError("a fitted propensity needs the stage")
        l = np.asarray(l, dtype=float)
        p = _predict_probability(self.models[stage], l.reshape(-1, 1),
                                 self.link)
        return np.clip(p, self.margin, 1.0 - self.margin).reshape(l.shape)


class FittedGaussianPropensity(GaussianPropensityMixin):
    """Stage-specific linear-Gaussian regression of A_k on L_k"""

    def __init__(self, panel):
        self.models = []
        self.sd = []
        for k in range(panel.K):
            rows = panel.observed[:, k]
            if np.sum(rows) < 3:
                raise NumericalError("too few subjects to fit the propensity "
                                     "at stage %d" % k)
            x = panel.covariate[rows, k][:, np.newaxis]
            a = panel.treatment[rows, k]
            model = LinearRegression().fit(x, a)
            resid = a - model.predict(x)
            self.models.append(model)
            self.sd.append(float(np.sqrt(np.mean(resid ** 2))))

    def treatment_mean_sd(self, l, stage=None):
        if stage is None:
            raise InvalidArgumentError("a fitted propensity needs the stage")
        l = np.asarray(l, dtype=float)
        mean = self.models[stage].predict(l.reshape(-1, 1)).reshape(l.shape)
        return mean, np.full(l.shape, self.sd[stage])


class FittedCensoring(object):
    """Per-step censoring hazard pooled over all fine steps.

    Each (subject, fine step) at risk contributes one row: features (l, a)
    and whether censoring happened at that step.
    """

    def __init__(self, cohort, link="identity"):
        self.link = link
        grid = cohort.grid.as_array()
        m = len(grid) - 1
        exit_time = cohort.exit_time
        at_risk = exit_time[:, np.newaxis] > grid[np.newaxis, :m]
        step_end = grid[np.newaxis, 1:]
        censored_here = at_risk & (cohort.censor_time[:, np.newaxis] <
                                   step_end)
        x = np.column_stack([cohort.covariate[:, :m, 0][at_risk],
                             cohort.treatment[:, :m, 0][at_risk]])
        y = censored_here[at_risk].astype(float)
        if np.all(y == 0.0):
            self.model = None
        else:
            self.model = _fit_probability(x, y, link, "censoring")

    def censoring_hazard(self, l, a):
        l = np.asarray(l, dtype=float)
        if self.model is None:
            return np.zeros(l.shape)
        x = np.column_stack([l.ravel(),
                             np.broadcast_to(a, l.shape).ravel()])
        value = _predict_probability(self.model, x, self.link)
        return np.clip(value, 0.0, MAX_HAZARD).reshape(l.shape)


@dataclass(frozen=True)
class NuisanceSet(object):
    """Transition, propensity and censoring models with their provenance"""

    transition: Any
    propensity: Any
    censoring: Any
    provenance: tuple = tuple((c, EXACT) for c in COMPONENTS)
    degree: int = 2

    def __post_init__(self):
        object.__setattr__(self, "provenance", tuple(self.provenance))

    def tag(self, component):
        return dict(self.provenance)[component]

    @property
    def fitted_transition(self):
        return self.transition is FITTED

    @classmethod
    def exact(cls, spec):
        return cls(transition=spec, propensity=spec, censoring=spec,
                   degree=_default_degree(spec))

    @classmethod
    def fitted(cls, spec, panel, link="identity", degree=None):
        """Every component fitted on the cohort behind ``panel``

        :param spec: DgpSpec, only consulted for the treatment type
        """
        if spec.binary_treatment:
            propensity = FittedBinaryPropensity(
                panel, link, spec.params.get("margin", 0.01))
        else:
            propensity = FittedGaussianPropensity(panel)
        return cls(transition=FITTED, propensity=propensity,
                   censoring=FittedCensoring(panel.cohort, link),
                   provenance=tuple((c, FITTED) for c in COMPONENTS),
                   degree=degree or _default_degree(spec))

    def with_knob(self, spec, knob, component=None):
        """Replaces one component by spec.misspecify(knob)

        :param component: component to perturb, implied by the knob unless
            the knob is ``identity``
        """
        knob = parse_knob(knob)
        component = component or KNOB_COMPONENT.get(knob.name, "transition")
        if component not in COMPONENTS:
            raise InvalidArgumentError("unknown nuisance component %r"
                                       % (component,))
        implied = KNOB_COMPONENT.get(knob.name)
        if implied is not None and implied != component:
            raise InvalidArgumentError("knob %s perturbs the %s model, not "
                                       "the %s model"
                                       % (knob, implied, component))
        tags = dict(self.provenance)
        tags[component] = misspecified(knob)
        return replace(self, provenance=tuple((c, tags[c])
                                              for c in COMPONENTS),
                       **{component: spec.misspecify(knob)})


def _default_degree(spec):
    return 2 if spec.binary_treatment else 1


def make_nuisance(spec, provenance, panel=None, link="identity", degree=None):
    """Builds a NuisanceSet from "exact", "fitted" or "misspec:<knob>"

    :param panel: DecisionPanel, required for fitted nuisances
    """
    provenance = str(provenance).strip()
    if provenance == EXACT:
        return NuisanceSet.exact(spec)
    if provenance == FITTED:
        if panel is None:
            raise InvalidArgumentError("fitted nuisances need a cohort")
        return NuisanceSet.fitted(spec, panel, link, degree)
    if provenance.startswith("misspec:"):
        return NuisanceSet.exact(spec).with_knob(
            spec, provenance[len("misspec:"):])
    raise InvalidArgumentError("unknown nuisance provenance %r (expected "
                               "exact, fitted or misspec:<knob>)"
                               % (provenance,))
