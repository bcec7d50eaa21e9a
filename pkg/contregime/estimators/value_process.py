"""Value processes H_k(l, a) = E_G[nu | L(t_k) = l, A(t_k) = a].

V_k(l) is the regime integral of H_k over the treatment assigned at t_k.
"""
import logging

import numpy as np
from scipy.interpolate import CubicSpline, RectBivariateSpline
from sklearn.linear_model import LinearRegression
from sklearn.pipeline import Pipeline

from contregime.errors import InvalidArgumentError, NumericalError
from contregime.estimators.nuisance import saturated_design
from contregime.estimators.panel import DecisionPanel

logger = logging.getLogger(__name__)


def _table_function(states, actions, table):
    """Spline surface through a (state, action) table.

    Cubic in each direction with at least four nodes, linear on two-point
    supports. Points outside the grid are clamped to its edge.
    """
    spline = RectBivariateSpline(states, actions, table,
                                 kx=min(3, len(states) - 1),
                                 ky=min(3, len(actions) - 1), s=0)

    def evaluate(l, a):
        l, a = np.broadcast_arrays(np.asarray(l, dtype=float),
                                   np.asarray(a, dtype=float))
        return spline(l.ravel(), a.ravel(), grid=False).reshape(l.shape)
    return evaluate


def _column_function(states, table):
    """Cubic spline in the state for each action column of table.

    evaluate(l, a) reads column j at l[:, j, ...]; a only fixes the shape.
    """
    spline = CubicSpline(states, table, axis=0)
    knots = spline.x

    def evaluate(l, a):
        l, _ = np.broadcast_arrays(np.asarray(l, dtype=float),
                                   np.asarray(a, dtype=float))
        i = np.clip(np.searchsorted(knots, l, side="right") - 1, 0,
                    len(knots) - 2)
        dx = l - knots[i]
        columns = np.arange(table.shape[1]).reshape(
            (1, -1) + (1,) * (l.ndim - 2))
        c = spline.c[:, i, columns]
        return ((c[0] * dx + c[1]) * dx + c[2]) * dx + c[3]
    return evaluate


def _line_function(states, values):
    spline = CubicSpline(states, values)

    def evaluate(l):
        return spline(np.asarray(l, dtype=float))
    return evaluate


def _check_finite(values, what, k, regime):
    if not np.all(np.isfinite(values)):
        raise NumericalError("non-finite %s at decision %d under %s"
                             % (what, k, regime))


class ValueProcess(object):
    """Per-stage functions H_k(l, a), k = 0..K-1"""

    source = None

    def __init__(self, regime, propensity, decisions):
        self.regime = regime
        self.propensity = propensity
        self.decisions = decisions

    @property
    def K(self):
        return self.decisions.K

    def H(self, k, l, a):
        raise NotImplementedError

    def V(self, k, l):
        return self.regime.integrate(lambda x, a: self.H(k, x, a), l,
                                     self.propensity, k)

    def exact_baseline_value(self):
        """E V_0(L(0)) under the baseline law when it is known in closed
        form, otherwise None"""
        return None

    def observed(self, panel):
        """H and V along the subjects' paths

        :return (H_obs (n, K), V_obs (n, K + 1)); V_obs[:, K] is nu
        """
        H_obs = np.column_stack([
            panel.action_observations(lambda l, a: self.H(k, l, a), k)
            for k in range(self.K)])
        V_obs = np.column_stack([
            panel.value_observations(lambda l: self.V(k, l), k)
            for k in range(self.K + 1)])
        return H_obs, V_obs

    def shifted(self, stage, offset):
        return ShiftedValueProcess(self, stage, offset)


class ExactValueProcess(ValueProcess):
    """Backward recursion with closed-form conditionals.

    Tables are kept on model.state_nodes() x model.action_nodes(). Between
    decision times the treatment sits on an action node, so each fine step
    reads the next table back through a cubic spline in the state alone. On
    two-point supports the splines are linear and exact. Each fine step
    integrates over the transition law and mixes in the terminal hazard; each
    decision time integrates over the regime.
    """

    source = "exact-recursion"

    def __init__(self, model, regime, propensity, decisions):
        super(ExactValueProcess, self).__init__(regime, propensity, decisions)
        self.model = model
        self.states = np.asarray(model.state_nodes(), dtype=float)
        self.actions = np.asarray(model.action_nodes(), dtype=float)
        self._H = [None] * decisions.K
        self._V = [None] * decisions.K
        self._backward()

    def _backward(self):
        model = self.model
        stages = dict((int(i), k) for k, i in enumerate(
            self.decisions.indices_in(model.fine_grid)[:-1]))
        m = model.fine_grid.K
        LL, AA = np.meshgrid(self.states, self.actions, indexing="ij")
        nu = model.outcome(LL)
        U = nu.copy()
        for i in range(m - 1, -1, -1):
            if i + 1 == m:
                def cont(l, a):
                    return model.outcome(l)
            elif i + 1 in stages:
                ahead_v = self._V[stages[i + 1]]

                def cont(l, a, fn=ahead_v):
                    return fn(l)
            else:
                cont = _column_function(self.states, U)
            nodes, weights = model.transition_nodes(LL, AA,
                                                    model.step_length(i))
            ahead = np.sum(weights * cont(nodes, AA[..., np.newaxis]),
                           axis=-1)
            stop = model.terminal_hazard(LL, AA)
            U = stop * nu + (1.0 - stop) * ahead
            if i in stages:
                k = stages[i]
                _check_finite(U, "value table", k, self.regime)
                H_k = _table_function(self.states, self.actions, U)
                V_table = self.regime.integrate(H_k, self.states,
                                                self.propensity, k)
                _check_finite(V_table, "regime integral", k, self.regime)
                self._H[k] = H_k
                self._V[k] = _line_function(self.states, V_table)
        logger.debug("exact value process for %s on %dx%d nodes, %d steps",
                     self.regime, len(self.states), len(self.actions), m)

    def H(self, k, l, a):
        return self._H[k](l, a)

    def V(self, k, l):
        return self._V[k](l)

    def exact_baseline_value(self):
        nodes, weights = self.model.baseline_nodes()
        return float(np.sum(weights * self.V(0, nodes)))


class FittedValueProcess(ValueProcess):
    """Sequential regressions backwards in time.

    At stage k the pseudo-outcome (V_{k+1}(L_{k+1}), or nu after a terminal
    event inside the stage) is regressed on (L_k, A_k) among subjects at risk
    through the whole stage.
    """

    source = "fitted-regression"

    def __init__(self, panel, regime, propensity, degree=2):
        super(FittedValueProcess, self).__init__(regime, propensity,
                                                 panel.decisions)
        self.panel = panel
        self.degree = degree
        self.models = [None] * panel.K
        for k in range(panel.K - 1, -1, -1):
            rows = panel.at_risk(k)
            if not np.any(rows):
                raise NumericalError("no subjects at risk through stage %d"
                                     % k)
            target = panel.value_observations(lambda l: self.V(k + 1, l),
                                              k + 1)[rows]
            x = np.column_stack([panel.covariate[rows, k],
                                 panel.treatment[rows, k]])
            model = Pipeline([("design", saturated_design(degree)),
                              ("fit", LinearRegression())])
            self.models[k] = model.fit(x, target)
            logger.debug("stage %d regression on %d subjects", k,
                         int(np.sum(rows)))

    def H(self, k, l, a):
        l, a = np.broadcast_arrays(np.asarray(l, dtype=float),
                                   np.asarray(a, dtype=float))
        x = np.column_stack([l.ravel(), a.ravel()])
        return self.models[k].predict(x).reshape(l.shape)


class UserValueProcess(ValueProcess):
    """H supplied as a function fn(k, l, a)"""

    source = "user-supplied"

    def __init__(self, fn, regime, propensity, decisions):
        super(UserValueProcess, self).__init__(regime, propensity, decisions)
        self.fn = fn

    def H(self, k, l, a):
        l, a = np.broadcast_arrays(np.asarray(l, dtype=float),
                                   np.asarray(a, dtype=float))
        return np.asarray(self.fn(k, l, a), dtype=float) * np.ones(l.shape)

    @classmethod
    def constant(cls, value, regime, propensity, decisions):
        return cls(lambda k, l, a: np.full(np.shape(l), float(value)),
                   regime, propensity, decisions)


class ShiftedValueProcess(ValueProcess):
    """Another value process with a constant added at one stage"""

    def __init__(self, base, stage, offset):
        super(ShiftedValueProcess, self).__init__(base.regime,
                                                  base.propensity,
                                                  base.decisions)
        if not 0 <= stage < base.K:
            raise InvalidArgumentError("stage %r out of range" % (stage,))
        self.base = base
        self.stage = stage
        self.offset = float(offset)
        self.source = base.source

    def H(self, k, l, a):
        value = self.base.H(k, l, a)
        return value + self.offset if k == self.stage else value

    def V(self, k, l):
        value = self.base.V(k, l)
        return value + self.offset if k == self.stage else value


def build_H(nuis, g, decisions, cohort=None):
    """Builds the value process of regime g

    Exact mode integrates nuis.transition backwards; fitted mode (when the
    transition component is fitted) runs sequential regressions on the
    cohort.

    :param nuis: NuisanceSet
    :param g: regime
    :param decisions: decision Partition
    :param cohort: Cohort, required in fitted mode
    :return ValueProcess
    """
    g.validate(nuis.propensity)
    if nuis.fitted_transition:
        if cohort is None:
            raise InvalidArgumentError("a fitted value process needs a "
                                       "cohort")
        return FittedValueProcess(DecisionPanel(cohort, decisions), g,
                                  nuis.propensity, nuis.degree)
    return ExactValueProcess(nuis.transition, g, nuis.propensity, decisions)
