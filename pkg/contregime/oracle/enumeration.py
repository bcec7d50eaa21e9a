"""Exact targets on finite discrete instances."""
import logging

import numpy as np

from contregime.errors import ResourceError, UnsupportedError

logger = logging.getLogger(__name__)

METHODS = ("backward", "paths")
DEFAULT_PATH_BUDGET = 4096
_STATES = np.array([0.0, 1.0])


def _check_discrete(spec):
    if not getattr(spec, "binary_treatment", False) or \
            not np.array_equal(spec.state_nodes(), _STATES):
        raise UnsupportedError("exact enumeration needs a finite discrete "
                               "process, got %s" % spec.kind)


def _stages(spec, decisions):
    idx = decisions.indices_in(spec.fine_grid)
    return dict((int(i), k) for k, i in enumerate(idx[:-1]))


def _backward(spec, g, stages):
    m = spec.fine_grid.K
    L, A = np.meshgrid(_STATES, _STATES, indexing="ij")
    cols = A.astype(int)
    nu = spec.outcome(_STATES)
    U = np.broadcast_to(nu[:, np.newaxis], L.shape).copy()
    for i in range(m - 1, -1, -1):
        if i + 1 in stages:
            nodes, w = g.quadrature(_STATES, spec, stages[i + 1])
            V = np.sum(w * U[np.arange(2)[:, np.newaxis],
                             nodes.astype(int)], axis=-1)
            cont = np.broadcast_to(V[:, np.newaxis], L.shape)
        else:
            cont = U
        nodes, w = spec.transition_nodes(L, A, spec.step_length(i))
        ahead = np.sum(w * cont[nodes.astype(int), cols[..., np.newaxis]],
                       axis=-1)
        stop = spec.terminal_hazard(L, A)
        U = stop * nu[:, np.newaxis] + (1.0 - stop) * ahead
    nodes, w = g.quadrature(_STATES, spec, stages[0])
    V0 = np.sum(w * U[np.arange(2)[:, np.newaxis], nodes.astype(int)],
                axis=-1)
    base_nodes, base_w = spec.baseline_nodes()
    return float(np.sum(base_w * V0[base_nodes.astype(int)]))


def count_paths(spec, g, decisions):
    """Number of leaves of the raw path expansion"""
    stages = _stages(spec, decisions)
    branches = len(spec.baseline_nodes()[0])
    for k in stages.values():
        branches *= g.quadrature(_STATES, spec, k)[0].shape[-1]
    per_step = 2 * (2 if spec.terminal is not None else 1)
    return branches * per_step ** spec.fine_grid.K


def _paths(spec, g, stages):
    m = spec.fine_grid.K
    l, prob = spec.baseline_nodes()
    l = np.asarray(l, dtype=float)
    prob = np.asarray(prob, dtype=float)
    a = np.zeros_like(l)
    absorbed = np.zeros(l.shape, dtype=bool)
    for i in range(m):
        if i in stages:
            nodes, w = g.quadrature(l, spec, stages[i])
            q = nodes.shape[-1]
            a = np.where(absorbed[:, np.newaxis], a[:, np.newaxis],
                         nodes).ravel()
            prob = (prob[:, np.newaxis] * w).ravel()
            l = np.repeat(l, q)
            absorbed = np.repeat(absorbed, q)
        if spec.terminal is not None:
            stop = np.where(absorbed, 0.0, spec.terminal_hazard(l, a))
            prob = np.concatenate([prob * stop, prob * (1.0 - stop)])
            absorbed = np.concatenate([np.ones(l.shape, dtype=bool),
                                       absorbed])
            l = np.tile(l, 2)
            a = np.tile(a, 2)
        nodes, w = spec.transition_nodes(l, a, spec.step_length(i))
        nodes = np.where(absorbed[:, np.newaxis], l[:, np.newaxis], nodes)
        w = np.where(absorbed[:, np.newaxis], [1.0, 0.0], w)
        prob = (prob[:, np.newaxis] * w).ravel()
        l = nodes.ravel()
        a = np.repeat(a, 2)
        absorbed = np.repeat(absorbed, 2)
    return float(np.sum(prob * spec.outcome(l)))


def enumerate_exact(spec, g, decisions, method="backward",
                    budget=DEFAULT_PATH_BUDGET):
    """E nu(Y_G) summed exactly over the intervened discrete law

    ``backward`` runs the recursion over the (covariate, treatment) state,
    ``paths`` expands every raw path and is kept as a cross-check.
    Censoring plays no part; terminal events do.

    :param spec: discrete-chain DgpSpec
    :param g: regime acting on a binary treatment
    :param decisions: decision Partition, a sub-grid of spec.fine_grid
    :param method: "backward" or "paths"
    :param budget: maximum number of raw paths the enumeration may visit
    :return float
    """
    _check_discrete(spec)
    if method not in METHODS:
        raise UnsupportedError("unknown enumeration method %r" % (method,))
    g.validate(spec)
    paths = count_paths(spec, g, decisions)
    if paths > budget:
        raise ResourceError("enumeration needs %d paths, budget is %d"
                            % (paths, budget))
    stages = _stages(spec, decisions)
    if method == "backward":
        value = _backward(spec, g, stages)
    else:
        value = _paths(spec, g, stages)
    logger.debug("enumerated %s over %d paths (%s): %.15g", g, paths, method,
                 value)
    return value
