"""Node/weight rules shared by the transition, regime and baseline
integrals. Every rule returns (nodes, weights) with the quadrature axis
last."""
import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy.stats import norm

HERMITE_ORDER = 21
LEGENDRE_ORDER = 41
TAIL_WIDTH = 8.0


def gauss_hermite(order=HERMITE_ORDER):
    """Probabilists' Gauss-Hermite rule normalised to the N(0, 1) law"""
    x, w = hermegauss(order)
    return x, w / np.sqrt(2.0 * np.pi)


def gaussian_nodes(mean, sd, order=HERMITE_ORDER):
    """Nodes and weights for N(mean, sd^2), one rule per entry of mean"""
    x, w = gauss_hermite(order)
    mean = np.asarray(mean, dtype=float)
    sd = np.broadcast_to(np.asarray(sd, dtype=float), mean.shape)
    nodes = mean[..., np.newaxis] + sd[..., np.newaxis] * x
    return nodes, np.broadcast_to(w, nodes.shape)


def binary_nodes(p):
    """Nodes {0, 1} with weights (1 - p, p)"""
    p = np.asarray(p, dtype=float)
    nodes = np.broadcast_to(np.array([0.0, 1.0]), p.shape + (2,))
    return nodes, np.stack([1.0 - p, p], axis=-1)


def point_nodes(values):
    values = np.asarray(values, dtype=float)
    return values[..., np.newaxis], np.ones(values.shape + (1,))


def censored_gaussian_nodes(mean, sd, floor, order=LEGENDRE_ORDER):
    """Law of max(Z, floor) for Z ~ N(mean, sd^2).

    An atom at ``floor`` carrying P(Z <= floor), plus Gauss-Legendre nodes
    on [floor, mean + TAIL_WIDTH sd] for the continuous part.
    """
    mean = np.asarray(mean, dtype=float)
    sd = np.broadcast_to(np.asarray(sd, dtype=float), mean.shape)
    x, w = leggauss(order)
    upper = np.maximum(mean + TAIL_WIDTH * sd, floor)
    half = 0.5 * (upper - floor)
    centre = 0.5 * (upper + floor)
    tail = centre[..., np.newaxis] + half[..., np.newaxis] * x
    tail_w = (half[..., np.newaxis] * w *
              norm.pdf(tail, loc=mean[..., np.newaxis],
                       scale=sd[..., np.newaxis]))
    atom = np.full(mean.shape + (1,), float(floor))
    atom_w = norm.cdf(floor, loc=mean, scale=sd)[..., np.newaxis]
    return (np.concatenate([atom, tail], axis=-1),
            np.concatenate([atom_w, tail_w], axis=-1))
