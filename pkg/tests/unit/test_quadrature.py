from unittest import TestCase

import numpy as np
from scipy.stats import norm

from contregime import quadrature


class TestQuadrature(TestCase):

    def test_gauss_hermite_moments(self):
        x, w = quadrature.gauss_hermite()
        self.assertAlmostEqual(1.0, w.sum())
        self.assertAlmostEqual(0.0, (x * w).sum())
        self.assertAlmostEqual(1.0, (x ** 2 * w).sum())
        self.assertAlmostEqual(3.0, (x ** 4 * w).sum())

    def test_gaussian_nodes_broadcast(self):
        nodes, weights = quadrature.gaussian_nodes(np.array([0.0, 2.0]), 0.5)
        self.assertEqual(nodes.shape, weights.shape)
        np.testing.assert_allclose([0.0, 2.0], (nodes * weights).sum(-1))

    def test_binary_nodes(self):
        nodes, weights = quadrature.binary_nodes(np.array([0.25]))
        np.testing.assert_array_equal([[0.0, 1.0]], nodes)
        np.testing.assert_array_equal([[0.75, 0.25]], weights)

    def test_point_nodes(self):
        nodes, weights = quadrature.point_nodes(np.array([1.5, -2.0]))
        np.testing.assert_array_equal([[1.5], [-2.0]], nodes)
        np.testing.assert_array_equal([[1.0], [1.0]], weights)

    def test_censored_gaussian_mean(self):
        mean, sd, floor = np.array([0.2]), 0.7, 0.0
        nodes, weights = quadrature.censored_gaussian_nodes(mean, sd, floor)
        self.assertAlmostEqual(1.0, weights.sum(), places=8)
        z = (floor - mean[0]) / sd
        # E[max(Z, floor)]
        expected = (floor * norm.cdf(z) + mean[0] * norm.sf(z) +
                    sd * norm.pdf(z))
        self.assertAlmostEqual(expected, (nodes * weights).sum(), places=8)
