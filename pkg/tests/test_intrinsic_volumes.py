'''
MODULE: test_intrinsic_volumes.py

@Details:
    Tests for the l1, Holmes-Thompson and Euclidean intrinsic volumes.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import math
import unittest

import numpy as np

import OpenMAG.convex_bodies as convex_bodies
import OpenMAG.generating_measures as generating_measures
import OpenMAG.intrinsic_volumes as intrinsic_volumes
from OpenMAG.utilities import *


def random_body(rng, ii):
    #alternates zonotopes, polytopes and boxes in R^2 and R^3
    n = 2 + ii % 2
    kind = ii % 3
    if kind == 0:
        return convex_bodies.Zonotope(rng.standard_normal((n + 1, n)), rng.standard_normal(n))
    if kind == 1:
        return convex_bodies.VPolytope(rng.standard_normal((8, n)))
    lows = rng.standard_normal(n)
    return convex_bodies.AxisBox(lows, lows + rng.random(n) + 0.1)


class testIntrinsicVolumes(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(31)

    def tearDown(self):
        pass

    def test_l1_volumes(self):
        box = convex_bodies.AxisBox([0, 0], [2, 3])
        v = intrinsic_volumes.l1_intrinsic_volumes(box)
        self.assertEqual(v.kind, intrinsic_volumes.L1_PRIME)
        self.assertEqual(v.n, 2)
        self.assertEqual(list(v.values), [1.0, 5.0, 6.0])

        v = intrinsic_volumes.l1_intrinsic_volumes(convex_bodies.VPolytope([[0, 0], [2, 0], [0, 2]]))
        self.assertTrue(np.allclose(v.as_array(), [1.0, 4.0, 2.0], atol=1E-12))

        v = intrinsic_volumes.l1_intrinsic_volumes(convex_bodies.VPolytope([[0, 0], [1, 1]]))
        self.assertTrue(np.allclose(v.as_array(), [1.0, 2.0, 0.0], atol=1E-12))

        v = intrinsic_volumes.l1_intrinsic_volumes(convex_bodies.VPolytope([[1, 2, 3]]))
        self.assertEqual(list(v.values), [1.0, 0.0, 0.0, 0.0])

    def test_box_closed_form(self):
        for _ in range(10):
            lows = self.rng.standard_normal(3)
            lengths = self.rng.random(3)
            box = convex_bodies.AxisBox(lows, lows + lengths)
            closed = intrinsic_volumes.box_l1_closed_form(box.lengths)
            self.assertTrue(np.allclose(intrinsic_volumes.l1_intrinsic_volumes(box).as_array(), closed.as_array(), rtol=1E-12))
        with self.assertRaises(ValueError):
            intrinsic_volumes.box_l1_closed_form([1.0, -1.0])

    def test_l1_volumes_cap(self):
        with self.assertRaises(DimensionCap):
            intrinsic_volumes.l1_intrinsic_volumes(convex_bodies.VPolytope(self.rng.standard_normal((10, 5))))

    def test_ht_l1_measure(self):
        square = convex_bodies.AxisBox([-1, -1], [1, 1])
        mu = intrinsic_volumes.ht_intrinsic_volumes(square, generating_measures.l1_measure(2))
        self.assertEqual(mu.kind, intrinsic_volumes.HOLMES_THOMPSON)
        self.assertAlmostEqual(mu[2], 16.0, places=12)
        self.assertAlmostEqual(mu[1], 8.0, places=12)

        point = convex_bodies.VPolytope([[0.5, 0.5]])
        mu = intrinsic_volumes.ht_intrinsic_volumes(point, generating_measures.l1_measure(2))
        self.assertEqual(list(mu.values), [1.0, 0.0, 0.0])

    def test_ht_against_l1(self):
        for ii in range(50):
            body = random_body(self.rng, ii)
            mu = intrinsic_volumes.ht_intrinsic_volumes(body, generating_measures.l1_measure(body.dim))
            v = intrinsic_volumes.l1_intrinsic_volumes(body)
            for m in range(body.dim + 1):
                self.assertAlmostEqual(mu[m], (2.0 ** m) * v[m], delta=1E-9 * max(1.0, mu[m]))

    def test_ht_volume(self):
        #mu_n(K) = vol(K) vol(Z), Z generated by the vectors w_i theta_i
        for ii in range(5):
            n = 2 + ii % 2
            measure = generating_measures.random_measure(n, n + 2, seed=ii)
            body = convex_bodies.Zonotope(self.rng.standard_normal((n + 1, n)))
            z = convex_bodies.Zonotope(measure.directions * measure.weights[:, None])
            expected = convex_bodies.volume(body) * convex_bodies.volume(z)
            self.assertAlmostEqual(intrinsic_volumes.ht_volume(body, measure), expected, delta=1E-9 * expected)

    def test_ht_invariances(self):
        measure = generating_measures.random_measure(3, 5, seed=3)
        body = convex_bodies.VPolytope(self.rng.standard_normal((10, 3)))
        mu = intrinsic_volumes.ht_intrinsic_volumes(body, measure)

        moved = intrinsic_volumes.ht_intrinsic_volumes(body.translate([1.0, -2.0, 0.5]), measure)
        self.assertTrue(np.allclose(moved.as_array(), mu.as_array(), rtol=1E-9))

        scaled = intrinsic_volumes.ht_intrinsic_volumes(body.scale(2.5), measure)
        self.assertTrue(np.allclose(scaled.as_array(), mu.scaled(2.5).as_array(), rtol=1E-9))

    def test_ht_monotone(self):
        measure = generating_measures.random_measure(2, 4, seed=5)
        G = self.rng.standard_normal((3, 2))
        small = intrinsic_volumes.ht_intrinsic_volumes(convex_bodies.Zonotope(G), measure)
        large = intrinsic_volumes.ht_intrinsic_volumes(convex_bodies.Zonotope(np.vstack([G, [[0.3, 0.4]]])), measure)
        self.assertTrue(np.all(small.as_array() <= large.as_array() + 1E-12))

    def test_ht_workers(self):
        measure = generating_measures.random_measure(3, 7, seed=9)
        body = convex_bodies.Zonotope(self.rng.standard_normal((4, 3)))
        serial = intrinsic_volumes.ht_intrinsic_volumes(body, measure, workers=1)
        threaded = intrinsic_volumes.ht_intrinsic_volumes(body, measure, workers=3)
        self.assertEqual(serial.values, threaded.values)

    def test_ht_budget(self):
        measure = generating_measures.random_measure(2, 6, seed=1)
        body = convex_bodies.AxisBox([0, 0], [1, 1])
        with self.assertRaises(TupleBudgetExceeded):
            intrinsic_volumes.HTIntrinsicVolumes(body, measure, {"budget": 10}).fit()
        with self.assertRaises(ValueError):
            intrinsic_volumes.ht_intrinsic_volumes(convex_bodies.AxisBox([0, 0, 0], [1, 1, 1]), measure)

    def test_normalize(self):
        mu = intrinsic_volumes.IntrinsicVolumeVector((1.0, 4.0, math.pi ** 2), intrinsic_volumes.HOLMES_THOMPSON)
        normalized = intrinsic_volumes.normalize(mu)
        self.assertEqual(normalized.kind, intrinsic_volumes.HOLMES_THOMPSON_NORMALIZED)
        self.assertTrue(np.allclose(normalized.as_array(), [1.0, 2.0, math.pi], rtol=1E-14))

        with self.assertRaises(ValueError):
            intrinsic_volumes.normalize(intrinsic_volumes.l1_intrinsic_volumes(convex_bodies.AxisBox([0], [1])))

        constants = intrinsic_volumes.IntrinsicConstants(3)
        self.assertTrue(np.allclose(constants.omegas, [1.0, 2.0, math.pi, 4.0 * math.pi / 3.0], rtol=1E-14))

    def test_normalized_euclidean(self):
        #with the Euclidean measure the normalized values approach the classical ones
        square = convex_bodies.AxisBox([0, 0], [1, 1])
        mu = intrinsic_volumes.ht_intrinsic_volumes(square, generating_measures.euclidean_measure(2, 180))
        normalized = intrinsic_volumes.normalize(mu)
        self.assertAlmostEqual(normalized[1], 2.0, delta=0.01)

    def test_supermultiplicativity(self):
        v = intrinsic_volumes.box_l1_closed_form([1.0, 1.0, 1.0])
        rows = intrinsic_volumes.check_supermultiplicativity(v)
        pairs = [(r.i, r.j) for r in rows]
        self.assertEqual(pairs, [(i, j) for i in range(4) for j in range(4 - i)])
        self.assertTrue(all(r.ok for r in rows))
        by_pair = dict(zip(pairs, rows))
        self.assertAlmostEqual(by_pair[(1, 1)].rhs, 4.5, places=12)
        self.assertAlmostEqual(by_pair[(1, 2)].rhs, 3.0, places=12)
        self.assertAlmostEqual(by_pair[(2, 1)].rhs, 3.0, places=12)
        for j in range(4):
            self.assertEqual(by_pair[(0, j)].lhs, by_pair[(0, j)].rhs)
            self.assertEqual(by_pair[(j, 0)].lhs, by_pair[(j, 0)].rhs)

        for ii in range(50):
            measure = generating_measures.random_measure(3, 3 + ii % 4, seed=ii)
            body = convex_bodies.Zonotope(self.rng.standard_normal((4, 3)))
            mu = intrinsic_volumes.ht_intrinsic_volumes(body, measure)
            self.assertTrue(all(r.ok for r in intrinsic_volumes.check_supermultiplicativity(mu)))

        with self.assertRaises(ValueError):
            intrinsic_volumes.check_supermultiplicativity(intrinsic_volumes.normalize(mu))

    def test_euclidean_volumes(self):
        v = intrinsic_volumes.euclidean_intrinsic_volumes(convex_bodies.AxisBox([0, 0], [2, 2]))
        self.assertEqual(list(v.values), [1.0, 4.0, 4.0])

        v = intrinsic_volumes.euclidean_intrinsic_volumes(convex_bodies.VPolytope([[0, 0], [1, 0], [0, 1]]))
        self.assertAlmostEqual(v[1], 1.0 + math.sqrt(2.0) / 2.0, places=12)
        self.assertAlmostEqual(v[2], 0.5, places=12)

        v = intrinsic_volumes.euclidean_intrinsic_volumes(convex_bodies.VPolytope([[0, 0], [3, 4]]))
        self.assertAlmostEqual(v[1], 5.0, places=12)

        with self.assertRaises(DimensionCap):
            intrinsic_volumes.euclidean_intrinsic_volumes(convex_bodies.Zonotope(np.eye(3)))

    def test_vector(self):
        with self.assertRaises(ValueError):
            intrinsic_volumes.IntrinsicVolumeVector((1.0,), "Quermass")
        v = intrinsic_volumes.IntrinsicVolumeVector((1, 2, 3), intrinsic_volumes.L1_PRIME)
        self.assertEqual(len(v), 3)
        self.assertEqual(v.scaled(-2.0).values, (1.0, 4.0, 12.0))
        self.assertEqual(v.to_dict()["provenance"], "exact")


if __name__ == '__main__':
    unittest.main()
