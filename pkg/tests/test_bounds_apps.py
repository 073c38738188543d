'''
MODULE: test_bounds_apps.py

@Details:
    Tests for the magnitude bounds, the Wright function, the packing and Mahler
    pipelines and the Steiner, Wills and small-t checks.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import io
import math
import unittest
import warnings
from decimal import Decimal, getcontext
from unittest import mock

import numpy as np
import pandas as pd

import OpenMAG.bounds_apps as bounds_apps
import OpenMAG.convex_bodies as convex_bodies
import OpenMAG.finite_metric as finite_metric
import OpenMAG.generating_measures as generating_measures
from OpenMAG.utilities import *


PI = Decimal("3.14159265358979323846264338327950288419716939937510")


def wright_reference(x, terms=250):
    #exact factorials, and Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
    getcontext().prec = 60
    X = Decimal(repr(x))
    sqrt_pi = PI.sqrt()
    total = Decimal(0)
    for m in range(terms):
        k = m // 2
        if m % 2 == 0:
            gamma = Decimal(math.factorial(k))
        else:
            gamma = (Decimal(k) + Decimal("0.5")) * Decimal(math.factorial(2 * k)) * sqrt_pi / (Decimal(4) ** k * Decimal(math.factorial(k)))
        total += X ** m / (gamma * Decimal(math.factorial(m)))
    return float(total)


class testBoundsApps(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(41)
        self.square = convex_bodies.AxisBox([0, 0], [2, 2])
        self.triangle = convex_bodies.VPolytope([[0, 0], [2, 0], [0, 2]])

    def tearDown(self):
        pass

    def test_upper_bound(self):
        point = convex_bodies.VPolytope([[0.2, 0.7]])
        report = bounds_apps.magnitude_upper_bound(point, generating_measures.l1_measure(2))
        self.assertEqual(report.sum_bound, 1.0)
        self.assertEqual(report.exp_bound, 1.0)

        report = bounds_apps.magnitude_upper_bound(self.square, generating_measures.l1_measure(2))
        self.assertAlmostEqual(report.sum_bound, 4.0, places=12)
        self.assertAlmostEqual(report.exp_bound, math.exp(2.0), places=12)
        self.assertLessEqual(report.sum_bound, report.exp_bound)
        self.assertEqual(report.caveat, 0.0)

    def test_sum_bound_at(self):
        measure = generating_measures.random_measure(2, 4, seed=2)
        body = convex_bodies.Zonotope(self.rng.standard_normal((3, 2)))
        report = bounds_apps.magnitude_upper_bound(body, measure)
        for t in (0.5, 2.0, 7.0):
            direct = bounds_apps.magnitude_upper_bound(body.scale(t), measure).sum_bound
            self.assertAlmostEqual(bounds_apps.sum_bound_at(report, t), direct, delta=1E-9 * direct)
        self.assertEqual(bounds_apps.sum_bound_at(report, 0.0), 1.0)
        with self.assertRaises(ValueError):
            bounds_apps.sum_bound_at(report, -1.0)

    def test_bound_dominates_magnitude(self):
        #zonotopes and boxes alternate, measures with at most 6 atoms
        for ii in range(100):
            n = 2 + (ii // 2) % 2
            measure = generating_measures.random_measure(n, min(n + ii % 4, 6), seed=ii)
            if ii % 2 == 0:
                body = convex_bodies.Zonotope(self.rng.standard_normal((n + 1, n)))
            else:
                lows = self.rng.standard_normal(n)
                body = convex_bodies.AxisBox(lows, lows + 2.0 * self.rng.random(n) + 0.1)
            t = float(self.rng.uniform(0.1, 10.0))
            report = bounds_apps.magnitude_upper_bound(body.scale(t), measure)
            self.assertLessEqual(report.sum_bound, report.exp_bound + 1E-9)
            space = finite_metric.build_space(convex_bodies.sample_points(body, 150, seed=ii), measure)
            value = finite_metric.magnitude(finite_metric.scale_space(space, t))
            self.assertLessEqual(value, report.sum_bound + 1E-9 * report.sum_bound)

    def test_l1_magnitude_exact(self):
        self.assertAlmostEqual(bounds_apps.l1_magnitude_exact(convex_bodies.AxisBox([0], [2])), 2.0, places=14)
        self.assertAlmostEqual(bounds_apps.l1_magnitude_exact(self.square), 4.0, places=14)
        self.assertAlmostEqual(bounds_apps.l1_magnitude_exact(self.triangle), 3.5, places=12)

        box = convex_bodies.AxisBox([0, 0, 0], [1.0, 2.0, 3.0])
        self.assertAlmostEqual(bounds_apps.l1_magnitude_exact(box), 1.5 * 2.0 * 2.5, places=12)

        with self.assertRaises(DegenerateBody):
            bounds_apps.l1_magnitude_exact(convex_bodies.VPolytope([[0, 0], [1, 1]]))

    def test_grid_magnitude_below_exact(self):
        points = convex_bodies.grid_sample(self.triangle, 20)
        value = finite_metric.magnitude(finite_metric.build_space(points, "l1"))
        self.assertLessEqual(value, bounds_apps.l1_magnitude_exact(self.triangle) + 1E-9)

    def test_wright_f(self):
        self.assertEqual(bounds_apps.wright_f(0.0), 1.0)
        for x in (0.5, 1.0, 5.0, 20.0):
            expected = wright_reference(x)
            self.assertAlmostEqual(bounds_apps.wright_f(x), expected, delta=1E-12 * expected)
        self.assertAlmostEqual(bounds_apps.wright_f(1.0), 2.777, places=3)

        value, tail = bounds_apps.wright_f(100.0, return_tail=True)
        self.assertLess(tail, 1E-14)
        self.assertGreater(value, 0.0)

        #first order: f(x) = 1 + 2x/sqrt(pi) + O(x^2)
        x = 1E-6
        self.assertAlmostEqual((bounds_apps.wright_f(x) - 1.0) / x, 2.0 / math.sqrt(math.pi), places=5)

        with self.assertRaises(ValueError):
            bounds_apps.wright_f(-1.0)

    def test_wright_f_shape(self):
        xs = np.linspace(0.1, 30.0, 300)
        values = np.array([bounds_apps.wright_f(x) for x in xs])
        #positive coefficients: increasing and convex
        self.assertTrue(np.all(np.diff(values) > 0))
        self.assertTrue(np.all(np.diff(values, 2) >= -1E-9 * values[1:-1]))

    def test_wright_c_star(self):
        c = bounds_apps.wright_c_star()
        self.assertGreater(c, 0.0)
        for x in np.logspace(-2, 2, 400):
            self.assertLessEqual(math.log(bounds_apps.wright_f(x)), c * x ** (2.0 / 3.0) + 1E-12)

    def test_mag_v1(self):
        self.assertEqual(bounds_apps.mag_v1_bound(0.0), 1.0)
        self.assertEqual(bounds_apps.mag_v1_chain(0.0), 1.0)
        self.assertAlmostEqual(bounds_apps.mag_v1_chain(4.0 / math.sqrt(math.pi)), bounds_apps.wright_f(1.0), places=14)
        self.assertAlmostEqual(bounds_apps.mag_v1_bound(8.0, c=0.5), math.exp(2.0), places=12)
        with self.assertRaises(ValueError):
            bounds_apps.mag_v1_bound(1.0, c=0.0)
        with self.assertRaises(ValueError):
            bounds_apps.mag_v1_chain(-1.0)

    def test_counting_bound(self):
        self.assertAlmostEqual(bounds_apps.counting_bound(2, math.log(4.0), 1.0), 4.0 / 3.0, places=14)
        N = 7
        self.assertAlmostEqual(bounds_apps.counting_bound(N, math.log(2 * N) / 0.3, 0.3), 2.0 * N / 3.0, places=12)

    def test_sudakov_interval(self):
        result = bounds_apps.sudakov_pipeline(convex_bodies.AxisBox([0], [1]), 1.0, seed=1)
        self.assertEqual(result.N, 2)
        self.assertAlmostEqual(result.t_star, math.log(4.0), places=14)
        self.assertAlmostEqual(result.mag_lower, 1.6, places=10)
        self.assertAlmostEqual(result.counting_bound, 4.0 / 3.0, places=12)
        self.assertTrue(result.ok)
        self.assertEqual(sorted(result.centers[:, 0].tolist()), [0.0, 1.0])

    def test_sudakov_point(self):
        result = bounds_apps.sudakov_pipeline(convex_bodies.VPolytope([[0.5, 0.5]]), 0.1, seed=1)
        self.assertEqual(result.N, 1)
        self.assertIsNone(result.ok)
        self.assertEqual(result.mag_lower, 1.0)

    def test_sudakov_square(self):
        for body in (convex_bodies.AxisBox([0, 0], [1, 1]), convex_bodies.AxisBox([-0.5, -0.5], [0.5, 0.5])):
            for epsilon in (0.1, 0.2, 0.4):
                result = bounds_apps.sudakov_pipeline(body, epsilon, seed=7)
                self.assertTrue(result.ok)
                self.assertTrue(all(row["ok"] for row in result.scale_rows))
                self.assertEqual(len(result.scale_rows), 5)
                D = finite_metric.pairwise_distances(result.centers, result.centers, "l2")
                self.assertTrue(np.all(D[np.triu_indices(result.N, 1)] >= epsilon - 1E-12))
                self.assertTrue(np.all(body.contains(result.centers)))

        result = bounds_apps.sudakov_pipeline(convex_bodies.AxisBox([0, 0], [1, 1]), 0.5, seed=3)
        self.assertGreaterEqual(result.N, 4)
        self.assertIsNotNone(result.v1_ratio)

    def test_sudakov_deterministic(self):
        body = convex_bodies.VPolytope([[0, 0], [1, 0], [0, 1]])
        a = bounds_apps.sudakov_pipeline(body, 0.2, seed=11, grid_points_per_side=32)
        b = bounds_apps.sudakov_pipeline(body, 0.2, seed=11, grid_points_per_side=32)
        self.assertTrue(np.array_equal(a.centers, b.centers))
        self.assertEqual(a.mag_lower, b.mag_lower)

        with self.assertRaises(ValueError):
            bounds_apps.sudakov_pipeline(body, 0.0, seed=1)

    def test_sudakov_settings(self):
        body = convex_bodies.AxisBox([0, 0], [1, 1])
        with warnings.catch_warnings(record=True) as caught, mock.patch("sys.stderr", new_callable=io.StringIO) as err:
            warnings.simplefilter("always")
            pipeline = bounds_apps.SudakovPipeline(body, 0.3, 1, {"norm": "l2"})
            bounds_apps.sudakov_pipeline(body, 0.3, seed=1)
        self.assertEqual([w for w in caught if "input value" in str(w.message)], [])
        self.assertEqual(err.getvalue(), "")
        self.assertEqual(pipeline.grid_points, 64)

        with warnings.catch_warnings(record=True) as caught, mock.patch("sys.stderr", new_callable=io.StringIO):
            warnings.simplefilter("always")
            pipeline = bounds_apps.SudakovPipeline(body, 0.3, 1, {"grid_points_per_side": 1})
        self.assertEqual(len([w for w in caught if "input value" in str(w.message)]), 1)
        self.assertEqual(pipeline.grid_points, 64)

    def test_mahler_cubes(self):
        report = bounds_apps.mahler_pipeline(convex_bodies.Zonotope(np.eye(2)), 100000, seed=1)
        self.assertAlmostEqual(report.product_exact, 8.0, places=10)
        self.assertAlmostEqual(report.bound, 8.0, places=14)
        self.assertLessEqual(abs(report.product - 8.0), 4.0 * report.product_std_err)

        report = bounds_apps.mahler_pipeline(convex_bodies.Zonotope(np.eye(3)), 100000, seed=2)
        self.assertAlmostEqual(report.product_exact, 32.0 / 3.0, places=10)
        self.assertAlmostEqual(report.ht_product, 32.0 / 3.0, places=9)
        self.assertTrue(all(row["ok"] for row in report.t_rows))
        self.assertEqual([row["t"] for row in report.t_rows], [1.0, 2.0, 4.0, 8.0, 16.0, 32.0])

    def test_mahler_random(self):
        for ii in range(20):
            n = 2 + ii % 2
            z = convex_bodies.Zonotope(self.rng.standard_normal((n + 2, n)))
            report = bounds_apps.mahler_pipeline(z, 1000000, seed=ii)
            self.assertGreaterEqual(report.product, report.bound - 3.0 * report.product_std_err)
            self.assertGreaterEqual(report.product_exact, report.bound * (1.0 - 1E-9))
            self.assertAlmostEqual(report.ht_product, report.product_exact, delta=1E-9 * report.product_exact)
            self.assertTrue(all(row["ok"] for row in report.t_rows))

    def test_mahler_deterministic(self):
        z = convex_bodies.Zonotope([[1, 0], [0, 1], [1, 1]])
        a = bounds_apps.mahler_pipeline(z, 20000, seed=5)
        b = bounds_apps.mahler_pipeline(z, 20000, seed=5)
        self.assertEqual(canonical_json(a.to_dict()), canonical_json(b.to_dict()))

    def test_mahler_errors(self):
        with self.assertRaises(DegenerateBody):
            bounds_apps.mahler_pipeline(convex_bodies.Zonotope([[1, 1], [2, 2]]), 10000, seed=1)
        with self.assertRaises(DimensionCap):
            bounds_apps.mahler_pipeline(convex_bodies.Zonotope(np.eye(5)), 10000, seed=1)

    def test_mahler_sweep(self):
        zonotopes = [convex_bodies.Zonotope(np.eye(2)), convex_bodies.Zonotope([[1, 0], [0, 1], [1, 1]])]
        table = bounds_apps.mahler_sweep(zonotopes, 20000, seed=3)
        self.assertIsInstance(table, pd.DataFrame)
        self.assertEqual(len(table), 2)
        self.assertEqual(table["n"].tolist(), [2, 2])

    def test_steiner(self):
        unit_triangle = convex_bodies.VPolytope([[0, 0], [1, 0], [0, 1]])
        report = bounds_apps.steiner_check(unit_triangle, [1.0])
        self.assertAlmostEqual(report["rows"][0]["area"], 3.5, places=12)
        self.assertAlmostEqual(report["rows"][0]["polynomial"], 3.5, places=12)

        report = bounds_apps.steiner_check(convex_bodies.AxisBox([0, 0], [1, 1]), [0.25, 0.5, 1.0, 2.0])
        self.assertLessEqual(report["max_rel_deviation"], 1E-12)

        report = bounds_apps.steiner_check(convex_bodies.VPolytope([[0.4, 0.1]]), [2.0])
        self.assertAlmostEqual(report["rows"][0]["area"], 4.0, places=12)

        for _ in range(25):
            polygon = convex_bodies.VPolytope(self.rng.standard_normal((10, 2)))
            report = bounds_apps.steiner_check(polygon, [0.25, 0.5, 1.0, 2.0])
            self.assertLessEqual(report["max_rel_deviation"], 1E-9)

        with self.assertRaises(DimensionCap):
            bounds_apps.steiner_check(convex_bodies.AxisBox([0, 0, 0], [1, 1, 1]), [1.0])

    def test_steiner_mc(self):
        cube = convex_bodies.AxisBox([0, 0, 0], [1, 1, 1])
        report = bounds_apps.steiner_check_mc(cube, [0.5, 1.0], 100000, seed=4)
        self.assertTrue(report["ok"])
        self.assertAlmostEqual(report["rows"][1]["exact_hull"], 8.0, places=10)
        self.assertAlmostEqual(report["rows"][1]["polynomial"], 8.0, places=12)

    def test_wills(self):
        report = bounds_apps.wills_check(self.square)
        self.assertEqual(report.count, 9)
        self.assertAlmostEqual(report.wills, 9.0, places=12)
        self.assertTrue(report.ok)

        report = bounds_apps.wills_check(self.triangle)
        self.assertEqual(report.count, 6)
        self.assertAlmostEqual(report.wills, 7.0, places=12)
        self.assertTrue(report.ok)

        report = bounds_apps.wills_check(convex_bodies.VPolytope([[1, 1]]))
        self.assertEqual(report.count, 1)
        self.assertEqual(report.wills, 1.0)

        for a, b in ((1, 4), (3, 2), (5, 5)):
            report = bounds_apps.wills_check(convex_bodies.AxisBox([0, 0], [a, b]))
            self.assertEqual(report.count, (a + 1) * (b + 1))
            self.assertAlmostEqual(report.wills, (a + 1) * (b + 1), places=12)

    def test_wills_random(self):
        for _ in range(20):
            polygon = convex_bodies.VPolytope(self.rng.integers(0, 6, size=(6, 2)))
            self.assertTrue(bounds_apps.wills_check(polygon).ok)
        for _ in range(10):
            polytope = convex_bodies.VPolytope(self.rng.integers(0, 4, size=(8, 3)))
            self.assertTrue(bounds_apps.wills_check(polytope).ok)

    def test_small_t_interval(self):
        rows = bounds_apps.small_t_slope_check(convex_bodies.AxisBox([0], [2]), generating_measures.l1_measure(1), [0.1, 0.05, 0.01], 101)
        self.assertEqual(len(rows), 3)
        for row in rows:
            self.assertTrue(row["ok"])
            self.assertEqual(row["grid_points"], 101)
            self.assertAlmostEqual(row["exact_slope"], 1.0, places=12)
            self.assertAlmostEqual(row["target"], 1.0, places=12)
            expected = 1.0 - row["t"] ** 2 / (3.0 * 100.0 ** 2)
            self.assertAlmostEqual(row["slope"], expected, places=6)

    def test_small_t_square(self):
        rows = bounds_apps.small_t_slope_check(self.square, generating_measures.l1_measure(2), [0.2, 0.1, 0.05], 24)
        self.assertTrue(all(row["ok"] for row in rows))
        for row in rows:
            self.assertAlmostEqual(row["target"], 2.0, places=12)
            self.assertLessEqual(row["slope"], row["exact_slope"] + 1E-9)

        measure = generating_measures.random_measure(2, 4, seed=6)
        body = convex_bodies.Zonotope(self.rng.standard_normal((3, 2)))
        table = bounds_apps.small_t_sweep(body, measure, [0.1, 0.05], 16)
        self.assertIsInstance(table, pd.DataFrame)
        self.assertTrue(table["ok"].all())
        self.assertTrue(table["exact_slope"].isna().all())

    def test_small_t_point(self):
        rows = bounds_apps.small_t_slope_check(convex_bodies.VPolytope([[0.3, 0.3]]), generating_measures.l1_measure(2), [0.1], 8)
        self.assertEqual(rows[0]["slope"], 0.0)
        self.assertTrue(rows[0]["ok"])
        self.assertIsNone(rows[0]["exact_slope"])
        with self.assertRaises(ValueError):
            bounds_apps.small_t_slope_check(self.square, generating_measures.l1_measure(2), [0.0], 8)


if __name__ == '__main__':
    unittest.main()
