'''
MODULE: bounds_apps.py

@Details:
    Magnitude bounds for convex bodies in normed spaces generated by discrete measures,
    and the checks built on them:
    i) the upper bound Mag(K) <= sum_m 4^(-m) mu_m(K) <= exp(mu_1(K)/4), and the exact
       l1 magnitude sum_m 2^(-m) V'_m(K) of full dimensional bodies;
    ii) the Wright function f(x) = sum_m x^m/(Gamma(1 + m/2) m!) and the bounds on the
        magnitude in terms of the first intrinsic volume;
    iii) the packing (Sudakov) pipeline: a greedy epsilon-packing of the body, whose
         magnitude at the scale t* = log(2N)/epsilon is at least 2N/3;
    iv) the Mahler pipeline for zonotopes: vol(Z) vol(Z°) against 4^n/n!;
    v) the l1 Steiner formula vol(K + t[0,1]^n) = sum_m V'_m(K) t^(n-m), the lattice
       point bound #(K cap Z^n) <= sum_m V'_m(K), and the first order behaviour of
       Mag(tK) for small t.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import pandas as pd
from scipy.special import gammaln

from .utilities import *
from .convex_bodies import (Zonotope, grid_sample, lattice_points, minkowski_sum_cube, minkowski_sum_cube_hull,
                            polar_body, polar_volume, volume, volume_mc)
from .finite_metric import build_space, magnitude, max_diversity, pairwise_distances, scale_space
from .generating_measures import is_l1, zonotope_measure
from .intrinsic_volumes import euclidean_intrinsic_volumes, ht_intrinsic_volumes, l1_intrinsic_volumes


@dataclass(frozen=True)
class BoundReport:
    '''
    Upper bounds on the magnitude of a body: sum_bound = sum_m 4^(-m) mu_m and
    exp_bound = exp(mu_1/4). The caveat is the discretization error of the measure.
    '''
    sum_bound: float
    exp_bound: float
    mu_vector: object
    caveat: float = None

    def to_dict(self):
        return {"sum_bound": self.sum_bound, "exp_bound": self.exp_bound, "mu": self.mu_vector.to_dict(), "caveat": self.caveat}


def _sum_bound(mu, t=1.0):
    return exact_sum((0.25 * t) ** m * mu[m] for m in range(len(mu)))


def magnitude_upper_bound(body, measure, workers=1):
    '''
    --- RETURNS ---
    report:         sum_bound = sum_m 4^(-m) mu_m(K) and exp_bound = exp(mu_1(K)/4)
    type report:    BoundReport
    '''
    mu = ht_intrinsic_volumes(body, measure, workers)
    return BoundReport(_sum_bound(mu), math.exp(0.25 * mu[1]), mu, measure.discretization_error)


def sum_bound_at(report, t):
    '''
    Upper bound sum_m 4^(-m) mu_m(tK) = sum_m 4^(-m) t^m mu_m(K) for the body tK.
    '''
    if t < 0:
        raise ValueError("The scale must be nonnegative (got {}).".format(t))
    return _sum_bound(report.mu_vector, t)


def l1_magnitude_exact(body):
    '''
    Magnitude of a full dimensional convex body of l1^n: sum_m 2^(-m) V'_m(K).
    Raises DegenerateBody for bodies with empty interior, where the sum is only an
    upper bound.
    '''
    if volume(body) <= 0:
        raise DegenerateBody("The l1 magnitude formula is exact for bodies with nonempty interior only.")
    V = l1_intrinsic_volumes(body)
    return exact_sum(0.5 ** m * V[m] for m in range(len(V)))


# ------------------------------
# Wright function
# ------------------------------


def _wright_log_term(m, logx):
    return m * logx - gammaln(1.0 + 0.5 * m) - gammaln(m + 1.0)


def wright_f(x, terms=400, return_tail=False):
    '''
    Wright function f(x) = sum_m x^m / (Gamma(1 + m/2) m!), summed in log space.
    The summation stops when the next term is below 1e-16 times the partial sum; since
    the ratios of consecutive terms decrease, the tail is bounded by t_M/(1 - r_M).
    - Input:
    x = nonnegative real
    terms = maximum number of terms
    return_tail = also return the relative tail bound
    - Output:
    value = f(x)
    tail = bound on the relative truncation error (if return_tail)
    '''
    if x < 0:
        raise ValueError("The Wright function is evaluated for x >= 0 only (got {}).".format(x))
    if not isinstance(terms, (int, np.integer)) or terms < 1:
        raise ValueError("At least one term is needed (got {}).".format(terms))
    if x == 0:
        return (1.0, 0.0) if return_tail else 1.0

    logx = math.log(x)
    summands = []
    running = 0.0
    m = 0
    while m < terms:
        summands.append(math.exp(_wright_log_term(m, logx)))
        running += summands[-1]
        m += 1
        following = math.exp(_wright_log_term(m, logx))
        ratio = math.exp(_wright_log_term(m + 1, logx) - _wright_log_term(m, logx))
        if following < 1E-16 * running and ratio < 1.0:
            break

    value = math.fsum(summands)
    tail = following / (1.0 - ratio) / value if ratio < 1.0 else math.inf
    if return_tail:
        return value, tail

    return value


@lru_cache(maxsize=None)
def wright_c_star():
    '''
    Smallest constant c (rounded up to 3 decimals) with log f(x) <= c x^(2/3) on the
    grid logspace(-2, 2, 400).
    '''
    xs = np.logspace(-2, 2, 400)
    ratios = [math.log(wright_f(x)) / x ** (2.0 / 3.0) for x in xs]
    return math.ceil(max(ratios) * 1000.0) / 1000.0


def mag_v1_bound(v1, c=None):
    '''
    Bound exp(c V_1^(2/3)) on the magnitude of a body with first intrinsic volume V_1;
    c defaults to wright_c_star().
    '''
    if v1 < 0:
        raise ValueError("The first intrinsic volume must be nonnegative (got {}).".format(v1))
    if c is None:
        c = wright_c_star()
    if not c > 0:
        raise ValueError("The constant must be positive (got {}).".format(c))
    return math.exp(c * v1 ** (2.0 / 3.0))


def mag_v1_chain(v1):
    '''
    Sharper bound f(sqrt(pi) V_1/4) on the magnitude of a Euclidean body with first
    intrinsic volume V_1.
    '''
    if v1 < 0:
        raise ValueError("The first intrinsic volume must be nonnegative (got {}).".format(v1))
    return wright_f(math.sqrt(math.pi) * v1 / 4.0)


# ------------------------------
# Packing (Sudakov) pipeline
# ------------------------------


def counting_bound(N, t, epsilon):
    '''
    Lower bound N/(1 + N exp(-t epsilon)) on the magnitude of N points with pairwise
    distances >= epsilon, scaled by t (uniform measure on the points).
    '''
    return N / (1.0 + N * math.exp(-t * epsilon))


@dataclass(frozen=True)
class PackingResult:
    '''
    epsilon-separated points of a body, and the magnitude of the packing at the scale
    t_star = log(2N)/epsilon.
    '''
    centers: np.ndarray
    epsilon: float
    N: int
    t_star: float
    mag_lower: float
    counting_bound: float
    ok: object
    diversity: float = None
    scale_rows: list = field(default_factory=list)
    v1_ratio: float = None
    seed: int = DEFAULT_SEED

    def to_dict(self):
        return {"centers": self.centers, "epsilon": self.epsilon, "N": self.N, "t_star": self.t_star, "mag_lower": self.mag_lower,
                "counting_bound": self.counting_bound, "ok": self.ok, "diversity": self.diversity, "scale_rows": self.scale_rows,
                "v1_ratio": self.v1_ratio, "seed": self.seed}


class SudakovPipeline:
    '''
    Greedy epsilon-packing of a body and magnitude of the packing.
    The candidates are the grid points of the body (grid_sample); they are shuffled with
    the seed, the first center is the candidate farthest from their centroid, and the
    candidate farthest from the current centers is added while its distance is at least
    epsilon. The magnitude of the N centers at t* = log(2N)/epsilon is then compared with
    the counting bound 2N/3 = N/(1 + N exp(-t* epsilon)).


    --- PARAMETERS ---
    body:           convex body in R^n
    type body:      ConvexBody

    epsilon:        separation of the packing
    type epsilon:   float

    seed:           seed for the shuffling of the candidates
    type seed:      integer


    --- SETTERS ---
    _grid_points:        candidate grid points per side (64 in R^2, 24 in R^3)
    type   _grid_points: integer

    _norm:               norm of the space ("l1", "l2", "lp:p" or a GeneratingMeasure)
    type   _norm:        string or GeneratingMeasure

    _extra_scales:       multiples of t* where the counting bound is also checked
    type   _extra_scales: list of floats

    _verbose:            print the progress on the standard error
    type   _verbose:     boolean
    '''
    def __init__(self, body, epsilon, seed, *dictionary):
        if not epsilon > 0:
            raise ValueError("The separation epsilon must be positive (got {}).".format(epsilon))
        self.body = body
        self.epsilon = float(epsilon)
        self.seed = int(seed)
        self._grid_points = self.default_grid(body.dim)
        self._norm = "l2"
        self._extra_scales = [0.25, 0.5, 2.0, 4.0, 8.0]
        self._verbose = False

        if dictionary:
            settings = dictionary[0]

            #a missing entry means the default grid for the dimension
            if settings.get("grid_points_per_side") is not None:
                try:
                    self._grid_points = settings["grid_points_per_side"]
                    if not isinstance(self._grid_points, int) or self._grid_points < 2:
                        raise Exception
                except:
                    self._grid_points = self.default_grid(body.dim)
                    fallback_warning("number of grid points per side", self._grid_points)
            try:
                self._norm = settings["norm"]
            except:
                self._norm = "l2"
            try:
                self._extra_scales = list(settings["extra_scales"])
                if any(not s > 0 for s in self._extra_scales):
                    raise Exception
            except:
                self._extra_scales = [0.25, 0.5, 2.0, 4.0, 8.0]
            try:
                self._verbose = settings["verbose"]
                if not isinstance(self._verbose, bool):
                    raise Exception
            except:
                self._verbose = False

    @staticmethod
    def default_grid(n):
        return {1: 1024, 2: 64, 3: 24}.get(n, 12)

    @property
    def grid_points(self):
        return self._grid_points

    @grid_points.setter
    def grid_points(self, new_value):
        if not isinstance(new_value, int) or new_value < 2:
            raise ValueError("The candidate grid needs at least 2 points per side (got {}).".format(new_value))
        self._grid_points = new_value

    def packing(self):
        '''
        --- RETURNS ---
        centers:        epsilon-separated points of the body -- dim: (N x n)
        type centers:   numpy array
        '''
        candidates = grid_sample(self.body, self._grid_points)
        rng = np.random.default_rng(self.seed)
        candidates = candidates[rng.permutation(candidates.shape[0])]

        centroid = np.mean(candidates, axis=0, keepdims=True)
        first = int(np.argmax(pairwise_distances(candidates, centroid, self._norm)[:, 0]))
        chosen = [first]
        nearest = pairwise_distances(candidates, candidates[[first]], self._norm)[:, 0]
        while True:
            jj = int(np.argmax(nearest))
            if nearest[jj] < self.epsilon - 1E-12:
                break
            chosen.append(jj)
            nearest = np.minimum(nearest, pairwise_distances(candidates, candidates[[jj]], self._norm)[:, 0])

        return candidates[chosen]

    def fit(self):
        '''
        --- RETURNS ---
        result:         packing, magnitude at t*, counting bounds
        type result:    PackingResult
        '''
        progress("Building the {}-packing..".format(self.epsilon), self._verbose)
        centers = self.packing()
        N = centers.shape[0]
        t_star = math.log(2 * N) / self.epsilon
        if N == 1:
            return PackingResult(centers, self.epsilon, 1, t_star, 1.0, counting_bound(1, t_star, self.epsilon), None, seed=self.seed)

        progress("Computing the magnitude of {} centers..".format(N), self._verbose)
        space = build_space(centers, self._norm)
        scaled = scale_space(space, t_star)
        mag = magnitude(scaled)
        bound = counting_bound(N, t_star, self.epsilon)
        ok = mag >= 2.0 * N / 3.0 - 1E-9
        diversity = max_diversity(scaled).diversity

        rows = []
        for factor in self._extra_scales:
            t = factor * t_star
            value = magnitude(scale_space(space, t))
            lower = counting_bound(N, t, self.epsilon)
            rows.append({"t": t, "magnitude": value, "counting_bound": lower, "ok": value >= lower - 1E-9})

        v1_ratio = None
        if isinstance(self._norm, str) and self._norm.lower() == "l2":
            try:
                v1 = euclidean_intrinsic_volumes(self.body)[1]
                v1_ratio = v1 / (self.epsilon * math.sqrt(math.log(N)))
            except DimensionCap:
                v1_ratio = None

        return PackingResult(centers, self.epsilon, N, t_star, mag, bound, ok, diversity, rows, v1_ratio, self.seed)


def sudakov_pipeline(body, epsilon, seed, grid_points_per_side=None, norm="l2"):
    '''
    Packing of the body and magnitude lower bound (see SudakovPipeline).
    '''
    settings = {"norm": norm}
    if grid_points_per_side is not None:
        settings["grid_points_per_side"] = int(grid_points_per_side)
    return SudakovPipeline(body, epsilon, seed, settings).fit()


# ------------------------------
# Mahler pipeline
# ------------------------------


@dataclass(frozen=True)
class MahlerReport:
    '''
    vol(Z), the Monte Carlo estimate of vol(Z°), their product and its distance from
    4^n/n! in standard errors; the exact polar volume and the Holmes-Thompson route
    when available.
    '''
    vol_z: float
    vol_polar: object
    product: float
    product_std_err: float
    bound: float
    slack_sigmas: float
    vol_polar_exact: float = None
    product_exact: float = None
    ht_product: float = None
    t_rows: list = field(default_factory=list)

    def to_dict(self):
        return {"vol_z": self.vol_z, "vol_polar": self.vol_polar.to_dict(), "product": self.product, "product_std_err": self.product_std_err,
                "bound": self.bound, "slack_sigmas": self.slack_sigmas, "vol_polar_exact": self.vol_polar_exact,
                "product_exact": self.product_exact, "ht_product": self.ht_product, "t_rows": self.t_rows}


class MahlerPipeline:
    '''
    Volume product of a centred zonotope and its polar body, compared with 4^n/n!.
    vol(Z) is exact; vol(Z°) is estimated by Monte Carlo and, for n <= 4, also computed
    exactly from the vertices of Z°. The exact route also evaluates the Holmes-Thompson
    intrinsic volumes mu_m of B = Z° in the norm whose unit ball is B, and lists, for a
    grid of t, the lower bound t^n/n! of Mag(tB) next to the upper bound
    sum_m 4^(-m) mu_m(B) t^m.


    --- PARAMETERS ---
    z:              full dimensional zonotope (its centre is ignored)
    type z:         Zonotope

    samples:        Monte Carlo samples for vol(Z°)
    type samples:   integer

    seed:           seed of the Monte Carlo stream
    type seed:      integer


    --- SETTERS ---
    _workers:            number of worker threads
    type   _workers:     integer

    _t_grid:             scales t of the magnitude rows
    type   _t_grid:      list of floats

    _exact:              compute the exact polar volume and the magnitude rows
    type   _exact:       boolean

    _verbose:            print the progress on the standard error
    type   _verbose:     boolean
    '''
    def __init__(self, z, samples, seed, *dictionary):
        self.z = Zonotope(z.generators)
        self.samples = int(samples)
        self.seed = int(seed)
        self._workers = 1
        self._t_grid = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
        self._exact = True
        self._verbose = False

        if dictionary:
            settings = dictionary[0]

            try:
                self._workers = settings["workers"]
                if not isinstance(self._workers, int) or self._workers < 1:
                    raise Exception
            except:
                self._workers = 1
                fallback_warning("number of workers", 1)
            try:
                self._t_grid = [float(t) for t in settings["t_grid"]]
                if any(not t > 0 for t in self._t_grid):
                    raise Exception
            except:
                self._t_grid = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
            try:
                self._exact = settings["exact"]
                if not isinstance(self._exact, bool):
                    raise Exception
            except:
                self._exact = True
            try:
                self._verbose = settings["verbose"]
                if not isinstance(self._verbose, bool):
                    raise Exception
            except:
                self._verbose = False

    @property
    def workers(self):
        return self._workers

    @workers.setter
    def workers(self, new_value):
        if not isinstance(new_value, int) or new_value < 1:
            raise ValueError("The number of workers must be a positive integer (got {}).".format(new_value))
        self._workers = new_value

    def fit(self):
        '''
        --- RETURNS ---
        report:         volumes, product, bound 4^n/n! and slack in standard errors
        type report:    MahlerReport
        '''
        n = self.z.dim
        if n > MAX_VPOLYTOPE_DIM:
            raise DimensionCap("The Mahler pipeline is available up to dimension {} (got {}).".format(MAX_VPOLYTOPE_DIM, n))
        vol_z = volume(self.z)
        if vol_z <= 0:
            raise DegenerateBody("The zonotope is not full dimensional: its polar body is unbounded.")
        bound = 4.0 ** n / math.factorial(n)

        progress("Estimating the polar volume..", self._verbose)
        estimate = polar_volume(self.z, self.samples, self.seed, self._workers)
        product = vol_z * estimate.value
        std_err = vol_z * estimate.std_err
        if std_err > 0:
            slack = (product - bound) / std_err
        else:
            slack = 0.0 if product == bound else math.copysign(math.inf, product - bound)

        if not self._exact:
            return MahlerReport(vol_z, estimate, product, std_err, bound, slack)

        progress("Computing the exact polar body and its intrinsic volumes..", self._verbose)
        B = polar_body(self.z)
        vol_polar_exact = volume(B)
        mu = ht_intrinsic_volumes(B, zonotope_measure(self.z), self._workers)
        rows = []
        for t in self._t_grid:
            lower = t ** n / math.factorial(n)
            upper = _sum_bound(mu, t)
            rows.append({"t": t, "lower": lower, "upper": upper, "ok": lower <= upper * (1.0 + 1E-9)})

        return MahlerReport(vol_z, estimate, product, std_err, bound, slack, vol_polar_exact, vol_z * vol_polar_exact, mu[n], rows)


def mahler_pipeline(z, samples, seed, workers=1):
    '''
    Volume product of a zonotope and its polar body (see MahlerPipeline).
    '''
    return MahlerPipeline(z, samples, seed, {"workers": int(workers)}).fit()


def mahler_sweep(zonotopes, samples, seed, workers=1):
    '''
    Mahler pipeline on a list of zonotopes (seed + index for the i-th one).
    - Output:
    table = one row per zonotope -- pandas DataFrame
    '''
    rows = []
    for ii, z in enumerate(zonotopes):
        report = mahler_pipeline(z, samples, seed + ii, workers)
        rows.append({"index": ii, "n": z.dim, "vol_z": report.vol_z, "vol_polar": report.vol_polar.value, "std_err": report.product_std_err,
                     "product": report.product, "bound": report.bound, "slack_sigmas": report.slack_sigmas, "product_exact": report.product_exact})

    return pd.DataFrame(rows, columns=["index", "n", "vol_z", "vol_polar", "std_err", "product", "bound", "slack_sigmas", "product_exact"])


# ------------------------------
# Steiner, Wills and small-t checks
# ------------------------------


def _steiner_polynomial(V, t):
    n = len(V) - 1
    return exact_sum(V[m] * t ** (n - m) for m in range(n + 1))


def steiner_check(polygon, ts):
    '''
    Exact check of vol(K + t[0,1]^2) = V'_2(K) + V'_1(K) t + t^2 for a convex polygon.
    - Output:
    report = dict with the rows (t, area, polynomial, abs_dev, rel_dev) and the largest
             deviations
    '''
    if polygon.dim != 2:
        raise DimensionCap("The exact Steiner check is available in R^2 only (got R^{}).".format(polygon.dim))
    V = l1_intrinsic_volumes(polygon)
    rows = []
    for t in ts:
        area = volume(minkowski_sum_cube(polygon, t))
        expected = _steiner_polynomial(V, t)
        deviation = abs(area - expected)
        rows.append({"t": float(t), "area": area, "polynomial": expected, "abs_dev": deviation,
                     "rel_dev": deviation / expected if expected > 0 else deviation})

    return {"l1_volumes": list(V.values), "rows": rows,
            "max_abs_deviation": max((r["abs_dev"] for r in rows), default=0.0),
            "max_rel_deviation": max((r["rel_dev"] for r in rows), default=0.0)}


def steiner_check_mc(body, ts, samples, seed, workers=1):
    '''
    Monte Carlo check of vol(K + t[0,1]^n) = sum_m V'_m(K) t^(n-m), n <= 4: the sum is
    sampled through the membership oracle of its exact hull, and each row is accepted
    within 4 standard errors.
    '''
    V = l1_intrinsic_volumes(body)
    rows = []
    for ii, t in enumerate(ts):
        hull = minkowski_sum_cube_hull(body, t)
        estimate = volume_mc(hull.contains, hull.bounding_box(), samples, seed + ii, workers)
        expected = _steiner_polynomial(V, t)
        rows.append({"t": float(t), "estimate": estimate.value, "std_err": estimate.std_err, "exact_hull": volume(hull),
                     "polynomial": expected, "ok": abs(estimate.value - expected) <= 4.0 * estimate.std_err + 1E-9 * expected})

    return {"l1_volumes": list(V.values), "rows": rows, "ok": all(r["ok"] for r in rows)}


@dataclass(frozen=True)
class WillsReport:
    count: int
    wills: float
    ok: bool

    def to_dict(self):
        return {"count": self.count, "wills": self.wills, "ok": self.ok}


def wills_check(body):
    '''
    Lattice point bound #(K cap Z^n) <= W'(K) = sum_m V'_m(K), n <= 3.
    '''
    count = lattice_points(body)
    wills = exact_sum(l1_intrinsic_volumes(body).values)
    return WillsReport(count, wills, count <= wills + 1E-9)


class SmallTSlope:
    '''
    Slope (Mag(tX) - 1)/t of the magnitude of a grid X of the body, for small t.
    Each row compares the slope with the slope of the upper bound,
    sum_{m >= 1} 4^(-m) mu_m t^(m-1), which it cannot exceed, and reports its distance
    from the limit mu_1/4 (limit_gap). For the l1 measure and a full dimensional body the
    exact slope (from the exact l1 magnitude) is reported too.


    --- PARAMETERS ---
    body:           convex body in R^n
    type body:      ConvexBody

    measure:        generating measure of the norm
    type measure:   GeneratingMeasure

    ts:             positive scales
    type ts:        list of floats

    grid_k:         grid points per side of the finite subset X
    type grid_k:    integer


    --- SETTERS ---
    _workers:            number of worker threads (intrinsic volumes)
    type   _workers:     integer

    _verbose:            print the progress on the standard error
    type   _verbose:     boolean
    '''
    def __init__(self, body, measure, ts, grid_k, *dictionary):
        if any(not t > 0 for t in ts):
            raise ValueError("The scales must be positive.")
        self.body = body
        self.measure = measure
        self.ts = [float(t) for t in ts]
        self.grid_k = int(grid_k)
        self._workers = 1
        self._verbose = False

        if dictionary:
            settings = dictionary[0]

            try:
                self._workers = settings["workers"]
                if not isinstance(self._workers, int) or self._workers < 1:
                    raise Exception
            except:
                self._workers = 1
                fallback_warning("number of workers", 1)
            try:
                self._verbose = settings["verbose"]
                if not isinstance(self._verbose, bool):
                    raise Exception
            except:
                self._verbose = False

    def fit(self):
        '''
        --- RETURNS ---
        rows:           one dict per scale t
        type rows:      list
        '''
        mu = ht_intrinsic_volumes(self.body, self.measure, self._workers)
        target = 0.25 * mu[1]
        points = grid_sample(self.body, self.grid_k)
        progress("Computing the grid magnitudes ({} points)..".format(points.shape[0]), self._verbose)
        space = build_space(points, self.measure)

        exact = None
        if is_l1(self.measure) and self.body.is_full_dimensional():
            exact = l1_intrinsic_volumes(self.body)

        rows = []
        for t in self.ts:
            slope = (magnitude(scale_space(space, t)) - 1.0) / t
            bound_slope = exact_sum(0.25 ** m * mu[m] * t ** (m - 1) for m in range(1, len(mu)))
            row = {"t": t, "grid_points": points.shape[0], "slope": slope, "bound_slope": bound_slope, "target": target,
                   "limit_gap": slope - target, "ok": slope <= bound_slope + 1E-9, "exact_slope": None}
            if exact is not None:
                row["exact_slope"] = exact_sum(0.5 ** m * exact[m] * t ** (m - 1) for m in range(1, len(exact)))
            rows.append(row)

        return rows


def small_t_slope_check(body, measure, ts, grid_k):
    '''
    First order behaviour of the magnitude of tK for small t (see SmallTSlope).
    '''
    return SmallTSlope(body, measure, ts, grid_k).fit()


def small_t_sweep(body, measure, ts, grid_k):
    '''
    small_t_slope_check as a pandas DataFrame.
    '''
    rows = small_t_slope_check(body, measure, ts, grid_k)
    return pd.DataFrame(rows, columns=["t", "grid_points", "slope", "bound_slope", "target", "limit_gap", "ok", "exact_slope"])
