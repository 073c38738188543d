'''
MODULE: intrinsic_volumes.py

@Details:
    Intrinsic volumes of convex bodies:
    i) l1 intrinsic volumes V'_m(K) = sum over the m-dimensional coordinate subspaces P
       of vol_m(K|P);
    ii) Holmes-Thompson intrinsic volumes mu_m(K) of a normed space generated by a
        discrete even measure sum_i w_i delta_{theta_i}:
            mu_m(K) = 2^m sum_{S, |S| = m} (prod_{i in S} w_i) vol_m(A_S K),
        where A_S is the (m x n) matrix with rows theta_i, i in S. Subsets with a
        repeated atom give a rank deficient A_S and do not contribute;
    iii) the normalized values mu_m/omega_m, and the classical (Euclidean) intrinsic
         volumes of polygons and boxes, used as reference values.
    The sums are correctly rounded (math.fsum), so they do not depend on how the subsets
    are split among the workers.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import itertools
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy import linalg as LA
from scipy.spatial import ConvexHull

from .utilities import *
from .convex_bodies import AxisBox, ProjectionMatrix, VPolytope, Zonotope, project, volume


L1_PRIME = "L1Prime"
HOLMES_THOMPSON = "HolmesThompson"
HOLMES_THOMPSON_NORMALIZED = "HolmesThompsonNormalized"
EUCLIDEAN = "Euclidean"
KINDS = (L1_PRIME, HOLMES_THOMPSON, HOLMES_THOMPSON_NORMALIZED, EUCLIDEAN)

SupermultiplicativityRow = namedtuple("SupermultiplicativityRow", ["i", "j", "lhs", "rhs", "ok"])


@dataclass(frozen=True)
class IntrinsicVolumeVector:
    '''
    Values of index 0..n of one kind of intrinsic volume, with their provenance
    ("exact" or "montecarlo", the latter with one standard error per entry).
    '''
    values: tuple
    kind: str
    provenance: str = "exact"
    std_errs: tuple = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("Unknown kind of intrinsic volume: {}".format(self.kind))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def n(self):
        return len(self.values) - 1

    def __getitem__(self, m):
        return self.values[m]

    def __len__(self):
        return len(self.values)

    def as_array(self):
        return np.array(self.values)

    def scaled(self, t):
        '''
        Values of the body tK, by homogeneity (entry m times |t|^m).
        '''
        factors = abs(float(t)) ** np.arange(len(self.values))
        return IntrinsicVolumeVector(tuple(np.array(self.values) * factors), self.kind, self.provenance, self.std_errs)

    def to_dict(self):
        return {"values": list(self.values), "kind": self.kind, "provenance": self.provenance, "std_errs": self.std_errs}


class IntrinsicConstants:
    '''
    Volumes omega_m = pi^(m/2)/Gamma(1 + m/2) of the Euclidean unit balls, m = 0..n.
    '''

    def __init__(self, n):
        self.n = n
        self.omegas = np.array([omega(m) for m in range(n + 1)])


# ------------------------------
# Functions
# ------------------------------


def _check_engine(body):
    if isinstance(body, VPolytope) and body.dim > MAX_VPOLYTOPE_DIM:
        raise DimensionCap("The exact projection volumes of a V-polytope are available up to dimension {} (got {}).".format(MAX_VPOLYTOPE_DIM, body.dim))
    if isinstance(body, Zonotope) and body.generators.shape[0] > MAX_GENERATORS:
        raise DimensionCap("The exact projection volumes of a zonotope are available up to {} generators (got {}).".format(MAX_GENERATORS, body.generators.shape[0]))


def l1_intrinsic_volumes(body):
    '''
    l1 intrinsic volumes V'_0..V'_n: V'_m is the sum of the volumes of the projections
    of the body onto the C(n, m) coordinate subspaces of dimension m.
    '''
    _check_engine(body)
    n = body.dim
    values = [1.0]
    for m in range(1, n + 1):
        values.append(exact_sum(volume(project(body, ProjectionMatrix.coordinate(S, n))) for S in itertools.combinations(range(n), m)))

    return IntrinsicVolumeVector(tuple(values), L1_PRIME)


def box_l1_closed_form(lengths):
    '''
    l1 intrinsic volumes of a box with the given side lengths: V'_m = e_m(lengths).
    '''
    lengths = np.asarray(lengths, dtype=float).ravel()
    if np.any(lengths < 0):
        raise ValueError("The side lengths of a box must be nonnegative.")
    return IntrinsicVolumeVector(tuple(elementary_symmetric(lengths)), L1_PRIME)


class HTIntrinsicVolumes:
    '''
    Holmes-Thompson intrinsic volumes of a convex body in the normed space generated by
    a discrete measure. For every m, the C(N, m) subsets of atoms are split in contiguous
    chunks among the workers; each term is prod(w_S) vol_m(A_S K), with the exact volume
    engine of convex_bodies.


    --- PARAMETERS ---
    body:           convex body in R^n
    type body:      ConvexBody

    measure:        generating measure in R^n
    type measure:   GeneratingMeasure


    --- SETTERS ---
    _workers:            number of worker threads
    type   _workers:     integer

    _budget:             maximum number of atom subsets evaluated for one m
    type   _budget:      integer

    _verbose:            print the progress on the standard error
    type   _verbose:     boolean
    '''
    def __init__(self, body, measure, *dictionary):
        if body.dim != measure.dim:
            raise ValueError("The body lives in R^{}, the measure in R^{}.".format(body.dim, measure.dim))
        self.body = body
        self.measure = measure
        self._workers = 1
        self._budget = TUPLE_BUDGET
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
                self._budget = settings["budget"]
                if not isinstance(self._budget, int) or self._budget < 1:
                    raise Exception
            except:
                self._budget = TUPLE_BUDGET
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

    @property
    def budget(self):
        return self._budget

    @budget.setter
    def budget(self, new_value):
        if not isinstance(new_value, int) or new_value < 1:
            raise ValueError("The tuple budget must be a positive integer (got {}).".format(new_value))
        self._budget = new_value

    def _terms(self, subsets):
        directions, weights = self.measure.directions, self.measure.weights
        return [float(np.prod(weights[list(S)])) * volume(project(self.body, directions[list(S)])) for S in subsets]

    def fit(self):
        '''
        --- RETURNS ---
        mu:             mu_0..mu_n
        type mu:        IntrinsicVolumeVector (kind HolmesThompson)
        '''
        _check_engine(self.body)
        n, N = self.body.dim, self.measure.size
        for m in range(1, n + 1):
            if math.comb(N, m) > self._budget:
                raise TupleBudgetExceeded("C({}, {}) = {} atom subsets exceed the tuple budget of {}.".format(N, m, math.comb(N, m), self._budget))

        values = [1.0]
        for m in range(1, n + 1):
            progress("Computing mu_{} ({} atom subsets, {} workers)..".format(m, math.comb(N, m), self._workers), self._verbose)
            subsets = list(itertools.combinations(range(N), m))
            if self._workers == 1 or len(subsets) < 2:
                terms = self._terms(subsets)
            else:
                chunks = np.array_split(np.arange(len(subsets)), self._workers)
                with ThreadPoolExecutor(max_workers=self._workers) as pool:
                    parts = pool.map(lambda idx: self._terms([subsets[ii] for ii in idx]), chunks)
                terms = [term for part in parts for term in part]
            values.append((2.0 ** m) * exact_sum(terms))

        return IntrinsicVolumeVector(tuple(values), HOLMES_THOMPSON)


def ht_intrinsic_volumes(body, measure, workers=1):
    '''
    Holmes-Thompson intrinsic volumes mu_0..mu_n (see HTIntrinsicVolumes).
    '''
    return HTIntrinsicVolumes(body, measure, {"workers": int(workers)}).fit()


def ht_volume(body, measure, workers=1):
    '''
    Holmes-Thompson volume mu_n of an n-dimensional body.
    '''
    return ht_intrinsic_volumes(body, measure, workers)[body.dim]


def normalize(v, constants=None):
    '''
    Normalized Holmes-Thompson intrinsic volumes mu_m/omega_m.
    '''
    if v.kind != HOLMES_THOMPSON:
        raise ValueError("Only Holmes-Thompson vectors can be normalized (got {}).".format(v.kind))
    if constants is None:
        constants = IntrinsicConstants(v.n)
    if len(constants.omegas) < len(v):
        raise ValueError("The constants cover m <= {}, while the vector has m <= {}.".format(len(constants.omegas) - 1, v.n))
    values = np.array(v.values) / constants.omegas[:len(v)]
    std_errs = None
    if v.std_errs is not None:
        std_errs = tuple(np.array(v.std_errs) / constants.omegas[:len(v)])

    return IntrinsicVolumeVector(tuple(values), HOLMES_THOMPSON_NORMALIZED, v.provenance, std_errs)


def check_supermultiplicativity(v):
    '''
    Rows (i, j, lhs, rhs, ok) of the inequalities mu_{i+j} <= i! j!/(i+j)! mu_i mu_j,
    for all the pairs i, j >= 0 with i + j <= n, in lexicographic order. The rows
    with i = 0 or j = 0 hold with equality (mu_0 = 1). The l1 intrinsic volumes
    satisfy the same inequalities (V'_m = 2^(-m) mu_m for the l1 measure).
    '''
    if v.kind not in (HOLMES_THOMPSON, L1_PRIME):
        raise ValueError("The supermultiplicativity check needs Holmes-Thompson (or l1) intrinsic volumes (got {}).".format(v.kind))
    rows = []
    n = v.n
    for i in range(n + 1):
        for j in range(n + 1 - i):
            lhs = v[i + j]
            rhs = math.exp(log_factorial(i) + log_factorial(j) - log_factorial(i + j)) * v[i] * v[j]
            rows.append(SupermultiplicativityRow(i, j, lhs, rhs, lhs <= rhs + 1E-9 * rhs))

    return rows


def _polygon_measures(body):
    #perimeter and area of a planar body
    V = body.vertices()
    rank, _, _ = affine_rank(V)
    if rank == 0:
        return 0.0, 0.0
    if rank == 1:
        return 2.0 * float(np.max(LA.norm(V[:, None, :] - V[None, :, :], axis=2))), 0.0
    hull = ConvexHull(V)
    #for 2D hulls, ConvexHull.area is the perimeter and ConvexHull.volume the area
    return float(hull.area), float(hull.volume)


def euclidean_intrinsic_volumes(body):
    '''
    Classical intrinsic volumes V_0..V_n, for bodies where a closed form is available:
    boxes (elementary symmetric polynomials of the sides), bodies in R^1 (length) and
    convex polygons (V_1 = half perimeter, V_2 = area).
    '''
    if isinstance(body, AxisBox):
        return IntrinsicVolumeVector(tuple(elementary_symmetric(body.lengths)), EUCLIDEAN)
    if body.dim == 1:
        box = body.bounding_box()
        return IntrinsicVolumeVector((1.0, float(box.lengths[0])), EUCLIDEAN)
    if body.dim == 2:
        perimeter, area = _polygon_measures(body)
        return IntrinsicVolumeVector((1.0, 0.5 * perimeter, area), EUCLIDEAN)

    raise DimensionCap("The Euclidean intrinsic volumes are available for boxes, and for bodies in R^1 and R^2 (got R^{}).".format(body.dim))
