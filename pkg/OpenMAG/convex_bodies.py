'''
MODULE: convex_bodies.py

@Details:
    Representations of convex bodies in R^n and the operations the magnitude estimates
    need from them: membership, exact volumes, linear projections, polar bodies, grids of
    points, Minkowski sums with a cube and lattice point counts.

    Three kinds of body are available:
    i) VPolytope: convex hull of a finite set of vertices;
    ii) Zonotope: centre + Minkowski sum of segments [-v_i, v_i];
    iii) AxisBox: product of intervals [l_j, h_j].

    Volumes are exact (determinant enumeration for zonotopes, hull triangulation for
    polytopes of dimension up to 4, product of the sides for boxes). Volumes which
    cannot be computed exactly are estimated with the Monte Carlo routine volume_mc,
    whose random stream depends only on the seed and on the number of workers.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy import linalg as LA
from scipy.spatial import ConvexHull, QhullError

from .utilities import *


#membership tolerance, relative to the size of the body
MEMBERSHIP_TOL = 1E-9


class ConvexBody:
    '''
    Common interface of the convex bodies. The bodies are immutable: translate and
    scale return new objects.
    '''
    kind = None

    @property
    def dim(self):
        return self._dim

    def contains(self, points):
        '''
        Membership oracle.
        - Input:
        points = a single point (n) or a matrix of points (observations x n)
        - Output:
        inside = boolean, or boolean vector with one entry per point
        '''
        P = np.asarray(points, dtype=float)
        single = P.ndim == 1
        P = np.atleast_2d(P)
        if P.shape[1] != self.dim:
            raise ValueError("Points of dimension {} cannot be tested against a body in R^{}.".format(P.shape[1], self.dim))
        inside = self._contains(P)
        if single:
            return bool(inside[0])
        return inside

    def vertices(self):
        '''
        Finite set of points whose convex hull is the body.
        '''
        raise NotImplementedError

    def bounding_box(self):
        V = self.vertices()
        return AxisBox(np.min(V, axis=0), np.max(V, axis=0))

    def affine_dimension(self):
        rank, _, _ = affine_rank(self.vertices())
        return rank

    def is_full_dimensional(self):
        return self.affine_dimension() == self.dim

    def _tolerance(self):
        return MEMBERSHIP_TOL * max(1.0, float(np.max(np.abs(self.vertices()))))


class VPolytope(ConvexBody):
    '''
    Convex hull of a finite, nonempty set of points of R^n.


    --- PARAMETERS ---
    points:         vertices (not necessarily extreme) -- dim: (k x n)
    type points:    numpy array, or list of lists
    '''
    kind = "vpolytope"

    def __init__(self, points):
        P = np.array(points, dtype=float)
        if P.ndim == 1:
            P = P.reshape(-1, 1)
        if P.ndim != 2 or P.shape[0] == 0 or P.shape[1] == 0:
            raise ValueError("A V-polytope needs a nonempty (k x n) array of vertices.")
        if not np.all(np.isfinite(P)):
            raise ValueError("The vertices of a V-polytope must be finite.")
        self._points = P
        self._points.setflags(write=False)
        self._dim = P.shape[1]

    @property
    def points(self):
        return self._points

    def vertices(self):
        return self._points

    @cached_property
    def _frame(self):
        #inequalities of the hull, written in the coordinates of the affine hull
        rank, origin, basis = affine_rank(self._points)
        Y = (self._points - origin) @ basis.T
        if rank == 0:
            return rank, origin, basis, None
        if rank == 1:
            return rank, origin, basis, (np.min(Y[:, 0]), np.max(Y[:, 0]))
        hull = ConvexHull(Y)
        return rank, origin, basis, hull.equations

    def _contains(self, P):
        tol = self._tolerance()
        rank, origin, basis, hull = self._frame
        Y = (P - origin) @ basis.T
        residual = LA.norm((P - origin) - Y @ basis, axis=1)
        inside = residual <= tol
        if rank == 1:
            low, high = hull
            inside &= (Y[:, 0] >= low - tol) & (Y[:, 0] <= high + tol)
        elif rank >= 2:
            inside &= np.all(Y @ hull[:, :-1].T + hull[:, -1] <= tol, axis=1)
        return inside

    def affine_dimension(self):
        return self._frame[0]

    def extreme_points(self):
        '''
        Vertices of the hull (for full dimensional polytopes), or the input points.
        '''
        rank = self._frame[0]
        if rank == self.dim and self.dim >= 2:
            return self._points[ConvexHull(self._points).vertices]
        return self._points

    def translate(self, shift):
        return VPolytope(self._points + np.asarray(shift, dtype=float))

    def scale(self, t):
        return VPolytope(float(t) * self._points)

    def to_json(self):
        return {"type": self.kind, "vertices": self._points.tolist()}


class Zonotope(ConvexBody):
    '''
    Zonotope c + sum_i [-v_i, v_i].


    --- PARAMETERS ---
    generators:         nonzero generator vectors -- dim: (g x n). A (0 x n) matrix
                        gives the single point {c}.
    type generators:    numpy array, or list of lists

    center:             centre of the zonotope, the origin if not given -- dim: (n)
    type center:        numpy array
    '''
    kind = "zonotope"

    def __init__(self, generators, center=None):
        G = np.array(generators, dtype=float)
        if G.ndim == 1:
            G = G.reshape(-1, 1)
        if G.ndim != 2 or G.shape[1] == 0:
            raise ValueError("The generators of a zonotope must be given as a (g x n) array.")
        if not np.all(np.isfinite(G)):
            raise ValueError("The generators of a zonotope must be finite.")
        if G.shape[0] > 0 and np.any(LA.norm(G, axis=1) == 0):
            raise ValueError("The generators of a zonotope must be nonzero.")
        if center is None:
            c = np.zeros(G.shape[1])
        else:
            c = np.array(center, dtype=float).ravel()
            if c.shape[0] != G.shape[1]:
                raise ValueError("The centre of the zonotope has the wrong dimension.")
        self._generators = G
        self._center = c
        self._generators.setflags(write=False)
        self._center.setflags(write=False)
        self._dim = G.shape[1]

    @property
    def generators(self):
        return self._generators

    @property
    def center(self):
        return self._center

    def vertices(self):
        '''
        The 2^g sign combinations c + sum_i s_i v_i.
        '''
        g = self._generators.shape[0]
        if g == 0:
            return self._center.reshape(1, -1)
        if g > MAX_GENERATORS:
            raise DimensionCap("The vertex enumeration is available up to {} generators (got {}).".format(MAX_GENERATORS, g))
        signs = np.array(list(itertools.product([-1.0, 1.0], repeat=g)))
        return self._center + signs @ self._generators

    def affine_dimension(self):
        if self._generators.shape[0] == 0:
            return 0
        return int(LA.matrix_rank(self._generators))

    def bounding_box(self):
        half = np.sum(np.abs(self._generators), axis=0)
        return AxisBox(self._center - half, self._center + half)

    def support(self, directions):
        '''
        Support function h(u) = <u, c> + sum_i |<u, v_i>|.
        '''
        U = np.atleast_2d(np.asarray(directions, dtype=float))
        return U @ self._center + np.sum(np.abs(U @ self._generators.T), axis=1)

    @cached_property
    def _facets(self):
        if self.is_full_dimensional():
            return zonotope_facets(self)
        return None

    def _contains(self, P):
        tol = self._tolerance()
        if self._facets is None:
            return VPolytope(self.vertices()).contains(P)
        normals, offsets = self._facets
        return np.all(np.abs((P - self._center) @ normals.T) <= offsets + tol, axis=1)

    def _tolerance(self):
        scale = float(np.sum(np.abs(self._generators))) + float(np.max(np.abs(self._center), initial=0.0))
        return MEMBERSHIP_TOL * max(1.0, scale)

    def translate(self, shift):
        return Zonotope(self._generators, self._center + np.asarray(shift, dtype=float))

    def scale(self, t):
        t = float(t)
        if t == 0:
            return Zonotope(np.zeros((0, self.dim)), np.zeros(self.dim))
        return Zonotope(t * self._generators, t * self._center)

    def to_json(self):
        return {"type": self.kind, "generators": self._generators.tolist(), "center": self._center.tolist()}


class AxisBox(ConvexBody):
    '''
    Axis parallel box prod_j [lows_j, highs_j], with lows_j <= highs_j.
    '''
    kind = "box"

    def __init__(self, lows, highs):
        lo = np.atleast_1d(np.array(lows, dtype=float))
        hi = np.atleast_1d(np.array(highs, dtype=float))
        if lo.ndim != 1 or lo.shape != hi.shape or lo.shape[0] == 0:
            raise ValueError("The box bounds must be two vectors of the same (nonzero) length.")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("The box bounds must be finite.")
        if np.any(lo > hi):
            raise ValueError("Each lower bound of the box must not exceed the corresponding upper bound.")
        self._lows = lo
        self._highs = hi
        self._lows.setflags(write=False)
        self._highs.setflags(write=False)
        self._dim = lo.shape[0]

    @property
    def lows(self):
        return self._lows

    @property
    def highs(self):
        return self._highs

    @property
    def lengths(self):
        return self._highs - self._lows

    def vertices(self):
        corners = np.array(list(itertools.product([0.0, 1.0], repeat=self.dim)))
        return self._lows + corners * self.lengths

    def bounding_box(self):
        return self

    def affine_dimension(self):
        return int(np.sum(self.lengths > 0))

    def _contains(self, P):
        tol = self._tolerance()
        return np.all((P >= self._lows - tol) & (P <= self._highs + tol), axis=1)

    def _tolerance(self):
        return MEMBERSHIP_TOL * max(1.0, float(np.max(np.abs(np.concatenate([self._lows, self._highs])))))

    def to_zonotope(self):
        half = 0.5 * self.lengths
        keep = half > 0
        return Zonotope(np.diag(half)[keep], 0.5 * (self._lows + self._highs))

    def translate(self, shift):
        shift = np.asarray(shift, dtype=float)
        return AxisBox(self._lows + shift, self._highs + shift)

    def scale(self, t):
        t = float(t)
        a, b = t * self._lows, t * self._highs
        return AxisBox(np.minimum(a, b), np.maximum(a, b))

    def to_json(self):
        return {"type": self.kind, "lows": self._lows.tolist(), "highs": self._highs.tolist()}


class ProjectionMatrix:
    '''
    Linear map R^n -> R^m (m <= n), stored as an (m x n) matrix with finite entries.
    '''

    def __init__(self, rows):
        A = np.atleast_2d(np.asarray(rows, dtype=float))
        if A.ndim != 2 or A.shape[0] == 0:
            raise ValueError("A projection matrix needs at least one row.")
        if A.shape[0] > A.shape[1]:
            raise ValueError("A projection matrix maps R^n to R^m with m <= n.")
        if not np.all(np.isfinite(A)):
            raise ValueError("The entries of a projection matrix must be finite.")
        self.rows = A

    @classmethod
    def coordinate(cls, indices, n):
        '''
        Projection onto the coordinates listed in 'indices'.
        '''
        return cls(np.eye(n)[list(indices)])

    @property
    def shape(self):
        return self.rows.shape

    def coordinate_indices(self):
        '''
        Indices of the selected coordinates if every row is a distinct standard basis
        vector, None otherwise.
        '''
        A = self.rows
        if not np.all((A == 0) | (A == 1)) or not np.all(np.sum(A, axis=1) == 1):
            return None
        indices = [int(np.argmax(row)) for row in A]
        if len(set(indices)) != len(indices):
            return None
        return indices


@dataclass(frozen=True)
class McEstimate:
    '''
    Monte Carlo estimate with its binomial standard error and the stream it was drawn from.
    '''
    value: float
    std_err: float
    samples: int
    seed: int
    workers: int

    def to_dict(self):
        return {"value": self.value, "std_err": self.std_err, "samples": self.samples, "seed": self.seed, "workers": self.workers}


# ------------------------------
# Functions
# ------------------------------


def _as_matrix(A, n):
    if isinstance(A, ProjectionMatrix):
        A = A.rows
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[1] != n:
        raise ValueError("The projection matrix has {} columns, while the body lives in R^{}.".format(A.shape[1], n))
    return A


def project(body, A):
    '''
    Image of a body through the linear map A.
    Polytopes map to polytopes, zonotopes to zonotopes (generators which vanish are
    dropped), boxes to boxes when A selects coordinates and to zonotopes otherwise.
    - Input:
    body = convex body in R^n
    A = (m x n) matrix, or ProjectionMatrix
    - Output:
    image = convex body in R^m
    '''
    if isinstance(A, ProjectionMatrix):
        P = A
    else:
        P = ProjectionMatrix(A)
    M = _as_matrix(P, body.dim)

    if isinstance(body, VPolytope):
        return VPolytope(body.points @ M.T)
    if isinstance(body, Zonotope):
        G = body.generators @ M.T
        G = G[LA.norm(G, axis=1) > 0]
        return Zonotope(G, M @ body.center)
    if isinstance(body, AxisBox):
        indices = P.coordinate_indices()
        if indices is not None:
            return AxisBox(body.lows[indices], body.highs[indices])
        return project(body.to_zonotope(), M)

    raise TypeError("Unknown convex body: {}".format(type(body).__name__))


def zonotope_volume(z):
    '''
    Exact volume of a zonotope: 2^n sum over the n-subsets S of generators of |det(v_S)|.
    '''
    G = z.generators
    g, n = G.shape
    if g > MAX_GENERATORS:
        raise DimensionCap("The exact zonotope volume is available up to {} generators (got {}).".format(MAX_GENERATORS, g))
    if g < n or LA.matrix_rank(G) < n:
        return 0.0
    subsets = list(itertools.combinations(range(g), n))
    dets = np.abs(LA.det(G[np.array(subsets)]))

    return (2.0 ** n) * exact_sum(dets)


def polytope_volume(points):
    '''
    Exact volume of the convex hull of a set of points of R^n, n <= 4: the hull facets
    (triangulated by qhull) are joined to the centroid and the simplex volumes are added.
    - Input:
    points = matrix of points -- dim: (k x n)
    - Output:
    volume = n-dimensional volume, 0 if the affine hull is not the whole space
    '''
    P = np.atleast_2d(np.asarray(points, dtype=float))
    n = P.shape[1]
    if n > MAX_VPOLYTOPE_DIM:
        raise DimensionCap("The exact polytope volume is available up to dimension {} (got {}).".format(MAX_VPOLYTOPE_DIM, n))
    rank, _, _ = affine_rank(P)
    if rank < n:
        return 0.0
    if n == 1:
        return float(np.max(P) - np.min(P))
    try:
        hull = ConvexHull(P, qhull_options="Qt")
    except QhullError:
        return 0.0
    apex = np.mean(P[hull.vertices], axis=0)
    simplices = P[hull.simplices] - apex
    dets = np.abs(LA.det(simplices))

    return exact_sum(dets) / math.factorial(n)


def volume(body):
    '''
    Exact n-dimensional volume of a convex body in R^n (0 for bodies with empty interior).
    '''
    if isinstance(body, AxisBox):
        return float(np.prod(body.lengths))
    if isinstance(body, Zonotope):
        return zonotope_volume(body)
    if isinstance(body, VPolytope):
        return polytope_volume(body.points)

    raise TypeError("Unknown convex body: {}".format(type(body).__name__))


def volume_mc(membership, bounding_box, samples, seed, workers=1, batch_size=100000):
    '''
    Hit-or-miss Monte Carlo volume of a body given by a membership oracle.
    The samples are split among the workers; worker w draws from the substream
    (seed, w), so that the estimate depends only on (seed, workers).
    - Input:
    membership = callable, (m x n) points -> boolean vector (m)
    bounding_box = AxisBox containing the body
    samples = total number of samples, at least 1000
    seed = integer seed
    workers = number of worker threads
    - Output:
    estimate = McEstimate, with std_err = vol(box) * sqrt(p (1 - p) / samples)
    '''
    if not isinstance(samples, (int, np.integer)) or samples < 1000:
        raise ValueError("The Monte Carlo volume needs at least 1000 samples (got {}).".format(samples))
    if not isinstance(workers, (int, np.integer)) or workers < 1:
        raise ValueError("The number of workers must be a positive integer (got {}).".format(workers))

    box_volume = volume(bounding_box)
    if box_volume == 0:
        return McEstimate(0.0, 0.0, int(samples), int(seed), int(workers))

    lows, widths = bounding_box.lows, bounding_box.lengths
    counts = [samples // workers + (1 if ii < samples % workers else 0) for ii in range(workers)]

    def count_hits(worker):
        rng = substream(seed, worker)
        remaining = counts[worker]
        hits = 0
        while remaining > 0:
            m = min(batch_size, remaining)
            X = lows + widths * rng.random((m, len(lows)))
            hits += int(np.count_nonzero(membership(X)))
            remaining -= m
        return hits

    if workers == 1:
        hits = count_hits(0)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(count_hits, range(workers)))

    p = hits / samples
    value = box_volume * p
    std_err = box_volume * math.sqrt(p * (1.0 - p) / samples)

    return McEstimate(float(value), float(std_err), int(samples), int(seed), int(workers))


def _generalized_cross(M):
    #vector orthogonal to the (n-1) rows of M, with length equal to their (n-1)-volume
    n = M.shape[1]
    return np.array([(-1.0) ** k * LA.det(np.delete(M, k, axis=1)) for k in range(n)])


def zonotope_facets(z):
    '''
    Facet inequalities |<u, x - c>| <= h(u) of a full dimensional zonotope, where the
    unit normals u are orthogonal to (n-1)-subsets of generators and
    h(u) = sum_i |<u, v_i>|.
    - Input:
    z = full dimensional Zonotope
    - Output:
    normals = unit facet normals, one per antipodal pair -- dim: (F x n)
    offsets = support values h(u) -- dim: (F)
    '''
    G = z.generators
    g, n = G.shape
    if g > MAX_GENERATORS:
        raise DimensionCap("The facet enumeration is available up to {} generators (got {}).".format(MAX_GENERATORS, g))
    if g == 0 or LA.matrix_rank(G) < n:
        raise DegenerateBody("The facets are defined for full dimensional zonotopes only.")
    if n == 1:
        normals = np.ones((1, 1))
    else:
        normals = []
        for subset in itertools.combinations(range(g), n - 1):
            u = _generalized_cross(G[list(subset)])
            size = LA.norm(u)
            if size > 1E-12 * max(1.0, float(np.max(np.abs(G)))) ** (n - 1):
                normals.append(u / size)
        normals = np.array(normals)
    offsets = np.sum(np.abs(normals @ G.T), axis=1)

    return normals, offsets


def polar_membership(z, points):
    '''
    Membership oracle of the polar body Z° = {y : sum_i |<y, v_i>| <= 1} of a centred
    zonotope. A single point gives a boolean, a matrix of points a boolean vector.
    '''
    Y = np.asarray(points, dtype=float)
    gauge = np.sum(np.abs(np.atleast_2d(Y) @ z.generators.T), axis=1)
    inside = gauge <= 1.0
    if Y.ndim == 1:
        return bool(inside[0])
    return inside


def polar_bounding_box(z, inflation=1.02):
    '''
    Box containing the polar body of a full dimensional centred zonotope.
    Z° is the convex hull of the points +-u/h(u) over the facet normals u of Z, so its
    extent along e_k is M_k = max_u |u_k| / h(u); the box [-s M, s M] with s = inflation
    contains Z°.
    '''
    normals, offsets = zonotope_facets(z)
    extent = np.max(np.abs(normals) / offsets[:, None], axis=0)
    return AxisBox(-inflation * extent, inflation * extent)


def polar_body(z):
    '''
    Exact polar body of a full dimensional centred zonotope, as a V-polytope with the
    vertices +-u/h(u).
    '''
    normals, offsets = zonotope_facets(z)
    points = normals / offsets[:, None]
    return VPolytope(np.vstack([points, -points]))


class PolarVolume:
    '''
    Monte Carlo estimate of the volume of the polar body Z° of a centred zonotope.
    The samples are drawn uniformly in a box which contains Z° (see polar_bounding_box).
    After the run, the accepted samples are checked against the outer 1% shell of the
    box: an accepted sample there means that the enclosure failed, and the run is
    rejected.


    --- PARAMETERS ---
    z:          full dimensional zonotope. Only its generators are used (the centre is
                treated as the origin).
    type z :    Zonotope


    --- SETTERS ---
    _samples:            number of Monte Carlo samples (at least 1000)
    type   _samples:     integer

    _seed:               seed of the random stream
    type   _seed:        integer

    _workers:            number of worker threads
    type   _workers:     integer

    _verbose:            print the progress on the standard error
    type   _verbose:     boolean
    '''
    def __init__(self, z, *dictionary):
        self.z = z
        self._samples = 100000
        self._seed = DEFAULT_SEED
        self._workers = 1
        self._verbose = False

        if dictionary:
            settings = dictionary[0]

            try:
                self._samples = settings["samples"]
                if not isinstance(self._samples, int) or self._samples < 1000:
                    raise Exception
            except:
                self._samples = 100000
                fallback_warning("number of samples", 100000)
            try:
                self._seed = settings["seed"]
                if not isinstance(self._seed, int) or self._seed < 0:
                    raise Exception
            except:
                self._seed = DEFAULT_SEED
                fallback_warning("seed", DEFAULT_SEED)
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

    @property
    def samples(self):
        return self._samples

    @samples.setter
    def samples(self, new_value):
        if not isinstance(new_value, int) or new_value < 1000:
            raise ValueError("The Monte Carlo volume needs at least 1000 samples (got {}).".format(new_value))
        self._samples = new_value

    @property
    def seed(self):
        return self._seed

    @seed.setter
    def seed(self, new_value):
        self._seed = int(new_value)

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
        estimate:       Monte Carlo estimate of vol(Z°)
        type estimate:  McEstimate
        '''
        z = Zonotope(self.z.generators)
        if not z.is_full_dimensional():
            raise DegenerateBody("The polar body of a lower dimensional zonotope is unbounded.")

        box = polar_bounding_box(z)
        shell = 0.99 * box.highs
        escaped = []

        def membership(Y):
            inside = polar_membership(z, Y)
            if np.any(inside & np.any(np.abs(Y) > shell, axis=1)):
                escaped.append(True)
            return inside

        progress("Sampling the polar body ({} samples, {} workers)..".format(self._samples, self._workers), self._verbose)
        estimate = volume_mc(membership, box, self._samples, self._seed, self._workers)
        if escaped:
            raise OpenMAGError("Accepted polar samples reached the boundary of the sampling box: the enclosure is not valid.")

        return estimate


def polar_volume(z, samples, seed, workers=1):
    '''
    Monte Carlo volume of the polar body of a centred zonotope (see PolarVolume).
    '''
    if samples < 1000:
        raise ValueError("The Monte Carlo volume needs at least 1000 samples (got {}).".format(samples))
    settings = {"samples": int(samples), "seed": int(seed), "workers": int(workers)}
    return PolarVolume(z, settings).fit()


def grid_sample(body, k_per_side):
    '''
    Points of the uniform grid with k_per_side points per axis, spanning the bounding
    box of the body, which fall inside the body. The points are returned in
    lexicographic order. If no grid point falls in a lower dimensional body, the
    points of the body itself (its vertices) are returned; a full dimensional body
    missed by the grid raises a ValueError.
    - Input:
    body = convex body in R^n
    k_per_side = number of grid points per axis (>= 1)
    - Output:
    points = grid points inside the body -- dim: (k x n)
    '''
    if not isinstance(k_per_side, (int, np.integer)) or k_per_side < 1:
        raise ValueError("The grid needs at least one point per side (got {}).".format(k_per_side))
    box = body.bounding_box()
    axes = [np.linspace(lo, hi, k_per_side) for lo, hi in zip(box.lows, box.highs)]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=1)
    if np.any(box.lengths == 0):
        grid = np.unique(grid, axis=0)
    points = grid[body.contains(grid)]
    if points.shape[0] == 0:
        if body.is_full_dimensional():
            raise ValueError("No point of the {}-per-side grid falls inside the body: use a finer grid.".format(k_per_side))
        points = np.unique(body.vertices(), axis=0)

    return points


def sample_points(body, k, seed):
    '''
    k random points of the body.
    Zonotopes: c + sum_i a_i v_i with coefficients a_i uniform in [-1, 1] (not uniform in
    the body). Other full dimensional bodies: uniform, by rejection from the bounding box.
    Lower dimensional bodies: random convex combinations of the vertices.
    '''
    rng = np.random.default_rng(seed)
    if isinstance(body, Zonotope):
        coefficients = rng.uniform(-1.0, 1.0, size=(k, body.generators.shape[0]))
        return body.center + coefficients @ body.generators
    if not body.is_full_dimensional():
        V = body.vertices()
        weights = rng.dirichlet(np.ones(V.shape[0]), size=k)
        return weights @ V

    box = body.bounding_box()
    accepted = []
    found = 0
    for _ in range(1000):
        X = box.lows + box.lengths * rng.random((max(4 * k, 1000), body.dim))
        X = X[body.contains(X)]
        accepted.append(X)
        found += X.shape[0]
        if found >= k:
            return np.vstack(accepted)[:k]

    raise OpenMAGError("The rejection sampler did not find {} points inside the body.".format(k))


def _polygon_ccw(body):
    #vertices of a planar body in counterclockwise order (one or two points if degenerate)
    V = body.vertices()
    rank, _, _ = affine_rank(V)
    if rank == 0:
        return V[:1]
    if rank == 1:
        t = (V - V[0]) @ (V[np.argmax(LA.norm(V - V[0], axis=1))] - V[0])
        return np.array([V[np.argmin(t)], V[np.argmax(t)]])
    return V[ConvexHull(V).vertices]


def _lowest_index(polygon):
    return int(np.lexsort((polygon[:, 0], polygon[:, 1]))[0])


def minkowski_sum_cube(body, t):
    '''
    Exact Minkowski sum K + t[0,1]^2 of a planar convex body with a square.
    The edge vectors of the two convex polygons are merged by angle, starting from the sum
    of their lowest (then leftmost) vertices.
    - Input:
    body = convex body in R^2
    t = side of the square (>= 0)
    - Output:
    polygon = VPolytope with the vertices of the sum, in counterclockwise order
    '''
    if body.dim != 2:
        raise DimensionCap("The exact Minkowski sum by edge merging is available in R^2 only (got R^{}).".format(body.dim))
    if t < 0:
        raise ValueError("The side of the cube must be nonnegative (got {}).".format(t))
    P = _polygon_ccw(body)
    if t == 0:
        return VPolytope(P)
    Q = float(t) * np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])

    start = P[_lowest_index(P)] + Q[_lowest_index(Q)]
    edges = []
    for polygon in (P, Q):
        k = polygon.shape[0]
        if k > 1:
            edges.extend(polygon[(ii+1) % k] - polygon[ii] for ii in range(k))
    edges = [e for e in edges if LA.norm(e) > 0]
    edges.sort(key=lambda e: math.atan2(e[1], e[0]) % (2.0 * math.pi))

    vertices = [start]
    for e in edges[:-1]:
        vertices.append(vertices[-1] + e)

    return VPolytope(np.array(vertices))


def minkowski_sum_cube_hull(body, t):
    '''
    Exact Minkowski sum K + t[0,1]^n for n <= 4, as the convex hull of the sums of the
    vertices of K with the corners of the cube.
    '''
    if body.dim > MAX_VPOLYTOPE_DIM:
        raise DimensionCap("The Minkowski sum with a cube is available up to dimension {} (got {}).".format(MAX_VPOLYTOPE_DIM, body.dim))
    if t < 0:
        raise ValueError("The side of the cube must be nonnegative (got {}).".format(t))
    V = body.vertices()
    corners = float(t) * np.array(list(itertools.product([0.0, 1.0], repeat=body.dim)))
    sums = (V[:, None, :] + corners[None, :, :]).reshape(-1, body.dim)
    if V.shape[0] * corners.shape[0] > 4 and body.dim >= 2:
        try:
            sums = sums[ConvexHull(sums).vertices]
        except QhullError:
            pass

    return VPolytope(sums)


def lattice_points(body):
    '''
    Number of points of Z^n inside the body (n <= 3), boundary included.
    '''
    if body.dim > 3:
        raise DimensionCap("The lattice point count is available up to dimension 3 (got {}).".format(body.dim))
    box = body.bounding_box()
    tol = body._tolerance()
    ranges = [np.arange(math.ceil(lo - tol), math.floor(hi + tol) + 1) for lo, hi in zip(box.lows, box.highs)]
    if any(len(r) == 0 for r in ranges):
        return 0
    mesh = np.meshgrid(*ranges, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=1).astype(float)

    return int(np.count_nonzero(body.contains(grid)))


def body_from_json(obj):
    '''
    Build a convex body from its JSON description:
    {"type": "vpolytope", "vertices": [[...], ...]}
    {"type": "zonotope", "generators": [[...], ...], "center": [...]}   (centre optional)
    {"type": "box", "lows": [...], "highs": [...]}
    '''
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("A body description must be an object with a 'type' entry.")
    kind = str(obj["type"]).lower()
    try:
        if kind == VPolytope.kind:
            return VPolytope(obj["vertices"])
        if kind == Zonotope.kind:
            generators = obj["generators"]
            if len(generators) == 0:
                n = len(obj["center"])
                generators = np.zeros((0, n))
            return Zonotope(generators, obj.get("center"))
        if kind == AxisBox.kind:
            return AxisBox(obj["lows"], obj["highs"])
    except KeyError as err:
        raise ValueError("The body description misses the entry {}.".format(err))

    raise ValueError("Unknown body type: {}. Available choices are 'vpolytope', 'zonotope' and 'box'.".format(obj["type"]))


def body_to_json(body):
    return body.to_json()
