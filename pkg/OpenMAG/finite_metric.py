'''
MODULE: finite_metric.py

@Details:
    Finite metric spaces, their similarity matrices Z = exp(-d), and the two quantities
    computed from them:
    i) the magnitude 1'Z^(-1)1 of a positive definite space, i.e. the sum of the
       weighting w which solves Zw = 1;
    ii) the maximum diversity 1/min{v'Zv : v >= 0, sum(v) = 1}, computed with a
       projected gradient method on the simplex, refined by an active-set solve and
       certified by the KKT residual.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import warnings
from dataclasses import dataclass

import matplotlib
import matplotlib.pyplot as plt
import numpy as np
from numpy import linalg as LA
from scipy.linalg import LinAlgError, cho_solve, cholesky
from scipy.spatial.distance import cdist

from .utilities import *
from .convex_bodies import grid_sample
from .generating_measures import GeneratingMeasure, NormedSpaceHandle, embed_l1


class FiniteMetricSpace:
    '''
    Finite metric space: point labels (or coordinates) and a symmetric distance matrix.


    --- PARAMETERS ---
    dist:           distance matrix -- dim: (k x k). Symmetric, zero diagonal,
                    nonnegative, triangle inequality up to 1e-12.
    type dist:      numpy array

    points:         coordinates or labels of the points (optional)
    type points:    numpy array or list

    check_triangle: verify the triangle inequality (O(k^3)). Distances computed from
                    a norm satisfy it, and build_space skips the check.
    type check_triangle: boolean
    '''

    def __init__(self, dist, points=None, check_triangle=True):
        D = np.array(dist, dtype=float)
        if D.size == 0:
            D = np.zeros((0, 0))
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError("The distance matrix must be square.")
        k = D.shape[0]
        if k > max_points():
            raise DimensionCap("The space has {} points, above the kernel size cap of {} (see OPENMAG_MAX_POINTS).".format(k, max_points()))
        if not np.all(np.isfinite(D)):
            raise ValueError("The distances must be finite.")
        if np.any(D < 0):
            raise ValueError("The distances must be nonnegative.")
        if np.any(np.diag(D) != 0):
            raise ValueError("The distance matrix must have a zero diagonal.")
        if np.any(np.abs(D - D.T) > TRIANGLE_SLACK):
            raise ValueError("The distance matrix must be symmetric.")
        D = 0.5 * (D + D.T)
        if check_triangle:
            for jj in range(k):
                #d(i,l) <= d(i,j) + d(j,l) for every intermediate point j
                if np.any(D > D[:, jj][:, None] + D[jj, :][None, :] + TRIANGLE_SLACK):
                    raise ValueError("The distance matrix violates the triangle inequality (through point {}).".format(jj))
        if points is not None and len(points) != k:
            raise ValueError("The number of points ({}) differs from the size of the distance matrix ({}).".format(len(points), k))

        self._dist = D
        self._dist.setflags(write=False)
        self.points = points

    @property
    def dist(self):
        return self._dist

    @property
    def size(self):
        return self._dist.shape[0]

    def __len__(self):
        return self.size


class SimilarityMatrix:
    '''
    Similarity matrix Z_ij = exp(-d_ij) of a finite metric space, with its triangular
    factor (if the factorization succeeds) and its smallest eigenvalue (computed on
    request).
    '''

    def __init__(self, space):
        self.Z = np.exp(-space.dist)
        self.chol = None
        self.pivots = None
        self._min_eig = None
        self._factorize()

    def _factorize(self):
        k = self.Z.shape[0]
        if k == 0:
            return
        try:
            L = cholesky(self.Z, lower=True)
        except LinAlgError:
            return
        pivots = np.diag(L) ** 2
        #Z has a unit diagonal, so the largest diagonal entry is 1
        if np.min(pivots) > PIVOT_THRESHOLD * np.max(np.diag(self.Z)):
            self.chol = L
            self.pivots = pivots

    @property
    def is_pd(self):
        return self.Z.shape[0] == 0 or self.chol is not None

    @property
    def min_eig(self):
        k = self.Z.shape[0]
        if k == 0:
            return None
        if self._min_eig is None:
            if k <= EIGEN_SIZE_LIMIT or self.pivots is None:
                self._min_eig = float(LA.eigvalsh(self.Z)[0])
            else:
                self._min_eig = float(np.min(self.pivots))
        return self._min_eig

    def solve(self, b):
        if self.chol is None:
            raise NotPositiveDefinite("The similarity matrix is not positive definite (the triangular factorization failed).")
        return cho_solve((self.chol, True), b)


@dataclass(frozen=True)
class PdReport:
    is_pd: bool
    min_eig: float

    def to_dict(self):
        return {"is_pd": self.is_pd, "min_eig": self.min_eig}


@dataclass(frozen=True)
class DiversityWeights:
    '''
    Minimizer v of v'Zv on the probability simplex.
    '''
    v: np.ndarray
    objective: float
    diversity: float
    kkt_residual: float
    iterations: int
    certified: bool

    def to_dict(self):
        return {"v": self.v, "objective": self.objective, "diversity": self.diversity, "kkt_residual": self.kkt_residual,
                "iterations": self.iterations, "certified": self.certified}


# ------------------------------
# Functions
# ------------------------------


def _norm_order(norm):
    #p of an lp norm given as "l1", "l2", "lp:p" or a number
    if isinstance(norm, (int, float, np.integer, np.floating)) and not isinstance(norm, bool):
        p = float(norm)
    elif isinstance(norm, str):
        key = norm.strip().lower()
        if key == "l1":
            p = 1.0
        elif key == "l2":
            p = 2.0
        elif key.startswith("lp:"):
            try:
                p = float(key[3:])
            except ValueError:
                raise ValueError("Not acceptable norm: {}".format(norm))
        else:
            raise ValueError("Unknown norm '{}'. Available choices are 'l1', 'l2', 'lp:p' (1 <= p <= 2) or a generating measure.".format(norm))
    else:
        raise ValueError("Unknown norm: {}".format(norm))
    if not 1.0 <= p <= 2.0:
        raise ValueError("The lp norms are hypermetric for 1 <= p <= 2 only (got p = {}).".format(p))
    return p


def pairwise_distances(A, B, norm):
    '''
    Matrix of the distances ||a_i - b_j|| under an lp norm or a generating measure norm.
    - Input:
    A = matrix of points -- dim: (k x n)
    B = matrix of points -- dim: (l x n)
    norm = "l1", "l2", "lp:p", p, GeneratingMeasure or NormedSpaceHandle
    - Output:
    D = distance matrix -- dim: (k x l)
    '''
    if isinstance(norm, NormedSpaceHandle):
        norm = norm.measure
    if isinstance(norm, GeneratingMeasure):
        if A.shape[1] != norm.dim:
            raise ValueError("Points of dimension {} cannot be measured with a norm of R^{}.".format(A.shape[1], norm.dim))
        return cdist(embed_l1(norm, A), embed_l1(norm, B), "cityblock")
    p = _norm_order(norm)
    if p == 1.0:
        return cdist(A, B, "cityblock")
    if p == 2.0:
        return cdist(A, B, "euclidean")
    return cdist(A, B, "minkowski", p=p)


def build_space(points, norm):
    '''
    Finite metric space made of points of R^n with the distances of a hypermetric norm.
    - Input:
    points = list of n-vectors (may be empty)
    norm = "l1", "l2", "lp:p" (1 <= p <= 2), p, GeneratingMeasure or NormedSpaceHandle
    - Output:
    space = FiniteMetricSpace with dist_ij = ||x_i - x_j||
    '''
    if len(points) == 0:
        if not isinstance(norm, (GeneratingMeasure, NormedSpaceHandle)):
            _norm_order(norm)
        return FiniteMetricSpace(np.zeros((0, 0)), points=np.zeros((0, 0)))
    try:
        P = np.array(points, dtype=float)
    except ValueError:
        raise ValueError("All the points must have the same dimension.")
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.ndim != 2:
        raise ValueError("All the points must have the same dimension.")
    D = pairwise_distances(P, P, norm)
    #exact symmetry (cdist evaluates both triangles)
    D = np.triu(D, 1)
    D = D + D.T

    return FiniteMetricSpace(D, points=P, check_triangle=False)


def scale_space(space, t):
    '''
    The space tX: every distance multiplied by t > 0.
    '''
    if not t > 0:
        raise ValueError("The scale factor must be positive (got {}).".format(t))
    points = space.points
    if isinstance(points, np.ndarray) and np.issubdtype(points.dtype, np.number):
        points = t * points

    return FiniteMetricSpace(space.dist * t, points=points, check_triangle=False)


def check_positive_definite(space):
    '''
    --- RETURNS ---
    report:         is_pd (complete triangular factorization with pivots above
                    1e-12 x the largest diagonal entry) and the smallest eigenvalue of Z
                    (symmetric eigensolver for k <= 512, smallest pivot otherwise)
    type report:    PdReport
    '''
    S = SimilarityMatrix(space)
    return PdReport(S.is_pd, S.min_eig)


def weighting(space):
    '''
    Weighting of a positive definite space: the solution w of Zw = 1.
    '''
    if space.size == 0:
        return np.zeros(0)
    S = SimilarityMatrix(space)
    return S.solve(np.ones(space.size))


def magnitude(space):
    '''
    Magnitude of a positive definite finite space, 1'Z^(-1)1 (0 for the empty space).
    Raises NotPositiveDefinite if Z cannot be factorized.
    '''
    return exact_sum(weighting(space))


def magnitude_function(space, ts):
    '''
    Magnitude of tX for each scale t of the list ts.
    '''
    return np.array([magnitude(scale_space(space, t)) for t in ts])


def plot_magnitude_function(ts, values, save_path=None, show=True):
    '''
    Plot of the magnitude function t -> |tX|.
    '''
    matplotlib.rcParams.update({'font.size' : 12})

    fig = plt.figure()
    axes = fig.add_axes([0.15,0.15,0.7,0.7], frameon=True)
    axes.plot(ts, values, color='b', marker='s', linestyle='-', linewidth=2, markersize=4, markerfacecolor='b')
    axes.set_xlabel('scale t [-]')
    axes.set_ylabel('magnitude [-]')
    axes.set_xscale('log')
    axes.grid(True)

    if save_path is not None:
        plt.savefig(save_path)
    if show:
        plt.show()
    else:
        plt.close(fig)

    return fig


def kkt_residual(v, gradient):
    '''
    Residual of the optimality conditions of min v'Zv on the simplex:
    max over the support of (Zv)_i minus min over all coordinates of (Zv)_j.
    '''
    support = v > 0
    return float(np.max(gradient[support]) - np.min(gradient))


class MaxDiversity:
    '''
    Maximum diversity of a finite metric space: minimize v'Zv over the probability simplex.
    The minimizer is found with projected gradient steps (step 1/(2 lambda_max(Z))); every
    few iterations the support of the iterate is "polished" by solving Z_SS u = 1 on the
    support S and normalizing u. The result is certified when the KKT residual
    max_{v_i>0} (Zv)_i - min_j (Zv)_j falls below the tolerance.


    --- PARAMETERS ---
    space:          finite metric space (nonempty)
    type space:     FiniteMetricSpace


    --- SETTERS ---
    _tolerance:          tolerance on the KKT residual
    type   _tolerance:   float

    _max_iter:           maximum number of projected gradient steps
    type   _max_iter:    integer

    _polish_every:       number of steps between two active-set solves
    type   _polish_every: integer

    _verbose:            print the progress on the standard error
    type   _verbose:     boolean
    '''
    def __init__(self, space, *dictionary):
        if space.size == 0:
            raise ValueError("The maximum diversity is not defined for the empty space.")
        self.space = space
        self._tolerance = 1E-10
        self._max_iter = 10000
        self._polish_every = 25
        self._verbose = False

        if dictionary:
            settings = dictionary[0]

            try:
                self._tolerance = settings["tolerance"]
                if not isinstance(self._tolerance, float) or self._tolerance <= 0:
                    raise Exception
            except:
                self._tolerance = 1E-10
                fallback_warning("KKT tolerance", 1E-10)
            try:
                self._max_iter = settings["max_iter"]
                if not isinstance(self._max_iter, int) or self._max_iter < 1:
                    raise Exception
            except:
                self._max_iter = 10000
                fallback_warning("maximum number of iterations", 10000)
            try:
                self._polish_every = settings["polish_every"]
                if not isinstance(self._polish_every, int) or self._polish_every < 1:
                    raise Exception
            except:
                self._polish_every = 25
            try:
                self._verbose = settings["verbose"]
                if not isinstance(self._verbose, bool):
                    raise Exception
            except:
                self._verbose = False

    @property
    def tolerance(self):
        return self._tolerance

    @tolerance.setter
    def tolerance(self, new_value):
        if not new_value > 0:
            raise ValueError("The KKT tolerance must be positive (got {}).".format(new_value))
        self._tolerance = float(new_value)

    @property
    def max_iter(self):
        return self._max_iter

    @max_iter.setter
    def max_iter(self, new_value):
        if not isinstance(new_value, int) or new_value < 1:
            raise ValueError("The maximum number of iterations must be a positive integer (got {}).".format(new_value))
        self._max_iter = new_value

    @staticmethod
    def polish(Z, v):
        '''
        Active-set step: on the support S of v, solve Z_SS u = 1 and return u/sum(u).
        The coordinates where u is not positive leave S and the solve is repeated;
        None if the solve fails or S becomes empty.
        '''
        support = np.flatnonzero(v > 0)
        while len(support) > 0:
            try:
                u = LA.solve(Z[np.ix_(support, support)], np.ones(len(support)))
            except LA.LinAlgError:
                return None
            if np.all(u > 0):
                polished = np.zeros_like(v)
                polished[support] = u / np.sum(u)
                return polished
            support = support[u > 0]

        return None

    def _result(self, v, gradient, iterations, certified):
        objective = float(v @ gradient)
        return DiversityWeights(v, objective, 1.0 / objective, kkt_residual(v, gradient), iterations, certified)

    def fit(self):
        '''
        --- RETURNS ---
        weights:        minimizing weights, objective, diversity 1/objective, KKT residual
        type weights:   DiversityWeights
        '''
        Z = np.exp(-self.space.dist)
        k = Z.shape[0]
        progress("Computing the maximum diversity ({} points)..".format(k), self._verbose)

        if k <= EIGEN_SIZE_LIMIT:
            lipschitz = 2.0 * LA.eigvalsh(Z)[-1]
        else:
            #Gershgorin bound (positive entries)
            lipschitz = 2.0 * np.max(np.sum(Z, axis=1))
        step = 1.0 / lipschitz

        v = np.full(k, 1.0 / k)
        for ii in range(self._max_iter):
            gradient = Z @ v
            if kkt_residual(v, gradient) <= self._tolerance:
                return self._result(v, gradient, ii, True)

            if (ii + 1) % self._polish_every == 0:
                polished = self.polish(Z, v)
                if polished is not None:
                    polished_gradient = Z @ polished
                    if kkt_residual(polished, polished_gradient) <= self._tolerance:
                        return self._result(polished, polished_gradient, ii, True)
                    if polished @ polished_gradient <= v @ gradient:
                        v = polished
                        gradient = polished_gradient

            v = project_simplex(v - step * 2.0 * gradient)

        gradient = Z @ v
        residual = kkt_residual(v, gradient)
        if residual <= self._tolerance:
            return self._result(v, gradient, self._max_iter, True)
        warnings.warn("The maximum diversity solver reached {} iterations with KKT residual {:.3e} (tolerance {:.1e}): the result is not certified.".format(self._max_iter, residual, self._tolerance), IterationLimit)

        return self._result(v, gradient, self._max_iter, False)


def max_diversity(space, tol=1E-10, max_iter=10000):
    '''
    Weights attaining the maximum diversity of a nonempty finite space (see MaxDiversity).
    '''
    if not tol > 0:
        raise ValueError("The tolerance must be positive (got {}).".format(tol))
    settings = {"tolerance": float(tol), "max_iter": int(max_iter)}
    return MaxDiversity(space, settings).fit()
