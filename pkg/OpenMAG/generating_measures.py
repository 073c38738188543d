'''
MODULE: generating_measures.py

@Details:
    Finite even measures on the unit sphere, and the norms they generate:
        ||x|| = sum_i w_i |<x, theta_i>|.
    Every such norm embeds R^n isometrically into l1^N (x -> (w_i <x, theta_i>)_i), and
    its unit ball is the polar of the zonotope generated by the vectors w_i theta_i.
    The measure of the l1 norm sits on the coordinate vectors with unit weights, while the
    Euclidean norm is approximated by equally weighted directions spread on a half sphere.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import json
import os

import numpy as np
from numpy import linalg as LA

from .utilities import *


#number of random unit vectors used to measure the discretization error of a measure
ERROR_PROBES = 1000
ERROR_SEED = 0


class GeneratingMeasure:
    '''
    Finite measure sum_i w_i delta_{theta_i} with unit directions and positive weights.
    The antipodal atoms are implicit: the norm only sees |<x, theta_i>|.


    --- PARAMETERS ---
    directions:         unit vectors -- dim: (N x n)
    type directions:    numpy array

    weights:            positive weights -- dim: (N)
    type weights:       numpy array

    discretization_error:   largest deviation from the norm it approximates, if any
    type discretization_error:  float or None

    label:              short description of the measure (used in the reports)
    type label:         string
    '''

    def __init__(self, directions, weights, discretization_error=None, label="custom"):
        D = np.array(directions, dtype=float)
        if D.ndim == 1:
            D = D.reshape(1, -1)
        w = np.array(weights, dtype=float).ravel()
        if D.ndim != 2 or D.shape[0] == 0 or D.shape[1] == 0:
            raise ValueError("A generating measure needs at least one direction.")
        if w.shape[0] != D.shape[0]:
            raise ValueError("The number of weights ({}) differs from the number of directions ({}).".format(w.shape[0], D.shape[0]))
        if not (np.all(np.isfinite(D)) and np.all(np.isfinite(w))):
            raise ValueError("The directions and the weights of a measure must be finite.")
        if np.any(np.abs(LA.norm(D, axis=1) - 1.0) > 1E-12):
            raise ValueError("The directions of a generating measure must be unit vectors.")
        if np.any(w <= 0):
            raise ValueError("The weights of a generating measure must be positive.")
        self._directions = D
        self._weights = w
        self._directions.setflags(write=False)
        self._weights.setflags(write=False)
        self.discretization_error = discretization_error
        self.label = label

    @classmethod
    def from_vectors(cls, vectors, weights=None, label="custom"):
        '''
        Measure with the directions v_i/|v_i| and the weights w_i |v_i| (w_i = 1 if the
        weights are not given). It generates the norm sum_i w_i |<x, v_i>|.
        '''
        V = np.atleast_2d(np.asarray(vectors, dtype=float))
        lengths = LA.norm(V, axis=1)
        if np.any(lengths == 0):
            raise ValueError("The vectors of a generating measure must be nonzero.")
        if weights is None:
            weights = np.ones(V.shape[0])

        return cls(V / lengths[:, None], np.asarray(weights, dtype=float) * lengths, label=label)

    @property
    def directions(self):
        return self._directions

    @property
    def weights(self):
        return self._weights

    @property
    def dim(self):
        return self._directions.shape[1]

    @property
    def size(self):
        return self._directions.shape[0]

    def spans(self):
        return int(LA.matrix_rank(self._directions)) == self.dim

    def embedding(self):
        '''
        Matrix of the isometric embedding into l1^N -- dim: (n x N).
        '''
        return self._directions.T * self._weights

    def norm(self, x):
        return norm(self, x)

    def to_json(self):
        return {"atoms": [{"dir": d.tolist(), "w": float(w)} for d, w in zip(self._directions, self._weights)]}

    @classmethod
    def from_json(cls, obj):
        '''
        Measure from {"atoms": [{"dir": [...], "w": r}, ...]}. The directions are
        normalized, and their lengths folded into the weights.
        '''
        try:
            atoms = obj["atoms"]
            vectors = [atom["dir"] for atom in atoms]
            weights = [atom["w"] for atom in atoms]
        except (KeyError, TypeError):
            raise ValueError("A measure description must be an object {\"atoms\": [{\"dir\": [...], \"w\": r}, ...]}.")
        if len(vectors) == 0:
            raise ValueError("A generating measure needs at least one atom.")

        return cls.from_vectors(vectors, weights, label="file")


class NormedSpaceHandle:
    '''
    (R^n, ||.||_mu) for a generating measure mu whose directions span R^n.
    '''

    def __init__(self, measure):
        if not measure.spans():
            raise ValueError("The directions of the measure do not span R^{}: it generates a seminorm, not a norm.".format(measure.dim))
        self.measure = measure
        self.n = measure.dim

    def norm(self, x):
        return norm(self.measure, x)

    def distance(self, x, y):
        return norm(self.measure, np.asarray(x, dtype=float) - np.asarray(y, dtype=float))


# ------------------------------
# Functions
# ------------------------------


def norm(measure, x):
    '''
    Norm generated by the measure: ||x|| = sum_i w_i |<x, theta_i>|.
    - Input:
    measure = GeneratingMeasure in R^n
    x = a vector (n), or a matrix of vectors (observations x n)
    - Output:
    value = the norm, a float or a vector of floats
    '''
    X = np.asarray(x, dtype=float)
    values = np.abs(np.atleast_2d(X) @ measure.directions.T) @ measure.weights
    if X.ndim == 1:
        return float(values[0])
    return values


def embed_l1(measure, points):
    '''
    Isometric embedding of (R^n, ||.||_mu) into l1^N:
    x -> (w_i <x, theta_i>)_i.
    - Input:
    measure = GeneratingMeasure in R^n
    points = matrix of points -- dim: (k x n)
    - Output:
    embedded = matrix of points of l1^N -- dim: (k x N)
    '''
    P = np.atleast_2d(np.asarray(points, dtype=float))
    return P @ measure.embedding()


def l1_measure(n):
    '''
    Measure of the l1 norm of R^n: the coordinate vectors with unit weights.
    '''
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("The dimension must be a positive integer (got {}).".format(n))
    return GeneratingMeasure(np.eye(n), np.ones(n), discretization_error=0.0, label="l1")


def _half_sphere_directions(n, N):
    if n == 2:
        angles = np.pi * np.arange(N) / N
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    #spiral (Fibonacci) points on the upper half sphere: equal area bands in z
    golden = np.pi * (3.0 - np.sqrt(5.0))
    z = (np.arange(N) + 0.5) / N
    r = np.sqrt(1.0 - z ** 2)
    phi = golden * np.arange(N)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def norm_error(measure, reference, probes=ERROR_PROBES, seed=ERROR_SEED):
    '''
    Largest deviation |mu-norm(x) - reference(x)| over random unit vectors x.
    - Input:
    measure = GeneratingMeasure
    reference = callable, (k x n) matrix -> vector of norms (k)
    - Output:
    error = largest absolute deviation
    '''
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((probes, measure.dim))
    X /= LA.norm(X, axis=1)[:, None]

    return float(np.max(np.abs(norm(measure, X) - reference(X))))


def euclidean_measure(n, N):
    '''
    Discretization of the (rotation invariant) measure of the Euclidean norm with N
    equally weighted directions: uniformly spaced angles in R^2, spiral points on the
    half sphere in R^3. The weights are calibrated so that ||e_1|| = 1, and the largest
    deviation from the Euclidean norm over random unit vectors is stored in
    discretization_error.
    '''
    if n not in (2, 3):
        raise ValueError("The Euclidean measure is available for n = 2 and n = 3 (got {}).".format(n))
    if not isinstance(N, (int, np.integer)) or N < 2 * n:
        raise ValueError("At least {} directions are needed in R^{} (got {}).".format(2 * n, n, N))
    D = _half_sphere_directions(n, N)
    w = 1.0 / np.sum(np.abs(D[:, 0]))
    measure = GeneratingMeasure(D / LA.norm(D, axis=1)[:, None], np.full(N, w), label="l2:{}".format(N))
    measure.discretization_error = norm_error(measure, lambda X: LA.norm(X, axis=1))

    return measure


def random_measure(n, N, seed):
    '''
    Random measure with N Gaussian directions (normalized) and weights uniform in
    (0.1, 1]. The directions are drawn again until they span R^n.
    '''
    if not isinstance(N, (int, np.integer)) or N < n:
        raise ValueError("At least {} directions are needed in R^{} (got {}).".format(n, n, N))
    rng = np.random.default_rng(seed)
    for ii in range(100):
        D = rng.standard_normal((N, n))
        D /= LA.norm(D, axis=1)[:, None]
        w = 1.0 - 0.9 * rng.random(N)
        if LA.matrix_rank(D) == n:
            return GeneratingMeasure(D, w, label="random:{}:{}".format(N, seed))

    raise OpenMAGError("No spanning set of random directions was found.")


def zonotope_measure(z):
    '''
    Measure whose norm is the support function of the centred zonotope z,
    h_Z(x) = sum_i |<x, v_i>|; its unit ball is the polar body of z.
    '''
    return GeneratingMeasure.from_vectors(z.generators, label="zonotope")


def is_l1(measure):
    '''
    True if the measure is exactly the measure of the l1 norm (coordinate vectors, unit
    weights), up to the order of the atoms.
    '''
    D = measure.directions
    if D.shape[0] != D.shape[1]:
        return False
    if not np.all(np.sort(np.abs(D), axis=1)[:, :-1] == 0):
        return False
    axes = np.argmax(np.abs(D), axis=1)
    return len(set(axes.tolist())) == D.shape[1] and bool(np.all(measure.weights == 1.0))


def measure_from_spec(spec, n, seed=DEFAULT_SEED):
    '''
    Build a measure from a short textual description:
    "l1", "l2:N" (Euclidean, N directions), "random:N" or "random:N:SEED", or the path
    of a JSON measure file.
    '''
    if not isinstance(spec, str):
        raise ValueError("A measure description must be a string.")
    if os.path.isfile(spec):
        with open(spec, "r") as f:
            measure = GeneratingMeasure.from_json(json.load(f))
        if measure.dim != n:
            raise ValueError("The measure in {} lives in R^{}, while R^{} is required.".format(spec, measure.dim, n))
        return measure
    parts = spec.strip().lower().split(":")
    try:
        if parts[0] == "l1" and len(parts) == 1:
            return l1_measure(n)
        if parts[0] == "l2" and len(parts) == 2:
            return euclidean_measure(n, int(parts[1]))
        if parts[0] == "random" and len(parts) in (2, 3):
            measure_seed = int(parts[2]) if len(parts) == 3 else seed
            return random_measure(n, int(parts[1]), measure_seed)
    except ValueError as err:
        raise ValueError("Not acceptable measure '{}': {}".format(spec, err))

    raise ValueError("Unknown measure '{}'. Available choices are 'l1', 'l2:N', 'random:N' and 'random:N:SEED'.".format(spec))
