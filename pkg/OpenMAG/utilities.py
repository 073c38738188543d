'''
MODULE: utilities.py

@Details:
    This module contains a set of functions which are shared by all the OpenMAG modules:
    exceptions, numerical constants, log-Gamma based normalization constants, exact
    summation, simplex projection, random substreams and the helpers used to emit
    deterministic JSON/CSV reports.
    A detailed description is available under the definition of each function.

@Additional notes:
    This code is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
'''

import hashlib
import json
import math
import os
import sys
import warnings

import numpy as np
from scipy.special import gammaln

__all__ = ["OpenMAGError", "DomainError", "NotPositiveDefinite", "DimensionCap", "DegenerateBody", "TupleBudgetExceeded", "IterationLimit", "ConfigError",
           "TRIANGLE_SLACK", "PIVOT_THRESHOLD", "EIGEN_SIZE_LIMIT", "MAX_GENERATORS", "MAX_VPOLYTOPE_DIM", "TUPLE_BUDGET", "DEFAULT_SEED",
           "affine_rank", "canonical_json", "digest", "elementary_symmetric", "exact_sum", "fallback_warning", "log_factorial", "max_points", "omega", "progress",
           "project_simplex", "substream", "to_builtin", "write_csv"]


# ------------------------------
# Exceptions
# ------------------------------

class OpenMAGError(Exception):
    '''
    Base class for all the errors raised by OpenMAG.
    '''


class DomainError(OpenMAGError, ValueError):
    '''
    The input is well formed, but it is not a valid instance for the requested computation.
    The command line front end maps these errors to the exit code 2.
    '''


class NotPositiveDefinite(DomainError):
    '''
    The similarity matrix exp(-d) of a finite space does not admit a complete triangular
    factorization with positive pivots.
    '''


class DimensionCap(DomainError):
    '''
    The dimension (or the number of generators, or the number of points) exceeds the cap
    of the exact engine for the requested body.
    '''


class DegenerateBody(DomainError):
    '''
    The body has empty interior where a full dimensional body is required.
    '''


class TupleBudgetExceeded(DomainError):
    '''
    The number of atom subsets to be evaluated exceeds the tuple budget.
    '''


class IterationLimit(UserWarning):
    '''
    An iterative solver stopped at the iteration limit without certifying its result.
    '''


class ConfigError(OpenMAGError, ValueError):
    '''
    Invalid command line or configuration input.
    '''


# ------------------------------
# Constants
# ------------------------------

#absolute slack for the triangle inequality check of user supplied distance matrices
TRIANGLE_SLACK = 1E-12
#relative pivot threshold (times the largest diagonal entry) for positive definiteness
PIVOT_THRESHOLD = 1E-12
#above this size the smallest eigenvalue is replaced by the smallest pivot
EIGEN_SIZE_LIMIT = 512
#zonotope volumes by determinant enumeration: C(12,6) = 924 determinants at most
MAX_GENERATORS = 12
MAX_VPOLYTOPE_DIM = 4
TUPLE_BUDGET = 2000000
DEFAULT_SEED = 20240101


# ------------------------------
# Functions (alphabetical order)
# ------------------------------


def affine_rank(points, tol=1E-10):
    '''
    Compute the dimension of the affine hull of a set of points, together with an
    orthonormal basis of the parallel linear subspace.
    - Input:
    points = matrix of points -- dim: (observations x variables)
    tol = relative tolerance on the singular values, scaled by the point set size
    - Output:
    rank = affine dimension -- dim: (scalar)
    origin = centroid of the points -- dim: (variables)
    basis = orthonormal basis of the affine hull -- dim: (rank x variables)
    '''
    points = np.atleast_2d(np.asarray(points, dtype=float))
    origin = np.mean(points, axis=0)
    if points.shape[0] < 2:
        return 0, origin, np.zeros((0, points.shape[1]))

    #singular values of the centered cloud measure its extent along each direction
    _, s, Vt = np.linalg.svd(points - origin, full_matrices=False)
    scale = max(1.0, np.max(np.abs(points)))
    rank = int(np.sum(s > tol * scale))

    return rank, origin, Vt[:rank, :]


def canonical_json(obj):
    '''
    Serialize a report with sorted keys and plain Python types, so that identical inputs
    give byte-identical outputs.
    '''
    return json.dumps(to_builtin(obj), sort_keys=True, indent=2)


def digest(obj):
    '''
    Hash of the canonical serialization of an object (sha256, hexadecimal).
    '''
    h = hashlib.sha256()
    h.update(json.dumps(to_builtin(obj), sort_keys=True, separators=(",", ":")).encode("utf-8"))
    return h.hexdigest()


def elementary_symmetric(values):
    '''
    Compute the elementary symmetric polynomials e_0, ..., e_n of the given values,
    i.e. the coefficients of prod_i (1 + values_i x).
    - Input:
    values = vector of reals -- dim: (n)
    - Output:
    e = vector with e[m] = e_m(values) -- dim: (n+1)
    '''
    values = np.asarray(values, dtype=float).ravel()
    e = np.zeros(len(values) + 1, dtype=float)
    e[0] = 1.0
    for ii, value in enumerate(values):
        #the right hand side uses the coefficients of the previous step
        e[1:ii+2] = e[1:ii+2] + value * e[0:ii+1]

    return e


def exact_sum(values):
    '''
    Correctly rounded sum of a sequence of floats. The result does not depend on the
    order of the terms, which keeps parallel reductions bit-stable.
    '''
    return math.fsum(float(v) for v in values)


def fallback_warning(what, default):
    '''
    Warn that a settings entry was missing or not acceptable, and that its default
    value is used instead. The notes go to the standard error, so that the report on
    the standard output is left untouched.
    '''
    warnings.warn("An exception occured with regard to the input value for the {}. It could be not acceptable, or not given to the dictionary.".format(what))
    print("\tIt will be automatically set equal to: {}.".format(default), file=sys.stderr)
    print("\tYou can ignore this warning if the {} has been assigned later via setter.".format(what), file=sys.stderr)
    print("\tOtherwise, please check the conditions which must be satisfied by the input in the detailed documentation.", file=sys.stderr)


def log_factorial(m):
    return float(gammaln(m + 1.0))


def max_points():
    '''
    Cap on the number of points of a finite metric space (dense kernel matrices).
    It can be overridden with the OPENMAG_MAX_POINTS environment variable.
    '''
    try:
        return int(os.environ.get("OPENMAG_MAX_POINTS", 8192))
    except ValueError:
        return 8192


def omega(m):
    '''
    Volume of the m-dimensional Euclidean unit ball, pi^(m/2) / Gamma(1 + m/2),
    evaluated in log space.
    '''
    return float(np.exp(0.5 * m * np.log(np.pi) - gammaln(1.0 + 0.5 * m)))


def progress(message, verbose):
    '''
    Print a progress message on the standard error, if the verbose option is active.
    '''
    if verbose:
        print(message, file=sys.stderr)


def project_simplex(c):
    '''
    Euclidean projection onto the probability simplex:
    return the solution to: min ||x - c||_2^2 s.t. dot(1, x) = 1 and x >= 0
    - Input:
    c = vector to be projected -- dim: (n)
    - Output:
    x = projected vector -- dim: (n)
    '''
    c = np.asarray(c, dtype=float)
    n = len(c)
    a = -np.sort(-c)
    lambdas = (np.cumsum(a) - 1) / np.arange(1, n+1)
    for k in range(n-1, -1, -1):
        if a[k] > lambdas[k]:
            return np.maximum(c - lambdas[k], 0)

    return np.full(n, 1.0 / n)


def substream(seed, index):
    '''
    Independent random generator for the worker 'index' of a run seeded with 'seed'.
    '''
    return np.random.default_rng([int(seed), int(index)])


def to_builtin(obj):
    '''
    Convert numpy containers and scalars (recursively) to plain Python types.
    Non finite floats are written as strings, since JSON has no literal for them.
    '''
    if isinstance(obj, dict):
        return {str(key): to_builtin(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return [to_builtin(value) for value in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isfinite(value):
            return value
        return str(value)
    if hasattr(obj, "to_dict"):
        return to_builtin(obj.to_dict())

    return obj


def write_csv(frame, header_kv, stream):
    '''
    Write a data table (pandas DataFrame) preceded by a provenance header made
    of "# key=value" lines.
    '''
    for key in sorted(header_kv):
        stream.write("# {}={}\n".format(key, header_kv[key]))
    frame.to_csv(stream, index=False, float_format="%.17g")
