"""
Symmetric tensors over R^n stored as homogeneous polynomials.

A rank-p symmetric tensor T is identified with the polynomial x -> T(x, ..., x).
The coefficient of the monomial x^a is the multilinear component T_{i_1...i_p}
times the number of index tuples with exponent pattern a, so products of tensors
are plain polynomial products and identities can be compared coefficient-wise.
"""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

ORTHONORMAL_TOL = 1e-12


def comparison_tolerances(atol=None, rtol=None):
    """(atol, rtol) with unset values taken from TENSORVAL_ATOL and TENSORVAL_RTOL."""
    if atol is None:
        atol = getattr(settings, 'TENSORVAL_ATOL', 1e-10)
    if rtol is None:
        rtol = getattr(settings, 'TENSORVAL_RTOL', 1e-10)
    return atol, rtol


def multi_indices(dim, degree):
    """All exponent tuples of length ``dim`` summing to ``degree``, in lexicographic order."""
    if degree < 0:
        return []
    if dim == 1:
        return [(degree,)]
    result = []
    for first in range(degree + 1):
        for rest in multi_indices(dim - 1, degree - first):
            result.append((first,) + rest)
    return result


def multinomial(exponents):
    """Number of index tuples (i_1, ..., i_p) with the given exponent pattern."""
    value = math.factorial(sum(exponents))
    for a in exponents:
        value //= math.factorial(a)
    return value


def _add_exponents(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True, eq=False)
class SymTensor:
    """Symmetric tensor of rank ``rank`` over R^``dim``; ``coeffs`` maps exponent tuples to floats."""
    dim: int
    rank: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"Tensor dimension must be positive, got {self.dim}.")
        if self.rank < 0:
            raise ValueError(f"Tensor rank must be nonnegative, got {self.rank}.")
        clean = {}
        for exponents, value in self.coeffs.items():
            exponents = tuple(int(a) for a in exponents)
            if len(exponents) != self.dim or sum(exponents) != self.rank or min(exponents) < 0:
                raise ValueError(
                    f"Exponent {exponents} does not fit a rank-{self.rank} tensor over R^{self.dim}."
                )
            if value != 0:
                clean[exponents] = float(value)
        object.__setattr__(self, 'coeffs', clean)

    # Constructors

    @classmethod
    def zeros(cls, dim, rank):
        return cls(dim, rank, {})

    @classmethod
    def scalar(cls, dim, value):
        """Rank-0 tensor; ``scalar(dim, 1.0)`` is the empty product."""
        return cls(dim, 0, {(0,) * dim: value})

    @classmethod
    def metric(cls, dim):
        """The metric tensor Q with polynomial x_1^2 + ... + x_n^2."""
        coeffs = {}
        for i in range(dim):
            exponents = [0] * dim
            exponents[i] = 2
            coeffs[tuple(exponents)] = 1.0
        return cls(dim, 2, coeffs)

    @classmethod
    def from_array(cls, dim, rank, values):
        """Inverse of :meth:`to_array`."""
        return cls(dim, rank, dict(zip(multi_indices(dim, rank), (float(v) for v in values))))

    @classmethod
    def from_list(cls, dim, rank, items):
        """Inverse of :meth:`to_list`."""
        return cls(dim, rank, {tuple(exponents): value for exponents, value in items})

    # Accessors

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def value(self):
        """The scalar carried by a rank-0 tensor."""
        if self.rank != 0:
            raise ValueError(f"Only rank-0 tensors have a scalar value, this one has rank {self.rank}.")
        return self.coeffs.get((0,) * self.dim, 0.0)

    def coefficient(self, exponents):
        return self.coeffs.get(tuple(exponents), 0.0)

    def component(self, *indices):
        """Multilinear component T_{i_1 ... i_p} for 0-based slot indices."""
        if len(indices) != self.rank:
            raise ValueError(f"A rank-{self.rank} tensor needs {self.rank} indices, got {len(indices)}.")
        exponents = [0] * self.dim
        for i in indices:
            exponents[i] += 1
        return self.coefficient(exponents) / multinomial(exponents)

    def norm_inf(self):
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def to_array(self):
        """Coefficients as a vector ordered by :func:`multi_indices`."""
        return np.array([self.coefficient(a) for a in multi_indices(self.dim, self.rank)], dtype=float)

    def to_list(self):
        """Report form: ``[[exponents, coefficient], ...]`` sorted lexicographically."""
        return [[list(exponents), self.coeffs[exponents]] for exponents in sorted(self.coeffs)]

    # Evaluation

    def evaluate(self, x):
        """Polynomial value T(x, ..., x)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"Expected a point of R^{self.dim}, got shape {x.shape}.")
        total = 0.0
        for exponents, value in self.coeffs.items():
            total += value * float(np.prod(x ** np.array(exponents)))
        return total

    def apply(self, *vectors):
        """Value of the symmetric multilinear form, recovered from the polynomial by polarization."""
        return apply(self, *vectors)

    def allclose(self, other, atol=None, rtol=None):
        """Componentwise |a - b| <= atol + rtol * (1 + ||other||_inf); tolerances default to the settings."""
        _check_compatible(self, other)
        atol, rtol = comparison_tolerances(atol, rtol)
        bound = atol + rtol * (1.0 + other.norm_inf())
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= bound for k in keys)

    # Arithmetic

    def scale(self, factor):
        factor = float(factor)
        return SymTensor(self.dim, self.rank, {k: factor * v for k, v in self.coeffs.items()})

    def __add__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return combine([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return combine([(1.0, self), (-1.0, other)])

    def __neg__(self):
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, SymTensor):
            return sym_product(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(1.0 / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return self.dim == other.dim and self.rank == other.rank and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        terms = ' + '.join(f"{v:g}*x^{k}" for k, v in sorted(self.coeffs.items())) or '0'
        return f"SymTensor(dim={self.dim}, rank={self.rank}, {terms})"


def _check_compatible(a, b):
    if a.dim != b.dim:
        raise ValueError(f"Dimension mismatch: {a.dim} != {b.dim}.")
    if a.rank != b.rank:
        raise ValueError(f"Rank mismatch: {a.rank} != {b.rank}.")


def tensor_power(v, p):
    """The p-fold symmetric power v^p, i.e. the polynomial <v, x>^p."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"Expected a vector, got shape {v.shape}.")
    if p < 0:
        raise ValueError(f"Power must be nonnegative, got {p}.")
    dim = v.shape[0]
    coeffs = {}
    for exponents in multi_indices(dim, p):
        value = float(multinomial(exponents))
        for vi, a in zip(v, exponents):
            if a:
                value *= vi ** a
        coeffs[exponents] = value
    return SymTensor(dim, p, coeffs)


def sym_product(*tensors):
    """Symmetric tensor product; the polynomial of the result is the product of the polynomials."""
    if not tensors:
        raise ValueError("sym_product needs at least one tensor.")
    result = tensors[0]
    for other in tensors[1:]:
        if result.dim != other.dim:
            raise ValueError(f"Dimension mismatch: {result.dim} != {other.dim}.")
        coeffs = {}
        for ka, va in result.coeffs.items():
            for kb, vb in other.coeffs.items():
                key = _add_exponents(ka, kb)
                coeffs[key] = coeffs.get(key, 0.0) + va * vb
        result = SymTensor(result.dim, result.rank + other.rank, coeffs)
    return result


def metric_power(dim, m):
    """Q^m."""
    result = SymTensor.scalar(dim, 1.0)
    q = SymTensor.metric(dim)
    for _ in range(m):
        result = sym_product(result, q)
    return result


def metric_of_subspace(basis, dim=None):
    """
    Metric tensor Q(E) of the linear subspace spanned by an orthonormal basis.

    Args:
        basis: sequence of orthonormal vectors (possibly empty).
        dim: ambient dimension, required when ``basis`` is empty.
    """
    basis = np.asarray(basis, dtype=float)
    if basis.size == 0:
        if dim is None:
            raise ValueError("Ambient dimension is required for an empty basis.")
        return SymTensor.zeros(dim, 2)
    basis = np.atleast_2d(basis)
    if dim is not None and basis.shape[1] != dim:
        raise ValueError(f"Basis vectors live in R^{basis.shape[1]}, expected R^{dim}.")
    gram = basis @ basis.T
    if np.max(np.abs(gram - np.eye(len(basis)))) > ORTHONORMAL_TOL:
        raise ValueError("Basis is not orthonormal within 1e-12.")
    return combine([(1.0, tensor_power(b, 2)) for b in basis])


def apply(T, *vectors):
    """
    Symmetric multilinear value T(a_1, ..., a_p) by polarization:

        T(a_1, ..., a_p) = 1 / (p! 2^p) * sum over signs e of e_1 ... e_p * f(e_1 a_1 + ... + e_p a_p)
    """
    p = T.rank
    if len(vectors) != p:
        raise ValueError(f"A rank-{p} tensor takes {p} arguments, got {len(vectors)}.")
    if p == 0:
        return T.value
    vectors = [np.asarray(a, dtype=float) for a in vectors]
    total = 0.0
    # f is even in its argument, so fixing the first sign halves the work.
    for signs in itertools.product((1.0, -1.0), repeat=p - 1):
        point = vectors[0].copy()
        sign = 1.0
        for e, a in zip(signs, vectors[1:]):
            point += e * a
            sign *= e
        total += sign * T.evaluate(point)
    return total / (math.factorial(p) * 2 ** (p - 1))


def combine(terms, dim=None, rank=None):
    """
    Linear combination sum(scale * tensor).

    Args:
        terms: iterable of ``(scale, SymTensor)`` pairs sharing dim and rank.
        dim, rank: shape of the result when ``terms`` is empty.
    """
    terms = list(terms)
    if not terms:
        if dim is None or rank is None:
            raise ValueError("An empty combination needs an explicit dim and rank.")
        return SymTensor.zeros(dim, rank)
    first = terms[0][1]
    if (dim is not None and first.dim != dim) or (rank is not None and first.rank != rank):
        raise ValueError(f"Expected dim={dim}, rank={rank}; got dim={first.dim}, rank={first.rank}.")
    coeffs = {}
    for scale, tensor in terms:
        _check_compatible(first, tensor)
        scale = float(scale)
        for k, v in tensor.coeffs.items():
            coeffs[k] = coeffs.get(k, 0.0) + scale * v
    return SymTensor(first.dim, first.rank, coeffs)
