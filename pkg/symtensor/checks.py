"""Algebraic identities of symmetric tensors, checked on seeded random inputs."""
import math

import numpy as np

from .tensors import (
    SymTensor, combine, metric_of_subspace, metric_power, multi_indices, sym_product, tensor_power,
)

MAX_REPORTED_ERRORS = 5


def _summary(name):
    return {'name': name, 'checked': 0, 'failed': 0, 'errors': []}


def _record(summary, ok, message):
    summary['checked'] += 1
    if not ok:
        summary['failed'] += 1
        if len(summary['errors']) < MAX_REPORTED_ERRORS:
            summary['errors'].append(message)


def random_tensor(rng, dim, rank):
    """Integer coefficients in [-3, 3], so products are exact in floating point."""
    values = rng.integers(-3, 4, size=len(multi_indices(dim, rank)))
    return SymTensor.from_array(dim, rank, values)


def check_product_laws(rng, dims=(2, 3), max_rank=3, atol=1e-10):
    summary = _summary('symmetric product is commutative and associative')
    for dim in dims:
        for ranks in np.ndindex(max_rank + 1, max_rank + 1, max_rank + 1):
            a, b, c = (random_tensor(rng, dim, int(rank)) for rank in ranks)
            _record(summary, sym_product(a, b).allclose(sym_product(b, a), atol=atol), f"a*b != b*a for ranks {ranks}")
            left, right = sym_product(sym_product(a, b), c), sym_product(a, sym_product(b, c))
            _record(summary, left.allclose(right, atol=atol), f"(a*b)*c != a*(b*c) for ranks {ranks}")
    return summary


def check_binomial_expansion(rng, dims=(2, 3), max_power=5, atol=1e-9):
    """(x + y)^p = sum_i C(p, i) x^i y^(p-i)."""
    summary = _summary('binomial expansion of tensor powers')
    for dim in dims:
        x, y = rng.normal(size=dim), rng.normal(size=dim)
        for p in range(max_power + 1):
            expanded = combine(
                [(math.comb(p, i), sym_product(tensor_power(x, i), tensor_power(y, p - i))) for i in range(p + 1)]
            )
            _record(summary, tensor_power(x + y, p).allclose(expanded, atol=atol), f"binomial fails at dim={dim}, p={p}")
    return summary


def check_polarization(rng, dims=(2, 3), max_rank=4, atol=1e-9):
    """T(v, ..., v) = T(v) and T(a_1, ..., a_p) is symmetric in its arguments."""
    summary = _summary('polarization')
    for dim in dims:
        for rank in range(1, max_rank + 1):
            T = random_tensor(rng, dim, rank)
            v = rng.normal(size=dim)
            diagonal, value = T.apply(*([v] * rank)), T.evaluate(v)
            _record(summary, abs(diagonal - value) <= atol * (1 + abs(value)), f"T(v,...,v) != T(v) for rank {rank}")
            vectors = list(rng.normal(size=(rank, dim)))
            forward, backward = T.apply(*vectors), T.apply(*reversed(vectors))
            _record(summary, abs(forward - backward) <= atol * (1 + abs(forward)), f"apply is not symmetric for rank {rank}")
    return summary


def check_metric(rng, dims=(2, 3), max_power=3, atol=1e-9):
    """Q^m(x) = |x|^(2m) and Q(E) + Q(E^perp) = Q."""
    summary = _summary('metric tensors')
    for dim in dims:
        x = rng.normal(size=dim)
        for m in range(max_power + 1):
            value, expected = metric_power(dim, m).evaluate(x), float(x @ x) ** m
            _record(summary, abs(value - expected) <= atol * (1 + expected), f"Q^{m}(x) != |x|^{2 * m} in R^{dim}")
        frame, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
        for k in range(1, dim):
            split = metric_of_subspace(frame[:, :k].T, dim) + metric_of_subspace(frame[:, k:].T, dim)
            _record(summary, split.allclose(SymTensor.metric(dim), atol=atol), f"Q(E) + Q(E^perp) != Q for k={k}")
    return summary


ALGEBRA_CHECKS = (
    check_product_laws,
    check_binomial_expansion,
    check_polarization,
    check_metric,
)
