"""
Seeded Monte Carlo estimators for the integral-geometric left-hand sides.

Rigid motions are sampled as (Haar probability on rotations) x (Lebesgue on translations) and
affine k-flats as (Haar probability on directions) x (Lebesgue on the orthogonal complement).
Translations are drawn uniformly from a box that contains every translation with a nonempty
intersection, and each sample is weighted by the box volume.

Samples are split into batches; batch b draws from ``SeedSequence(seed, spawn_key=(b,))`` and
batch moments are merged in batch order, so results do not depend on the worker count.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from billiard import Pool
from django.conf import settings

from polytope.clipping import distances, intersect_polytopes, slice_flat, translation_window
from polytope.polytopes import Box, Flat, complement_basis
from symtensor.tensors import SymTensor, comparison_tolerances, multi_indices
from valuations.tensors import phi

from .sampling import RigidMotion, sample_direction_space, sample_rotation

logger = logging.getLogger(__name__)

ZERO_STDERR = 1e-14


@dataclass(frozen=True)
class Estimate:
    """Sample mean with componentwise standard errors (coefficients of SymTensors)."""
    mean: SymTensor
    stderr: SymTensor
    samples: int
    seed: int
    window_volume: float

    def to_csv_rows(self):
        rows = [['exponents', 'mean', 'stderr', 'samples', 'seed']]
        for exponents in multi_indices(self.mean.dim, self.mean.rank):
            rows.append([
                ' '.join(str(a) for a in exponents),
                repr(self.mean.coefficient(exponents)),
                repr(self.stderr.coefficient(exponents)),
                self.samples,
                self.seed,
            ])
        return rows

    def to_csv(self):
        buffer = io.StringIO()
        csv.writer(buffer).writerows(self.to_csv_rows())
        return buffer.getvalue()


@dataclass(frozen=True)
class ComparisonResult:
    """Per-component z-scores of an estimate against an exact value."""
    z: list
    max_abs_z: float
    zmax: float
    passed: bool

    @property
    def verdict(self):
        return 'PASS' if self.passed else 'FAIL'

    def to_dict(self):
        return {'z': self.z, 'max_abs_z': self.max_abs_z, 'zmax': self.zmax, 'verdict': self.verdict}


@dataclass(frozen=True)
class _Moments:
    count: int
    mean: np.ndarray
    m2: np.ndarray
    window_sum: float


def _merge(a, b):
    """Pairwise combination of sample means and sums of squared deviations."""
    count = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.count / count)
    m2 = a.m2 + b.m2 + delta ** 2 * (a.count * b.count / count)
    return _Moments(count, mean, m2, a.window_sum + b.window_sum)


def _moments(values, windows):
    mean = values.mean(axis=0)
    return _Moments(len(values), mean, ((values - mean) ** 2).sum(axis=0), float(windows.sum()))


def _reflections(window, point, antithetic):
    return [point, 2 * window.center - point] if antithetic else [point]


def _kinematic_batch(task, rng, size, antithetic):
    K, K2, j, r, s = task
    n = K.dim_ambient
    values = np.zeros((size, len(multi_indices(n, r + s))))
    windows = np.zeros(size)
    for row in range(size):
        rotation = sample_rotation(n, rng)
        window = translation_window(K, RigidMotion(rotation, np.zeros(n)).apply(K2))
        shift = window.sample(rng, 1)[0]
        for t in _reflections(window, shift, antithetic):
            section = intersect_polytopes(K, RigidMotion(rotation, t).apply(K2))
            values[row] += phi(section, j, r, s, dim=n).to_array()
        values[row] *= window.volume / (2 if antithetic else 1)
        windows[row] = window.volume
    return values, windows


def _crofton_batch(task, rng, size, antithetic):
    K, k, j, r, s = task
    n = K.dim_ambient
    values = np.zeros((size, len(multi_indices(n, r + s))))
    windows = np.zeros(size)
    for row in range(size):
        directions = sample_direction_space(n, k, rng)
        normals = complement_basis(directions, n)
        coords = K.vertices @ normals.T
        window = Box(coords.min(axis=0), coords.max(axis=0))
        offset = window.sample(rng, 1)[0]
        for y in _reflections(window, offset, antithetic):
            section = K if k == n else slice_flat(K, Flat(directions, y @ normals))
            values[row] += phi(section, j, r, s, dim=n).to_array()
        values[row] *= window.volume / (2 if antithetic else 1)
        windows[row] = window.volume
    return values, windows


def _parallel_volume_batch(task, rng, size, antithetic):
    P, epsilon = task
    box = P.bounding_box()
    window = Box(box.lower - epsilon, box.upper + epsilon)
    points = window.sample(rng, size)
    hits = (distances(P, points) <= epsilon).astype(float)
    if antithetic:
        mirrored = 2 * window.center - points
        hits = (hits + (distances(P, mirrored) <= epsilon)) / 2
    return window.volume * hits[:, None], np.full(size, window.volume)


def _run_batch(job):
    sampler, task, seed, batch, size, antithetic = job
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(batch,)))
    return _moments(*sampler(task, rng, size, antithetic))


def _batch_sizes(samples, batch_size):
    full, rest = divmod(samples, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def _estimate(sampler, task, dim, rank, samples, seed, workers, batch_size, antithetic, label):
    if samples < 1:
        raise ValueError(f"Need at least one sample, got {samples}.")
    if seed < 0:
        raise ValueError(f"Seeds must be nonnegative, got {seed}.")
    workers = workers or getattr(settings, 'TENSORVAL_WORKERS', 1)
    batch_size = batch_size or getattr(settings, 'TENSORVAL_BATCH_SIZE', 1000)
    jobs = [
        (sampler, task, seed, batch, size, antithetic)
        for batch, size in enumerate(_batch_sizes(samples, batch_size))
    ]
    logger.info(f"{label}: {samples} samples in {len(jobs)} batches on {workers} worker(s), seed {seed}")
    if workers > 1 and len(jobs) > 1:
        pool = Pool(processes=min(workers, len(jobs)))
        try:
            results = pool.map(_run_batch, jobs)
        finally:
            pool.close()
            pool.join()
    else:
        results = [_run_batch(job) for job in jobs]
    total = reduce(_merge, results)
    variance = total.m2 / (total.count - 1) if total.count > 1 else np.zeros_like(total.m2)
    stderr = np.sqrt(variance / total.count)
    return Estimate(
        mean=SymTensor.from_array(dim, rank, total.mean),
        stderr=SymTensor.from_array(dim, rank, stderr),
        samples=total.count,
        seed=seed,
        window_volume=total.window_sum / total.count,
    )


def estimate_kinematic(K, K2, j, r, s, samples, seed, workers=None, batch_size=None, antithetic=False):
    """
    Estimate the integral over rigid motions g of Phi_j^{r,s}(K cap gK2).

    Each sample rotates K2 by a Haar rotation rho, draws t uniformly from the translation
    window of (K, rho K2) and scores vol(window) * Phi_j^{r,s}(K cap (rho K2 + t)).
    """
    if K.dim_ambient != K2.dim_ambient:
        raise ValueError(f"Ambient dimension mismatch: {K.dim_ambient} != {K2.dim_ambient}.")
    n = K.dim_ambient
    if not 0 <= j <= n or r < 0 or s < 0:
        raise ValueError(f"Invalid indices j={j}, r={r}, s={s} for n={n}.")
    return _estimate(
        _kinematic_batch, (K, K2, j, r, s), n, r + s, samples, seed, workers, batch_size, antithetic,
        f"Kinematic estimate j={j} r={r} s={s}",
    )


def estimate_crofton(K, k, j, r, s, samples, seed, workers=None, batch_size=None, antithetic=False):
    """
    Estimate the integral over affine k-flats E of Phi_j^{r,s}(K cap E).

    Each sample draws a Haar direction space L, a point y uniformly from the bounding box W of
    the projection of K onto the orthogonal complement of L, and scores vol(W) * Phi_j^{r,s}(K cap (L + y)).
    """
    n = K.dim_ambient
    if not 0 <= j <= k <= n or r < 0 or s < 0:
        raise ValueError(f"Invalid indices k={k}, j={j}, r={r}, s={s} for n={n}.")
    return _estimate(
        _crofton_batch, (K, k, j, r, s), n, r + s, samples, seed, workers, batch_size, antithetic,
        f"Crofton estimate k={k} j={j} r={r} s={s}",
    )


def estimate_parallel_volume(P, epsilon, samples, seed, workers=None, batch_size=None, antithetic=False):
    """Hit-or-miss estimate of vol(P + epsilon B^n) over the bounding box of P inflated by epsilon."""
    if epsilon <= 0:
        raise ValueError(f"The parallel distance must be positive, got {epsilon}.")
    return _estimate(
        _parallel_volume_batch, (P, float(epsilon)), P.dim_ambient, 0, samples, seed, workers, batch_size,
        antithetic, f"Parallel volume estimate eps={epsilon}",
    )


def compare(estimate, exact, zmax=None, atol=None, rtol=None):
    """
    Per-component z = (mean - exact) / stderr; components with stderr below 1e-14 are compared
    by |mean - exact| <= atol + rtol * |exact| instead and get z = None. PASS iff every z satisfies
    |z| <= zmax and every tolerance comparison holds.
    """
    zmax = getattr(settings, 'TENSORVAL_ZMAX', 3.0) if zmax is None else zmax
    atol, rtol = comparison_tolerances(atol, rtol)
    mean = estimate.mean
    if (mean.dim, mean.rank) != (exact.dim, exact.rank):
        raise ValueError(
            f"Cannot compare a rank-{mean.rank} estimate over R^{mean.dim} "
            f"with a rank-{exact.rank} value over R^{exact.dim}."
        )
    z_scores, passed = [], True
    for exponents in multi_indices(mean.dim, mean.rank):
        target = exact.coefficient(exponents)
        deviation = mean.coefficient(exponents) - target
        stderr = estimate.stderr.coefficient(exponents)
        if stderr < ZERO_STDERR:
            z_scores.append(None)
            passed = passed and abs(deviation) <= atol + rtol * abs(target)
        else:
            z_scores.append(deviation / stderr)
    finite = [abs(z) for z in z_scores if z is not None and math.isfinite(z)]
    max_abs_z = max(finite, default=0.0)
    passed = passed and max_abs_z <= zmax
    if not passed:
        logger.warning(f"Estimate deviates from the exact value: max |z| = {max_abs_z:.3f} (zmax {zmax})")
    return ComparisonResult(z_scores, max_abs_z, zmax, passed)
