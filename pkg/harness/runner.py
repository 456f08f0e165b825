"""
Runs one validated experiment config and collects a report

    {"config": {...}, "cases": [...], "summary": {...}}

Cases run sequentially. Statistical kinds compare Monte Carlo estimates against the exact
right-hand sides; identity kinds run the exact identity suites. An unexpected exception in a
case is logged and recorded as a FAIL case, so one bad case never stops the experiment.
"""
import logging
import time

import numpy as np

from coefficients import checks as coefficient_checks
from mc_integration.estimators import (
    compare, estimate_crofton, estimate_kinematic, estimate_parallel_volume,
)
from symtensor import checks as algebra_checks
from symtensor.tensors import SymTensor
from valuations import checks as valuation_checks
from valuations.formulas import rhs_crofton, rhs_kinematic
from valuations.tensors import steiner_polynomial

from .corpus import DEFAULT_CORPUS, resolve_bodies, resolve_body

logger = logging.getLogger(__name__)

IDENTITY_RTOL = 1e-9


def _case(name, kind, bodies=(), indices=None):
    return {
        'name': name,
        'kind': kind,
        'bodies': list(bodies),
        'indices': dict(indices or {}),
        'exact': None,
        'estimate': None,
        'z': None,
        'max_abs_z': None,
        'residual': None,
        'checked': None,
        'failed': None,
        'failures': [],
        'verdict': 'FAIL',
    }


def _run_case(case, compute):
    """Fill ``case`` from ``compute()``; exceptions become FAIL cases."""
    started = time.perf_counter()
    try:
        case.update(compute())
    except Exception as exc:
        logger.exception(f"Case '{case['name']}' raised {type(exc).__name__}")
        case['verdict'] = 'FAIL'
        case['failures'] = [f"{type(exc).__name__}: {exc}"]
    case['wall_time'] = time.perf_counter() - started
    log = logger.info if case['verdict'] == 'PASS' else logger.warning
    log(f"{case['verdict']} {case['name']} {case['bodies']} in {case['wall_time']:.2f}s")
    return case


def _statistical(exact, estimate, config):
    comparison = compare(estimate, exact, zmax=config['zmax'], atol=config['atol'], rtol=config.get('rtol'))
    return {
        'exact': exact,
        'estimate': estimate,
        'z': comparison.z,
        'max_abs_z': comparison.max_abs_z,
        'verdict': comparison.verdict,
    }


def _identity(summary):
    return {
        'name': summary['name'],
        'residual': summary.get('max_residual'),
        'checked': summary['checked'],
        'failed': summary['failed'],
        'failures': list(summary['errors']),
        'verdict': 'PASS' if summary['failed'] == 0 else 'FAIL',
    }


def _bodies(config):
    return resolve_bodies(config.get('bodies') or DEFAULT_CORPUS[config['n']], config['seed'])


def _pairs(config):
    """Configured pairs, or every body paired with itself."""
    if not config.get('pairs'):
        return [(body, body) for body in _bodies(config)]
    seed = config['seed']
    return [
        (resolve_body(first, 2 * index, seed), resolve_body(second, 2 * index + 1, seed))
        for index, (first, second) in enumerate(config['pairs'])
    ]


def _indices(config, name, default):
    return config.get(name) or default


def _estimator_options(config):
    return {'workers': config.get('workers'), 'antithetic': config['antithetic']}


def _kinematic_cases(config):
    n, samples, seed = config['n'], config['samples'], config['seed']
    options = _estimator_options(config)
    for (label, K), (label2, K2) in _pairs(config):
        for j in _indices(config, 'j', [0]):
            for r in _indices(config, 'r', [0]):
                for s in _indices(config, 's', [0]):
                    if j == n and s:
                        continue

                    def compute(K=K, K2=K2, j=j, r=r, s=s):
                        estimate = estimate_kinematic(K, K2, j, r, s, samples, seed, **options)
                        return _statistical(rhs_kinematic(K, K2, j, r, s), estimate, config)

                    indices = {'j': j, 'r': r, 's': s}
                    yield _case(f"kinematic j={j} r={r} s={s}", 'kinematic', [label, label2], indices), compute


def _crofton_cases(config):
    n, samples, seed = config['n'], config['samples'], config['seed']
    options = _estimator_options(config)
    for label, K in _bodies(config):
        for k in _indices(config, 'k', [n - 1]):
            for j in _indices(config, 'j', [0]):
                if j > k:
                    continue
                for r in _indices(config, 'r', [0]):
                    for s in _indices(config, 's', [0]):

                        def compute(K=K, k=k, j=j, r=r, s=s):
                            estimate = estimate_crofton(K, k, j, r, s, samples, seed, **options)
                            return _statistical(rhs_crofton(K, k, j, r, s), estimate, config)

                        indices = {'k': k, 'j': j, 'r': r, 's': s}
                        yield _case(f"crofton k={k} j={j} r={r} s={s}", 'crofton', [label], indices), compute


def _steiner_cases(config):
    n, samples, seed = config['n'], config['samples'], config['seed']
    options = _estimator_options(config)
    for label, P in _bodies(config):
        for epsilon in config['epsilon']:

            def compute(P=P, epsilon=epsilon):
                estimate = estimate_parallel_volume(P, epsilon, samples, seed, **options)
                return _statistical(SymTensor.scalar(n, steiner_polynomial(P, epsilon)), estimate, config)

            yield _case(f"steiner eps={epsilon:g}", 'steiner', [label], {'epsilon': epsilon}), compute


def _mcmullen_cases(config):
    rtol = config.get('rtol') or IDENTITY_RTOL
    order = config['max_order']
    for label, P in _bodies(config):
        for check in (valuation_checks.check_mcmullen, valuation_checks.check_gen_tcm_expansion):
            yield (
                _case(check.__name__, 'mcmullen', [label], {'max_order': order}),
                lambda check=check, P=P: _identity(check(P, order, rtol)),
            )


def _coefficient_cases(config):
    for check in coefficient_checks.COEFFICIENT_CHECKS:
        yield _case(check.__name__, 'coefficients'), lambda check=check: _identity(check())


def _algebra_cases(config):
    rng = np.random.default_rng(config['seed'])
    for check in algebra_checks.ALGEBRA_CHECKS:
        yield _case(check.__name__, 'tensor-algebra'), lambda check=check: _identity(check(rng))
    atol = config['atol']
    for label, P in _bodies(config):
        yield (
            _case('check_structure', 'tensor-algebra', [label]),
            lambda P=P: _identity(valuation_checks.check_structure(P, atol)),
        )


CASE_BUILDERS = {
    'kinematic': _kinematic_cases,
    'crofton': _crofton_cases,
    'steiner': _steiner_cases,
    'mcmullen': _mcmullen_cases,
    'coefficients': _coefficient_cases,
    'tensor-algebra': _algebra_cases,
}


def summarize(cases):
    passed = sum(1 for case in cases if case['verdict'] == 'PASS')
    return {
        'cases': len(cases),
        'passed': passed,
        'failed': len(cases) - passed,
        'max_abs_z': max((case['max_abs_z'] for case in cases if case['max_abs_z'] is not None), default=0.0),
        'verdict': 'PASS' if passed == len(cases) else 'FAIL',
    }


def config_echo(config):
    """The validated config as written to reports, without the worker count."""
    return {key: value for key, value in config.items() if key != 'workers'}


def run_experiment(config):
    """Run a validated ExperimentConfig and return the report dict."""
    kind = config['kind']
    logger.info(f"Running {kind} experiment (n={config['n']}, seed={config['seed']}, samples={config['samples']})")
    cases = [_run_case(case, compute) for case, compute in CASE_BUILDERS[kind](config)]
    summary = summarize(cases)
    logger.info(f"{kind} experiment: {summary['passed']}/{summary['cases']} cases passed")
    return {'config': config_echo(config), 'cases': cases, 'summary': summary}
