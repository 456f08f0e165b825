"""
Validation presets.

``quick`` runs the exact identity suites and two scalar Monte Carlo checks in well under a
minute. ``full`` runs the whole acceptance matrix: identity suites on the full corpus, Steiner
volumes, and the Crofton and kinematic formulae at desk-scale sample sizes.
"""
import logging

from .runner import run_experiment, summarize
from .serializers import ExperimentConfigSerializer

logger = logging.getLogger(__name__)

POLYGONS = ['unit-square'] + [f"random-polygon({3 + i % 8}, {100 + i})" for i in range(20)]
POLYHEDRA = ['unit-cube'] + [f"random-polytope({5 + i % 8}, {200 + i})" for i in range(10)]
MC_POLYGONS = ['unit-square', 'random-polygon(6, 301)', 'random-polygon(9, 302)']
MC_POLYHEDRA = ['unit-cube', 'random-polytope(7, 401)', 'random-polytope(10, 402)']

QUICK = [
    {'kind': 'coefficients'},
    {'kind': 'tensor-algebra', 'n': 2, 'bodies': ['unit-square', 'random-polygon(6, 11)']},
    {'kind': 'tensor-algebra', 'n': 3, 'bodies': ['unit-cube']},
    {'kind': 'mcmullen', 'n': 2, 'bodies': ['unit-square', 'random-polygon(6, 11)'], 'max_order': 4},
    {'kind': 'mcmullen', 'n': 3, 'bodies': ['unit-cube'], 'max_order': 2},
    {
        'kind': 'crofton', 'n': 2, 'bodies': ['unit-square'],
        'k': [1], 'j': [0], 'r': [0], 's': [0], 'samples': 2000, 'zmax': 4.0,
    },
    {'kind': 'steiner', 'n': 2, 'bodies': ['unit-square'], 'epsilon': [1.0], 'samples': 20000, 'zmax': 4.0},
]

FULL = [
    {'kind': 'coefficients'},
    {'kind': 'tensor-algebra', 'n': 2, 'bodies': POLYGONS},
    {'kind': 'tensor-algebra', 'n': 3, 'bodies': POLYHEDRA},
    {'kind': 'mcmullen', 'n': 2, 'bodies': POLYGONS, 'max_order': 5},
    {'kind': 'mcmullen', 'n': 3, 'bodies': POLYHEDRA, 'max_order': 5},
    {'kind': 'steiner', 'n': 2, 'bodies': ['unit-square'], 'epsilon': [1.0], 'samples': 1000000},
    {'kind': 'steiner', 'n': 3, 'bodies': ['unit-cube'], 'epsilon': [0.5], 'samples': 1000000},
    {
        'kind': 'crofton', 'n': 2, 'bodies': MC_POLYGONS,
        'k': [1], 'j': [0], 'r': [0, 1], 's': [0, 2], 'samples': 100000,
    },
    {
        'kind': 'crofton', 'n': 2, 'bodies': MC_POLYGONS,
        'k': [1], 'j': [1], 'r': [0, 1], 's': [2], 'samples': 100000,
    },
    {
        'kind': 'crofton', 'n': 3, 'bodies': MC_POLYHEDRA,
        'k': [1, 2], 'j': [0, 1], 'r': [0, 1], 's': [0, 1, 2], 'samples': 100000,
    },
    {
        'kind': 'crofton', 'n': 3, 'bodies': MC_POLYHEDRA,
        'k': [2], 'j': [2], 'r': [0, 1], 's': [2], 'samples': 100000,
    },
    {
        'kind': 'kinematic', 'n': 2, 'bodies': MC_POLYGONS,
        'j': [0, 1], 'r': [0, 1], 's': [0, 1, 2], 'samples': 100000,
    },
    {
        'kind': 'kinematic', 'n': 3, 'bodies': MC_POLYHEDRA,
        'j': [1, 2], 'r': [0], 's': [0, 1, 2], 'samples': 100000,
    },
    {
        'kind': 'kinematic', 'n': 3, 'bodies': ['unit-cube'],
        'j': [0], 'r': [0], 's': [0, 2], 'samples': 20000,
    },
]

PRESETS = {'quick': QUICK, 'full': FULL}


class UnknownPresetError(ValueError):
    pass


def preset_configs(preset, seed=None, workers=None):
    """Validated configs of a preset, with seed and worker overrides applied."""
    if preset not in PRESETS:
        raise UnknownPresetError(f"Unknown preset '{preset}'; choose one of {', '.join(PRESETS)}.")
    configs = []
    for data in PRESETS[preset]:
        data = dict(data)
        if seed is not None:
            data['seed'] = seed
        if workers is not None:
            data['workers'] = workers
        serializer = ExperimentConfigSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        configs.append(serializer.validated_data)
    return configs


def run_suite(preset, seed=None, workers=None):
    """Run every experiment of a preset; the suite fails iff any case fails."""
    configs = preset_configs(preset, seed, workers)
    logger.info(f"Validating preset '{preset}' with {len(configs)} experiments")
    experiments = [run_experiment(config) for config in configs]
    summary = summarize([case for experiment in experiments for case in experiment['cases']])
    logger.info(f"Preset '{preset}': {summary['verdict']} ({summary['passed']}/{summary['cases']} cases)")
    return {'preset': preset, 'seed': seed, 'experiments': experiments, 'summary': summary}


def validate_suite(preset, seed=None, workers=None):
    """Exit code of a preset run: 0 on all-pass, 1 on any FAIL, 2 for an unknown preset."""
    try:
        report = run_suite(preset, seed, workers)
    except UnknownPresetError as exc:
        logger.error(str(exc))
        return 2
    return 0 if report['summary']['verdict'] == 'PASS' else 1
