"""
Named bodies for experiment configs.

A body is one of

    "unit-square" | "unit-cube" | "random-polygon(v)" | "random-polytope(v)"
    | "random-polygon(v, seed)" | "random-polytope(v, seed)"
    | {"dim": n, "vertices": [...]} | {"file": path}

Random bodies without an explicit seed take one derived from the experiment seed and the
body's position in the config; the label records the seed so the body can be rebuilt.
"""
import logging
import re

import numpy as np

from polytope.loaders import load_polytope, polytope_from_data
from polytope.polytopes import build_polytope

logger = logging.getLogger(__name__)

RANDOM_BODY = re.compile(r'^(random-polygon|random-polytope)\((\d+)\s*(?:,\s*(\d+))?\)$')

UNIT_SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
UNIT_CUBE = [[x, y, z] for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]

DEFAULT_CORPUS = {
    2: ['unit-square', 'random-polygon(5)', 'random-polygon(8)'],
    3: ['unit-cube', 'random-polytope(6)', 'random-polytope(10)'],
}


class BodyError(ValueError):
    """A body specification could not be resolved."""


def random_polygon(v, rng):
    """Hull of v points at uniform angles on the unit circle with radii jittered in [0.8, 1.2]."""
    angles = np.sort(rng.uniform(0.0, 2 * np.pi, size=v))
    radii = rng.uniform(0.8, 1.2, size=v)
    return build_polytope(np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]))


def random_polytope(v, rng):
    """Hull of v uniform points on the unit sphere."""
    points = rng.normal(size=(v, 3))
    return build_polytope(points / np.linalg.norm(points, axis=1, keepdims=True))


def body_seed(seed, index):
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def parse_body_name(name):
    """('unit-square', None, None), ('random-polygon', v, seed or None), ..."""
    if name in ('unit-square', 'unit-cube'):
        return name, None, None
    match = RANDOM_BODY.match(name.strip())
    if not match:
        raise BodyError(f"Unknown body '{name}'.")
    kind, v, seed = match.groups()
    minimum = 3 if kind == 'random-polygon' else 4
    if int(v) < minimum:
        raise BodyError(f"{kind} needs at least {minimum} points, got {v}.")
    return kind, int(v), None if seed is None else int(seed)


def body_dimension(spec):
    """Ambient dimension a body specification declares, or None for files."""
    if isinstance(spec, dict):
        return spec.get('dim')
    kind = parse_body_name(spec)[0]
    return 2 if kind in ('unit-square', 'random-polygon') else 3


def resolve_body(spec, index=0, seed=0):
    """(label, Polytope) for a body specification."""
    if isinstance(spec, dict):
        if 'file' in spec:
            return spec['file'], load_polytope(spec['file'])
        P = polytope_from_data(spec)
        return f"inline[{index}]", P
    kind, v, explicit_seed = parse_body_name(spec)
    if kind == 'unit-square':
        return kind, build_polytope(UNIT_SQUARE)
    if kind == 'unit-cube':
        return kind, build_polytope(UNIT_CUBE)
    used_seed = body_seed(seed, index) if explicit_seed is None else explicit_seed
    rng = np.random.default_rng(used_seed)
    P = random_polygon(v, rng) if kind == 'random-polygon' else random_polytope(v, rng)
    label = f"{kind}({v}, {used_seed})"
    logger.info(f"Generated {label} with face counts {P.face_counts}")
    return label, P


def resolve_bodies(specs, seed=0):
    return [resolve_body(spec, index, seed) for index, spec in enumerate(specs)]
