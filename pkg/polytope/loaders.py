"""Polytope files: the JSON vertex document and OFF (vertices only, the lattice is rebuilt)."""
import json
import logging
from pathlib import Path

from .polytopes import build_polytope
from .serializers import PolytopeSerializer

logger = logging.getLogger(__name__)


class PolytopeFileError(ValueError):
    """A polytope file could not be read or validated."""


def polytope_from_data(data):
    """Validate a ``{"dim", "vertices"}`` document and build the polytope."""
    serializer = PolytopeSerializer(data=data)
    if not serializer.is_valid():
        raise PolytopeFileError(f"Invalid polytope document: {dict(serializer.errors)}")
    return serializer.save()


def parse_off(text):
    """Vertex coordinates of an OFF document; face records are ignored."""
    lines = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    tokens = lines[0].split() if lines else []
    if not tokens or not tokens[0].upper().endswith('OFF'):
        raise PolytopeFileError("OFF file must start with an 'OFF' header.")
    rest = lines[1:]
    counts_line = ' '.join(tokens[1:]) or (rest.pop(0) if rest else '')
    try:
        n_vertices = int(counts_line.split()[0])
        vertices = [[float(v) for v in rest[i].split()[:3]] for i in range(n_vertices)]
    except (IndexError, ValueError) as exc:
        raise PolytopeFileError(f"Malformed OFF vertex block: {exc}") from exc
    return vertices


def load_polytope(path):
    """Load a polytope from a ``.json`` or ``.off`` file."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise PolytopeFileError(f"Cannot read polytope file {path}: {exc}") from exc
    if path.suffix.lower() == '.off':
        vertices = parse_off(text)
        logger.info(f"Loaded {len(vertices)} vertices from OFF file {path}")
        return build_polytope(vertices)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeFileError(f"Polytope file {path} is not valid JSON: {exc}") from exc
    return polytope_from_data(data)
