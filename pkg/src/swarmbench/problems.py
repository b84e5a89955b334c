"""Problem files (strict XML schema, canonical serialization) and the
builtin catalog.

Schema, version 1::

    <problem format-version="1">
      <name>...</name>
      <continuous dimension="D">
        <bounds>
          <dim index="0" lower="..." upper="..."/>
          ...
        </bounds>
        <objective builtin="sphere"/>
      </continuous>
    </problem>

or, in place of <continuous>, a <tsp> element holding either <cities> of
<city id="k" x="..." y="..."/> (Euclidean distances computed at full
double precision, never rounded) or <matrix n="..."> with n*n row-major
whitespace-separated reals. Unknown elements and attributes are rejected
so archived files stay reproducible. Serialization is canonical: fixed
element order, two-space indentation, one element per line, reals printed
with 17 significant digits (round-trips exactly).

Builtin catalog: sphere, rastrigin, rosenbrock, ackley (any dimension,
default 10, standard bounds) and the TSP instances tsp-square4 (unit
square corners), tsp-circle8 (8 points on the unit circle) and
tsp-rand10..tsp-rand12 (uniform points in the unit square drawn from this
package's own random stream with generation seed 1000 + n; frozen, do not
regenerate differently across versions).
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from swarmbench.core import (
    OBJECTIVE_CODES,
    ContinuousSpace,
    Problem,
    SwarmError,
    TourSpace,
    make_stream,
)

FORMAT_VERSION = 1

# diagnostic codes (stable; tests and the service rely on them)
MALFORMED_XML = "MALFORMED_XML"
UNSUPPORTED_VERSION = "UNSUPPORTED_VERSION"
UNKNOWN_ELEMENT = "UNKNOWN_ELEMENT"
UNKNOWN_ATTRIBUTE = "UNKNOWN_ATTRIBUTE"
MISSING_ELEMENT = "MISSING_ELEMENT"
DUPLICATE_ELEMENT = "DUPLICATE_ELEMENT"
MISSING_ATTRIBUTE = "MISSING_ATTRIBUTE"
BAD_NUMBER = "BAD_NUMBER"
BAD_DIMENSION = "BAD_DIMENSION"
BAD_INDEX = "BAD_INDEX"
BAD_CITY_ID = "BAD_CITY_ID"
MATRIX_SHAPE = "MATRIX_SHAPE"
EMPTY_NAME = "EMPTY_NAME"
NONFINITE_BOUND = "NONFINITE_BOUND"
BOUND_ORDER = "BOUND_ORDER"
UNKNOWN_OBJECTIVE = "UNKNOWN_OBJECTIVE"
TOO_FEW_NODES = "TOO_FEW_NODES"
NEGATIVE_DISTANCE = "NEGATIVE_DISTANCE"
NONFINITE_DISTANCE = "NONFINITE_DISTANCE"
ASYMMETRIC_DISTANCE = "ASYMMETRIC_DISTANCE"
NONZERO_DIAGONAL = "NONZERO_DIAGONAL"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


class ProblemFormatError(SwarmError):
    """Base for rejected problem files; carries diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))

    @property
    def codes(self):
        return [d.code for d in self.diagnostics]


class ProblemParseError(ProblemFormatError):
    pass


class ProblemSchemaError(ProblemFormatError):
    pass


class ProblemValidationError(ProblemFormatError):
    pass


class UnknownProblemError(SwarmError):
    pass


# ---------------------------------------------------------------------------
# validation

def _space_diagnostics(problem):
    out = []
    space = problem.space
    if space.kind == "continuous":
        if space.dimension < 1:
            out.append(Diagnostic(BAD_DIMENSION, "dimension must be >= 1"))
        for d in range(space.dimension):
            lo = float(space.lower[d])
            hi = float(space.upper[d])
            if not (math.isfinite(lo) and math.isfinite(hi)):
                out.append(Diagnostic(
                    NONFINITE_BOUND, f"dimension {d}: bounds must be finite"))
            elif lo >= hi:
                out.append(Diagnostic(
                    BOUND_ORDER,
                    f"dimension {d}: lower {lo!r} must be < upper {hi!r}"))
        if problem.objective not in OBJECTIVE_CODES:
            out.append(Diagnostic(
                UNKNOWN_OBJECTIVE,
                f"unknown builtin objective {problem.objective!r}"))
    else:
        n = space.n
        if n < 3:
            out.append(Diagnostic(TOO_FEW_NODES,
                                  f"tour problems need >= 3 nodes, got {n}"))
        dist = space.dist
        for i in range(n):
            if float(dist[i, i]) != 0.0:
                out.append(Diagnostic(
                    NONZERO_DIAGONAL, f"dist[{i}][{i}] must be 0"))
            for j in range(i + 1, n):
                a = float(dist[i, j])
                b = float(dist[j, i])
                if not math.isfinite(a) or not math.isfinite(b):
                    out.append(Diagnostic(
                        NONFINITE_DISTANCE,
                        f"dist[{i}][{j}] must be finite"))
                    continue
                if a < 0.0 or b < 0.0:
                    out.append(Diagnostic(
                        NEGATIVE_DISTANCE,
                        f"dist[{i}][{j}] must be >= 0"))
                if a != b:
                    out.append(Diagnostic(
                        ASYMMETRIC_DISTANCE,
                        f"dist[{i}][{j}]={a!r} != dist[{j}][{i}]={b!r}"))
    return out


def validate_problem(problem):
    """All invariant violations as diagnostics; empty when valid."""
    out = []
    if not problem.name or not problem.name.strip():
        out.append(Diagnostic(EMPTY_NAME, "problem name must be non-empty"))
    out.extend(_space_diagnostics(problem))
    return out


# ---------------------------------------------------------------------------
# parsing

def _schema_error(code, message):
    raise ProblemSchemaError([Diagnostic(code, message)])


def _parse_real(text, where):
    try:
        value = float(text.strip())
    except (TypeError, ValueError, AttributeError):
        _schema_error(BAD_NUMBER, f"{where}: expected a real number, got {text!r}")
    return value


def _parse_int(text, where):
    try:
        return int(text.strip())
    except (TypeError, ValueError, AttributeError):
        _schema_error(BAD_NUMBER, f"{where}: expected an integer, got {text!r}")


def _require_attrs(elem, required, optional=()):
    for key in elem.attrib:
        if key not in required and key not in optional:
            _schema_error(UNKNOWN_ATTRIBUTE,
                          f"<{elem.tag}> has unknown attribute {key!r}")
    for key in required:
        if key not in elem.attrib:
            _schema_error(MISSING_ATTRIBUTE,
                          f"<{elem.tag}> requires attribute {key!r}")


def _no_text(elem):
    if (elem.text or "").strip():
        _schema_error(UNKNOWN_ELEMENT,
                      f"<{elem.tag}> must not contain text")


def _parse_continuous(elem):
    _require_attrs(elem, ("dimension",))
    dim = _parse_int(elem.attrib["dimension"], "<continuous dimension>")
    if dim < 1:
        _schema_error(BAD_DIMENSION, f"dimension must be >= 1, got {dim}")
    bounds_elem = None
    objective_elem = None
    for child in elem:
        if child.tag == "bounds":
            if bounds_elem is not None:
                _schema_error(DUPLICATE_ELEMENT, "more than one <bounds>")
            bounds_elem = child
        elif child.tag == "objective":
            if objective_elem is not None:
                _schema_error(DUPLICATE_ELEMENT, "more than one <objective>")
            objective_elem = child
        else:
            _schema_error(UNKNOWN_ELEMENT,
                          f"unexpected <{child.tag}> inside <continuous>")
    if bounds_elem is None:
        _schema_error(MISSING_ELEMENT, "<continuous> requires <bounds>")
    if objective_elem is None:
        _schema_error(MISSING_ELEMENT, "<continuous> requires <objective>")

    lower = np.empty(dim)
    upper = np.empty(dim)
    seen = [False] * dim
    for child in bounds_elem:
        if child.tag != "dim":
            _schema_error(UNKNOWN_ELEMENT,
                          f"unexpected <{child.tag}> inside <bounds>")
        _require_attrs(child, ("index", "lower", "upper"))
        idx = _parse_int(child.attrib["index"], "<dim index>")
        if idx < 0 or idx >= dim:
            _schema_error(BAD_INDEX, f"dim index {idx} outside 0..{dim - 1}")
        if seen[idx]:
            _schema_error(BAD_INDEX, f"dim index {idx} given twice")
        seen[idx] = True
        lower[idx] = _parse_real(child.attrib["lower"], f"dim {idx} lower")
        upper[idx] = _parse_real(child.attrib["upper"], f"dim {idx} upper")
    if not all(seen):
        missing = seen.index(False)
        _schema_error(BAD_INDEX, f"dim index {missing} missing from <bounds>")

    _require_attrs(objective_elem, ("builtin",))
    objective = objective_elem.attrib["builtin"]
    if objective not in OBJECTIVE_CODES:
        _schema_error(UNKNOWN_OBJECTIVE,
                      f"unknown builtin objective {objective!r}; known: "
                      f"{', '.join(sorted(OBJECTIVE_CODES))}")
    return ContinuousSpace(lower, upper), objective


def euclidean_distances(coords):
    """Full-precision symmetric Euclidean matrix from (x, y) pairs."""
    n = len(coords)
    dist = np.zeros((n, n))
    for i in range(n):
        xi, yi = coords[i]
        for j in range(i + 1, n):
            dx = xi - coords[j][0]
            dy = yi - coords[j][1]
            d = math.sqrt(dx * dx + dy * dy)
            dist[i, j] = d
            dist[j, i] = d
    return dist


def _parse_tsp(elem):
    _require_attrs(elem, ())
    payload = None
    for child in elem:
        if child.tag not in ("cities", "matrix"):
            _schema_error(UNKNOWN_ELEMENT,
                          f"unexpected <{child.tag}> inside <tsp>")
        if payload is not None:
            _schema_error(DUPLICATE_ELEMENT,
                          "<tsp> takes exactly one of <cities> or <matrix>")
        payload = child
    if payload is None:
        _schema_error(MISSING_ELEMENT,
                      "<tsp> requires <cities> or <matrix>")

    if payload.tag == "cities":
        _require_attrs(payload, ())
        entries = {}
        for child in payload:
            if child.tag != "city":
                _schema_error(UNKNOWN_ELEMENT,
                              f"unexpected <{child.tag}> inside <cities>")
            _require_attrs(child, ("id", "x", "y"))
            cid = _parse_int(child.attrib["id"], "<city id>")
            if cid in entries:
                _schema_error(BAD_CITY_ID, f"city id {cid} given twice")
            entries[cid] = (_parse_real(child.attrib["x"], f"city {cid} x"),
                            _parse_real(child.attrib["y"], f"city {cid} y"))
        n = len(entries)
        if sorted(entries) != list(range(n)):
            _schema_error(BAD_CITY_ID,
                          f"city ids must be exactly 0..{n - 1}")
        coords = tuple(entries[i] for i in range(n))
        return TourSpace(euclidean_distances(coords), coords=coords)

    _require_attrs(payload, ("n",))
    n = _parse_int(payload.attrib["n"], "<matrix n>")
    if n < 1:
        _schema_error(MATRIX_SHAPE, f"matrix size must be >= 1, got {n}")
    tokens = (payload.text or "").split()
    if len(tokens) != n * n:
        _schema_error(MATRIX_SHAPE,
                      f"matrix needs {n * n} entries, got {len(tokens)}")
    values = [_parse_real(tok, "<matrix> entry") for tok in tokens]
    dist = np.array(values).reshape(n, n)
    return TourSpace(dist)


def parse_problem_xml(text):
    """Strictly parse and validate one problem file; returns a Problem."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ProblemParseError([Diagnostic(
            MALFORMED_XML, f"line {line}, column {col}: {exc.msg}")]) from exc

    if root.tag != "problem":
        _schema_error(UNKNOWN_ELEMENT,
                      f"root element must be <problem>, got <{root.tag}>")
    _require_attrs(root, ("format-version",))
    version = _parse_int(root.attrib["format-version"], "format-version")
    if version != FORMAT_VERSION:
        _schema_error(UNSUPPORTED_VERSION,
                      f"format-version {version} is not supported "
                      f"(expected {FORMAT_VERSION})")

    name_elem = None
    space_elem = None
    for child in root:
        if child.tag == "name":
            if name_elem is not None:
                _schema_error(DUPLICATE_ELEMENT, "more than one <name>")
            name_elem = child
        elif child.tag in ("continuous", "tsp"):
            if space_elem is not None:
                _schema_error(DUPLICATE_ELEMENT,
                              "exactly one of <continuous> or <tsp> allowed")
            space_elem = child
        else:
            _schema_error(UNKNOWN_ELEMENT,
                          f"unexpected <{child.tag}> inside <problem>")
    if name_elem is None:
        _schema_error(MISSING_ELEMENT, "<problem> requires <name>")
    if space_elem is None:
        _schema_error(MISSING_ELEMENT,
                      "<problem> requires <continuous> or <tsp>")
    _require_attrs(name_elem, ())
    name = (name_elem.text or "").strip()
    if not name:
        raise ProblemValidationError(
            [Diagnostic(EMPTY_NAME, "problem name must be non-empty")])

    if space_elem.tag == "continuous":
        space, objective = _parse_continuous(space_elem)
        problem = Problem(name, space, objective)
    else:
        space = _parse_tsp(space_elem)
        problem = Problem(name, space)

    diagnostics = validate_problem(problem)
    if diagnostics:
        raise ProblemValidationError(diagnostics)
    return problem


def load_problem(path):
    with open(path, "rb") as fh:
        return parse_problem_xml(fh.read())


# ---------------------------------------------------------------------------
# serialization

def _real(x):
    return f"{float(x):.17g}"


def serialize_problem_xml(problem):
    """Canonical text form; byte-identical for equal problems."""
    lines = [f'<problem format-version="{FORMAT_VERSION}">',
             f"  <name>{escape(problem.name)}</name>"]
    space = problem.space
    if space.kind == "continuous":
        lines.append(f'  <continuous dimension="{space.dimension}">')
        lines.append("    <bounds>")
        for d in range(space.dimension):
            lines.append(f'      <dim index="{d}" '
                         f'lower={quoteattr(_real(space.lower[d]))} '
                         f'upper={quoteattr(_real(space.upper[d]))}/>')
        lines.append("    </bounds>")
        lines.append(f'    <objective builtin={quoteattr(problem.objective)}/>')
        lines.append("  </continuous>")
    else:
        lines.append("  <tsp>")
        if space.coords is not None:
            lines.append("    <cities>")
            for i, (x, y) in enumerate(space.coords):
                lines.append(f'      <city id="{i}" x={quoteattr(_real(x))} '
                             f'y={quoteattr(_real(y))}/>')
            lines.append("    </cities>")
        else:
            n = space.n
            flat = " ".join(_real(space.dist[i, j])
                            for i in range(n) for j in range(n))
            lines.append(f'    <matrix n="{n}">{flat}</matrix>')
        lines.append("  </tsp>")
    lines.append("</problem>")
    return "\n".join(lines) + "\n"


def save_problem(problem, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_problem_xml(problem))


def problems_equal(a, b):
    """Structural identity (the round-trip law's equality)."""
    if a.name != b.name or a.space.kind != b.space.kind:
        return False
    if a.space.kind == "continuous":
        return (a.objective == b.objective
                and a.space.dimension == b.space.dimension
                and bool(np.all(a.space.lower == b.space.lower))
                and bool(np.all(a.space.upper == b.space.upper)))
    if (a.space.coords is None) != (b.space.coords is None):
        return False
    if a.space.coords is not None and a.space.coords != b.space.coords:
        return False
    return (a.space.n == b.space.n
            and bool(np.all(a.space.dist == b.space.dist)))


# ---------------------------------------------------------------------------
# builtin catalog

CONTINUOUS_BOUNDS = {
    "sphere": 5.12,
    "rastrigin": 5.12,
    "rosenbrock": 5.0,
    "ackley": 32.768,
}

DEFAULT_DIMENSION = 10

_TSP_RAND_SIZES = (10, 11, 12)
_TSP_RAND_SEED_BASE = 1000  # generation seed is 1000 + n; frozen


def _square4_coords():
    return ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


def _circle8_coords():
    return tuple((math.cos(2.0 * math.pi * k / 8), math.sin(2.0 * math.pi * k / 8))
                 for k in range(8))


def _rand_coords(n):
    stream = make_stream(_TSP_RAND_SEED_BASE + n)
    return tuple((stream.random(), stream.random()) for _ in range(n))


def tsp_ids():
    return ["tsp-square4", "tsp-circle8"] + [
        f"tsp-rand{n}" for n in _TSP_RAND_SIZES]


def builtin_ids():
    return sorted(CONTINUOUS_BOUNDS) + tsp_ids()


def builtin_problem(problem_id, dimension=None):
    """One catalog instance. Continuous ids take a dimension (default 10);
    TSP ids take none."""
    if problem_id in CONTINUOUS_BOUNDS:
        dim = DEFAULT_DIMENSION if dimension is None else int(dimension)
        if dim < 1:
            raise UnknownProblemError(f"dimension must be >= 1, got {dim}")
        bound = CONTINUOUS_BOUNDS[problem_id]
        lower = np.full(dim, -bound)
        upper = np.full(dim, bound)
        return Problem(problem_id, ContinuousSpace(lower, upper), problem_id)
    if problem_id in tsp_ids():
        if dimension is not None:
            raise UnknownProblemError(
                f"{problem_id} is a TSP instance and takes no dimension")
        if problem_id == "tsp-square4":
            coords = _square4_coords()
        elif problem_id == "tsp-circle8":
            coords = _circle8_coords()
        else:
            n = int(problem_id.removeprefix("tsp-rand"))
            coords = _rand_coords(n)
        return Problem(problem_id,
                       TourSpace(euclidean_distances(coords), coords=coords))
    raise UnknownProblemError(
        f"unknown problem {problem_id!r}; catalog: {', '.join(builtin_ids())}")


def builtin_summary(problem_id):
    if problem_id in CONTINUOUS_BOUNDS:
        bound = CONTINUOUS_BOUNDS[problem_id]
        return {"id": problem_id, "kind": "continuous",
                "bounds": [-bound, bound],
                "default_dimension": DEFAULT_DIMENSION}
    problem = builtin_problem(problem_id)
    return {"id": problem_id, "kind": "tour", "nodes": problem.space.n}
