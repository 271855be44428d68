"""Built-in metrics and the JSON metric-definition format.

A metric file is one JSON object::

    {
      "name": "flrw_dust",
      "description": "optional one-liner",
      "signature": [-1, 1, 1, 1],
      "coordinates": ["t", "x", "y", "z"],
      "metric": {"0,0": "-1", "1,1": "x0^(4/3)", "2,2": "x0^(4/3)", "3,3": "x0^(4/3)"},
      "complex_structure": {"1,0": "1", "0,1": "-1"},
      "fluid": {"sigma": "(4/3)/(x0*x0)", "p": "0", "rho": ["1", "0", "0", "0"],
                "lambda": 0, "k": 1},
      "domain": [[1, 3], [-1, 1], [-1, 1], [-1, 1]],
      "expected": {"flat": false, "conformally_flat": true, "lambda": 0}
    }

``metric`` keys are ``"i,j"`` with ``i <= j``; omitted entries are zero.
``complex_structure`` keys are ``"i,j"`` for ``F^i_j``; omitted entries are
zero.  ``coordinates``, ``description``, ``complex_structure``, ``fluid``
and ``expected`` are optional.  Recognised ``expected`` keys: ``flat``,
``einstein``, ``conformally_flat``, ``kahler`` (booleans), ``r`` and
``lambda`` (numbers).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (DomainError, ParseError, SchemaError,
                     SignatureMismatchError, UnknownMetricError)
from .expr import Const, Expr, parse_expr
from .geometry import MetricStructure
from .relativity import NORMALIZATION_TOL, FluidState, velocity_norm

EXPECTED_BOOL_KEYS = ("flat", "einstein", "conformally_flat", "kahler")
EXPECTED_NUM_KEYS = ("r", "lambda")
_TOP_KEYS = {"name", "description", "signature", "coordinates", "metric",
             "complex_structure", "fluid", "domain", "expected"}
_ZERO = Const(0.0)


@dataclass
class CatalogEntry:
    metric: MetricStructure
    expected: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.metric.name

    @property
    def description(self) -> str:
        return self.metric.description

    @property
    def complex_structure(self):
        return self.metric.complex_structure

    @property
    def fluid(self):
        return self.metric.fluid

    def to_dict(self) -> dict:
        return entry_to_dict(self)


# -- loading ---------------------------------------------------------------

def _expr(text, where):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = repr(float(text))
    if not isinstance(text, str):
        raise SchemaError(f"{where}: expected an expression string, got {type(text).__name__}")
    try:
        return parse_expr(text)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}", exc.position) from None


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SchemaError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _index_pair(key, where):
    m = re.fullmatch(r"\s*([0-3])\s*,\s*([0-3])\s*", key)
    if m is None:
        raise SchemaError(f"{where}: key {key!r} is not of the form 'i,j' with i, j in 0..3")
    return int(m.group(1)), int(m.group(2))


def _matrix(obj, where, symmetric):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object of 'i,j' -> expression")
    out = np.full((4, 4), _ZERO, dtype=object)
    for key, text in obj.items():
        i, j = _index_pair(key, where)
        if symmetric and i > j:
            raise SchemaError(f"{where}: key {key!r} must have i <= j")
        e = _expr(text, f"{where}[{key!r}]")
        out[i, j] = e
        if symmetric:
            out[j, i] = e
    return out


def _check_signature(metric: MetricStructure, where):
    g = np.array([[e.evaluate(metric.center()) for e in row] for row in metric.components])
    eig = np.linalg.eigvalsh(g)
    if np.min(np.abs(eig)) <= 1e-12:
        raise SignatureMismatchError(f"{where}: metric is degenerate at the domain center")
    actual = sorted(int(s) for s in np.sign(eig))
    declared = sorted(metric.signature)
    if actual != declared:
        raise SignatureMismatchError(
            f"{where}: declared signature {list(metric.signature)} but the metric at the "
            f"domain center has eigenvalue signs {actual}")


def load_metric_dict(doc: dict, source: str = "<dict>") -> CatalogEntry:
    """Validate a parsed metric document and build its :class:`CatalogEntry`."""
    if not isinstance(doc, dict):
        raise SchemaError(f"{source}: top level must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SchemaError(f"{source}: unknown keys {sorted(unknown)}")
    for key in ("name", "signature", "metric", "domain"):
        if key not in doc:
            raise SchemaError(f"{source}: missing required key {key!r}")
    name = doc["name"]
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{source}: 'name' must be a non-empty string")

    sig = doc["signature"]
    if not (isinstance(sig, list) and len(sig) == 4 and all(s in (1, -1) and not isinstance(s, bool) for s in sig)):
        raise SchemaError(f"{source}: 'signature' must be an array of four +1/-1 entries")

    coords = doc.get("coordinates", ["x0", "x1", "x2", "x3"])
    if not (isinstance(coords, list) and len(coords) == 4 and all(isinstance(c, str) for c in coords)):
        raise SchemaError(f"{source}: 'coordinates' must be four strings")

    dom = doc["domain"]
    if not (isinstance(dom, list) and len(dom) == 4):
        raise SchemaError(f"{source}: 'domain' must be four [lo, hi] pairs")
    domain = []
    for i, pair in enumerate(dom):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(f"{source}: domain[{i}] must be a [lo, hi] pair")
        lo = _number(pair[0], f"{source}: domain[{i}][0]")
        hi = _number(pair[1], f"{source}: domain[{i}][1]")
        if not lo <= hi:
            raise SchemaError(f"{source}: domain[{i}] has lo > hi")
        domain.append((lo, hi))

    components = _matrix(doc["metric"], f"{source}: metric", symmetric=True)
    F = None
    if doc.get("complex_structure") is not None:
        F = _matrix(doc["complex_structure"], f"{source}: complex_structure", symmetric=False)

    fluid = None
    if doc.get("fluid") is not None:
        fluid = _load_fluid(doc["fluid"], f"{source}: fluid")

    expected = _load_expected(doc.get("expected", {}), f"{source}: expected")
    description = doc.get("description", "")
    if not isinstance(description, str):
        raise SchemaError(f"{source}: 'description' must be a string")

    metric = MetricStructure(name=name, components=components, signature=tuple(sig),
                             domain=tuple(domain), coordinates=tuple(coords),
                             complex_structure=F, fluid=fluid, description=description)
    try:
        _check_signature(metric, source)
        if fluid is not None:
            norm = velocity_norm(metric, fluid, metric.center())
            if abs(norm + 1.0) > NORMALIZATION_TOL:
                raise SchemaError(
                    f"{source}: fluid velocity has g(rho, rho) = {norm!r} at the domain center, expected -1")
    except DomainError as exc:
        raise SchemaError(f"{source}: cannot evaluate at the domain center: {exc}") from None
    return CatalogEntry(metric, expected, doc)


def _load_fluid(obj, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(obj) - {"sigma", "p", "rho", "lambda", "k"}
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("sigma", "p", "rho"):
        if key not in obj:
            raise SchemaError(f"{where}: missing {key!r}")
    rho = obj["rho"]
    if not (isinstance(rho, list) and len(rho) == 4):
        raise SchemaError(f"{where}: 'rho' must be four expressions")
    k = _number(obj.get("k", 1.0), f"{where}.k")
    if k == 0.0:
        raise SchemaError(f"{where}: gravitational constant k must be non-zero")
    return FluidState(
        sigma=_expr(obj["sigma"], f"{where}.sigma"),
        pressure=_expr(obj["p"], f"{where}.p"),
        rho=tuple(_expr(e, f"{where}.rho[{i}]") for i, e in enumerate(rho)),
        lam=_number(obj.get("lambda", 0.0), f"{where}.lambda"),
        k=k,
    )


def _load_expected(obj, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    out = {}
    for key, value in obj.items():
        if key in EXPECTED_BOOL_KEYS:
            if value is not None and not isinstance(value, bool):
                raise SchemaError(f"{where}.{key}: expected a boolean")
            out[key] = value
        elif key in EXPECTED_NUM_KEYS:
            out[key] = None if value is None else _number(value, f"{where}.{key}")
        else:
            raise SchemaError(f"{where}: unknown key {key!r}")
    return out


def load_metric_file(path) -> CatalogEntry:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read metric file: {exc.strerror or exc}", source=str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos, source=str(path)) from None
    return load_metric_dict(doc, str(path))


# -- serialisation ---------------------------------------------------------

def _matrix_to_dict(mat, symmetric):
    out = {}
    for i in range(4):
        for j in range(4):
            if symmetric and i > j:
                continue
            e = mat[i, j]
            if e == _ZERO:
                continue
            out[f"{i},{j}"] = e.to_text()
    return out


def entry_to_dict(entry: CatalogEntry) -> dict:
    m = entry.metric
    doc = {
        "name": m.name,
        "description": m.description,
        "signature": list(m.signature),
        "coordinates": list(m.coordinates),
        "metric": _matrix_to_dict(m.components, symmetric=True),
    }
    if m.complex_structure is not None:
        doc["complex_structure"] = _matrix_to_dict(m.complex_structure, symmetric=False)
    if m.fluid is not None:
        f = m.fluid
        doc["fluid"] = {"sigma": f.sigma.to_text(), "p": f.pressure.to_text(),
                        "rho": [e.to_text() for e in f.rho], "lambda": f.lam, "k": f.k}
    doc["domain"] = [list(d) for d in m.domain]
    if entry.expected:
        doc["expected"] = dict(entry.expected)
    return doc


def dump_metric_file(entry: CatalogEntry, path) -> None:
    Path(path).write_text(json.dumps(entry_to_dict(entry), indent=2) + "\n", encoding="utf-8")


# -- built-in catalog ------------------------------------------------------

def _num(v):
    return repr(float(v))


def _minkowski():
    return {
        "name": "minkowski",
        "description": "flat Lorentzian space-time, Cartesian chart",
        "signature": [-1, 1, 1, 1],
        "coordinates": ["t", "x", "y", "z"],
        "metric": {"0,0": "-1", "1,1": "1", "2,2": "1", "3,3": "1"},
        "fluid": {"sigma": "0", "p": "0", "rho": ["1", "0", "0", "0"], "lambda": 0, "k": 1},
        "domain": [[-1, 1]] * 4,
        "expected": {"flat": True, "einstein": True, "conformally_flat": True, "r": 0, "lambda": 0},
    }


def _euclidean():
    return {
        "name": "euclidean",
        "description": "flat Riemannian 4-space",
        "signature": [1, 1, 1, 1],
        "coordinates": ["x", "y", "z", "w"],
        "metric": {"0,0": "1", "1,1": "1", "2,2": "1", "3,3": "1"},
        "domain": [[-1, 1]] * 4,
        "expected": {"flat": True, "einstein": True, "conformally_flat": True, "r": 0},
    }


def _neutral_kahler_flat():
    return {
        "name": "neutral_kahler_flat",
        "description": "flat metric of signature (-,-,+,+) with a constant compatible complex structure",
        "signature": [-1, -1, 1, 1],
        "coordinates": ["u1", "v1", "u2", "v2"],
        "metric": {"0,0": "-1", "1,1": "-1", "2,2": "1", "3,3": "1"},
        "complex_structure": {"1,0": "1", "0,1": "-1", "3,2": "1", "2,3": "-1"},
        "domain": [[-1, 1]] * 4,
        "expected": {"flat": True, "einstein": True, "conformally_flat": True, "kahler": True, "r": 0},
    }


def _sphere4(a=1.0):
    a = float(a)
    if not a > 0:
        raise UnknownMetricError(f"sphere4 radius must be positive, got {a!r}")
    a2 = _num(a * a)
    return {
        "name": "sphere4" if a == 1.0 else f"sphere4(a={_num(a)})",
        "description": f"round 4-sphere of radius {_num(a)}, hyperspherical chart",
        "signature": [1, 1, 1, 1],
        "coordinates": ["chi1", "chi2", "chi3", "phi"],
        "metric": {
            "0,0": a2,
            "1,1": f"{a2}*sin(x0)^2",
            "2,2": f"{a2}*sin(x0)^2*sin(x1)^2",
            "3,3": f"{a2}*sin(x0)^2*sin(x1)^2*sin(x2)^2",
        },
        "domain": [[0.3, 2.8], [0.3, 2.8], [0.3, 2.8], [0.0, 6.0]],
        "expected": {"flat": False, "einstein": True, "conformally_flat": True, "r": 12.0 / (a * a)},
    }


def _de_sitter():
    return {
        "name": "de_sitter",
        "description": "de Sitter static patch, unit Hubble scale, empty space with lambda = 3",
        "signature": [-1, 1, 1, 1],
        "coordinates": ["t", "r", "theta", "phi"],
        "metric": {
            "0,0": "-(1 - x1^2)",
            "1,1": "1/(1 - x1^2)",
            "2,2": "x1^2",
            "3,3": "x1^2*sin(x2)^2",
        },
        "fluid": {"sigma": "0", "p": "0", "rho": ["1/sqrt(1 - x1^2)", "0", "0", "0"],
                  "lambda": 3, "k": 1},
        "domain": [[0.0, 1.0], [0.2, 0.8], [0.4, 2.7], [0.0, 6.0]],
        "expected": {"flat": False, "einstein": True, "conformally_flat": True, "r": 12, "lambda": 3},
    }


_FLRW_LAWS = {
    # scale factor a(t)^2, energy density, pressure (spatially flat, k = 1, lambda = 0)
    "dust": ("x0^(4/3)", "(4/3)/(x0*x0)", "0"),
    "linear": ("x0^2", "3/(x0*x0)", "-1/(x0*x0)"),
}


def _flrw(law="dust"):
    if law not in _FLRW_LAWS:
        raise UnknownMetricError(f"unknown FLRW law {law!r}; choose from {sorted(_FLRW_LAWS)}")
    a2, sigma, p = _FLRW_LAWS[law]
    scale = "t^(2/3)" if law == "dust" else "t"
    return {
        "name": "flrw" if law == "dust" else f"flrw(law={law})",
        "description": f"spatially flat FLRW, a = {scale}, comoving perfect fluid",
        "signature": [-1, 1, 1, 1],
        "coordinates": ["t", "x", "y", "z"],
        "metric": {"0,0": "-1", "1,1": a2, "2,2": a2, "3,3": a2},
        "fluid": {"sigma": sigma, "p": p, "rho": ["1", "0", "0", "0"], "lambda": 0, "k": 1},
        "domain": [[1.0, 3.0], [-1, 1], [-1, 1], [-1, 1]],
        "expected": {"flat": False, "einstein": False, "conformally_flat": True, "lambda": 0},
    }


def _schwarzschild(m=1.0):
    m = float(m)
    if not m > 0:
        raise UnknownMetricError(f"schwarzschild mass must be positive, got {m!r}")
    two_m = _num(2 * m)
    return {
        "name": "schwarzschild" if m == 1.0 else f"schwarzschild(m={_num(m)})",
        "description": f"Schwarzschild exterior, mass {_num(m)}, Schwarzschild chart",
        "signature": [-1, 1, 1, 1],
        "coordinates": ["t", "r", "theta", "phi"],
        "metric": {
            "0,0": f"-(1 - {two_m}/x1)",
            "1,1": f"1/(1 - {two_m}/x1)",
            "2,2": "x1^2",
            "3,3": "x1^2*sin(x2)^2",
        },
        "domain": [[0.0, 1.0], [3 * m, 10 * m], [0.4, 2.7], [0.0, 6.0]],
        "expected": {"flat": False, "einstein": True, "conformally_flat": False, "r": 0},
    }


def _fubini_study():
    D = "(1 + x0^2 + x1^2 + x2^2 + x3^2)"
    D2 = f"{D}^2"
    a11 = f"1/{D} - (x0^2 + x1^2)/{D2}"
    a22 = f"1/{D} - (x2^2 + x3^2)/{D2}"
    a12 = f"-(x0*x2 + x1*x3)/{D2}"
    b12 = f"(x1*x2 - x0*x3)/{D2}"
    return {
        "name": "fubini_study",
        "description": "Fubini-Study metric on CP^2 in an affine chart, with its complex structure",
        "signature": [1, 1, 1, 1],
        "coordinates": ["u1", "v1", "u2", "v2"],
        "metric": {
            "0,0": a11, "1,1": a11, "2,2": a22, "3,3": a22,
            "0,2": a12, "1,3": a12,
            "0,3": b12, "1,2": f"-({b12})",
        },
        "complex_structure": {"1,0": "1", "0,1": "-1", "3,2": "1", "2,3": "-1"},
        "domain": [[-1, 1]] * 4,
        "expected": {"flat": False, "einstein": True, "conformally_flat": False, "kahler": True, "r": 24},
    }


_BUILTINS = {
    "minkowski": _minkowski,
    "euclidean": _euclidean,
    "neutral_kahler_flat": _neutral_kahler_flat,
    "sphere4": _sphere4,
    "de_sitter": _de_sitter,
    "flrw": _flrw,
    "schwarzschild": _schwarzschild,
    "fubini_study": _fubini_study,
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_document(name: str, **params) -> dict:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownMetricError(
            f"unknown metric {name!r}; builtins are {', '.join(BUILTIN_NAMES)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise UnknownMetricError(f"bad parameters for {name!r}: {exc}") from None


def builtin(name: str, **params) -> CatalogEntry:
    """Catalog entry for a built-in metric, e.g. ``builtin("sphere4", a=2.0)``."""
    return load_metric_dict(builtin_document(name, **params), f"builtin:{name}")


_REF = re.compile(r"^([a-z_0-9]+)(?:\((.*)\))?$")


def parse_builtin_ref(ref: str):
    """Split ``"sphere4(a=2)"`` into ``("sphere4", {"a": 2.0})``; None if not builtin-shaped."""
    m = _REF.match(ref.strip())
    if m is None or m.group(1) not in _BUILTINS:
        return None
    params = {}
    if m.group(2):
        for item in m.group(2).split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise UnknownMetricError(f"parameter {item!r} in {ref!r} is not key=value")
            key, value = key.strip(), value.strip()
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return m.group(1), params


def resolve(ref: str) -> CatalogEntry:
    """A builtin reference (``"de_sitter"``, ``"sphere4(a=2)"``) or a metric file path."""
    parsed = parse_builtin_ref(ref)
    if parsed is not None and not Path(ref).exists():
        return builtin(parsed[0], **parsed[1])
    return load_metric_file(ref)


def rotating_structure() -> np.ndarray:
    """A point-dependent almost complex structure on flat Euclidean space that is not parallel.

    The constant structure pairing (x0, x2) and (x1, x3) is conjugated by a
    rotation of the (x2, x3)-plane through the angle x0.
    """
    c, s = parse_expr("cos(x0)"), parse_expr("sin(x0)")
    R = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, c, -s], [0, 0, s, c]], dtype=object)
    J = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=object)
    out = np.full((4, 4), _ZERO, dtype=object)
    for i in range(4):
        for j in range(4):
            terms = []
            for a in range(4):
                for b in range(4):
                    coef = J[a, b]
                    if coef == 0 or _is_zero(R[i, a]) or _is_zero(R[j, b]):
                        continue
                    terms.append(_times(_times(R[i, a], R[j, b]), coef))
            if terms:
                total = terms[0]
                for t in terms[1:]:
                    total = total + t
                out[i, j] = total if isinstance(total, Expr) else Const(float(total))
    return out


def _is_zero(v):
    return not isinstance(v, Expr) and v == 0


def _times(u, v):
    if not isinstance(u, Expr) and not isinstance(v, Expr):
        return u * v
    if not isinstance(u, Expr):
        u, v = v, u
    if not isinstance(v, Expr):
        if v == 1:
            return u
        if v == -1:
            return -u
    return u * v
