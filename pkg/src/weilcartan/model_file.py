"""JSON model files: a Lie algebra, an operation on a free graded-commutative
algebra, and optional connections, reduction data and invariant polynomials.

Indices in files are 1-based.  Layout::

    {
      "name": "circle",
      "lie_algebra": {"dim": 1, "basis": ["e1"], "structure_constants": [[i, j, k, value], ...]},
      "operation": {"generators": [{"name": "x", "degree": 1}],
                    "d": {"x": "0"}, "L": [{"x": "0"}], "I": [{"x": "1"}]},
      "connections": {"std": ["x"]},
      "reduction": {"ideal": [1], "theta": ["x"], "alt_theta": [["..."]]},
      "polynomials": {"c1": "Om1"}
    }

``structure_constants`` lists C^i_{jk} for j < k and is antisymmetrized;
``structure_constants_raw`` is taken literally (no completion), so broken
fixtures can be expressed.  Instead of explicit generators, ``operation`` may
be ``{"weil": {"theta": [...], "omega": [...]}}``, the Weil algebra of the Lie
algebra itself.  Missing d/L/I images default to 0.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from .graded_algebra import Element, GradedAlgebra, Generator, ParseError
from .lie import IdealSpec, LieAlgebraData, LieViolation, validate_lie
from .operation import OperationSpec
from .weil import build_weil


class ModelError(ValueError):
    """Malformed model file; carries the file and, when known, the line."""

    def __init__(self, msg: str, path: str = "", line: Optional[int] = None):
        where = path + (f":{line}" if line else "")
        super().__init__(f"{where}: {msg}" if where else msg)
        self.path = path
        self.line = line


@dataclass(eq=False)
class Model:
    name: str
    path: str
    digest: str
    lie: LieAlgebraData
    lie_violation: Optional[LieViolation]
    op: Optional[OperationSpec]
    connections: Dict[str, List[Element]] = field(default_factory=dict)
    ideal: Optional[IdealSpec] = None
    reduction_theta: Optional[List[Element]] = None
    alt_theta: List[List[Element]] = field(default_factory=list)
    polynomials: Dict[str, str] = field(default_factory=dict)


class _Loader:
    def __init__(self, path: str, text: str):
        self.path = path
        self.text = text

    def fail(self, msg: str, needle: Optional[str] = None):
        line = None
        if needle is not None:
            pos = self.text.find(json.dumps(needle))
            if pos >= 0:
                line = self.text.count("\n", 0, pos) + 1
        raise ModelError(msg, self.path, line)

    def get(self, obj, key, kind, where):
        if not isinstance(obj, dict) or key not in obj:
            self.fail(f"missing field {where}.{key}")
        v = obj[key]
        if not isinstance(v, kind):
            self.fail(f"field {where}.{key} has the wrong type", key)
        return v

    def element(self, A: GradedAlgebra, s, where: str) -> Element:
        if isinstance(s, (int, float)) and not isinstance(s, bool):
            s = str(s)
        if not isinstance(s, str):
            self.fail(f"{where}: expected an element string")
        try:
            return A.parse(s)
        except (ParseError, KeyError, ValueError) as e:
            self.fail(f"{where}: {e}", s)

    def index(self, v, dim: int, where: str) -> int:
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= dim:
            self.fail(f"{where}: index {v!r} out of range 1..{dim}")
        return v - 1

    def lie(self, spec) -> LieAlgebraData:
        dim = self.get(spec, "dim", int, "lie_algebra")
        if dim < 0:
            self.fail("lie_algebra.dim must be non-negative")
        names = spec.get("basis", [])
        if names and (len(names) != dim or not all(isinstance(x, str) for x in names)):
            self.fail("lie_algebra.basis must list dim names")
        raw = "structure_constants_raw" in spec
        entries = spec.get("structure_constants_raw" if raw else "structure_constants", [])
        C = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for e in entries:
            if not isinstance(e, list) or len(e) != 4:
                self.fail("structure constant entries are [i, j, k, value]")
            i, j, k = (self.index(x, dim, "structure constant") for x in e[:3])
            try:
                v = Fraction(str(e[3]))
            except (ValueError, ZeroDivisionError):
                self.fail(f"bad structure constant value {e[3]!r}")
            C[i][j][k] += v
            if not raw:
                if j == k:
                    self.fail(f"structure constant C^{i + 1}_({j + 1}{k + 1}) has equal lower indices")
                C[i][k][j] -= v
        return LieAlgebraData(dim, C, tuple(names))

    def operation(self, spec, lie: LieAlgebraData, name: str) -> OperationSpec:
        if "weil" in spec:
            w = spec["weil"]
            theta = w.get("theta") if isinstance(w, dict) else None
            omega = w.get("omega") if isinstance(w, dict) else None
            for names in (theta, omega):
                if names is not None and (not isinstance(names, list) or len(names) != lie.dim):
                    self.fail("operation.weil names must list one name per basis element")
            W = build_weil(lie, theta, omega)
            W.operation.name = name
            return W.operation
        gens = self.get(spec, "generators", list, "operation")
        pairs = []
        for g in gens:
            nm = self.get(g, "name", str, "generator")
            deg = self.get(g, "degree", int, "generator")
            pairs.append(Generator(nm, deg))
        try:
            A = GradedAlgebra(pairs)
        except ValueError as e:
            self.fail(f"operation.generators: {e}")

        def images(block, where):
            if block is None:
                block = {}
            if not isinstance(block, dict):
                self.fail(f"{where} must map generator names to element strings")
            out = [A.zero()] * A.ngens
            for key, s in block.items():
                if key not in A.names:
                    self.fail(f"{where}: unknown generator {key!r}", key)
                out[A.index(key)] = self.element(A, s, f"{where}.{key}")
            return out

        def family(key):
            block = spec.get(key, [])
            if not isinstance(block, list) or len(block) not in (0, lie.dim):
                self.fail(f"operation.{key} must list one image map per basis element")
            if not block:
                block = [{}] * lie.dim
            return [images(b, f"operation.{key}[{i + 1}]") for i, b in enumerate(block)]

        d, L, I = images(spec.get("d"), "operation.d"), family("L"), family("I")
        try:
            return OperationSpec.from_images(A, lie, d, L, I, name)
        except ValueError as e:
            self.fail(f"operation: {e}")

    def element_list(self, A, items, where, length) -> List[Element]:
        if not isinstance(items, list) or len(items) != length:
            self.fail(f"{where} must list {length} element strings")
        return [self.element(A, s, f"{where}[{i + 1}]") for i, s in enumerate(items)]


def load_model(path) -> Model:
    path = str(path)
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ModelError(f"cannot read model file: {e.strerror}", path) from None
    text = raw.decode("utf-8", errors="replace")
    ld = _Loader(path, text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"invalid JSON: {e.msg}", path, e.lineno) from None
    if not isinstance(doc, dict):
        ld.fail("top level must be an object")
    name = doc.get("name", Path(path).stem)
    lie = ld.lie(ld.get(doc, "lie_algebra", dict, "model"))
    violation = validate_lie(lie)
    model = Model(name, path, hashlib.sha256(raw).hexdigest(), lie, violation, None)
    if violation is not None:
        return model
    op = ld.operation(ld.get(doc, "operation", dict, "model"), lie, name)
    model.op = op
    A = op.algebra
    conns = doc.get("connections", {})
    if not isinstance(conns, dict):
        ld.fail("connections must map names to element lists")
    for cname, items in conns.items():
        model.connections[cname] = ld.element_list(A, items, f"connections.{cname}", lie.dim)
    red = doc.get("reduction")
    if red is not None:
        ideal = ld.get(red, "ideal", list, "reduction")
        idx = [ld.index(v, lie.dim, "reduction.ideal") for v in ideal]
        if len(set(idx)) != len(idx):
            ld.fail("reduction.ideal repeats an index")
        model.ideal = IdealSpec(tuple(idx))
        order = sorted(idx)
        # theta components are listed in the order of the ideal indices as written
        theta = ld.element_list(A, ld.get(red, "theta", list, "reduction"), "reduction.theta", len(idx))
        model.reduction_theta = [theta[idx.index(i)] for i in order]
        for a, alt in enumerate(red.get("alt_theta", [])):
            t = ld.element_list(A, alt, f"reduction.alt_theta[{a + 1}]", len(idx))
            model.alt_theta.append([t[idx.index(i)] for i in order])
    polys = doc.get("polynomials", {})
    if not isinstance(polys, dict) or not all(isinstance(v, str) for v in polys.values()):
        ld.fail("polynomials must map names to element strings")
    model.polynomials = dict(polys)
    return model
