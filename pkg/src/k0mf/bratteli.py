"""Document ingestion and canonical serialization.

JSON is the single source format. A document carries exactly one of

* ``system``: an explicit inductive system (stage ranks, connecting
  maps, order unit, optional stationary tail matrix),
* ``diagram``: a Bratteli diagram (vertex counts per level, edge
  multiplicity matrices, optional stationary flag), or
* ``finite_system``: a finite point set with permutation generators,

plus an ``action`` block for the first two kinds (a finite system
induces its own action by dualization). Integers may be written as JSON
numbers or as decimal strings (for very large values); floats are
rejected everywhere. Serialization is canonical: sorted keys, two-space
indent, plain integers, trailing newline, so golden files and
certificates are byte-stable.

Validation errors carry the JSON path of the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .dimgroup import InductiveSystem
from .exactlinalg import IntMatrix
from .kaction import K0Action, StageMap, StationaryRule

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """Schema or invariant violation, with the JSON path that caused it."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


@dataclass(frozen=True)
class Metadata:
    name: str | None = None
    description: str | None = None


@dataclass(frozen=True)
class BratteliDiagram:
    """Vertex counts per level and edge multiplicity matrices.

    ``edge_matrices[k]`` has shape (counts[k+1] x counts[k]); entry
    (w, v) is the number of edges from vertex v at level k to vertex w
    at level k+1. With the stationary flag, one extra square matrix is
    appended and repeats forever. Every vertex must emit at least one
    edge (no zero columns).
    """

    vertex_counts: tuple[int, ...]
    edge_matrices: tuple[IntMatrix, ...]
    stationary: bool = False

    @property
    def levels(self) -> int:
        return len(self.vertex_counts)

    def __post_init__(self) -> None:
        counts = self.vertex_counts
        mats = self.edge_matrices
        if not counts or any(c < 1 for c in counts):
            raise ValueError("vertex counts must be positive")
        expected = len(counts) - 1 + (1 if self.stationary else 0)
        if len(mats) != expected:
            raise ValueError(
                f"expected {expected} edge matrices for {len(counts)} levels"
                f"{' with a stationary tail' if self.stationary else ''}, got {len(mats)}"
            )
        shapes = [(counts[k + 1], counts[k]) for k in range(len(counts) - 1)]
        if self.stationary:
            shapes.append((counts[-1], counts[-1]))
        for k, (m, shape) in enumerate(zip(mats, shapes)):
            if (m.rows, m.cols) != shape:
                raise ValueError(f"edge matrix {k} has shape {m.rows}x{m.cols}, expected {shape[0]}x{shape[1]}")
            if not m.is_nonnegative():
                raise ValueError(f"edge matrix {k} has a negative multiplicity")
            for col in range(m.cols):
                if all(m.at(row, col) == 0 for row in range(m.rows)):
                    raise ValueError(f"edge matrix {k} has a zero column ({col}); every vertex must emit edges")


@dataclass(frozen=True)
class FiniteSystem:
    """A finite set {1..points} with one permutation per generator."""

    points: int
    permutations: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.points < 1:
            raise ValueError("need at least one point")
        if not self.permutations:
            raise ValueError("need at least one generator permutation")
        for i, perm in enumerate(self.permutations):
            if sorted(perm) != list(range(1, self.points + 1)):
                raise ValueError(f"permutation {i} is not a bijection of 1..{self.points}")


@dataclass(frozen=True)
class SystemDocument:
    schema_version: int
    metadata: Metadata
    kind: str  # "system" | "diagram" | "finite_system"
    system: InductiveSystem | None = None
    diagram: BratteliDiagram | None = None
    finite_system: FiniteSystem | None = None
    action: K0Action | None = None

    def resolve(self) -> tuple[InductiveSystem, K0Action]:
        """The inductive system and action the document denotes."""
        if self.kind == "system":
            assert self.system is not None and self.action is not None
            return self.system, self.action
        if self.kind == "diagram":
            assert self.diagram is not None and self.action is not None
            return diagram_to_system(self.diagram), self.action
        assert self.finite_system is not None
        return finite_system_to_k0(self.finite_system)


def diagram_to_system(diagram: BratteliDiagram) -> InductiveSystem:
    """Stage ranks are the vertex counts, connecting maps the edge
    matrices, and the unit is the all-ones vector at level 0 (the
    diagram presents a unital algebra whose top vertices each carry a
    summand of the unit)."""
    counts = diagram.vertex_counts
    mats = diagram.edge_matrices
    tail = None
    prefix = mats
    if diagram.stationary:
        tail = mats[-1]
        prefix = mats[:-1]
    return InductiveSystem(
        stage_ranks=counts,
        connecting_maps=prefix,
        unit=(1,) * counts[0],
        stationary_tail=tail,
    )


def permutation_matrix(perm: tuple[int, ...]) -> IntMatrix:
    """Matrix sending basis vector z to basis vector perm(z).

    This is the stage realization of the dual action f |-> f o s^{-1}
    on integer-valued functions: the indicator of a point moves with
    the point.
    """
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for z in range(n):
        rows[perm[z] - 1][z] = 1
    return IntMatrix.from_rows(rows)


def finite_system_to_k0(fs: FiniteSystem) -> tuple[InductiveSystem, K0Action]:
    """Dualize a finite transformation system to K0 data.

    The system is the constant one on Z^points with an identity tail
    and all-ones unit; each generator acts by its permutation matrix,
    with the transpose (the inverse permutation's matrix) as inverse.
    """
    n = fs.points
    ident = IntMatrix.identity(n)
    system = InductiveSystem(
        stage_ranks=(n,),
        connecting_maps=(),
        unit=(1,) * n,
        stationary_tail=ident,
    )
    rules = []
    for perm in fs.permutations:
        mat = permutation_matrix(perm)
        rules.append(StationaryRule(0, mat, mat.transpose()))
    action = K0Action(
        generators=len(fs.permutations),
        forward=tuple(() for _ in fs.permutations),
        inverse=tuple(() for _ in fs.permutations),
        stationary=tuple(rules),
    )
    return system, action


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _reject_float(_: str) -> Any:
    raise DocumentError("$", "floating-point numbers are not allowed")


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise DocumentError(path, "expected an object")
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(path, "expected an array")
    return value


def _expect_int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise DocumentError(path, "expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise DocumentError(path, f"not an integer: {value!r}") from None
    raise DocumentError(path, "expected an integer (number or decimal string)")


def _int_vector(value: Any, path: str) -> tuple[int, ...]:
    return tuple(_expect_int(x, f"{path}[{i}]") for i, x in enumerate(_expect_list(value, path)))


def _int_matrix(value: Any, path: str) -> IntMatrix:
    rows = [_int_vector(row, f"{path}[{i}]") for i, row in enumerate(_expect_list(value, path))]
    if not rows:
        raise DocumentError(path, "matrix needs at least one row")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DocumentError(f"{path}[{i}]", "ragged matrix row")
    return IntMatrix.from_rows(rows)


def _no_extra_keys(obj: dict, allowed: set[str], path: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise DocumentError(f"{path}.{extra[0]}", "unknown field")


def _parse_metadata(obj: Any, path: str) -> Metadata:
    if obj is None:
        return Metadata()
    obj = _expect_object(obj, path)
    _no_extra_keys(obj, {"name", "description"}, path)
    name = obj.get("name")
    description = obj.get("description")
    for key, value in (("name", name), ("description", description)):
        if value is not None and not isinstance(value, str):
            raise DocumentError(f"{path}.{key}", "expected a string")
    return Metadata(name, description)


def _parse_system(obj: Any, path: str) -> InductiveSystem:
    obj = _expect_object(obj, path)
    _no_extra_keys(obj, {"stage_ranks", "connecting_maps", "unit", "stationary"}, path)
    for key in ("stage_ranks", "connecting_maps", "unit"):
        if key not in obj:
            raise DocumentError(f"{path}.{key}", "missing field")
    ranks = _int_vector(obj["stage_ranks"], f"{path}.stage_ranks")
    maps = tuple(
        _int_matrix(m, f"{path}.connecting_maps[{k}]")
        for k, m in enumerate(_expect_list(obj["connecting_maps"], f"{path}.connecting_maps"))
    )
    unit = _int_vector(obj["unit"], f"{path}.unit")
    tail = obj.get("stationary")
    if tail is True:
        # boolean sugar: the last connecting map repeats forever
        if not maps:
            raise DocumentError(f"{path}.stationary", "stationary flag needs a connecting map to repeat")
        tail_matrix: IntMatrix | None = maps[-1]
        maps = maps[:-1]
    elif tail is False or tail is None:
        tail_matrix = None
    else:
        tail_matrix = _int_matrix(tail, f"{path}.stationary")
    try:
        return InductiveSystem(ranks, maps, unit, tail_matrix)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def _parse_diagram(obj: Any, path: str) -> BratteliDiagram:
    obj = _expect_object(obj, path)
    _no_extra_keys(obj, {"vertex_counts", "edge_matrices", "stationary"}, path)
    for key in ("vertex_counts", "edge_matrices"):
        if key not in obj:
            raise DocumentError(f"{path}.{key}", "missing field")
    counts = _int_vector(obj["vertex_counts"], f"{path}.vertex_counts")
    mats = []
    for k, m in enumerate(_expect_list(obj["edge_matrices"], f"{path}.edge_matrices")):
        mat = _int_matrix(m, f"{path}.edge_matrices[{k}]")
        if not mat.is_nonnegative():
            bad = next(
                (r, c) for r in range(mat.rows) for c in range(mat.cols) if mat.at(r, c) < 0
            )
            raise DocumentError(
                f"{path}.edge_matrices[{k}][{bad[0]}][{bad[1]}]",
                f"negative edge multiplicity {mat.at(*bad)}",
            )
        mats.append(mat)
    stationary = obj.get("stationary", False)
    if not isinstance(stationary, bool):
        raise DocumentError(f"{path}.stationary", "expected a boolean")
    try:
        return BratteliDiagram(counts, tuple(mats), stationary)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def _parse_finite_system(obj: Any, path: str) -> FiniteSystem:
    obj = _expect_object(obj, path)
    _no_extra_keys(obj, {"points", "permutations"}, path)
    for key in ("points", "permutations"):
        if key not in obj:
            raise DocumentError(f"{path}.{key}", "missing field")
    points = _expect_int(obj["points"], f"{path}.points")
    perms = tuple(
        _int_vector(p, f"{path}.permutations[{i}]")
        for i, p in enumerate(_expect_list(obj["permutations"], f"{path}.permutations"))
    )
    try:
        return FiniteSystem(points, perms)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def _parse_stage_map(obj: Any, path: str) -> StageMap:
    obj = _expect_object(obj, path)
    _no_extra_keys(obj, {"from_stage", "to_stage", "matrix"}, path)
    for key in ("from_stage", "to_stage", "matrix"):
        if key not in obj:
            raise DocumentError(f"{path}.{key}", "missing field")
    try:
        return StageMap(
            _expect_int(obj["from_stage"], f"{path}.from_stage"),
            _expect_int(obj["to_stage"], f"{path}.to_stage"),
            _int_matrix(obj["matrix"], f"{path}.matrix"),
        )
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def _parse_action(obj: Any, path: str) -> K0Action:
    obj = _expect_object(obj, path)
    _no_extra_keys(obj, {"generators", "forward", "inverse", "stationary"}, path)
    for key in ("generators", "forward", "inverse"):
        if key not in obj:
            raise DocumentError(f"{path}.{key}", "missing field")
    generators = _expect_int(obj["generators"], f"{path}.generators")

    def families(key: str) -> tuple[tuple[StageMap, ...], ...]:
        outer = _expect_list(obj[key], f"{path}.{key}")
        return tuple(
            tuple(
                _parse_stage_map(sm, f"{path}.{key}[{j}][{k}]")
                for k, sm in enumerate(_expect_list(fam, f"{path}.{key}[{j}]"))
            )
            for j, fam in enumerate(outer)
        )

    stationary = None
    if obj.get("stationary") is not None:
        rules = []
        for j, rule in enumerate(_expect_list(obj["stationary"], f"{path}.stationary")):
            rule = _expect_object(rule, f"{path}.stationary[{j}]")
            _no_extra_keys(rule, {"shift", "forward", "inverse"}, f"{path}.stationary[{j}]")
            for key in ("shift", "forward", "inverse"):
                if key not in rule:
                    raise DocumentError(f"{path}.stationary[{j}].{key}", "missing field")
            try:
                rules.append(
                    StationaryRule(
                        _expect_int(rule["shift"], f"{path}.stationary[{j}].shift"),
                        _int_matrix(rule["forward"], f"{path}.stationary[{j}].forward"),
                        _int_matrix(rule["inverse"], f"{path}.stationary[{j}].inverse"),
                    )
                )
            except ValueError as exc:
                raise DocumentError(f"{path}.stationary[{j}]", str(exc)) from None
        stationary = tuple(rules)
    try:
        return K0Action(generators, families("forward"), families("inverse"), stationary)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def parse(data: bytes | str) -> SystemDocument:
    """Parse and fully validate a document; raises DocumentError."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError("$", f"not UTF-8: {exc}") from None
    try:
        raw = json.loads(
            data,
            parse_float=_reject_float,
            parse_constant=lambda name: _reject_float(name),
        )
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"invalid JSON: {exc}") from None
    raw = _expect_object(raw, "$")
    _no_extra_keys(raw, {"schema_version", "metadata", "system", "diagram", "finite_system", "action"}, "$")
    if "schema_version" not in raw:
        raise DocumentError("$.schema_version", "missing field")
    version = _expect_int(raw["schema_version"], "$.schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError("$.schema_version", f"unsupported version {version}")
    metadata = _parse_metadata(raw.get("metadata"), "$.metadata")
    kinds = [k for k in ("system", "diagram", "finite_system") if k in raw]
    if len(kinds) != 1:
        raise DocumentError("$", "document must carry exactly one of system, diagram, finite_system")
    kind = kinds[0]
    system = diagram = finite = action = None
    if kind == "system":
        system = _parse_system(raw["system"], "$.system")
    elif kind == "diagram":
        diagram = _parse_diagram(raw["diagram"], "$.diagram")
    else:
        finite = _parse_finite_system(raw["finite_system"], "$.finite_system")
    if kind == "finite_system":
        if "action" in raw:
            raise DocumentError("$.action", "finite_system documents induce their own action")
    else:
        if "action" not in raw:
            raise DocumentError("$.action", "missing field")
        action = _parse_action(raw["action"], "$.action")
    doc = SystemDocument(version, metadata, kind, system, diagram, finite, action)
    try:
        doc.resolve()
    except ValueError as exc:
        raise DocumentError(f"$.{kind}", str(exc)) from None
    return doc


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _matrix_payload(m: IntMatrix) -> list[list[int]]:
    return m.to_rows()


def _system_payload(system: InductiveSystem) -> dict:
    payload: dict[str, Any] = {
        "stage_ranks": list(system.stage_ranks),
        "connecting_maps": [_matrix_payload(m) for m in system.connecting_maps],
        "unit": list(system.unit),
    }
    if system.stationary_tail is not None:
        payload["stationary"] = _matrix_payload(system.stationary_tail)
    return payload


def _action_payload(action: K0Action) -> dict:
    def families(fams: tuple[tuple[StageMap, ...], ...]) -> list:
        return [
            [
                {"from_stage": sm.from_stage, "to_stage": sm.to_stage, "matrix": _matrix_payload(sm.matrix)}
                for sm in fam
            ]
            for fam in fams
        ]

    payload: dict[str, Any] = {
        "generators": action.generators,
        "forward": families(action.forward),
        "inverse": families(action.inverse),
    }
    if action.stationary is not None:
        payload["stationary"] = [
            {"shift": rule.shift, "forward": _matrix_payload(rule.forward), "inverse": _matrix_payload(rule.inverse)}
            for rule in action.stationary
        ]
    return payload


def document_payload(doc: SystemDocument) -> dict:
    payload: dict[str, Any] = {"schema_version": doc.schema_version}
    meta: dict[str, str] = {}
    if doc.metadata.name is not None:
        meta["name"] = doc.metadata.name
    if doc.metadata.description is not None:
        meta["description"] = doc.metadata.description
    if meta:
        payload["metadata"] = meta
    if doc.kind == "system":
        assert doc.system is not None
        payload["system"] = _system_payload(doc.system)
    elif doc.kind == "diagram":
        assert doc.diagram is not None
        payload["diagram"] = {
            "vertex_counts": list(doc.diagram.vertex_counts),
            "edge_matrices": [_matrix_payload(m) for m in doc.diagram.edge_matrices],
            "stationary": doc.diagram.stationary,
        }
    else:
        assert doc.finite_system is not None
        payload["finite_system"] = {
            "points": doc.finite_system.points,
            "permutations": [list(p) for p in doc.finite_system.permutations],
        }
    if doc.action is not None:
        payload["action"] = _action_payload(doc.action)
    return payload


def canonical_json_bytes(payload: Any) -> bytes:
    """Canonical encoding: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode("utf-8")


def serialize(doc: SystemDocument) -> bytes:
    """Canonical bytes; parse(serialize(doc)) structurally equals doc."""
    return canonical_json_bytes(document_payload(doc))
