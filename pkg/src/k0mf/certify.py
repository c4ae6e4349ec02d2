"""Decision engines for the K0 finiteness criteria.

Two searches drive everything:

* ``find_positive_coboundary`` looks for a nonzero entrywise-nonnegative
  element of a finite-stage coboundary lattice. A hit is packaged as a
  Witness (preimages, value, stage, height) and re-verified exactly
  before it is returned; it certifies that the positive cone meets the
  coboundary subgroup nontrivially, which refutes stable finiteness of
  the crossed product. A miss is only a statement about the parameter
  box searched, never a proof.

* ``find_invariant_state`` looks for an integer functional on a stage
  lattice that is invariant under the requested words on the requested
  elements, positive on the order unit, and strictly positive on the
  nonzero requested elements. The existence question is decided by an
  exact rational feasibility program over the integer kernel of the
  invariance constraints; strictness is encoded as ">= 1", which is
  valid because the constraint functionals are homogeneous in the
  unknown. The returned certificate re-verifies exactly.

The two are mutually exclusive by design: if a witness with value x and
preimages g_j exists, any functional that is invariant on the positive
and negative parts of every g_j must vanish on x, so no certificate
faithful on x can exist at any stage. ``exclusion_sets`` builds the
element/word sets realizing that test for a discovered witness.

Searches scan the (target stage, source stage, word length) grid in
lexicographic order and break remaining ties by least height, then
earliest leading support, then lexicographic order, so results are
deterministic and certificates byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterator, Sequence

from .dimgroup import (
    InductiveSystem,
    LimitElement,
    StageRangeError,
    is_positive,
    is_zero,
    push,
)
from .exactlinalg import (
    Feasible,
    Infeasible,
    IntMatrix,
    LinearProgram,
    enumerate_lattice_points,
    integer_kernel,
    lp_feasible,
    solve_in_lattice,
)
from .kaction import K0Action, Word, apply_word, coboundary, coboundary_stage_lattice


@dataclass(frozen=True)
class SearchParams:
    stage_max: int = 4
    word_length: int = 1
    height_bound: int = 16

    def __post_init__(self) -> None:
        if self.stage_max < 0 or self.word_length < 1 or self.height_bound < 1:
            raise ValueError("bad search parameters")


@dataclass(frozen=True)
class Witness:
    """A positive-coboundary certificate.

    ``value`` equals the coboundary of ``preimages`` pushed to
    ``positive_at_stage``, where it is entrywise nonnegative and not the
    zero vector. ``nonzero_mode`` records how "nonzero in the limit" was
    established: "limit" when injectivity from the reporting stage is
    certified, "horizon" when the value merely stays nonzero at every
    stage checked.
    """

    preimages: tuple[LimitElement, ...]
    value: LimitElement
    positive_at_stage: int
    height: int
    nonzero_mode: str
    nonzero_stage: int
    source_stage: int
    target_stage: int
    word_length: int


@dataclass(frozen=True)
class StateCertificate:
    """An integer functional on a stage lattice realizing the local
    invariant-state data for the element set and word set recorded."""

    stage: int
    functional: tuple[int, ...]
    elements: tuple[LimitElement, ...]
    words: tuple[Word, ...]
    unit_value: int
    element_values: tuple[int, ...]


@dataclass(frozen=True)
class GlobalState:
    """A globally invariant nonnegative integer eigen-functional."""

    functional: tuple[int, ...]
    unit_value: int
    element_value: int


@dataclass(frozen=True)
class WitnessSearch:
    """Search outcome. ``exhausted_cells`` lists (target, source, word
    length) cells where the rational relaxation met the cone but no
    certified lattice witness existed within the height bound; a None
    witness with no exhausted cells means the whole box was decided."""

    witness: Witness | None
    exhausted_cells: tuple[tuple[int, int, int], ...]


def _first_nonzero(vec: Sequence[int]) -> int:
    return next((i for i, x in enumerate(vec) if x), len(vec))


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _span_meets_cone(basis_rows: list[tuple[int, ...]]) -> bool:
    """Does the rational span of the lattice meet the cone nontrivially?

    Equivalent to the lattice itself meeting the cone away from zero: a
    nonnegative nonzero rational vector in the span has a positive
    integer multiple inside the lattice.
    """
    if not basis_rows:
        return False
    width = len(basis_rows[0])
    ineqs: list[tuple[list[int], int]] = []
    for i in range(width):
        ineqs.append(([row[i] for row in basis_rows], 0))
    ineqs.append(([sum(row) for row in basis_rows], 1))
    program = LinearProgram.build(len(basis_rows), inequalities=ineqs)
    return isinstance(lp_feasible(program), Feasible)


def _positive_candidates(basis_rows: list[tuple[int, ...]], height_bound: int) -> Iterator[tuple[int, ...]]:
    """Nonzero nonnegative lattice vectors by increasing height, then
    earliest leading support, then lexicographic order."""
    for h in range(1, height_bound + 1):
        found = [
            v
            for v in enumerate_lattice_points(basis_rows, h)
            if any(v) and all(x >= 0 for x in v) and max(v) == h
        ]
        found.sort(key=lambda v: (_first_nonzero(v), v))
        yield from found


def _reduce_by_rows(vec: Sequence[int], rows: Sequence[Sequence[int]]) -> list[int]:
    """Reduce a vector modulo Hermite rows (pivot coordinates into [0, pivot))."""
    out = list(vec)
    for row in rows:
        p = _first_nonzero(row)
        q = out[p] // row[p]
        if q:
            for i in range(len(out)):
                out[i] -= q * row[i]
    return out


def _canonical_coset_vector(
    particular: Sequence[int], kernel_rows: Sequence[Sequence[int]]
) -> tuple[int, ...]:
    """Least element of particular + lattice under (height, total mass,
    leading support, lex). Deterministic representative for recovered
    data that prefers sparse vectors."""
    if not kernel_rows:
        return tuple(particular)
    reduced = _reduce_by_rows(particular, kernel_rows)
    radius = max(1, max(abs(x) for x in reduced))
    for h in range(0, radius + 1):
        found = [
            v
            for v in enumerate_lattice_points(kernel_rows, h, offset=reduced)
            if max((abs(x) for x in v), default=0) == h
        ]
        if found:
            return min(found, key=lambda v: (sum(abs(x) for x in v), _first_nonzero(v), v))
    raise AssertionError("coset enumeration missed its own representative")


def _canonical_functional(
    kernel_rows: list[tuple[int, ...]],
    positives: list[tuple[int, ...]],
    require_nonnegative: bool,
) -> tuple[int, ...] | None:
    """Canonical integer functional in the kernel lattice with value >= 1
    on every listed vector (and entrywise >= 0 when required).

    An exact rational feasibility check decides existence: the value
    constraints are homogeneous in the functional, so any rational
    solution scales to an integer one, and the scaled solution bounds the
    exact least-height enumeration. Selection is least height, then
    greatest coordinate sum, then lexicographic.
    """
    width = len(kernel_rows[0])
    ineqs: list[tuple[list[int], int]] = []
    if require_nonnegative:
        ineqs.extend(([row[i] for row in kernel_rows], 0) for i in range(width))
    ineqs.extend(([_dot(row, pos) for row in kernel_rows], 1) for pos in positives)
    program = LinearProgram.build(len(kernel_rows), inequalities=ineqs)
    res = lp_feasible(program)
    if isinstance(res, Infeasible):
        return None
    scale = lcm(*(t.denominator for t in res.point))
    coeffs = [int(t * scale) for t in res.point]
    scaled = [0] * width
    for c, row in zip(coeffs, kernel_rows):
        for i in range(width):
            scaled[i] += c * row[i]
    radius = max(1, max(abs(x) for x in scaled))
    for h in range(1, radius + 1):
        cands = [
            v
            for v in enumerate_lattice_points(kernel_rows, h)
            if max(abs(x) for x in v) == h
            and (not require_nonnegative or all(x >= 0 for x in v))
            and all(_dot(v, pos) >= 1 for pos in positives)
        ]
        if cands:
            return min(cands, key=lambda v: (-sum(v), v))
    raise AssertionError("scaled rational solution escaped the enumeration radius")


def _recover_preimages(
    system: InductiveSystem,
    action: K0Action,
    value: LimitElement,
    source_hint: int,
    stage_max: int,
) -> tuple[LimitElement, ...] | None:
    """Solve value = sum_j (g_j - a_j(g_j)) over the integers.

    Tries source stages from the lattice's source upward; a witness
    produced by an inverse letter may only be a coboundary of elements
    one stage later.
    """
    r = action.generators
    for k in range(source_hint, stage_max + 1):
        if not system.has_stage(k):
            break
        try:
            maps = [action.forward_map(j, k) for j in range(r)]
        except StageRangeError:
            break
        target = max([value.stage] + [sm.to_stage for sm in maps])
        if not system.has_stage(target):
            continue
        p_src = system.rank_at(k)
        p_tgt = system.rank_at(target)
        push_src = system.transfer(k, target)
        block_rows: list[list[int]] = [[] for _ in range(p_tgt)]
        for sm in maps:
            push_img = system.transfer(sm.to_stage, target) @ sm.matrix
            for i in range(p_tgt):
                block_rows[i].extend(
                    push_src.at(i, j) - push_img.at(i, j) for j in range(p_src)
                )
        matrix = IntMatrix.from_rows(block_rows)
        solved = solve_in_lattice(matrix, push(system, value, target).vector)
        if solved is None:
            continue
        x0, kernel = solved
        stacked = _canonical_coset_vector(x0, kernel)
        return tuple(
            LimitElement(k, tuple(stacked[j * p_src : (j + 1) * p_src]))
            for j in range(r)
        )
    return None


def verify_witness(system: InductiveSystem, action: K0Action, w: Witness) -> None:
    """Exact re-verification; raises AssertionError on any failure."""
    cb = coboundary(action, system, w.preimages)
    common = max(cb.stage, w.positive_at_stage)
    if push(system, cb, common).vector != push(system, w.value, common).vector:
        raise AssertionError("witness value is not the coboundary of its preimages")
    vec = w.value.vector
    if w.value.stage != w.positive_at_stage:
        vec = push(system, w.value, w.positive_at_stage).vector
    if any(x < 0 for x in vec) or not any(vec):
        raise AssertionError("witness value is not positive at its reporting stage")
    if max(abs(x) for x in w.value.vector) != w.height:
        raise AssertionError("witness height mismatch")
    if is_zero(system, w.value, max(w.nonzero_stage, w.value.stage)).is_yes:
        raise AssertionError("witness value vanishes in the limit")


def _build_witness(
    system: InductiveSystem,
    action: K0Action,
    vec: tuple[int, ...],
    source: int,
    target: int,
    word_length: int,
    params: SearchParams,
) -> Witness | None:
    value = LimitElement(target, vec)
    horizon = max(params.stage_max, target)
    zero = is_zero(system, value, horizon)
    if zero.is_yes:
        return None
    preimages = _recover_preimages(system, action, value, source, params.stage_max)
    if preimages is None:
        return None
    witness = Witness(
        preimages=preimages,
        value=value,
        positive_at_stage=target,
        height=max(abs(x) for x in vec),
        nonzero_mode="limit" if zero.is_no else "horizon",
        nonzero_stage=zero.at_stage if zero.is_no else zero.horizon,
        source_stage=source,
        target_stage=target,
        word_length=word_length,
    )
    verify_witness(system, action, witness)
    return witness


def find_positive_coboundary(
    system: InductiveSystem, action: K0Action, params: SearchParams
) -> WitnessSearch:
    """Scan the parameter box for a positive coboundary witness.

    Grid cells are visited in lexicographic (target stage, source stage,
    word length) order; inside a cell the rational relaxation decides
    whether the lattice meets the cone at all, and only then are lattice
    vectors enumerated by increasing height up to the height bound. A
    None result means no witness exists in the box searched (it is not a
    proof that none exists at all).
    """
    exhausted: list[tuple[int, int, int]] = []
    decided_empty: set[tuple] = set()
    for target in range(params.stage_max + 1):
        if not system.has_stage(target):
            break
        for source in range(target + 1):
            for length in range(1, params.word_length + 1):
                try:
                    lattice = coboundary_stage_lattice(action, system, source, target, length)
                except StageRangeError:
                    continue
                basis_rows = [lattice.column(j) for j in range(lattice.cols)]
                if not basis_rows:
                    continue
                # cells with the same lattice and an identical future
                # (stationary tail stages collapse) are decided once
                key_stage = (
                    min(target, system.last_declared_stage)
                    if system.is_stationary
                    else target
                )
                key = (key_stage, tuple(basis_rows))
                if key in decided_empty:
                    continue
                if not _span_meets_cone(basis_rows):
                    decided_empty.add(key)
                    continue
                for cand in _positive_candidates(basis_rows, params.height_bound):
                    witness = _build_witness(system, action, cand, source, target, length, params)
                    if witness is not None:
                        return WitnessSearch(witness, tuple(exhausted))
                exhausted.append((target, source, length))
                decided_empty.add(key)
    return WitnessSearch(None, tuple(exhausted))


def verify_state_certificate(
    system: InductiveSystem, action: K0Action, cert: StateCertificate
) -> None:
    """Exact re-verification; raises AssertionError on any failure."""
    beta = cert.functional
    m = cert.stage
    for g in cert.elements:
        gv = push(system, g, m).vector
        for w in cert.words:
            iv = push(system, apply_word(action, system, w, g), m).vector
            if _dot(beta, gv) != _dot(beta, iv):
                raise AssertionError("certificate functional is not invariant")
    unit_value = _dot(beta, system.unit_at(m))
    if unit_value != cert.unit_value or unit_value <= 0:
        raise AssertionError("certificate functional is not positive on the unit")
    for g, val in zip(cert.elements, cert.element_values):
        gv = push(system, g, m).vector
        if _dot(beta, gv) != val:
            raise AssertionError("certificate element value mismatch")
        if any(gv) and val <= 0:
            raise AssertionError("certificate functional is not faithful on a nonzero element")


def find_invariant_state(
    system: InductiveSystem,
    action: K0Action,
    elements: Sequence[LimitElement],
    words: Sequence[Word],
    stage_max: int,
) -> StateCertificate | None:
    """Search stages for an invariant integer functional faithful on S.

    The functional lives on a full stage lattice; an invariant
    functional defined only on the subgroup the data generates might
    exist without extending to a stage, which is why a miss at one stage
    triggers retries at every later stage up to ``stage_max``. "None" is
    therefore parameter-relative, never a refutation.
    """
    if not elements:
        raise ValueError("the element set must be nonempty")
    for g in elements:
        horizon = max(stage_max, g.stage)
        if not is_positive(system, g, horizon).is_yes:
            raise ValueError("every requested element must be positive (entrywise nonnegative at some stage)")
    try:
        images = [
            (gi, apply_word(action, system, w, g))
            for gi, g in enumerate(elements)
            for w in words
        ]
    except StageRangeError:
        return None
    first = max(
        [g.stage for g in elements] + [img.stage for _, img in images],
        default=0,
    )
    for m in range(first, stage_max + 1):
        if not system.has_stage(m):
            break
        diffs = []
        for gi, img in images:
            gv = push(system, elements[gi], m).vector
            iv = push(system, img, m).vector
            diffs.append(tuple(a - b for a, b in zip(gv, iv)))
        p = system.rank_at(m)
        if diffs:
            kernel_rows = integer_kernel(IntMatrix.from_rows(diffs))
        else:
            kernel_rows = [tuple(1 if j == i else 0 for j in range(p)) for i in range(p)]
        if not kernel_rows:
            continue
        positives = [tuple(system.unit_at(m))]
        for g in elements:
            gv = push(system, g, m).vector
            if any(gv):
                positives.append(gv)
        best = _canonical_functional(kernel_rows, positives, require_nonnegative=False)
        if best is None:
            continue
        cert = StateCertificate(
            stage=m,
            functional=tuple(best),
            elements=tuple(elements),
            words=tuple(words),
            unit_value=_dot(best, system.unit_at(m)),
            element_values=tuple(_dot(best, push(system, g, m).vector) for g in elements),
        )
        verify_state_certificate(system, action, cert)
        return cert
    return None


def verify_global_state(
    system: InductiveSystem, action: K0Action, g: LimitElement, state: GlobalState
) -> None:
    """Exact re-verification; raises AssertionError on any failure."""
    tail = system.stationary_tail
    assert tail is not None and action.stationary is not None
    c = state.functional
    if len(c) != system.stage_ranks[0]:
        raise AssertionError("global state length does not match the stage rank")
    if tail.transpose().apply(c) != tuple(c):
        raise AssertionError("global state is not an eigen-row of the connecting matrix")
    for rule in action.stationary:
        for mat in (rule.forward, rule.inverse):
            if mat.transpose().apply(c) != tuple(c):
                raise AssertionError("global state is not invariant under the action")
    if any(x < 0 for x in c):
        raise AssertionError("global state has a negative coordinate")
    if _dot(c, system.unit_at(0)) != state.unit_value or state.unit_value <= 0:
        raise AssertionError("global state is not positive on the unit")
    if _dot(c, g.vector) != state.element_value or state.element_value <= 0:
        raise AssertionError("global state is not positive on the prescribed element")


def check_k0_rfd_stationary(
    system: InductiveSystem, action: K0Action, g: LimitElement
) -> GlobalState | None:
    """Search for a globally invariant nonnegative integer eigen-row.

    The functional c must satisfy c.A = c against the stationary
    connecting matrix, c.T = c against every generator matrix (both
    directions), be entrywise nonnegative, and be strictly positive on
    the unit and on g. Solved by the exact integer kernel of the
    eigen-equations plus a rational feasibility check, then realized at
    least height.
    """
    if not system.is_stationary or len(system.stage_ranks) != 1:
        raise ValueError(
            "system must be presented stationarily (one stage plus a repeating tail); "
            "use find_invariant_state for general systems"
        )
    if action.stationary is None or any(action.forward) or any(action.inverse):
        raise ValueError(
            "action must be stationary (tail rules only); use find_invariant_state otherwise"
        )
    for rule in action.stationary:
        if rule.shift != 0:
            raise ValueError("a stationary action must preserve stages (shift 0)")
    p = system.stage_ranks[0]
    if len(g.vector) != p:
        raise ValueError("element vector length does not match the stage rank")
    if any(x < 0 for x in g.vector) or not any(g.vector):
        raise ValueError("the prescribed element must be nonzero and entrywise nonnegative")
    tail = system.stationary_tail
    assert tail is not None
    eig_rows: list[tuple[int, ...]] = []
    mats = [tail]
    for rule in action.stationary:
        mats.append(rule.forward)
        mats.append(rule.inverse)
    for mat in mats:
        t = mat.transpose()
        for i in range(p):
            row = list(t.row(i))
            row[i] -= 1
            eig_rows.append(tuple(row))
    kernel_rows = integer_kernel(IntMatrix.from_rows(eig_rows))
    if not kernel_rows:
        return None
    unit = tuple(system.unit_at(0))
    positives = [unit, tuple(g.vector)]
    best = _canonical_functional(kernel_rows, positives, require_nonnegative=True)
    if best is None:
        return None
    state = GlobalState(
        functional=tuple(best),
        unit_value=_dot(best, unit),
        element_value=_dot(best, g.vector),
    )
    verify_global_state(system, action, g, state)
    return state


def compression_check_r1(
    system: InductiveSystem, action: K0Action, params: SearchParams
) -> WitnessSearch:
    """Single-generator specialization: a witness is exactly an element
    strictly compressed by the induced automorphism."""
    if action.generators != 1:
        raise ValueError("the compression check requires exactly one generator")
    return find_positive_coboundary(system, action, params)


def positive_parts(e: LimitElement) -> tuple[LimitElement, LimitElement]:
    """Entrywise positive and negative parts, both cone elements."""
    pos = tuple(max(x, 0) for x in e.vector)
    neg = tuple(max(-x, 0) for x in e.vector)
    return LimitElement(e.stage, pos), LimitElement(e.stage, neg)


def exclusion_sets(witness: Witness, generators: int) -> tuple[tuple[LimitElement, ...], tuple[Word, ...]]:
    """Element and word sets realizing the mutual-exclusion test.

    Both parts of every preimage enter the element set: invariance on
    the parts forces any candidate functional to vanish on the witness
    value, while faithfulness demands it be positive there.
    """
    elements: list[LimitElement] = [witness.value]
    for pre in witness.preimages:
        for part in positive_parts(pre):
            if any(part.vector) and part not in elements:
                elements.append(part)
    words = tuple(Word.of(j) for j in range(1, generators + 1))
    return tuple(elements), words


def exclusion_holds(
    system: InductiveSystem, action: K0Action, witness: Witness, stage_max: int
) -> bool:
    """True when no invariant faithful functional exists for the
    witness's exclusion sets at any stage up to ``stage_max``."""
    elements, words = exclusion_sets(witness, action.generators)
    return find_invariant_state(system, action, elements, words, stage_max) is None
