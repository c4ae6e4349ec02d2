"""Induced free-group actions on the K0 data of an inductive system.

An action of the free group on r generators is given, per generator, by
a family of entrywise-nonnegative stage maps (stage k to stage m(k),
with m(k) either k or a later stage, monotone in k) together with an
explicit family of inverse-direction maps. Inverses are supplied rather
than computed because stage maps need not be square; invertibility is a
limit-level condition and supplying both directions makes it checkable.

This module provides word application, the coboundary combination
sum_j (g_j - a_j(g_j)) over the generators, finite-stage lattices
approximating the group generated by all word differences, and an
itemised verifier for the order-automorphism laws (positivity,
commuting squares, unit preservation, inverse laws).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .dimgroup import InductiveSystem, LimitElement, StageRangeError, push
from .exactlinalg import IntMatrix, row_basis


@dataclass(frozen=True)
class StageMap:
    from_stage: int
    to_stage: int
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.from_stage < 0 or self.to_stage < self.from_stage:
            raise ValueError("stage maps must go forward (to_stage >= from_stage >= 0)")


@dataclass(frozen=True)
class StationaryRule:
    """Repeats forever past the declared steps: stage k -> k + shift."""

    shift: int
    forward: IntMatrix
    inverse: IntMatrix

    def __post_init__(self) -> None:
        if self.shift < 0:
            raise ValueError("stationary shift must be >= 0")


@dataclass(frozen=True)
class K0Action:
    generators: int
    forward: tuple[tuple[StageMap, ...], ...]
    inverse: tuple[tuple[StageMap, ...], ...]
    stationary: tuple[StationaryRule, ...] | None = None

    def __post_init__(self) -> None:
        if self.generators < 1:
            raise ValueError("need at least one generator")
        if len(self.forward) != self.generators or len(self.inverse) != self.generators:
            raise ValueError("need one forward and one inverse family per generator")
        if self.stationary is not None and len(self.stationary) != self.generators:
            raise ValueError("need one stationary rule per generator")
        for family in (*self.forward, *self.inverse):
            for k, sm in enumerate(family):
                if sm.from_stage != k:
                    raise ValueError("stage maps must be contiguous from stage 0")
            for prev, nxt in zip(family, family[1:]):
                if nxt.to_stage < prev.to_stage:
                    raise ValueError("target stages must be monotone")

    def _resolve(self, family: tuple[StageMap, ...], j: int, k: int, inverse: bool) -> StageMap:
        if k < 0:
            raise StageRangeError("negative stage")
        if k < len(family):
            return family[k]
        if self.stationary is not None:
            rule = self.stationary[j]
            mat = rule.inverse if inverse else rule.forward
            return StageMap(k, k + rule.shift, mat)
        raise StageRangeError(f"generator {j + 1} has no map at stage {k}")

    def forward_map(self, j: int, k: int) -> StageMap:
        return self._resolve(self.forward[j], j, k, inverse=False)

    def inverse_map(self, j: int, k: int) -> StageMap:
        return self._resolve(self.inverse[j], j, k, inverse=True)

    def letter_map(self, letter: int, k: int) -> StageMap:
        """Resolve a signed 1-based generator index at stage k."""
        if letter == 0 or abs(letter) > self.generators:
            raise ValueError(f"letter {letter} out of range")
        j = abs(letter) - 1
        return self.forward_map(j, k) if letter > 0 else self.inverse_map(j, k)


@dataclass(frozen=True)
class Word:
    """Reduced word in the free group: signed 1-based generator indices."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        for x in self.letters:
            if x == 0:
                raise ValueError("letters are nonzero signed generator indices")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("word is not reduced")

    @classmethod
    def of(cls, *letters: int) -> "Word":
        stack: list[int] = []
        for x in letters:
            if stack and stack[-1] == -x:
                stack.pop()
            else:
                stack.append(x)
        return cls(tuple(stack))

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))


def apply_word(
    action: K0Action, system: InductiveSystem, word: Word, e: LimitElement
) -> LimitElement:
    """Apply a word to a limit element; the rightmost letter acts first.

    The empty word returns the element unchanged (pushforward is the
    caller's concern when stages must be aligned).
    """
    out = e
    for letter in reversed(word.letters):
        sm = action.letter_map(letter, out.stage)
        if not system.has_stage(sm.to_stage):
            raise StageRangeError(f"letter {letter} maps into undeclared stage {sm.to_stage}")
        if sm.matrix.cols != system.rank_at(out.stage) or sm.matrix.rows != system.rank_at(sm.to_stage):
            raise ValueError(f"stage map shape mismatch at stage {out.stage}")
        out = LimitElement(sm.to_stage, sm.matrix.apply(out.vector))
    return out


def coboundary(
    action: K0Action, system: InductiveSystem, elements: Sequence[LimitElement]
) -> LimitElement:
    """sum over generators j of (g_j - a_j(g_j)), at a common stage."""
    if len(elements) != action.generators:
        raise ValueError("need exactly one element per generator")
    pairs = []
    target = 0
    for j, g in enumerate(elements):
        image = apply_word(action, system, Word.of(j + 1), g)
        pairs.append((g, image))
        target = max(target, g.stage, image.stage)
    p = system.rank_at(target)
    acc = [0] * p
    for g, image in pairs:
        gv = push(system, g, target).vector
        iv = push(system, image, target).vector
        for t in range(p):
            acc[t] += gv[t] - iv[t]
    return LimitElement(target, tuple(acc))


def reduced_words(generators: int, max_length: int) -> Iterator[Word]:
    """All reduced words with 1 <= length <= max_length, in a fixed order.

    Letters are ordered +1, -1, +2, -2, ...; words are emitted by length
    and then lexicographically in that letter order.
    """
    alphabet = [s * j for j in range(1, generators + 1) for s in (1, -1)]
    order = {letter: i for i, letter in enumerate(alphabet)}
    alphabet.sort(key=order.__getitem__)

    def extend(prefix: list[int], remaining: int) -> Iterator[tuple[int, ...]]:
        if not remaining:
            yield tuple(prefix)
            return
        for letter in alphabet:
            if prefix and prefix[-1] == -letter:
                continue
            prefix.append(letter)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for length in range(1, max_length + 1):
        for letters in extend([], length):
            yield Word(letters)


def coboundary_stage_lattice(
    action: K0Action,
    system: InductiveSystem,
    source_stage: int,
    target_stage: int,
    word_length: int,
) -> IntMatrix:
    """Finite-stage approximation of the coboundary subgroup.

    Columns form the canonical (Hermite) basis of the subgroup of the
    target stage generated by the pushforwards of g - w(g), for g a
    source-stage basis vector and w a reduced word of length at most
    ``word_length``. The target stage must be late enough to receive
    every word image.
    """
    if word_length < 0:
        raise ValueError("word length must be >= 0")
    p_src = system.rank_at(source_stage)
    p_tgt = system.rank_at(target_stage)
    vectors = []
    for word in reduced_words(action.generators, word_length):
        for i in range(p_src):
            e = LimitElement(source_stage, tuple(1 if t == i else 0 for t in range(p_src)))
            image = apply_word(action, system, word, e)
            if image.stage > target_stage:
                raise StageRangeError(
                    f"target stage {target_stage} cannot receive |w|={len(word)} images from stage {source_stage}"
                )
            ev = push(system, e, target_stage).vector
            iv = push(system, image, target_stage).vector
            vectors.append(tuple(a - b for a, b in zip(ev, iv)))
    basis = row_basis(vectors, p_tgt)
    return IntMatrix.from_rows([[b[i] for b in basis] for i in range(p_tgt)]) if basis else IntMatrix.zeros(p_tgt, 0)


@dataclass(frozen=True)
class CheckItem:
    check: str
    generator: int  # 1-based; 0 for system-level checks
    stage: int
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ActionReport:
    items: tuple[CheckItem, ...]

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.ok]


def _interesting_horizon(action: K0Action, system: InductiveSystem, horizon: int) -> int:
    """Stationary data repeats, so cap the verified stages past the prefixes."""
    prefix = max(
        [len(system.stage_ranks)]
        + [len(f) for f in action.forward]
        + [len(f) for f in action.inverse]
    )
    return min(horizon, prefix + 1)


def verify_action(action: K0Action, system: InductiveSystem, horizon: int) -> ActionReport:
    """Itemised pass/fail for the order-automorphism laws up to a horizon.

    Checks, per generator and stage: nonnegativity of each stage map,
    shape agreement with the stage ranks, unit preservation, commuting
    squares with the connecting maps, and both inverse laws (forward
    then inverse, and inverse then forward, each equal to the plain
    pushforward). Failures are report items, never exceptions.
    """
    items: list[CheckItem] = []
    top = _interesting_horizon(action, system, horizon)

    def resolve(j: int, k: int, inv: bool) -> StageMap | None:
        try:
            sm = action.inverse_map(j, k) if inv else action.forward_map(j, k)
        except StageRangeError:
            return None
        return sm if system.has_stage(sm.to_stage) else None

    for j in range(action.generators):
        gen = j + 1
        for k in range(top + 1):
            if not system.has_stage(k):
                break
            for inv, tag in ((False, "forward"), (True, "inverse")):
                sm = resolve(j, k, inv)
                if sm is None:
                    continue
                expected = (system.rank_at(sm.to_stage), system.rank_at(k))
                if (sm.matrix.rows, sm.matrix.cols) != expected:
                    items.append(
                        CheckItem(
                            "shape", gen, k, False,
                            f"{tag} map is {sm.matrix.rows}x{sm.matrix.cols}, expected {expected[0]}x{expected[1]}",
                        )
                    )
                    continue
                items.append(CheckItem("shape", gen, k, True, tag))
                bad = next(
                    (
                        (r, c)
                        for r in range(sm.matrix.rows)
                        for c in range(sm.matrix.cols)
                        if sm.matrix.at(r, c) < 0
                    ),
                    None,
                )
                if bad is not None:
                    items.append(
                        CheckItem(
                            "positivity", gen, k, False,
                            f"{tag} map entry {bad} = {sm.matrix.at(*bad)} is negative",
                        )
                    )
                else:
                    items.append(CheckItem("positivity", gen, k, True, tag))
                got = sm.matrix.apply(system.unit_at(k))
                want = system.unit_at(sm.to_stage)
                items.append(
                    CheckItem(
                        "unit_preserved", gen, k, got == want,
                        "" if got == want else f"{tag} map sends the stage-{k} unit to {got}, expected {want}",
                    )
                )
            # commuting squares per direction
            for inv, tag in ((False, "forward"), (True, "inverse")):
                sm_k = resolve(j, k, inv)
                sm_k1 = resolve(j, k + 1, inv)
                if sm_k is None or sm_k1 is None or not system.has_stage(k + 1):
                    continue
                if (sm_k.matrix.rows, sm_k.matrix.cols) != (system.rank_at(sm_k.to_stage), system.rank_at(k)):
                    continue
                if (sm_k1.matrix.rows, sm_k1.matrix.cols) != (system.rank_at(sm_k1.to_stage), system.rank_at(k + 1)):
                    continue
                lhs = sm_k1.matrix @ system.transfer(k, k + 1)
                rhs = system.transfer(sm_k.to_stage, sm_k1.to_stage) @ sm_k.matrix
                items.append(
                    CheckItem(
                        "commuting_square", gen, k, lhs == rhs,
                        "" if lhs == rhs else f"{tag} map does not commute with the connecting map at stage {k}",
                    )
                )
            # inverse laws: each composite must equal the pushforward
            for first_inv, tag in ((False, "forward-then-inverse"), (True, "inverse-then-forward")):
                sm1 = resolve(j, k, first_inv)
                if sm1 is None:
                    continue
                sm2 = resolve(j, sm1.to_stage, not first_inv)
                if sm2 is None:
                    continue
                shapes_ok = (
                    (sm1.matrix.rows, sm1.matrix.cols) == (system.rank_at(sm1.to_stage), system.rank_at(k))
                    and (sm2.matrix.rows, sm2.matrix.cols) == (system.rank_at(sm2.to_stage), system.rank_at(sm1.to_stage))
                )
                if not shapes_ok:
                    continue
                lhs = sm2.matrix @ sm1.matrix
                rhs = system.transfer(k, sm2.to_stage)
                items.append(
                    CheckItem(
                        "inverse_law", gen, k, lhs == rhs,
                        "" if lhs == rhs else f"{tag} composite differs from the pushforward at stage {k}",
                    )
                )
    return ActionReport(tuple(items))


def identity_action(system: InductiveSystem, generators: int = 1) -> K0Action:
    """The trivial action: every generator acts as the identity per stage."""
    declared = len(system.stage_ranks)
    # with a stationary tail the rule takes over once the ranks stabilise
    n_steps = declared - 1 if system.is_stationary else declared
    steps = tuple(
        StageMap(k, k, IntMatrix.identity(system.stage_ranks[k])) for k in range(n_steps)
    )
    rule = None
    if system.is_stationary:
        ident = IntMatrix.identity(system.stage_ranks[-1])
        rule = tuple(StationaryRule(0, ident, ident) for _ in range(generators))
    return K0Action(
        generators,
        tuple(steps for _ in range(generators)),
        tuple(steps for _ in range(generators)),
        rule,
    )
