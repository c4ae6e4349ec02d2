import random

import pytest

from k0mf.bratteli import FiniteSystem, finite_system_to_k0, permutation_matrix
from k0mf.dimgroup import InductiveSystem, LimitElement, basis_element, push
from k0mf.exactlinalg import IntMatrix, solve_in_lattice
from k0mf.kaction import (
    K0Action,
    StageMap,
    StationaryRule,
    Word,
    apply_word,
    coboundary,
    coboundary_stage_lattice,
    identity_action,
    reduced_words,
    verify_action,
)

M = IntMatrix.from_rows


def test_word_reduction():
    assert Word.of(1, -1).letters == ()
    assert Word.of(1, 2, -2, -1, 1).letters == (1,)
    assert Word.of(1, 1, -2).letters == (1, 1, -2)
    with pytest.raises(ValueError):
        Word((1, -1))
    with pytest.raises(ValueError):
        Word((0,))
    assert Word.of(1, 2).inverse().letters == (-2, -1)


def test_reduced_words_enumeration():
    words = [w.letters for w in reduced_words(1, 2)]
    assert words == [(1,), (-1,), (1, 1), (-1, -1)]
    two = list(reduced_words(2, 1))
    assert [w.letters for w in two] == [(1,), (-1,), (2,), (-2,)]


def test_apply_empty_word(cycle3_pair):
    system, action = cycle3_pair
    e = LimitElement(0, (1, 2, 3))
    assert apply_word(action, system, Word.of(), e) == e


def test_apply_cycle_order_three(cycle3_pair):
    system, action = cycle3_pair
    for vec in [(1, 0, 0), (1, 2, 3), (-1, 4, 0)]:
        e = LimitElement(0, vec)
        out = apply_word(action, system, Word.of(1, 1, 1), e)
        assert out.vector == vec


def test_apply_then_inverse_is_push(shift_pair):
    # applied letterwise (the reduced word s^-1 s is empty), both
    # composition orders must equal the plain pushforward
    system, action = shift_pair
    for stage in (0, 1):
        for idx in range(system.rank_at(stage)):
            e = basis_element(system, stage, idx)
            fwd = apply_word(action, system, Word.of(1), e)
            round_trip = apply_word(action, system, Word.of(-1), fwd)
            assert round_trip == push(system, e, round_trip.stage)
            bwd = apply_word(action, system, Word.of(-1), e)
            other = apply_word(action, system, Word.of(1), bwd)
            assert other == push(system, e, other.stage)
            assert apply_word(action, system, Word.of(-1, 1), e) == e


def test_word_homomorphism_property(cycle3_pair):
    system, action = cycle3_pair
    rng = random.Random(3)
    for _ in range(20):
        letters1 = [rng.choice([1, -1]) for _ in range(rng.randint(0, 3))]
        letters2 = [rng.choice([1, -1]) for _ in range(rng.randint(0, 3))]
        e = LimitElement(0, tuple(rng.randint(-3, 3) for _ in range(3)))
        combined = apply_word(action, system, Word.of(*letters1, *letters2), e)
        nested = apply_word(
            action, system, Word.of(*letters1), apply_word(action, system, Word.of(*letters2), e)
        )
        assert combined == nested


def test_coboundary_zero_elements(shift_pair):
    system, action = shift_pair
    z = LimitElement(1, (0, 0, 0))
    assert not any(coboundary(action, system, [z]).vector)


def test_coboundary_identity_action():
    system = InductiveSystem((3,), (), (1, 1, 1), IntMatrix.identity(3))
    action = identity_action(system, 2)
    g = [LimitElement(0, (1, -2, 5)), LimitElement(0, (0, 3, 1))]
    assert not any(coboundary(action, system, g).vector)


def test_coboundary_shift_right_ray(shift_pair):
    system, action = shift_pair
    g = LimitElement(1, (1, 0, 0))
    out = coboundary(action, system, [g])
    assert out == LimitElement(2, (0, 1, 0, 0, 0))


def test_coboundary_additive_in_each_slot(shift_pair):
    system, action = shift_pair
    rng = random.Random(5)
    for _ in range(20):
        a = tuple(rng.randint(-3, 3) for _ in range(3))
        b = tuple(rng.randint(-3, 3) for _ in range(3))
        lhs = coboundary(action, system, [LimitElement(1, tuple(x + y for x, y in zip(a, b)))])
        ra = coboundary(action, system, [LimitElement(1, a)])
        rb = coboundary(action, system, [LimitElement(1, b)])
        assert lhs.vector == tuple(x + y for x, y in zip(ra.vector, rb.vector))


def test_lattice_identity_action_trivial():
    system = InductiveSystem((3,), (), (1, 1, 1), IntMatrix.identity(3))
    action = identity_action(system, 1)
    lat = coboundary_stage_lattice(action, system, 0, 0, 1)
    assert lat.cols == 0


def test_lattice_cycle_sum_zero(cycle3_pair):
    system, action = cycle3_pair
    lat = coboundary_stage_lattice(action, system, 0, 0, 1)
    cols = [lat.column(j) for j in range(lat.cols)]
    assert cols == [(1, 0, -1), (0, 1, -1)]
    for col in cols:
        assert sum(col) == 0


def test_lattice_shift_contains_witness(shift_pair):
    system, action = shift_pair
    lat = coboundary_stage_lattice(action, system, 1, 2, 1)
    basis = IntMatrix.from_rows([list(lat.column(j)) for j in range(lat.cols)])
    assert solve_in_lattice(basis.transpose(), (0, 1, 0, 0, 0)) is not None


def test_lattice_monotone(shift_pair):
    system, action = shift_pair

    def lattice_rows(k, m, l):
        lat = coboundary_stage_lattice(action, system, k, m, l)
        return [lat.column(j) for j in range(lat.cols)]

    def contains(rows, vec):
        if not rows:
            return not any(vec)
        mat = IntMatrix.from_rows([list(r) for r in rows]).transpose()
        return solve_in_lattice(mat, vec) is not None

    base = lattice_rows(1, 2, 1)
    # larger target stage: pushed base vectors still members
    bigger_m = lattice_rows(1, 3, 1)
    for row in base:
        pushed = push(system, LimitElement(2, row), 3).vector
        assert contains(bigger_m, pushed)
    # larger source stage: pushed base vectors still members
    bigger_k = lattice_rows(2, 3, 1)
    for row in base:
        pushed = push(system, LimitElement(2, row), 3).vector
        assert contains(bigger_k, pushed)
    # larger word length never shrinks the lattice
    bigger_l = lattice_rows(1, 3, 2)
    for row in lattice_rows(1, 3, 1):
        assert contains(bigger_l, row)


def test_all_ones_annihilates_permutation_lattices():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(2, 6)
        r = rng.randint(1, 3)
        perms = []
        for _ in range(r):
            p = list(range(1, n + 1))
            rng.shuffle(p)
            perms.append(tuple(p))
        system, action = finite_system_to_k0(FiniteSystem(n, tuple(perms)))
        lat = coboundary_stage_lattice(action, system, 0, 0, 2)
        for j in range(lat.cols):
            assert sum(lat.column(j)) == 0


def test_word_differences_lie_in_single_letter_lattice(shift_pair):
    system, action = shift_pair
    # |w| <= 2 differences from stage 1 land inside the single-letter
    # lattice taken from stage 2 (the sources the telescoping uses)
    lat = coboundary_stage_lattice(action, system, 2, 3, 1)
    mat = IntMatrix.from_rows([list(lat.column(j)) for j in range(lat.cols)]).transpose()
    for word in reduced_words(1, 2):
        for idx in range(system.rank_at(1)):
            e = basis_element(system, 1, idx)
            img = apply_word(action, system, word, e)
            diff = tuple(
                a - b
                for a, b in zip(
                    push(system, e, 3).vector, push(system, img, 3).vector
                )
            )
            assert solve_in_lattice(mat, diff) is not None


def test_word_differences_one_stage_permutation(cycle3_pair):
    system, action = cycle3_pair
    lat = coboundary_stage_lattice(action, system, 0, 0, 1)
    mat = IntMatrix.from_rows([list(lat.column(j)) for j in range(lat.cols)]).transpose()
    for word in reduced_words(1, 3):
        for idx in range(3):
            e = basis_element(system, 0, idx)
            img = apply_word(action, system, word, e)
            diff = tuple(a - b for a, b in zip(e.vector, img.vector))
            assert solve_in_lattice(mat, diff) is not None


def test_verify_action_permutation_passes(cycle3_pair):
    system, action = cycle3_pair
    report = verify_action(action, system, 4)
    assert report.ok


def test_verify_action_negative_entry():
    system = InductiveSystem((2,), (), (1, 1), IntMatrix.identity(2))
    bad = M([[1, 1], [0, -1]])
    action = K0Action(
        1,
        ((),),
        ((),),
        (StationaryRule(0, bad, bad),),
    )
    report = verify_action(action, system, 2)
    failures = [f for f in report.failures() if f.check == "positivity"]
    assert failures
    assert "(1, 1)" in failures[0].detail and "-1" in failures[0].detail


def test_verify_action_broken_inverse():
    # transpose of a non-orthogonal matrix is not its inverse
    system = InductiveSystem((2,), (), (1, 2), IntMatrix.identity(2))
    fwd = M([[1, 1], [0, 1]])
    action = K0Action(1, ((),), ((),), (StationaryRule(0, fwd, fwd.transpose()),))
    report = verify_action(action, system, 2)
    failures = [f for f in report.failures() if f.check == "inverse_law"]
    assert failures and failures[0].stage == 0


def test_verify_action_unit_preservation_failure():
    system = InductiveSystem((2,), (), (1, 1), IntMatrix.identity(2))
    fwd = M([[2, 0], [0, 1]])
    action = K0Action(1, ((),), ((),), (StationaryRule(0, fwd, fwd),))
    report = verify_action(action, system, 2)
    failures = [f for f in report.failures() if f.check == "unit_preserved"]
    assert failures and failures[0].generator == 1 and failures[0].stage == 0


def test_verify_action_shift_all_pass(shift_pair):
    system, action = shift_pair
    assert verify_action(action, system, 3).ok


def test_permutation_matrix_composition():
    # matrix(p) @ matrix(q) == matrix(p after q): indicators move with points
    rng = random.Random(17)
    for _ in range(20):
        n = rng.randint(2, 6)
        p = list(range(1, n + 1))
        q = list(range(1, n + 1))
        rng.shuffle(p)
        rng.shuffle(q)
        composed = tuple(p[q[z] - 1] for z in range(n))
        assert permutation_matrix(tuple(p)) @ permutation_matrix(tuple(q)) == permutation_matrix(composed)
        # inverse permutation realizes the transpose
        inv = [0] * n
        for z in range(n):
            inv[p[z] - 1] = z + 1
        assert permutation_matrix(tuple(inv)) == permutation_matrix(tuple(p)).transpose()


def test_action_validation():
    ident = IntMatrix.identity(2)
    with pytest.raises(ValueError):
        K0Action(0, (), (), None)
    with pytest.raises(ValueError):
        # non-contiguous stage maps
        K0Action(1, ((StageMap(1, 1, ident),),), ((StageMap(1, 1, ident),),), None)
    with pytest.raises(ValueError):
        StageMap(1, 0, ident)
