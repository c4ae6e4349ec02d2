import json
import random

import pytest

from conftest import GOLDEN_NAMES, golden_path, load_golden

from k0mf.bratteli import (
    BratteliDiagram,
    DocumentError,
    FiniteSystem,
    Metadata,
    SystemDocument,
    diagram_to_system,
    finite_system_to_k0,
    parse,
    permutation_matrix,
    serialize,
)
from k0mf.dimgroup import InductiveSystem
from k0mf.exactlinalg import IntMatrix
from k0mf.kaction import identity_action, verify_action

M = IntMatrix.from_rows


def test_parse_minimal_golden():
    doc = load_golden("minimal.json")
    system, action = doc.resolve()
    assert system.stage_ranks == (1,)
    assert system.unit == (1,)
    assert action.generators == 1


def test_parse_shift_golden():
    doc = load_golden("compactified_shift.json")
    system, action = doc.resolve()
    assert system.stage_ranks == (1, 3, 5, 7)
    assert len(system.connecting_maps) == 3
    assert system.connecting_maps[1].rows == 5 and system.connecting_maps[1].cols == 3
    assert action.forward[0][1].to_stage == 2


def test_parse_error_names_field():
    payload = {
        "schema_version": 1,
        "diagram": {
            "vertex_counts": [1, 2],
            "edge_matrices": [[[1], [-1]]],
        },
        "action": {"generators": 1, "forward": [[]], "inverse": [[]]},
    }
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(payload))
    assert "edge_matrices[0][1][0]" in str(err.value)


def test_parse_rejects_floats():
    with pytest.raises(DocumentError):
        parse('{"schema_version": 1.0}')


def test_parse_rejects_unknown_version():
    with pytest.raises(DocumentError) as err:
        parse('{"schema_version": 2}')
    assert "schema_version" in str(err.value)


def test_parse_requires_exactly_one_kind():
    with pytest.raises(DocumentError):
        parse('{"schema_version": 1}')
    payload = {
        "schema_version": 1,
        "system": {"stage_ranks": [1], "connecting_maps": [], "unit": [1]},
        "finite_system": {"points": 1, "permutations": [[1]]},
    }
    with pytest.raises(DocumentError):
        parse(json.dumps(payload))


def test_parse_requires_action_for_system():
    payload = {
        "schema_version": 1,
        "system": {"stage_ranks": [1], "connecting_maps": [], "unit": [1]},
    }
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(payload))
    assert "$.action" in str(err.value)


def test_parse_forbids_action_for_finite_system():
    payload = {
        "schema_version": 1,
        "finite_system": {"points": 2, "permutations": [[2, 1]]},
        "action": {"generators": 1, "forward": [[]], "inverse": [[]]},
    }
    with pytest.raises(DocumentError):
        parse(json.dumps(payload))


def test_parse_accepts_string_integers():
    payload = {
        "schema_version": 1,
        "system": {
            "stage_ranks": [1],
            "connecting_maps": [],
            "unit": ["100000000000000000000000001"],
        },
        "action": {
            "generators": 1,
            "forward": [[{"from_stage": 0, "to_stage": 0, "matrix": [["1"]]}]],
            "inverse": [[{"from_stage": 0, "to_stage": 0, "matrix": [[1]]}]],
        },
    }
    doc = parse(json.dumps(payload))
    system, _ = doc.resolve()
    assert system.unit == (100000000000000000000000001,)


def test_parse_rejects_unknown_field():
    with pytest.raises(DocumentError) as err:
        parse('{"schema_version": 1, "bogus": 3}')
    assert "bogus" in str(err.value)


def test_parse_stationary_boolean_sugar():
    # stationary: true repeats the last connecting map forever
    payload = {
        "schema_version": 1,
        "system": {
            "stage_ranks": [1],
            "connecting_maps": [[[2]]],
            "unit": [1],
            "stationary": True,
        },
        "action": {
            "generators": 1,
            "forward": [[]],
            "inverse": [[]],
            "stationary": [{"shift": 0, "forward": [[1]], "inverse": [[1]]}],
        },
    }
    system, _ = parse(json.dumps(payload)).resolve()
    assert system.stationary_tail == M([[2]])
    assert system.connecting_maps == ()
    with pytest.raises(DocumentError):
        bad = dict(payload)
        bad["system"] = {"stage_ranks": [1], "connecting_maps": [], "unit": [1], "stationary": True}
        parse(json.dumps(bad))


def test_diagram_rejects_zero_column():
    with pytest.raises(ValueError) as err:
        BratteliDiagram((2, 1), (M([[1, 0]]),))
    assert "zero column" in str(err.value)


def test_diagram_to_system_car():
    d = BratteliDiagram((1,), (M([[2]]),), stationary=True)
    system = diagram_to_system(d)
    assert system.stage_ranks == (1,)
    assert system.stationary_tail == M([[2]])
    assert system.unit == (1,)


def test_diagram_to_system_fibonacci():
    d = BratteliDiagram((2,), (M([[1, 1], [1, 0]]),), stationary=True)
    system = diagram_to_system(d)
    assert system.stationary_tail == M([[1, 1], [1, 0]])
    assert system.unit == (1, 1)


def test_diagram_to_system_diamond():
    d = BratteliDiagram((1, 2), (M([[1], [1]]),))
    system = diagram_to_system(d)
    assert system.stage_ranks == (1, 2)
    assert system.unit_at(1) == (1, 1)


def test_finite_system_single_point():
    system, action = finite_system_to_k0(FiniteSystem(1, ((1,), (1,))))
    assert system.stage_ranks == (1,)
    assert action.generators == 2
    for rule in action.stationary:
        assert rule.forward == IntMatrix.identity(1)


def test_finite_system_three_cycle_matrix():
    _, action = finite_system_to_k0(FiniteSystem(3, ((2, 3, 1),)))
    rule = action.stationary[0]
    assert rule.forward == M([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    assert rule.inverse == rule.forward.transpose()


def test_finite_system_transpositions_are_involutions():
    _, action = finite_system_to_k0(FiniteSystem(4, ((2, 1, 3, 4), (1, 2, 4, 3))))
    for rule in action.stationary:
        assert rule.forward @ rule.forward == IntMatrix.identity(4)
        assert rule.inverse == rule.forward


def test_finite_system_rejects_non_bijection():
    with pytest.raises(ValueError):
        FiniteSystem(3, ((1, 1, 2),))


def test_converted_actions_verify():
    rng = random.Random(23)
    for _ in range(10):
        n = rng.randint(1, 6)
        perms = []
        for _ in range(rng.randint(1, 3)):
            p = list(range(1, n + 1))
            rng.shuffle(p)
            perms.append(tuple(p))
        system, action = finite_system_to_k0(FiniteSystem(n, tuple(perms)))
        assert verify_action(action, system, 3).ok


def test_round_trip_goldens_byte_stable():
    for name in GOLDEN_NAMES:
        blob = golden_path(name).read_bytes()
        doc = parse(blob)
        assert serialize(doc) == blob
        assert parse(serialize(doc)) == doc


def random_document(rng: random.Random) -> SystemDocument:
    kind = rng.choice(["system", "diagram", "finite_system"])
    if kind == "finite_system":
        n = rng.randint(1, 5)
        perms = []
        for _ in range(rng.randint(1, 3)):
            p = list(range(1, n + 1))
            rng.shuffle(p)
            perms.append(tuple(p))
        return SystemDocument(
            1, Metadata(name=f"fs{n}"), "finite_system",
            finite_system=FiniteSystem(n, tuple(perms)),
        )
    if kind == "diagram":
        counts = [rng.randint(1, 3)]
        mats = []
        for _ in range(rng.randint(0, 2)):
            nxt = rng.randint(1, 3)
            rows = [[rng.randint(0, 2) for _ in range(counts[-1])] for _ in range(nxt)]
            # ensure no zero column and no zero row
            for c in range(counts[-1]):
                if all(rows[r][c] == 0 for r in range(nxt)):
                    rows[rng.randrange(nxt)][c] = 1
            for r in range(nxt):
                if all(x == 0 for x in rows[r]):
                    rows[r][rng.randrange(counts[-1])] = 1
            mats.append(M(rows))
            counts.append(nxt)
        diagram = BratteliDiagram(tuple(counts), tuple(mats))
        system = diagram_to_system(diagram)
        return SystemDocument(
            1, Metadata(), "diagram", diagram=diagram,
            action=identity_action(system, rng.randint(1, 2)),
        )
    ranks = [rng.randint(1, 3)]
    maps = []
    for _ in range(rng.randint(0, 2)):
        nxt = rng.randint(1, 3)
        rows = [[rng.randint(0, 2) for _ in range(ranks[-1])] for _ in range(nxt)]
        for r in range(nxt):
            if all(x == 0 for x in rows[r]):
                rows[r][rng.randrange(ranks[-1])] = 1
        maps.append(M(rows))
        ranks.append(nxt)
    unit = tuple(rng.randint(1, 3) for _ in range(ranks[0]))
    system = InductiveSystem(tuple(ranks), tuple(maps), unit)
    return SystemDocument(
        1, Metadata(description="random"), "system", system=system,
        action=identity_action(system, rng.randint(1, 2)),
    )


def test_round_trip_random_documents():
    rng = random.Random(31)
    for _ in range(40):
        doc = random_document(rng)
        assert parse(serialize(doc)) == doc


def test_serialize_minimal_matches_committed_bytes():
    doc = load_golden("minimal.json")
    assert serialize(doc) == golden_path("minimal.json").read_bytes()


def test_diagram_conversion_always_valid():
    rng = random.Random(37)
    for _ in range(30):
        doc = random_document(rng)
        system, action = doc.resolve()
        # InductiveSystem invariants were enforced on construction; the
        # action laws hold for the identity and permutation actions used
        assert verify_action(action, system, 2).ok


def test_permutation_matrix_shape():
    m = permutation_matrix((2, 1))
    assert m == M([[0, 1], [1, 0]])
