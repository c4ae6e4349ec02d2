"""Command-line surface.

Subcommands: ``validate`` (parse a document and verify the action
laws), ``check-mf`` (witness search, then invariant-state searches per
requested element/word sets), ``chain-recurrence`` (the one-generator
compression check), and ``convert`` (dualize a finite permutation
system to a K0 document).

Exit codes: 0 when a verdict was computed (whatever it says), 2 on
invalid input. Human-readable summaries go to stderr; the canonical
JSON payload goes to stdout or --json-out and is byte-identical across
runs on identical inputs (timings are reported on stderr only).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Any, Sequence

from .bratteli import (
    DocumentError,
    FiniteSystem,
    Metadata,
    SystemDocument,
    canonical_json_bytes,
    document_payload,
    finite_system_to_k0,
    parse,
    serialize,
)
from .certify import (
    SearchParams,
    StateCertificate,
    Witness,
    compression_check_r1,
    exclusion_holds,
    find_invariant_state,
    find_positive_coboundary,
)
from .dimgroup import InductiveSystem, LimitElement, injectivity_report
from .kaction import K0Action, Word, verify_action

VIOLATION = "VIOLATION"
CONSISTENT = "CONSISTENT"
UNKNOWN = "UNKNOWN"
COMPRESSION_FOUND = "COMPRESSION_FOUND"
NONE_FOUND = "NONE_FOUND"


@dataclass(frozen=True)
class StateRequest:
    elements: tuple[LimitElement, ...]
    words: tuple[Word, ...]


@dataclass(frozen=True)
class Verdict:
    kind: str
    params: SearchParams
    witness: Witness | None
    certificates: tuple[StateCertificate | None, ...]
    requests: tuple[StateRequest, ...]
    exhausted_cells: tuple[tuple[int, int, int], ...]
    mutual_exclusion_ok: bool | None
    elapsed: float  # stderr reporting only; never serialized


def default_requests(system: InductiveSystem, action: K0Action) -> tuple[StateRequest, ...]:
    """One request: the stage-0 basis vectors against all generators."""
    p = system.rank_at(0)
    elements = tuple(
        LimitElement(0, tuple(1 if j == i else 0 for j in range(p))) for i in range(p)
    )
    words = tuple(Word.of(j) for j in range(1, action.generators + 1))
    return (StateRequest(elements, words),)


def run_check(
    system: InductiveSystem,
    action: K0Action,
    params: SearchParams,
    requests: Sequence[StateRequest] | None = None,
) -> Verdict:
    """Witness search; on a miss, invariant-state searches per request."""
    start = time.monotonic()
    search = find_positive_coboundary(system, action, params)
    if search.witness is not None:
        exclusion = exclusion_holds(system, action, search.witness, params.stage_max)
        return Verdict(
            kind=VIOLATION,
            params=params,
            witness=search.witness,
            certificates=(),
            requests=(),
            exhausted_cells=search.exhausted_cells,
            mutual_exclusion_ok=exclusion,
            elapsed=time.monotonic() - start,
        )
    reqs = tuple(requests) if requests is not None else default_requests(system, action)
    certs: list[StateCertificate | None] = []
    for req in reqs:
        certs.append(
            find_invariant_state(system, action, req.elements, req.words, params.stage_max)
        )
    kind = CONSISTENT if all(c is not None for c in certs) else UNKNOWN
    return Verdict(
        kind=kind,
        params=params,
        witness=None,
        certificates=tuple(certs),
        requests=reqs,
        exhausted_cells=search.exhausted_cells,
        mutual_exclusion_ok=None,
        elapsed=time.monotonic() - start,
    )


def run_chain_recurrence(
    system: InductiveSystem, action: K0Action, params: SearchParams
) -> Verdict:
    start = time.monotonic()
    search = compression_check_r1(system, action, params)
    found = search.witness is not None
    exclusion = None
    if found:
        assert search.witness is not None
        exclusion = exclusion_holds(system, action, search.witness, params.stage_max)
    return Verdict(
        kind=COMPRESSION_FOUND if found else NONE_FOUND,
        params=params,
        witness=search.witness,
        certificates=(),
        requests=(),
        exhausted_cells=search.exhausted_cells,
        mutual_exclusion_ok=exclusion,
        elapsed=time.monotonic() - start,
    )


# ---------------------------------------------------------------------------
# JSON payloads (canonical; no timing, no environment)
# ---------------------------------------------------------------------------


def _element_payload(e: LimitElement) -> dict:
    return {"stage": e.stage, "vector": list(e.vector)}


def _word_payload(w: Word) -> list[int]:
    return list(w.letters)


def _witness_payload(w: Witness) -> dict:
    return {
        "preimages": [_element_payload(e) for e in w.preimages],
        "value": _element_payload(w.value),
        "positive_at_stage": w.positive_at_stage,
        "height": w.height,
        "nonzero": {"mode": w.nonzero_mode, "stage": w.nonzero_stage},
        "lattice": {
            "source_stage": w.source_stage,
            "target_stage": w.target_stage,
            "word_length": w.word_length,
        },
    }


def _certificate_payload(c: StateCertificate) -> dict:
    return {
        "stage": c.stage,
        "functional": list(c.functional),
        "elements": [_element_payload(e) for e in c.elements],
        "words": [_word_payload(w) for w in c.words],
        "unit_value": c.unit_value,
        "element_values": list(c.element_values),
    }


def verdict_payload(command: str, name: str | None, verdict: Verdict) -> dict:
    payload: dict[str, Any] = {
        "command": command,
        "verdict": verdict.kind,
        "parameters": {
            "max_stage": verdict.params.stage_max,
            "word_length": verdict.params.word_length,
            "height_bound": verdict.params.height_bound,
        },
        "witness": _witness_payload(verdict.witness) if verdict.witness else None,
        "exhausted_cells": [list(c) for c in verdict.exhausted_cells],
    }
    if name is not None:
        payload["document"] = name
    if verdict.mutual_exclusion_ok is not None:
        payload["mutual_exclusion_ok"] = verdict.mutual_exclusion_ok
    if verdict.requests:
        payload["state_searches"] = [
            {
                "elements": [_element_payload(e) for e in req.elements],
                "words": [_word_payload(w) for w in req.words],
                "certificate": _certificate_payload(cert) if cert else None,
            }
            for req, cert in zip(verdict.requests, verdict.certificates)
        ]
    return payload


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------


def _read_document(path: str) -> SystemDocument:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise DocumentError(path, f"cannot read: {exc}") from None
    return parse(data)


def _parse_sets_file(path: str, system: InductiveSystem, action: K0Action) -> tuple[StateRequest, ...]:
    import json

    try:
        with open(path, "rb") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(path, f"cannot read request sets: {exc}") from None
    if not isinstance(raw, dict) or "requests" not in raw or not isinstance(raw["requests"], list):
        raise DocumentError(path, 'expected an object with a "requests" array')
    out = []
    for i, req in enumerate(raw["requests"]):
        if not isinstance(req, dict):
            raise DocumentError(f"{path}:requests[{i}]", "expected an object")
        elements = []
        for j, el in enumerate(req.get("elements", [])):
            if not isinstance(el, dict) or "stage" not in el or "vector" not in el:
                raise DocumentError(f"{path}:requests[{i}].elements[{j}]", "expected {stage, vector}")
            elements.append(LimitElement(int(el["stage"]), tuple(int(x) for x in el["vector"])))
        words = []
        for j, w in enumerate(req.get("words", [])):
            if not isinstance(w, list):
                raise DocumentError(f"{path}:requests[{i}].words[{j}]", "expected a letter array")
            words.append(Word.of(*(int(x) for x in w)))
        if not elements:
            raise DocumentError(f"{path}:requests[{i}]", "request needs at least one element")
        out.append(StateRequest(tuple(elements), tuple(words)))
    if not out:
        raise DocumentError(path, "no requests given")
    return tuple(out)


def _emit(payload: dict, json_out: str | None) -> None:
    blob = canonical_json_bytes(payload)
    if json_out:
        with open(json_out, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.buffer.write(blob)
        sys.stdout.flush()


def _params_from(args: argparse.Namespace) -> SearchParams:
    return SearchParams(
        stage_max=args.max_stage,
        word_length=args.word_length,
        height_bound=args.height,
    )


def _cmd_validate(args: argparse.Namespace) -> int:
    doc = _read_document(args.path)
    system, action = doc.resolve()
    horizon = args.max_stage
    report = verify_action(action, system, horizon)
    inj = injectivity_report(system, horizon)
    payload = {
        "command": "validate",
        "valid": report.ok,
        "checks": [
            {
                "check": item.check,
                "generator": item.generator,
                "stage": item.stage,
                "ok": item.ok,
                "detail": item.detail,
            }
            for item in report.items
        ],
        "injectivity": {
            "stages": [{"stage": k, "injective": ok} for k, ok in inj.stage_flags],
            "tail": inj.tail_injective,
        },
    }
    if doc.metadata.name:
        payload["document"] = doc.metadata.name
    _emit(payload, args.json_out)
    if not report.ok:
        for item in report.failures():
            print(
                f"FAIL {item.check} generator {item.generator} stage {item.stage}: {item.detail}",
                file=sys.stderr,
            )
        return 2
    print(f"valid: {len(report.items)} checks passed", file=sys.stderr)
    return 0


def _cmd_check_mf(args: argparse.Namespace) -> int:
    doc = _read_document(args.path)
    system, action = doc.resolve()
    report = verify_action(action, system, args.max_stage)
    if not report.ok:
        for item in report.failures():
            print(
                f"invalid action: {item.check} generator {item.generator} stage {item.stage}: {item.detail}",
                file=sys.stderr,
            )
        return 2
    params = _params_from(args)
    requests = None
    if args.sets:
        requests = _parse_sets_file(args.sets, system, action)
    verdict = run_check(system, action, params, requests)
    payload = verdict_payload("check-mf", doc.metadata.name, verdict)
    _emit(payload, args.json_out)
    print(f"{verdict.kind} in {verdict.elapsed:.3f}s (params: {params})", file=sys.stderr)
    return 0


def _cmd_chain_recurrence(args: argparse.Namespace) -> int:
    doc = _read_document(args.path)
    system, action = doc.resolve()
    if action.generators != 1:
        print("chain-recurrence requires a single-generator document", file=sys.stderr)
        return 2
    report = verify_action(action, system, args.max_stage)
    if not report.ok:
        for item in report.failures():
            print(
                f"invalid action: {item.check} generator {item.generator} stage {item.stage}: {item.detail}",
                file=sys.stderr,
            )
        return 2
    verdict = run_chain_recurrence(system, action, _params_from(args))
    payload = verdict_payload("chain-recurrence", doc.metadata.name, verdict)
    _emit(payload, args.json_out)
    print(f"{verdict.kind} in {verdict.elapsed:.3f}s", file=sys.stderr)
    return 0


def _cmd_convert(args: argparse.Namespace) -> int:
    if not args.finite:
        print("convert currently supports --finite input only", file=sys.stderr)
        return 2
    perms = []
    for raw in args.perm:
        try:
            perms.append(tuple(int(x) for x in raw.split(",")))
        except ValueError:
            print(f"malformed permutation: {raw!r}", file=sys.stderr)
            return 2
    try:
        fs = FiniteSystem(args.points, tuple(perms))
        finite_system_to_k0(fs)  # force validation of the induced data
    except ValueError as exc:
        print(f"invalid finite system: {exc}", file=sys.stderr)
        return 2
    doc = SystemDocument(
        schema_version=1,
        metadata=Metadata(name=args.name),
        kind="finite_system",
        finite_system=fs,
    )
    _emit(document_payload(doc), args.json_out)
    return 0


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-stage", type=int, default=4, help="largest stage index searched (default 4)")
    p.add_argument("--word-length", type=int, default=1, help="longest word in lattice generators (default 1)")
    p.add_argument("--height", type=int, default=16, help="height bound for witness vectors (default 16)")
    p.add_argument("--json-out", type=str, default=None, help="write the canonical JSON payload here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k0mf",
        description="Exact K0 certificates: coboundary witnesses and locally invariant integer states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a document and verify the action laws")
    p.add_argument("path")
    _add_params(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("check-mf", help="decide the positive-coboundary criterion with certificates")
    p.add_argument("path")
    _add_params(p)
    p.add_argument("--sets", type=str, default=None, help="JSON file of element/word request sets")
    p.set_defaults(func=_cmd_check_mf)

    p = sub.add_parser("chain-recurrence", help="single-generator compression check")
    p.add_argument("path")
    _add_params(p)
    p.set_defaults(func=_cmd_chain_recurrence)

    p = sub.add_parser("convert", help="emit a document for a finite permutation system")
    p.add_argument("--finite", action="store_true", help="input is a finite transformation system")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--perm", action="append", default=[], required=True, help="1-based images, comma separated; repeat per generator")
    p.add_argument("--name", type=str, default=None)
    p.add_argument("--json-out", type=str, default=None)
    p.set_defaults(func=_cmd_convert)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
