"""Command-line front end.

Results go to standard output as JSON, diagnostics to standard error.  Exit
codes: 0 success, 1 validation or property failure (or an unresolved name),
2 composability, group-model or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import document as docmod
from .document import Document, DocumentError, ValidationFailure, space_json
from .grouprep import GroupError, UnsupportedModel
from .linalg import Subspace
from .laws import LAWS, run_check, trial_rng
from .randgen import make_model
from .relations import (
    CanRel,
    CompositionError,
    compose_set,
    factor,
    is_congenial,
    is_coreduction,
    is_reduction,
    pair_excess,
)
from .wwcat import Word, normalize, trajectory_space, word_excess, ww_compose, ww_trace

GROUP_CHOICES = ("trivial", "finite", "circle", "z2", "z4", "s3")
_GROUP_ALIASES = {"finite": "z2"}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Exit(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("error", ""))
        self.code = code
        self.payload = payload


# --------------------------------------------------------------------------
# output helpers


class _Out:
    def __init__(self, compact: bool):
        self.compact = compact

    def emit(self, obj) -> None:
        if self.compact:
            sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            sys.stdout.write(docmod.dumps(obj))


def _space_ref(doc: Document, V):
    for k, W in doc.spaces.items():
        if W == V:
            return k
    return space_json(V)


def _rel_out(doc: Document, f: CanRel) -> dict:
    return {"source": _space_ref(doc, f.source), "target": _space_ref(doc, f.target),
            "basis": f.sub.basis.to_json()}


def _load(args) -> Document:
    if not args.input:
        raise _Exit(EXIT_USAGE, {"error": "--input is required"})
    try:
        return docmod.load(args.input)
    except OSError as exc:
        raise _Exit(EXIT_FAIL, {"error": f"cannot read {args.input}: {exc.strerror}"}) from exc


def _word_from(doc: Document, names: list) -> Word:
    if len(names) == 1 and names[0] in doc.words:
        return doc.word(names[0])
    return Word(tuple(doc.relation(n) for n in names))


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, out: _Out) -> int:
    if not args.input:
        raise _Exit(EXIT_USAGE, {"error": "--input is required"})
    try:
        with open(args.input) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise _Exit(EXIT_FAIL, {"error": f"cannot read {args.input}: {exc.strerror}"}) from exc
    except json.JSONDecodeError as exc:
        raise _Exit(EXIT_FAIL, {"valid": False, "errors": [{"entity": "document", "error": str(exc)}]}) from exc
    _, errors, report = docmod.parse(raw, strict=False)
    out.emit({"valid": not errors, **report, "errors": errors})
    return EXIT_FAIL if errors else EXIT_OK


def cmd_compose(args, out: _Out) -> int:
    doc = _load(args)
    a, b = doc.indexed_rel(args.names[0]), doc.indexed_rel(args.names[1])
    c = ww_compose(a, b)
    out.emit({
        "relation": _rel_out(doc, c.rel),
        "index": c.index.to_json(),
        "pair_excess": pair_excess(a.rel, b.rel).to_json(),
        "congenial": is_congenial(a.rel, b.rel),
    })
    return EXIT_OK


def cmd_excess(args, out: _Out) -> int:
    doc = _load(args)
    w = _word_from(doc, args.names)
    traj = trajectory_space(w).space.dim if len(w) > 1 else 0
    out.emit({"length": len(w), "trajectory_dim": traj, "excess": word_excess(w).to_json()})
    return EXIT_OK


def cmd_normalize(args, out: _Out) -> int:
    doc = _load(args)
    n = normalize(_word_from(doc, args.names))
    out.emit({"shadow": _rel_out(doc, n.rel), "index": n.index.to_json()})
    return EXIT_OK


def cmd_trace(args, out: _Out) -> int:
    doc = _load(args)
    out.emit({"trace": ww_trace(doc.indexed_rel(args.names[0])).to_json()})
    return EXIT_OK


def cmd_factor(args, out: _Out) -> int:
    doc = _load(args)
    f = doc.relation(args.names[0])
    r, c = factor(f)
    out.emit({
        "Q": space_json(r.target),
        "reduction": _rel_out(doc, r),
        "coreduction": _rel_out(doc, c),
        "checks": {
            "reduction": is_reduction(r),
            "coreduction": is_coreduction(c),
            "congenial": is_congenial(r, c),
            "recomposes": compose_set(r, c) == f,
        },
    })
    return EXIT_OK


def cmd_isoclass(args, out: _Out) -> int:
    doc = _load(args)
    name = args.names[0]
    if name in doc.spaces:
        V = doc.spaces[name]
        cls = V.action.iso_class(Subspace.full(V.dim))
    elif name in doc.subspaces:
        V, S = doc.subspace(name)
        cls = V.action.iso_class(S)
    elif name in doc.relations:
        f = doc.relations[name]
        cls = f.ambient.action.iso_class(f.sub)
    else:
        raise DocumentError(f"unknown space, subspace or relation {name!r}")
    out.emit({"name": name, "class": cls.to_json()})
    return EXIT_OK


def _counterexample_path(args, law: str, group: str, trial: int) -> str:
    fname = f"counterexample-{law}-{group}-{args.seed}-{trial}.json"
    return os.path.join(args.out or ".", fname)


def cmd_fuzz(args, out: _Out) -> int:
    if args.replay:
        try:
            doc = docmod.load(args.replay)
        except OSError as exc:
            raise _Exit(EXIT_FAIL, {"error": f"cannot read {args.replay}: {exc.strerror}"}) from exc
        if not doc.law or doc.law.get("name") not in LAWS:
            raise _Exit(EXIT_USAGE, {"error": "document names no known law"})
        failures = run_check(doc)
        out.emit({"law": doc.law["name"], "replay": os.path.basename(args.replay),
                  "status": "fail" if failures else "pass", "failures": failures})
        return EXIT_FAIL if failures else EXIT_OK
    if not args.law:
        raise _Exit(EXIT_USAGE, {"error": "name a law or pass --replay"})
    law = LAWS[args.law]
    gname = _GROUP_ALIASES.get(args.group, args.group)
    if gname not in law.models:
        raise _Exit(EXIT_USAGE, {"error": f"law {law.name} is not available for the {gname} model"})
    if args.trials < 0 or args.dim_cap < 2:
        raise _Exit(EXIT_USAGE, {"error": "need --trials >= 0 and --dim-cap >= 2"})
    model = make_model(gname)
    report = {"law": law.name, "group": gname, "seed": args.seed, "trials": args.trials,
              "dim_cap": args.dim_cap}
    for t in range(args.trials):
        doc = law.generate(model, trial_rng(args.seed, t), args.dim_cap)
        failures = run_check(doc)
        if failures:
            doc.law.update({"group": gname, "seed": args.seed, "trial": t, "dim_cap": args.dim_cap,
                            "failures": failures})
            path = _counterexample_path(args, law.name, gname, t)
            with open(path, "w") as fh:
                fh.write(doc.dumps())
            print(f"{law.name}: trial {t} failed: {'; '.join(failures)}", file=sys.stderr)
            out.emit({**report, "passed": t, "status": "fail", "failed_trial": t,
                      "failures": failures, "counterexample": path})
            return EXIT_FAIL
    out.emit({**report, "passed": args.trials, "status": "pass"})
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "compose": cmd_compose,
    "excess": cmd_excess,
    "normalize": cmd_normalize,
    "trace": cmd_trace,
    "factor": cmd_factor,
    "isoclass": cmd_isoclass,
    "fuzz": cmd_fuzz,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="JSON document")
    common.add_argument("--json", action="store_true", help="compact single-line JSON with sorted keys")

    p = argparse.ArgumentParser(prog="hyperrel", description="Equivariant linear canonical relations, exactly.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("validate", parents=[common], help="validate a document")
    for name, nargs, helptext in (
        ("compose", 2, "compose two (indexed) relations"),
        ("excess", "+", "excess of a word (a word name or relation names)"),
        ("normalize", "+", "normal form (shadow, index) of a word"),
        ("trace", 1, "trace of an endomorphism"),
        ("factor", 1, "factor a relation as reduction after coreduction"),
        ("isoclass", 1, "iso class of a space, subspace or relation"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("names", nargs=nargs, metavar="NAME")
    fz = sub.add_parser("fuzz", parents=[common], help="seeded randomized law check")
    fz.add_argument("law", nargs="?", choices=sorted(LAWS))
    fz.add_argument("--trials", type=int, default=100)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--dim-cap", type=int, default=8, help="bound on the summed dimensions of a chain's spaces")
    fz.add_argument("--group", choices=GROUP_CHOICES, default="trivial",
                    help="group model; 'finite' means z2")
    fz.add_argument("--out", metavar="DIR", help="directory for counterexample documents")
    fz.add_argument("--replay", metavar="PATH", help="re-run the law recorded in a counterexample document")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.json)
    try:
        return COMMANDS[args.command](args, out)
    except _Exit as exc:
        out.emit(exc.payload)
        if "error" in exc.payload:
            print(f"error: {exc.payload['error']}", file=sys.stderr)
        return exc.code
    except ValidationFailure as exc:
        out.emit({"valid": False, "errors": exc.errors})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except DocumentError as exc:
        out.emit({"error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (CompositionError, UnsupportedModel, GroupError) as exc:
        out.emit({"error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        out.emit({"error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
