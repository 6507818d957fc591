"""Command-line front end.

Exit status: 0 for TRUE / valid, 1 for FALSE, 2 for errors, 3 for
INCONCLUSIVE oracle runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import funcalg, vmod
from .automaton import Analysis, AutomatonError, EnergyAutomaton
from .funcalg import format_value
from .multidim import MultiDimAutomaton, coverable
from .oracle import Verdict, iterate_buchi, iterate_reach, witness_json
from .textio import ParseError, format_function, parse_automaton

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    if "." in text or "e" in text.lower():
        raise UsageError(f"energy {text!r} is not a rational p/q (decimals are rejected)")
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"energy {text!r} is not a rational p/q") from None
    if q < 0:
        raise UsageError(f"energy {text!r} is negative")
    return q


def _accepting(args):
    if args.accepting is None:
        return None
    return [s for s in args.accepting.replace(",", " ").split() if s]


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_automaton(fh.read())
    except OSError as err:
        raise UsageError(str(err)) from None


def _one_dim(a) -> EnergyAutomaton:
    if isinstance(a, MultiDimAutomaton):
        if a.dim != 1:
            raise UsageError(f"this command needs a 1-dimensional automaton (dim is {a.dim})")
        return EnergyAutomaton(a.names, tuple((s, fs[0], t) for s, fs, t in a.transitions), a.initial, a.accepting)
    return a


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_check(args) -> int:
    a = _load(args.file)
    kind = f"{a.dim}-dimensional" if isinstance(a, MultiDimAutomaton) else "energy"
    _emit(
        args,
        {"valid": True, "states": list(a.names), "transitions": len(a.transitions)},
        f"valid {kind} automaton: {a.n} states, {len(a.transitions)} transitions",
    )
    return EXIT_TRUE


def closure_json(an: Analysis, accepting=None, with_omega: bool = False) -> dict:
    a = an.automaton
    out = {
        "states": list(a.names),
        "star": [[funcalg.to_json(f) for f in row] for row in an.star],
    }
    if with_omega:
        acc = a.accepting if accepting is None else a.states(accepting)
        vec, order = an.omega_k(acc)
        per_state = [None] * a.n
        for pos, s in enumerate(order):
            per_state[s] = vmod.to_json(vec[pos])
        out["accepting"] = [a.names[s] for s in sorted(acc)]
        out["omega"] = per_state
    return out


def cmd_closure(args) -> int:
    a = _one_dim(_load(args.file))
    an = Analysis(a)
    acc = _accepting(args)
    if args.json or args.dump_json:
        print(json.dumps(closure_json(an, acc, args.omega), indent=2))
        return EXIT_TRUE
    lines = []
    for i, row in enumerate(an.star):
        for j, f in enumerate(row):
            if not f.is_bot():
                lines.append(f"{a.names[j]} -> {a.names[i]} : {format_function(f)}")
    if args.omega:
        accs = a.accepting if acc is None else a.states(acc)
        vec, order = an.omega_k(accs)
        for pos, s in enumerate(order):
            lines.append(f"omega[{a.names[s]}] = {vec[pos]!r}")
    print("\n".join(lines))
    return EXIT_TRUE


def _query(args):
    a = _one_dim(_load(args.file))
    s0 = args.from_ if args.from_ is not None else a.names[a.initial]
    return a, a.state(s0), _accepting(args), _rational(args.energy)


def cmd_reach(args) -> int:
    a, s0, acc, x0 = _query(args)
    verdict = Analysis(a).reach(x0, s0, acc)
    _emit(args, {"verdict": verdict}, "TRUE" if verdict else "FALSE")
    return EXIT_TRUE if verdict else EXIT_FALSE


def cmd_buchi(args) -> int:
    a, s0, acc, x0 = _query(args)
    an = Analysis(a)
    if args.method == "omega":
        verdict = an.buchi_omega(x0, s0, acc)
        _emit(args, {"verdict": verdict, "method": "omega"}, "TRUE" if verdict else "FALSE")
    else:
        verdict, j = an.buchi_cycle(x0, s0, acc)
        witness = a.names[j] if verdict else None
        text = f"TRUE (witness state {witness})" if verdict else "FALSE"
        _emit(args, {"verdict": verdict, "method": "cycle", "witness": witness}, text)
    return EXIT_TRUE if verdict else EXIT_FALSE


def cmd_simulate(args) -> int:
    a, s0, acc, x0 = _query(args)
    if acc is None:
        acc = sorted(a.accepting)
    if args.mode == "buchi":
        verdict, j = iterate_buchi(a, s0, acc, x0, args.cap)
        payload = {"verdict": verdict.value, "mode": "buchi", "witness": a.names[j] if j is not None else None}
        text = verdict.value + (f" (accepting cycle through {a.names[j]})" if j is not None else "")
    else:
        verdict, run = iterate_reach(a, s0, acc, x0, args.cap)
        wit = witness_json(a, run) if run else None
        payload = {"verdict": verdict.value, "mode": "reach", "witness": wit}
        text = verdict.value
        if wit:
            parts = []
            for w in wit:
                p = f"({w['state']}, {w['energy']})"
                if "pumped" in w:
                    p += f" [pumped via {' -> '.join(w['pumped'])}]"
                parts.append(p)
            text += "\n" + " -> ".join(parts)
    _emit(args, payload, text)
    return {Verdict.TRUE: EXIT_TRUE, Verdict.FALSE: EXIT_FALSE}.get(verdict, EXIT_INCONCLUSIVE)


def cmd_cover(args) -> int:
    a = _load(args.file)
    if isinstance(a, EnergyAutomaton):
        a = MultiDimAutomaton.from_1d(a)
    parts = [p for p in args.energy.split(",")]
    try:
        x0 = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"energy {args.energy!r} must be {a.dim} comma-separated naturals") from None
    if len(x0) != a.dim or any(x < 0 for x in x0):
        raise UsageError(f"energy {args.energy!r} must be {a.dim} comma-separated naturals")
    s0 = args.from_ if args.from_ is not None else a.names[a.initial]
    res = coverable(a, s0, x0, _accepting(args))
    basis = sorted((a.names[s], list(v)) for s, v in res.basis)
    text = ("TRUE" if res.verdict else "FALSE") + "\nbasis: " + ", ".join(f"({s}, {tuple(v)})" for s, v in basis)
    _emit(args, {"verdict": res.verdict, "basis": basis, "iterations": res.iterations}, text)
    return EXIT_TRUE if res.verdict else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="energyalg", description="Decide energy problems for energy automata.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, query=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--accepting", help="comma-separated accepting states (overrides the file)")
        if query:
            sp.add_argument("--from", dest="from_", help="initial state (overrides the file)")
            sp.add_argument("--energy", required=True, help="initial energy")
        sp.set_defaults(func=fn)
        return sp

    add("check", cmd_check, "validate an automaton file", query=False)
    sp = add("closure", cmd_closure, "print the closure T*", query=False)
    sp.add_argument("--omega", action="store_true", help="also print the Büchi predicate vector")
    sp.add_argument("--dump-json", action="store_true", help="same as --json")
    add("reach", cmd_reach, "reachability of an accepting state")
    sp = add("buchi", cmd_buchi, "Büchi acceptance")
    sp.add_argument("--method", choices=("omega", "cycle"), default="cycle")
    sp = add("simulate", cmd_simulate, "brute-force oracle")
    sp.add_argument("--cap", type=int, default=None, help="round limit")
    sp.add_argument("--mode", choices=("reach", "buchi"), default="reach")
    add("cover", cmd_cover, "multi-dimensional coverability")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_TRUE
    try:
        return args.func(args)
    except (UsageError, ParseError, AutomatonError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
