"""Command-line front end: solve, derive, check, simulate.

Exit codes: 0 success, 1 model or usage error, 2 model outside the
derivable class, 3 numerical failure (singular system or check over tolerance).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .derivation import derive_tree, express_state
from .expr import render, sample_rates
from .model import Model, ModelError
from .oracle import SingularSystem, simulate, solve
from .structure import UnsupportedStructure, classify
from .text import GRAMMAR, emit_json, format_number, json_object, parse_model

OK, MODEL_ERROR, UNSUPPORTED, NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(MODEL_ERROR, f"{self.prog}: error: {message}\n")


def _load(path: str) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model(text)


def _table(rows: list[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def cmd_solve(args) -> int:
    model = _load(args.file)
    ss = solve(model)
    if args.format == "json":
        print(emit_json(ss, model))
        return OK
    rows = [("state", "status", "pi")]
    rows += [(s.name, "up" if s.up else "down", f"{p:.12g}") for s, p in zip(model.states, ss.pi)]
    print(_table(rows))
    print(f"availability  {ss.availability:.12g}")
    print(f"residual      {ss.residual:.3e}")
    return OK


def cmd_derive(args) -> int:
    model = _load(args.file)
    deriv = derive_tree(model, classify(model))
    states = [s.name for s in model.states]
    if args.state is not None:
        if args.state not in states:
            raise UsageError(f"unknown state '{args.state}'")
        states = [args.state]
    exprs = {name: render(express_state(deriv, name)) for name in states}
    if args.format == "json":
        print(json_object([
            ("pi0", json.dumps(render(deriv.pi0))),
            ("states", json_object((k, json.dumps(v)) for k, v in exprs.items())),
        ]))
    else:
        for name, text in exprs.items():
            print(f"pi_{name} = {text}")
    return OK


def max_relative_error(model: Model, trials: int, seed: int) -> float:
    """Worst componentwise relative gap between closed form and dense solve."""
    deriv = derive_tree(model, classify(model))
    rng = np.random.default_rng(seed)
    symbols = model.rates().keys()
    worst = 0.0
    for _ in range(trials):
        bindings = sample_rates(symbols, rng)
        closed = deriv.evaluate(bindings)
        exact = solve(model.with_rates(bindings)).pi
        worst = max(worst, float(np.max(np.abs(closed - exact) / np.abs(exact))))
    return worst


def cmd_check(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    model = _load(args.file)
    err = max_relative_error(model, args.trials, args.seed)
    ok = err <= args.tol
    print(f"trials              {args.trials}")
    print(f"max relative error  {err:.3e}")
    print(f"tolerance           {args.tol:.3e}")
    print("result              " + ("PASS" if ok else "FAIL"))
    return OK if ok else NUMERICAL


def cmd_simulate(args) -> int:
    if not args.horizon > 0 or not np.isfinite(args.horizon):
        raise UsageError("--horizon must be a positive number")
    model = _load(args.file)
    est = simulate(model, args.horizon, args.seed)
    try:
        pi: Optional[np.ndarray] = solve(model).pi
    except SingularSystem:
        pi = None
    dev = None if pi is None else float(np.max(np.abs(est.occupancy - pi)))
    if args.format == "json":
        print(json_object([
            ("model", json.dumps(model.name)),
            ("seed", str(est.seed)),
            ("horizon", format_number(est.horizon)),
            ("events", str(est.events)),
            ("occupancy", json_object((s.name, format_number(o))
                                      for s, o in zip(model.states, est.occupancy))),
            ("max_deviation", "null" if dev is None else format_number(dev)),
        ]))
        return OK
    rows = [("state", "occupancy") + (("pi",) if pi is not None else ())]
    for i, s in enumerate(model.states):
        row = (s.name, f"{est.occupancy[i]:.6f}")
        rows.append(row + ((f"{pi[i]:.6f}",) if pi is not None else ()))
    print(_table(rows))
    print(f"events         {est.events}")
    print(f"horizon        {est.horizon:g}")
    if dev is not None:
        print(f"max deviation  {dev:.6f}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="closedctmc",
        description="Closed-form and numeric steady state of closed CTMC models.",
        epilog="Model file grammar (.ctmc):\n" + GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="numeric steady state and availability")
    s.add_argument("file")
    s.add_argument("--format", choices=("table", "json"), default="table")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("derive", help="closed-form expressions for each state")
    s.add_argument("file")
    s.add_argument("--state", metavar="NAME")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("check", help="compare closed forms with the dense solve")
    s.add_argument("file")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("simulate", help="Monte Carlo occupancy estimate")
    s.add_argument("file")
    s.add_argument("--horizon", type=float, default=1e6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("table", "json"), default="table")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, UsageError) as exc:
        print(str(exc), file=sys.stderr)
        return MODEL_ERROR
    except UnsupportedStructure as exc:
        print(str(exc), file=sys.stderr)
        return UNSUPPORTED
    except SingularSystem as exc:
        print(f"singular system: {exc}", file=sys.stderr)
        return NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
