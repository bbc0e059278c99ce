"""Batch command-line surface over the engines.

Every command reads one input file, prints a deterministic run report to
stdout (JSON by default, ``--format text`` for humans) and exits 0 on a
definite answer (positive or negative), 2 on an inconclusive one
(iteration or depth bound hit), and 1 on usage or input errors.  Wall time
goes to stderr so stdout stays byte-identical across runs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import constraints, dlp, ground, petri, prover, symbolic
from .syntax import (
    Context,
    ParseError,
    Program,
    clause_to_text,
    is_flat,
    parse_goal,
    parse_program,
    program_to_text,
)

_INCONCLUSIVE = {constraints.ITERATION_BOUND, prover.DEPTH_LIMIT,
                 petri.UNKNOWN, dlp.DEPTH_LIMIT}


class _Report:
    def __init__(self, command: str, path: Path, status: str, result: dict,
                 iterations: Optional[int] = None):
        self.command = command
        self.path = path
        self.status = status
        self.result = result
        self.iterations = iterations

    def payload(self) -> dict:
        return {
            "command": self.command,
            "input": str(self.path),
            "input_digest": "sha256:" + hashlib.sha256(
                self.path.read_bytes()).hexdigest(),
            "status": self.status,
            "iterations": self.iterations,
            "result": self.result,
        }

    def text_lines(self) -> list[str]:
        lines = [f"{self.command}: {self.status}"]
        if self.iterations is not None:
            lines.append(f"iterations: {self.iterations}")
        lines.extend(_render_text(self.result))
        return lines


def _render_text(value, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{prefix}{k}:")
                lines.extend(_render_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {v}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.extend(_render_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{v}")
    else:
        lines.append(f"{prefix}{value}")
    return lines


def _load_program(path: Path) -> Program:
    return parse_program(path.read_text())


def _constraint_set_json(cs: constraints.ConstraintSet) -> list:
    return [c.to_json() for c in cs]


# ---------------------------------------------------------------------------
# Command implementations: each returns a _Report
# ---------------------------------------------------------------------------

def _cmd_check(args) -> _Report:
    program = _load_program(args.file)
    result = {
        "dialect": program.dialect,
        "atoms": list(program.sig.names),
        "clauses": len(program.clauses),
        "flat": is_flat(program),
    }
    return _Report("check", args.file, "ok", result)


def _cmd_saturate(args) -> _Report:
    program = _load_program(args.file)
    res = symbolic.saturate(program)
    result = {
        "fixpoint": [str(f) for f in res.fixpoint],
        "iterations": res.iterations,
    }
    if args.trace:
        result["trace"] = [[str(f) for f in step] for step in res.trace]
    return _Report("saturate", args.file, "fixpoint", result, res.iterations)


def _cmd_saturate1(args) -> _Report:
    program = _load_program(args.file)
    res = constraints.saturate_one(program, args.max_iters)
    result = {
        "constraints": _constraint_set_json(res.constraints),
        "constraint_texts": [str(c) for c in res.constraints],
        "iterations": res.iterations,
    }
    return _Report("saturate1", args.file, res.status, result, res.iterations)


def _cmd_oracle(args) -> _Report:
    program = _load_program(args.file)
    interp = ground.lfp_bounded(program, args.cap)
    result = {"cap": args.cap, "facts": [str(f) for f in interp.sorted_facts()]}
    return _Report("oracle", args.file, "ok", result)


def _cmd_prove(args) -> _Report:
    program = _load_program(args.file)
    goal = parse_goal(args.goal, program.sig)
    res = prover.prove(program, goal, args.depth)
    result: dict = {"goal": str(goal), "depth_limit": args.depth}
    if res.tree is not None:
        result["depth"] = res.depth
        result["tree"] = res.tree.to_json()
        result["tree_text"] = res.tree.to_text()
    return _Report("prove", args.file, res.status, result)


def _cmd_dlp_lfp(args) -> _Report:
    program = dlp.parse_dlp(args.file.read_text())
    lfp, iterations = dlp.dlp_lfp(program)
    result = {
        "lfp": [sorted(program.sig.names[i] for i in c)
                for c in dlp.sorted_interp(lfp)],
        "iterations": iterations,
    }
    return _Report("dlp lfp", args.file, "ok", result, iterations)


def _cmd_dlp_refute(args) -> _Report:
    program = dlp.parse_dlp(args.file.read_text())
    goal = dlp.parse_dlp_goal(args.goal, program.sig)
    res = dlp.slo_refute(program, goal, args.depth)
    result = {"goal": args.goal, "steps": res.steps}
    return _Report("dlp refute", args.file, res.status, result)


def _cmd_dlp_compare(args) -> _Report:
    program = _load_program(args.file)
    report = dlp.compare(program)
    result = {
        "sound": report.sound,
        "complete": report.complete,
        "witness": report.witness,
    }
    return _Report("dlp compare", args.file, "ok", result)


def _cmd_petri_encode(args) -> _Report:
    net = petri.parse_net(args.file.read_text())
    program = petri.encode(net, strict=args.strict)
    result = {"dialect": program.dialect, "program": program_to_text(program)}
    return _Report("petri encode", args.file, "ok", result)


def _cmd_petri_cover(args) -> _Report:
    net = petri.parse_net(args.file.read_text())
    res = petri.cover(net, args.max_iters, strict=args.strict)
    return _Report("petri cover", args.file, res.status,
                   {"iterations": res.iterations}, res.iterations)


def _cmd_petri_explore(args) -> _Report:
    net = petri.parse_net(args.file.read_text())
    markings = petri.forward_explore(net, args.steps, args.size_bound)
    result = {
        "markings": [str(m) for m in sorted(markings)],
        "count": len(markings),
        "covers_target": petri.forward_covers(net, markings)
        if net.targets else None,
    }
    return _Report("petri explore", args.file, "ok", result)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lofix",
        description="Bottom-up evaluation and verification for LO / LO1 programs",
    )
    top.add_argument("--format", choices=("json", "text"), default="json")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("file", type=Path)
        p.set_defaults(fn=fn)
        return p

    add("check", _cmd_check, help="parse and validate a program")
    p = add("saturate", _cmd_saturate, help="LO fixpoint saturation")
    p.add_argument("--trace", action="store_true")
    p = add("saturate1", _cmd_saturate1, help="bounded LO1 saturation")
    p.add_argument("--max-iters", type=int, default=100)
    p = add("oracle", _cmd_oracle, help="size-capped ground fixpoint")
    p.add_argument("--cap", type=int, default=6)
    p = add("prove", _cmd_prove, help="top-down proof search")
    p.add_argument("--goal", required=True)
    p.add_argument("--depth", type=int, default=20)

    dlp_p = sub.add_parser("dlp", help="disjunctive logic programming")
    dlp_sub = dlp_p.add_subparsers(dest="subcommand", required=True)
    p = dlp_sub.add_parser("lfp")
    p.add_argument("file", type=Path)
    p.set_defaults(fn=_cmd_dlp_lfp)
    p = dlp_sub.add_parser("refute")
    p.add_argument("file", type=Path)
    p.add_argument("--goal", required=True)
    p.add_argument("--depth", type=int, default=25)
    p.set_defaults(fn=_cmd_dlp_refute)
    p = dlp_sub.add_parser("compare")
    p.add_argument("file", type=Path)
    p.set_defaults(fn=_cmd_dlp_compare)

    petri_p = sub.add_parser("petri", help="Petri-net coverability")
    petri_sub = petri_p.add_subparsers(dest="subcommand", required=True)
    p = petri_sub.add_parser("encode")
    p.add_argument("file", type=Path)
    p.add_argument("--strict", action="store_true",
                   help="encode empty post-sets with a '1' body")
    p.set_defaults(fn=_cmd_petri_encode)
    p = petri_sub.add_parser("cover")
    p.add_argument("file", type=Path)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(fn=_cmd_petri_cover)
    p = petri_sub.add_parser("explore")
    p.add_argument("file", type=Path)
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--size-bound", type=int, default=10)
    p.set_defaults(fn=_cmd_petri_explore)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0

    started = time.monotonic()
    try:
        report = args.fn(args)
    except FileNotFoundError as e:
        print(f"error: cannot read {e.filename}", file=sys.stderr)
        return 1
    except (ParseError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    if args.format == "json":
        print(json.dumps(report.payload(), indent=2))
    else:
        print("\n".join(report.text_lines()))
    elapsed_ms = (time.monotonic() - started) * 1000.0
    print(f"wall_time_ms={elapsed_ms:.1f}", file=sys.stderr)
    return 2 if report.status in _INCONCLUSIVE else 0


if __name__ == "__main__":
    sys.exit(main())
