"""Command line interface.

    satdist learn --function f.cnf --format dimacs --epsilon 0.1 --delta 0.05 --out run/
    satdist enumerate --function f.cnf --format dimacs
    satdist eval --weights a.txt b.txt
    satdist gen cnf --n 8 --clauses 10 --width 3 --seed 1

Exit codes: 0 success, 2 configuration/parse error, 3 unsatisfiable
function, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import boolfn
from .errors import (
    EnumerationLimitError,
    NumericError,
    ParseError,
    SamplingError,
    UnsatisfiableError,
)
from .experiment import ExperimentConfig, run_experiment
from .metrics import exact_kl, l1_distance, pinsker_bound
from .model import WeightVector, exact_distribution

EXIT_OK, EXIT_CONFIG, EXIT_UNSAT, EXIT_NUMERIC = 0, 2, 3, 4

_FORMATS = {"dimacs": "dimacs-cnf", "tt-hex": "truthtable-hex", "ltf": "ltf-text"}


def _add_function_args(p):
    p.add_argument("--function", required=True, metavar="PATH")
    p.add_argument("--format", choices=sorted(_FORMATS), default="dimacs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satdist", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a distribution from satisfying assignments")
    _add_function_args(p)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=1000, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--surrogate", choices=["softplus", "phuber", "logistic"], default="softplus")
    p.add_argument("--radius", type=float, default=1.0, help="ball radius B")
    p.add_argument("--rho", type=float, default=None, help="Lipschitz bound (default 2*sqrt(n))")
    p.add_argument("--eps1", type=float, default=None, help="membership tolerance (default epsilon)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="satdist-out", metavar="DIR")

    p = sub.add_parser("enumerate", help="list satisfying assignments as CSV")
    _add_function_args(p)
    p.add_argument("--out", default=None, metavar="FILE")

    p = sub.add_parser("eval", help="KL / l1 between the models of two weight files")
    p.add_argument("--weights", nargs=2, required=True, metavar=("P", "Q"))

    p = sub.add_parser("gen", help="emit a random CNF or LTF instance")
    p.add_argument("kind", choices=["cnf", "ltf"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--clauses", type=int, default=None, help="CNF clause count (default 2n)")
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, metavar="FILE")
    return parser


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_learn(args) -> int:
    cfg = ExperimentConfig(
        function_path=args.function,
        fmt=_FORMATS[args.format],
        epsilon=args.epsilon,
        delta=args.delta,
        samples=args.samples,
        seed=args.seed,
        radius=args.radius,
        rho=args.rho,
        surrogate=args.surrogate,
        eps1=args.eps1,
        out=args.out,
        workers=args.workers,
    )
    report = run_experiment(cfg)
    path = report.write(args.out)
    best = report.best
    line = f"trials={report.num_trials} T={report.T} selected={report.selected}"
    if best.kl is not None:
        line += f" kl={best.kl:.6g} l1={best.l1:.6g} pinsker={best.pinsker:.6g}"
    print(f"{line} -> {path}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    f = boolfn.load_function(args.function, _FORMATS[args.format])
    sat = boolfn.enumerate_satisfying(f)
    lines = ["index,bits"]
    for idx, row in zip(sat.indices.tolist(), sat.assignments):
        lines.append(f"{idx}," + "".join("+" if v > 0 else "-" for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    p, q = (WeightVector.load(path) for path in args.weights)
    if p.n != q.n:
        raise ValueError(f"weight files have lengths {p.n} and {q.n}")
    P, Q = exact_distribution(p.w), exact_distribution(q.w)
    kl = exact_kl(P, Q)
    result = {"n": p.n, "kl": kl, "kl_bits": kl / np.log(2), "l1": l1_distance(P, Q),
              "pinsker": pinsker_bound(kl)}
    print(json.dumps(result, indent=2))
    return EXIT_OK


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "cnf":
        clauses = args.clauses if args.clauses is not None else 2 * args.n
        f = boolfn.random_cnf(args.n, clauses, min(args.width, args.n), rng)
        text = boolfn.serialize_function(f, "dimacs-cnf")
    else:
        f = boolfn.random_ltf(args.n, rng, args.threshold)
        text = boolfn.serialize_function(f, "ltf-text")
    _emit(text, args.out)
    return EXIT_OK


_COMMANDS = {"learn": cmd_learn, "enumerate": cmd_enumerate, "eval": cmd_eval, "gen": cmd_gen}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UnsatisfiableError, SamplingError) as exc:
        print(f"satdist: {exc}", file=sys.stderr)
        return EXIT_UNSAT
    except (NumericError, FloatingPointError) as exc:
        print(f"satdist: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParseError, EnumerationLimitError, ValueError, OSError) as exc:
        print(f"satdist: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
