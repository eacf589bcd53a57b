"""Command-line front end.

    copulakit sample --model M.json --n 1000 --seed 42 --out x.csv
    copulakit fit --family clayton --marginals gamma,pareto,binomial:10 --data x.csv --out fit.json
    copulakit eval --model M.json --what cdf --points p.csv
    copulakit tau --family frank --theta 1

Exit codes: 0 success, 2 user error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .archimedean import FAMILIES, make_copula, tau_inv
from .core import pseudo_observations
from .errors import CopulaError
from .fitting import fit_copula, fit_sklar
from .marginals import MARGINALS
from .modelio import format_csv, load_model, model_to_dict, read_csv, save_json
from .sklar import SklarDistribution

EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would print the usage block too; keep diagnostics to one line
    def error(self, message):
        raise UsageError(f"{message} (see '{self.prog} --help')")


def _seed(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text!r}")
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64), got {val}")
    return val


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    model = load_model(args.model)
    rng = np.random.default_rng(args.seed)
    if isinstance(model, SklarDistribution):
        values = model.rand(rng, args.n)
        header = [f"x{i + 1}" for i in range(model.dim)]
        ints = [j for j, m in enumerate(model.marginals) if m.discrete]
    else:
        values = model.sample(rng, args.n)
        header = [f"u{i + 1}" for i in range(model.dim)]
        ints = []
    _emit(format_csv(header, values, ints), args.out)
    return 0


def _parse_marginals(text: str):
    specs = []
    for item in text.split(","):
        name, _, arg = item.strip().partition(":")
        name = name.lower()
        if name not in MARGINALS:
            raise UsageError(f"--marginals: unknown family {name!r}; expected one of {sorted(MARGINALS)}")
        if arg:
            if name != "binomial":
                raise UsageError(f"--marginals: only binomial takes a ':trials' suffix, got {item!r}")
            try:
                specs.append((name, {"trials": int(arg)}))
            except ValueError:
                raise UsageError(f"--marginals: bad trial count in {item!r}") from None
        else:
            specs.append((name, {}))
    return specs


def cmd_fit(args) -> int:
    family = args.family.lower()
    if family not in FAMILIES:
        raise UsageError(f"--family must be one of {sorted(FAMILIES)} for fitting, got {args.family!r}")
    _, data = read_csv(args.data)
    if data.shape[1] < 2:
        raise UsageError(f"{args.data}: a copula needs at least 2 columns, got {data.shape[1]}")
    if args.marginals == "ranks":
        report = fit_copula(family, pseudo_observations(data), args.method)
        model = make_copula(family, data.shape[1], report.copula_theta)
    else:
        model, report = fit_sklar(family, _parse_marginals(args.marginals), data, args.method)
    save_json(model_to_dict(model), args.out)
    report_path = args.report or str(Path(args.out).with_suffix("")) + ".report.json"
    doc = report.to_dict()
    save_json(doc, report_path)
    sys.stdout.write(json.dumps(doc) + "\n")
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    _, pts = read_csv(args.points)
    if pts.shape[1] != model.dim:
        raise UsageError(f"{args.points}: {pts.shape[1]} columns but the model has dimension {model.dim}")
    if args.what == "cdf":
        vals = model.cdf(pts)
    elif args.what == "pdf":
        vals = model.pdf(pts)
    else:
        vals = np.atleast_1d(model.logpdf(pts))
    _emit(format_csv([args.what], np.asarray(vals)[:, None]), args.out)
    return 0


def cmd_tau(args) -> int:
    family = args.family.lower()
    if (args.theta is None) == (args.invert is None):
        raise UsageError("give exactly one of --theta or --invert")
    if args.invert is not None:
        if family not in FAMILIES:
            raise UsageError(f"--family must be one of {sorted(FAMILIES)}, got {args.family!r}")
        value = tau_inv(family, args.invert)
    else:
        value = make_copula(family, 2, args.theta).tau()
    sys.stdout.write(f"{value:.12g}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="copulakit", description="Copula sampling, fitting and evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a seeded sample to CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit", help="fit a copula (and marginals) to CSV data")
    p.add_argument("--family", required=True)
    p.add_argument("--marginals", default="ranks", help="comma list such as gamma,normal,binomial:10, or 'ranks'")
    p.add_argument("--data", required=True)
    p.add_argument("--method", choices=("tau", "mle"), default="tau")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate cdf, pdf or log-density at CSV points")
    p.add_argument("--model", required=True)
    p.add_argument("--what", choices=("cdf", "pdf", "loglik"), required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tau", help="Kendall's tau of a family, or its inverse")
    p.add_argument("--family", required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--invert", type=float)
    p.set_defaults(func=cmd_tau)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        return args.func(args)
    except (UsageError, CopulaError, ValueError) as exc:
        print(f"copulakit: error: {' '.join(str(exc).split())}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"copulakit: I/O error: {' '.join(str(exc).split())}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
