"""Benchmark and fixture command line.

Two subcommands:

* ``bench`` - regenerate a matrix family instance from its seed, time the
  requested factorizations, and append one CSV row per (algorithm, rho,
  trial). Only the factorization call is timed; generation and any
  verification run outside the clock.
* ``gen`` - write a family instance to the binary fixture format.

Exit codes: 0 success, 1 usage error (bad flags or family parameters),
2 runtime error (I/O and everything else).
"""

import argparse
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .algorithm import cceqr
from .diagnostics import (
    SVD_ORACLE_LIMIT,
    TIE_TOL,
    RunReport,
    rank_reveal_metrics,
    reconstruct_r,
)
from .gb import _naive_qr, check_gb_form, gb_qr, gb_qr_naive
from .generators import MixtureSpec, gen_gaussian, gen_hadamard_adversary, gen_mixture_eigvecs
from .matrix_io import write_matrix

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

FAMILIES = ("gaussian", "hadamard", "mixture")
ALGOS = ("gb", "gb-naive", "cceqr-cssp", "cceqr-full")

CSV_HEADER = (
    "family,m,n,k,algo,rho,trial,seconds,cycles,max_tracked,"
    "gb_ok,equiv,sigma_ratio,residual_ratio"
)


@dataclass
class BenchConfig:
    family: str
    k: int
    algos: list
    rhos: list
    trials: int
    seed: int
    out: str
    verify: bool = False
    m: int | None = None
    n: int | None = None
    kexp: int | None = None
    rexp: int | None = None
    ell: float = 6.0
    sigma2: float = 5.0
    dense_limit: int = 2000
    params: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_matrix(family, *, m=None, n=None, kexp=None, rexp=None,
                 ell=6.0, sigma2=5.0, seed=0, dense_limit=2000):
    """Instantiate one family member; raises ValueError on bad parameters."""
    if family == "gaussian":
        if m is None or n is None:
            raise ValueError("gaussian family needs --m and --n")
        return gen_gaussian(m, n, seed)
    if family == "hadamard":
        if kexp is None or rexp is None:
            raise ValueError("hadamard family needs --kexp and --rexp")
        return gen_hadamard_adversary(kexp, rexp)
    if family == "mixture":
        if m is None or n is None:
            raise ValueError("mixture family needs --m and --n")
        spec = MixtureSpec(m=m, n=n, ell=ell, sigma2=sigma2, seed=seed)
        return gen_mixture_eigvecs(spec, dense_limit=dense_limit)
    raise ValueError(f"unknown family {family!r}")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _report_row(r):
    return ",".join(
        _fmt(v)
        for v in (
            r.family, r.m, r.n, r.k, r.algo, r.rho, r.trial, f"{r.seconds:.6e}",
            r.cycles, r.max_tracked, r.gb_ok, r.equiv, r.sigma_ratio,
            r.residual_ratio,
        )
    )


def _time_algo(algo, A, k, rho):
    t0 = time.perf_counter()
    if algo == "gb":
        out = gb_qr(A, k)
    elif algo == "gb-naive":
        out = gb_qr_naive(A, k)
    elif algo == "cceqr-cssp":
        out = cceqr(A, k, rho, full=False)
    elif algo == "cceqr-full":
        out = cceqr(A, k, rho, full=True)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    return out, time.perf_counter() - t0


def run_bench(config):
    """Run the benchmark grid and write the CSV file."""
    if config.trials < 1:
        raise ValueError("need at least one trial")
    for rho in config.rhos:
        if not 0.0 < rho < 1.0:
            raise ValueError(f"rho={rho} outside (0, 1)")
    for algo in config.algos:
        if algo not in ALGOS:
            raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGOS}")
    A = build_matrix(
        config.family, m=config.m, n=config.n, kexp=config.kexp,
        rexp=config.rexp, ell=config.ell, sigma2=config.sigma2,
        seed=config.seed, dense_limit=config.dense_limit,
    )
    m, n = A.shape
    k = config.k if config.k is not None else m
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m} x {n} matrix")

    reference = None
    if config.verify:
        reference = _naive_qr(A, k)  # shared oracle for all equivalence checks

    rows = []
    for algo in config.algos:
        rhos = config.rhos if algo.startswith("cceqr") else [None]
        for rho in rhos:
            for trial in range(config.trials):
                out, seconds = _time_algo(algo, A, k, rho)
                report = RunReport(
                    family=config.family, m=m, n=n, k=k, algo=algo,
                    rho=rho, trial=trial, seconds=seconds,
                )
                if algo.startswith("cceqr"):
                    report.cycles = out.cycles
                    report.commits_per_cycle = list(out.commits_per_cycle)
                    report.max_tracked = out.max_tracked
                if config.verify:
                    _verify_into(report, A, k, out, algo, reference)
                rows.append(report)
    with open(config.out, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(_report_row(r) + "\n")
    return rows


def _verify_into(report, A, k, out, algo, reference):
    fact, gap = reference
    if algo.startswith("cceqr"):
        R = out.R if out.R is not None else reconstruct_r(A, out.p, out.wy)
        report.gb_ok = bool(check_gb_form(R, k, 1e-10))
        report.equiv = (
            None if gap <= TIE_TOL else bool(np.array_equal(out.p[:k], fact.p[:k]))
        )
        p = out.p
    else:
        report.gb_ok = bool(check_gb_form(out.R, k, 1e-10))
        p = out.p
    if A.shape[0] * A.shape[1] <= SVD_ORACLE_LIMIT:
        metrics = rank_reveal_metrics(A, p, k)
        report.sigma_ratio = metrics.sigma_ratio
        report.residual_ratio = metrics.residual_ratio


def gen_fixture(family, path, *, m=None, n=None, kexp=None, rexp=None,
                ell=6.0, sigma2=5.0, seed=0, dense_limit=2000):
    """Write one family instance to the binary fixture format."""
    A = build_matrix(
        family, m=m, n=n, kexp=kexp, rexp=rexp, ell=ell, sigma2=sigma2,
        seed=seed, dense_limit=dense_limit,
    )
    write_matrix(path, A)
    return A.shape


def _add_family_flags(p):
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--m", type=int, help="rows (gaussian) / components (mixture)")
    p.add_argument("--n", type=int, help="columns (gaussian) / points (mixture)")
    p.add_argument("--kexp", type=int, help="hadamard: log2 of the row count")
    p.add_argument("--rexp", type=int, help="hadamard: log2 of the column count")
    p.add_argument("--ell", type=float, default=6.0, help="mixture separation scale")
    p.add_argument("--sigma2", type=float, default=5.0, help="mixture kernel variance")
    p.add_argument("--seed", type=int, default=0)


def make_parser():
    parser = _Parser(prog="cceqr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="time factorizations, write CSV")
    _add_family_flags(bench)
    bench.add_argument("--k", type=int, default=None,
                       help="skeleton size (default: number of rows)")
    bench.add_argument("--rho", default="0.05",
                       help="comma list of candidate fractions for cceqr")
    bench.add_argument("--trials", type=int, default=1)
    bench.add_argument("--algo", default="gb,cceqr-cssp",
                       help=f"comma list from {ALGOS}")
    bench.add_argument("--full", action="store_true",
                       help="upgrade cceqr-cssp entries to cceqr-full")
    bench.add_argument("--out", required=True, help="CSV output path")
    bench.add_argument("--verify", action="store_true",
                       help="add GB-form, equivalence and rank-reveal columns")

    gen = sub.add_parser("gen", help="write a fixture matrix file")
    _add_family_flags(gen)
    gen.add_argument("--out", required=True, help="fixture output path")
    return parser


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            shape = gen_fixture(
                args.family, args.out, m=args.m, n=args.n, kexp=args.kexp,
                rexp=args.rexp, ell=args.ell, sigma2=args.sigma2, seed=args.seed,
            )
            print(f"wrote {shape[0]} x {shape[1]} {args.family} matrix to {args.out}")
            return EXIT_OK
        algos = [a.strip() for a in args.algo.split(",") if a.strip()]
        if args.full:
            algos = ["cceqr-full" if a == "cceqr-cssp" else a for a in algos]
        config = BenchConfig(
            family=args.family, k=args.k, algos=algos,
            rhos=[float(x) for x in args.rho.split(",") if x.strip()],
            trials=args.trials, seed=args.seed, out=args.out,
            verify=args.verify, m=args.m, n=args.n, kexp=args.kexp,
            rexp=args.rexp, ell=args.ell, sigma2=args.sigma2,
        )
        rows = run_bench(config)
        print(f"wrote {len(rows)} rows to {config.out}")
        return EXIT_OK
    except ValueError as exc:
        print(f"cceqr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cceqr: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - defensive
        print(f"cceqr: unexpected failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
