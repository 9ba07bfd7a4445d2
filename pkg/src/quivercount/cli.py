"""Command line interface.

Exit codes: 0 success, 1 verification mismatch, 2 certification failure,
3 budget exceeded, 4 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from quivercount.arith import Polynomial, coefficient_list, divisors, moebius_mu
from quivercount.counting import (
    CertificationError,
    CountingContext,
    certify_polynomial,
    euler_characteristic,
    group_order,
)
from quivercount.loopfree import free_algebra_poly, kac_euler_prediction
from quivercount.oracle import (
    BudgetExceeded,
    count_absolutely_stable,
    count_semistable_points,
    measure_s_dr,
    orbit_census,
)
from quivercount.quiver import DimVector, Quiver, Stability, divide_dimvector, slope, total_dim

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CERTIFICATION = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4

_FILE_KEYS = {"vertices", "arrows", "theta", "dim"}


class InputError(ValueError):
    pass


class CrossCheckError(RuntimeError):
    """The general and loop recursions disagree."""


@dataclass
class JobSpec:
    quiver: Quiver
    theta: Stability
    dim: DimVector
    method: str = "general"
    primes: list[int] = field(default_factory=list)
    output_format: str = "text"

    def __post_init__(self):
        if total_dim(self.dim) == 0:
            raise InputError("dimension vector must be nonzero")
        if self.method not in ("general", "loop", "both"):
            raise InputError(f"unknown method {self.method!r}")
        if self.method in ("loop", "both") and self.quiver.n != 1:
            raise InputError("--method loop needs a one-vertex quiver")


def _int_field(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_quiver_file(path) -> tuple[Quiver, Stability, DimVector]:
    """Read the JSON quiver format; ``theta`` defaults to 0, ``dim`` to 0."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    unknown = set(data) - _FILE_KEYS
    if unknown:
        raise InputError(f"{path}: unknown keys {sorted(unknown)}")
    if "vertices" not in data:
        raise InputError(f"{path}: missing field 'vertices'")
    vertices = data["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise InputError(f"{path}: 'vertices' must be a list of strings")
    arrows = data.get("arrows", [])
    if not isinstance(arrows, list):
        raise InputError(f"{path}: 'arrows' must be a list")
    for k, a in enumerate(arrows):
        if not (isinstance(a, list) and len(a) == 2 and all(isinstance(x, str) for x in a)):
            raise InputError(f"{path}: arrows[{k}] must be a [source, target] pair")
        for end in a:
            if end not in vertices:
                raise InputError(f"{path}: arrows[{k}] uses undeclared vertex {end!r}")
    try:
        quiver = Quiver(tuple(vertices), tuple(tuple(a) for a in arrows))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc

    def vector(key: str, nonnegative: bool) -> tuple[int, ...]:
        raw = data.get(key, {})
        if not isinstance(raw, dict):
            raise InputError(f"{path}: '{key}' must be an object mapping vertices to integers")
        for v, x in raw.items():
            if v not in vertices:
                raise InputError(f"{path}: '{key}' names undeclared vertex {v!r}")
            _int_field(x, f"{path}: {key}.{v}")
            if nonnegative and x < 0:
                raise InputError(f"{path}: {key}.{v} is negative")
        return quiver.vector(raw)

    return quiver, vector("theta", False), vector("dim", True)


def parse_assignment(quiver: Quiver, text: str, nonnegative: bool = True) -> tuple[int, ...]:
    """Parse ``i=1,j=0`` into a vector in vertex order."""
    values = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        name, sep, raw = part.partition("=")
        if not sep:
            raise InputError(f"expected vertex=value, got {part!r}")
        if name not in quiver.vertices:
            raise InputError(f"unknown vertex {name!r}")
        try:
            x = int(raw)
        except ValueError:
            raise InputError(f"{name}: {raw!r} is not an integer") from None
        if nonnegative and x < 0:
            raise InputError(f"{name}: negative dimension")
        values[name] = x
    return quiver.vector(values)


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return range(int(lo), int(lo) + 1)
        return range(int(lo), int(hi) + 1)
    except ValueError:
        raise InputError(f"bad range {text!r}, expected A..B") from None


def _slope_text(mu: Fraction) -> str:
    return f"{mu.numerator}/{mu.denominator}"


def compute_polynomial(quiver: Quiver, theta: Stability, d: DimVector, method: str) -> Polynomial:
    """Certified A_d; ``both`` raises CrossCheckError when the two paths differ."""
    if method == "general":
        return CountingContext(quiver, theta, d).polynomial()
    m = len(quiver.arrows)
    loop = certify_polynomial(free_algebra_poly(d[0], m))
    if method == "both":
        general = CountingContext(quiver, theta, d).polynomial()
        if general != loop:
            raise CrossCheckError(f"general recursion gives {general}, loop recursion gives {loop}")
    return loop


def polynomial_report(quiver: Quiver, theta: Stability, d: DimVector, p: Polynomial) -> dict:
    return {
        "dim": quiver.as_mapping(d),
        "slope": _slope_text(slope(theta, d)),
        "polynomial": {"coeffs": coefficient_list(p), "string": str(p)},
        "euler_characteristic": euler_characteristic(p),
    }


def _load_job(args) -> JobSpec:
    quiver, theta, d = parse_quiver_file(args.quiver)
    if getattr(args, "dim", None):
        d = parse_assignment(quiver, args.dim)
    if getattr(args, "theta", None):
        theta = parse_assignment(quiver, args.theta, nonnegative=False)
    primes = []
    if getattr(args, "primes", None):
        try:
            primes = [int(x) for x in args.primes.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"bad prime list {args.primes!r}") from None
        for p in primes:
            if p < 2 or any(p % k == 0 for k in range(2, math.isqrt(p) + 1)):
                raise InputError(f"{p} is not prime")
    return JobSpec(
        quiver,
        theta,
        d,
        method=getattr(args, "method", "general"),
        primes=primes,
        output_format=getattr(args, "format", "text"),
    )


def cmd_compute(args, out=None) -> int:
    out = out or sys.stdout
    job = _load_job(args)
    try:
        p = compute_polynomial(job.quiver, job.theta, job.dim, job.method)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    report = polynomial_report(job.quiver, job.theta, job.dim, p)
    if job.output_format == "json":
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        dim = ", ".join(f"{k}={v}" for k, v in report["dim"].items())
        print(f"dim: {dim}", file=out)
        print(f"slope: {report['slope']}", file=out)
        print(f"A(t) = {p}", file=out)
        print(f"coeffs: {report['polynomial']['coeffs']}", file=out)
        print(f"euler_characteristic: {report['euler_characteristic']}", file=out)
    return EXIT_OK


def verify_rows(job: JobSpec, budget: Optional[int] = None) -> list[dict]:
    """Compare polynomial evaluations with oracle counts at each prime."""
    ctx = CountingContext(job.quiver, job.theta, job.dim)
    poly = ctx.polynomial()
    rows = []
    for p in job.primes:
        census = orbit_census(job.quiver, job.dim, p, job.theta, budget=budget)
        rows.append(
            {
                "prime": p,
                "quantity": "absolutely_stable",
                "predicted": int(poly(p)),
                "oracle": count_absolutely_stable(census, p),
            }
        )
        ss = ctx.ss_ratio(job.dim) * group_order(job.dim)
        rows.append(
            {
                "prime": p,
                "quantity": "semistable_points",
                "predicted": _as_int(ss(p)),
                "oracle": count_semistable_points(census),
            }
        )
        for r in divisors(math.gcd(*job.dim))[1:]:
            base = divide_dimvector(job.dim, r)
            a = ctx.stable_count(base)
            value = sum(moebius_mu(r // s) * a(p ** s) for s in divisors(r)) / r
            rows.append(
                {
                    "prime": p,
                    "quantity": f"s_r{r}",
                    "predicted": _as_int(value),
                    "oracle": measure_s_dr(census, r),
                }
            )
    for row in rows:
        row["ok"] = row["predicted"] == row["oracle"]
    return rows


def _as_int(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    job = _load_job(args)
    if not job.primes:
        raise InputError("--primes needs at least one prime")
    try:
        rows = verify_rows(job, budget=args.max_points)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if job.output_format == "json":
        print(json.dumps(rows, sort_keys=True), file=out)
    else:
        print(f"{'p':>3} {'quantity':<20} {'polynomial':>12} {'oracle':>12}  result", file=out)
        for row in rows:
            status = "pass" if row["ok"] else "FAIL"
            print(
                f"{row['prime']:>3} {row['quantity']:<20} {row['predicted']!s:>12} {row['oracle']!s:>12}  {status}",
                file=out,
            )
    bad = [row for row in rows if not row["ok"]]
    for row in bad:
        print(
            f"mismatch at p={row['prime']} ({row['quantity']}): "
            f"polynomial {row['predicted']} != oracle {row['oracle']}",
            file=sys.stderr,
        )
    return EXIT_MISMATCH if bad else EXIT_OK


def sweep_cells(family: str, ms: range, ds: range, base: Optional[tuple] = None) -> list[tuple]:
    """Grid cells (label, m, quiver, theta, d) in deterministic order."""
    cells = []
    if family == "loop":
        for m in ms:
            for d in ds:
                if d >= 1:
                    cells.append((f"loop m={m} d={d}", m, Quiver.loop(m), (0,), (d,)))
    elif family == "kronecker":
        for m in ms:
            for total in ds:
                for a in range(total, -1, -1):
                    if total >= 1:
                        cells.append((f"kronecker m={m} d=({a},{total - a})", m, Quiver.kronecker(m), (1, 0), (a, total - a)))
    elif family == "file":
        quiver, theta, d = base
        for k in ds:
            if k >= 1:
                cells.append((f"{k}*d", None, quiver, theta, tuple(k * x for x in d)))
    else:
        raise InputError(f"unknown family {family!r}")
    return cells


def sweep_cell(cell: tuple) -> dict:
    label, m, quiver, theta, d = cell
    row = {"cell": label, "dim": quiver.as_mapping(d)}
    try:
        p = CountingContext(quiver, theta, d).polynomial()
    except CertificationError as exc:
        row["error"] = str(exc)
        return row
    row.update(polynomial_report(quiver, theta, d, p))
    if quiver.n == 1 and d[0] >= 2:
        row["kac_euler_prediction"] = str(kac_euler_prediction(d[0], len(quiver.arrows)))
        quotient, rem = divmod(p, Polynomial([-1, 1]))
        row["derivative_at_1"] = str(quotient(1)) if rem.is_zero() else None
    return row


def cmd_sweep(args, out=None) -> int:
    out = out or sys.stdout
    base = None
    if args.family == "file":
        if not args.quiver:
            raise InputError("--family file needs --quiver")
        base = parse_quiver_file(args.quiver)
        if total_dim(base[2]) == 0:
            raise InputError("quiver file must give a nonzero 'dim' for a file sweep")
    cells = sweep_cells(args.family, parse_range(args.m), parse_range(args.d), base)
    if args.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_cell, cells))
    else:
        rows = [sweep_cell(c) for c in cells]
    if args.format == "json":
        print(json.dumps(rows, sort_keys=True), file=out)
    else:
        for row in rows:
            if "error" in row:
                print(f"{row['cell']:<28} FAILED: {row['error']}", file=out)
                continue
            line = f"{row['cell']:<28} chi={row['euler_characteristic']:<6} A(t) = {row['polynomial']['string']}"
            if "kac_euler_prediction" in row:
                line += f"  [A/(t-1) at 1: {row['derivative_at_1']}, predicted {row['kac_euler_prediction']}]"
            print(line, file=out)
    return EXIT_CERTIFICATION if any("error" in r for r in rows) else EXIT_OK


def cmd_euler(args, out=None) -> int:
    out = out or sys.stdout
    job = _load_job(args)
    try:
        p = compute_polynomial(job.quiver, job.theta, job.dim, job.method)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    chi = euler_characteristic(p)
    report = {"dim": job.quiver.as_mapping(job.dim), "euler_characteristic": chi}
    if job.quiver.n == 1 and job.dim[0] >= 2:
        quotient, rem = divmod(p, Polynomial([-1, 1]))
        report["derivative_at_1"] = str(quotient(1)) if rem.is_zero() else None
        report["kac_euler_prediction"] = str(kac_euler_prediction(job.dim[0], len(job.quiver.arrows)))
    if job.output_format == "json":
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        for k, v in report.items():
            if k == "dim":
                v = ", ".join(f"{name}={x}" for name, x in v.items())
            print(f"{k}: {v}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quivercount",
        description="Counting polynomials of moduli of stable quiver representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def job_args(p, method=True):
        p.add_argument("--quiver", required=True, help="quiver file (JSON)")
        p.add_argument("--dim", help="dimension vector override, e.g. i=1,j=1")
        p.add_argument("--theta", help="stability override, e.g. i=1,j=0")
        if method:
            p.add_argument("--method", choices=["general", "loop", "both"], default="general")
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("compute", help="compute and certify A_d(t)")
    job_args(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="compare with a brute-force census over F_p")
    job_args(p, method=False)
    p.add_argument("--primes", default="2", help="comma separated primes")
    p.add_argument("--max-points", type=int, default=None, help="oracle point budget")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="certify polynomials over a family grid")
    p.add_argument("--family", choices=["loop", "kronecker", "file"], required=True)
    p.add_argument("--m", default="1..3", help="arrow/loop count range A..B")
    p.add_argument("--d", default="1..4", help="dimension (total dimension, or multiple for file) range A..B")
    p.add_argument("--quiver", help="quiver file for --family file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("euler", help="Euler characteristic A_d(1)")
    job_args(p)
    p.set_defaults(func=cmd_euler)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
