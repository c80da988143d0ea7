"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from . import __version__
from .angular import AngularProblem, check_omega, spectrum
from .config import ScanConfig
from .errors import InvalidInput, NumericalFailure
from .halfline import HalflineProblem, classify
from .suite import GROUPS, figure1_grid, z0_points
from .svgplot import figure1_svg
from .verify import compare_spectra, perturbation_budget, quantum_dot_matrix
from .oracle import oracle_spectrum

SCHEMA = 1
CSV_HEADER = ["omega", "k", "lambda", "branch", "residual"]
FIG_HEADER = ["series", "omega", "lambda", "branch", "residual"]
MAX_DENOMINATOR = 12


def fmt(x: float) -> str:
    return format(float(x), ".17g")


# --- argument parsing ---------------------------------------------------------------------


@dataclass(frozen=True)
class Angle:
    """An angle typed by the user, possibly recognised as an exact multiple of pi."""

    value: float
    text: str
    fraction: str | None = None


def snap_to_pi(text: str, exact: bool = False) -> Angle:
    """Parse radians; a value with >= 4 significant digits that agrees with
    p pi / q (q <= 12) to within half a unit in its last digit is taken as that
    multiple of pi, so 1.5708 means pi/2 and 0.7854 means pi/4."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise InvalidInput(f"not a number: {text!r}") from None
    v = float(d)
    if not math.isfinite(v):
        raise InvalidInput(f"not a finite number: {text!r}")
    tup = d.as_tuple()
    digits = len(tup.digits)
    if exact or digits < 4 or v <= 0:
        return Angle(v, text)
    half_ulp = 0.5 * 10.0 ** tup.exponent
    for q in range(1, MAX_DENOMINATOR + 1):
        p = round(v * q / math.pi)
        if p > 0 and abs(p * math.pi / q - v) <= half_ulp:
            fr = Fraction(p, q)
            return Angle(fr.numerator * math.pi / fr.denominator, text, f"{fr.numerator}/{fr.denominator}")
    return Angle(v, text)


def parse_window(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(":"))
    except ValueError:
        raise InvalidInput(f"window must look like a:b, got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b) and b > a):
        raise InvalidInput(f"window {text!r} must satisfy a < b")
    return a, b


def parse_int_range(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b = (int(t) for t in text.split(":"))
            if b < a:
                raise ValueError
            return list(range(a, b + 1))
        return [int(text)]
    except ValueError:
        raise InvalidInput(f"k must be an integer or a:b range, got {text!r}") from None


def omega_from(args, required: bool = True) -> Angle | None:
    if getattr(args, "omega_pi", None) is not None:
        try:
            f = float(args.omega_pi)
        except ValueError:
            raise InvalidInput(f"not a number: {args.omega_pi!r}") from None
        return Angle(f * math.pi, f"{args.omega_pi}pi", None)
    if getattr(args, "omega", None) is not None:
        return snap_to_pi(args.omega, args.exact)
    if required:
        raise InvalidInput("give --omega (radians) or --omega-pi (fraction of pi)")
    return None


def default_jobs() -> int:
    env = os.environ.get("CONE_DIRAC_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InvalidInput(f"CONE_DIRAC_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise InvalidInput("CONE_DIRAC_THREADS must be positive")
        return n
    return os.cpu_count() or 1


@dataclass
class RunConfig:
    command: str
    ks: list[int] = field(default_factory=list)
    omegas: list[float] = field(default_factory=list)
    window: tuple[float, float] | None = None
    out: str | None = None
    format: str = "csv"
    tol: float | None = None
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def public(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")  # output must not depend on parallelism
        return d


# --- output -------------------------------------------------------------------------------


def write_atomic(path: str | None, text: str) -> None:
    """Write all-or-nothing: a temporary file in the target directory is renamed into place."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-", suffix=os.path.basename(target))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def json_text(cfg: RunConfig, results: list, reports: list, started: float) -> str:
    doc = {
        "schema": SCHEMA,
        "command": cfg.command,
        "config": cfg.public(),
        "results": results,
        "reports": reports,
        "meta": {"version": __version__, "wall_time": round(time.time() - started, 3)},
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def pmap(fn, items: list, jobs: int) -> list:
    """Order-preserving map; each task is single-threaded."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, *zip(*items)))


# --- commands -------------------------------------------------------------------------------


def _spectrum_task(k: int, omega: float, window, step: float):
    sp = spectrum(AngularProblem(k, omega), window, ScanConfig(window=tuple(window), step=step))
    return [(omega, k, r.lam, r.branch.value, r.residual) for r in sp.records]


def cmd_spectrum(args) -> int:
    started = time.time()
    om = omega_from(args)
    check_omega(om.value)
    ks = parse_int_range(args.k)
    window = parse_window(args.window)
    cfg = RunConfig("spectrum", ks, [om.value], window, args.out, args.format, None, args.jobs or default_jobs(),
                    {"omega_text": om.text, "omega_pi_fraction": om.fraction, "step": args.step})
    chunks = pmap(_spectrum_task, [(k, om.value, window, args.step) for k in ks], cfg.jobs)
    rows = sorted((r for c in chunks for r in c), key=lambda r: (r[1], r[2]))
    if args.format == "csv":
        text = csv_text(CSV_HEADER, [[fmt(w), k, fmt(lam), b, fmt(res)] for w, k, lam, b, res in rows])
    elif args.format == "json":
        results = [{"omega": w, "k": k, "lambda": lam, "branch": b, "residual": res} for w, k, lam, b, res in rows]
        text = json_text(cfg, results, [], started)
    else:
        raise InvalidInput("spectrum supports csv or json output")
    write_atomic(args.out, text)
    return 0


def _figure_task(omega: float, window):
    return [(p.omega, p.lam, p.residual) for p in z0_points(omega, window)]


def cmd_figure1(args) -> int:
    started = time.time()
    if args.points < 1:
        raise InvalidInput("the aperture grid is empty")
    if not 0 < args.omega_min_pi < args.omega_max_pi < 1:
        raise InvalidInput("grid must lie strictly inside (0, pi)")
    if args.points < 2:
        raise InvalidInput("the aperture grid needs at least two points")
    window = parse_window(args.window)
    grid = figure1_grid(args.points, args.omega_min_pi, args.omega_max_pi, args.notch_pi)
    for w in grid:
        check_omega(w)
    cfg = RunConfig("figure1", [0], [float(w) for w in grid], window, args.out, args.format, None,
                    args.jobs or default_jobs(), {"points": args.points, "notch_pi": args.notch_pi})
    per = pmap(_figure_task, [(float(w), window) for w in grid], cfg.jobs)
    pts = [p for chunk in per for p in chunk]
    convex = [float(w) for w in grid if w < 0.5 * math.pi]
    rows = [["Z0", fmt(w), fmt(lam), "Eq1", fmt(res)] for w, lam, res in pts]
    for w in convex:
        b = math.pi / (4 * w) + 0.5
        rows += [["bound_plus", fmt(w), fmt(b), "", ""], ["bound_minus", fmt(w), fmt(-b), "", ""]]
    for w in grid:
        rows += [["half_plus", fmt(w), fmt(0.5), "", ""], ["half_minus", fmt(w), fmt(-0.5), "", ""]]
    abs_min = min((abs(lam) for _, lam, _ in pts), default=math.inf)
    summary = {
        "samples": len(grid),
        "points": len(pts),
        "min_abs_lambda": abs_min,
        "bound_violations": sum(1 for w, lam, _ in pts if w < 0.5 * math.pi and abs(lam) < math.pi / (4 * w) + 0.5 - 1e-9),
    }
    svg = figure1_svg([(w, lam) for w, lam, _ in pts], convex, window) if (args.svg or args.format == "svg") else None
    if args.format == "csv":
        text = csv_text(FIG_HEADER, rows)
    elif args.format == "json":
        results = [{"omega": w, "lambda": lam, "residual": res} for w, lam, res in pts]
        text = json_text(cfg, results, [summary], started)
    else:
        text = svg
    write_atomic(args.out, text)
    if args.svg:
        write_atomic(args.svg, svg)
    print(f"figure1: {summary['samples']} apertures, {summary['points']} points, min |lambda| = {abs_min:.6f}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    started = time.time()
    names = list(GROUPS) if not args.only else [s.strip() for s in args.only.split(",") if s.strip()]
    unknown = [n for n in names if n not in GROUPS]
    if unknown or not names:
        raise InvalidInput(f"unknown check group(s) {unknown}; choose from {', '.join(GROUPS)}")
    if args.tol is not None and not args.tol > 0:
        raise InvalidInput("--tol must be positive")
    cfg = RunConfig("verify", out=args.out, format="json", tol=args.tol, jobs=1, extra={"groups": names})
    reports = []
    for name in names:
        for rep in GROUPS[name](args.tol):
            d = rep.to_dict()
            d["group"] = name
            reports.append(d)
    failed = [r for r in reports if not r["passed"]]
    write_atomic(args.out, json_text(cfg, [{"checks": len(reports), "failed": len(failed)}], reports, started))
    print(f"verify: {len(reports) - len(failed)}/{len(reports)} checks passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_compare(args) -> int:
    started = time.time()
    om = omega_from(args)
    check_omega(om.value)
    window = parse_window(args.window)
    k = int(args.k)
    ref = spectrum(AngularProblem(k, om.value), window)
    other = oracle_spectrum(k, om.value, window)
    rep = compare_spectra(ref, other, args.tol)
    cfg = RunConfig("compare", [k], [om.value], window, args.out, "json", args.tol, 1, {"omega_text": om.text})
    results = [
        {"solver": name, "lambda": r.lam, "branch": r.branch.value, "residual": r.residual}
        for name, sp in (("transcendental", ref), ("shooting", other))
        for r in sp.records
    ]
    write_atomic(args.out, json_text(cfg, results, [rep.to_dict()], started))
    return 0 if rep.passed else 1


def cmd_classify(args) -> int:
    started = time.time()
    if args.kind == "halfline":
        b = math.inf if args.b.strip().lower() in ("inf", "infinity", "oo") else float(args.b)
        rep = classify(HalflineProblem(float(args.alpha), b))
        result = {"alpha": float(args.alpha), "endpoint_b": "inf" if math.isinf(b) else b, **rep.to_dict()}
        cfg = RunConfig("classify halfline", extra={"alpha": float(args.alpha), "b": args.b})
    elif args.kind == "perturbation":
        om = omega_from(args)
        verdict = perturbation_budget(om.value, float(args.nu))
        result = {"omega": om.value, "nu": float(args.nu), "budget": math.pi / (4 * om.value), "verdict": verdict.value}
        cfg = RunConfig("classify perturbation", omegas=[om.value], extra={"omega_text": om.text, "nu": float(args.nu)})
    else:
        th = snap_to_pi(args.theta, args.exact)
        qd = quantum_dot_matrix(th.value)
        result = qd.to_dict()
        cfg = RunConfig("classify quantumdot", extra={"theta_text": th.text, "theta_pi_fraction": th.fraction})
    cfg.out, cfg.format = args.out, "json"
    write_atomic(args.out, json_text(cfg, [result], [], started))
    return 0


# --- entry point ------------------------------------------------------------------------------


def _add_omega(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--omega", help="half-aperture in radians")
    g.add_argument("--omega-pi", help="half-aperture as a fraction of pi")
    p.add_argument("--exact", action="store_true", help="do not recognise rounded multiples of pi")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conedirac", description="Dirac operators on circular cones: spectra and checks")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="angular eigenvalues for one aperture")
    p.add_argument("--k", default="0", help="integer or range a:b")
    _add_omega(p)
    p.add_argument("--window", default="-25:25")
    p.add_argument("--step", type=float, default=0.005, help="scan step in lambda")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("figure1", help="Z_0 against the aperture")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--omega-min-pi", type=float, default=0.05)
    p.add_argument("--omega-max-pi", type=float, default=0.95)
    p.add_argument("--notch-pi", type=float, default=0.01)
    p.add_argument("--window", default="-10:10")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("--out")
    p.add_argument("--svg", help="also write the plot here")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("verify", help="run the verification matrix")
    p.add_argument("--tol", type=float, help="override every check tolerance")
    p.add_argument("--only", help=f"comma separated subset of: {', '.join(GROUPS)}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="transcendental solver against the shooting oracle")
    p.add_argument("--k", type=int, default=0)
    _add_omega(p)
    p.add_argument("--window", default="-10:10")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("classify", help="classification queries")
    csub = p.add_subparsers(dest="kind", required=True)
    c = csub.add_parser("halfline")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--b", default="inf")
    c.add_argument("--out")
    c = csub.add_parser("perturbation")
    _add_omega(c)
    c.add_argument("--nu", type=float, required=True)
    c.add_argument("--out")
    c = csub.add_parser("quantumdot")
    c.add_argument("--theta", required=True)
    c.add_argument("--exact", action="store_true")
    c.add_argument("--out")
    p.set_defaults(func=cmd_classify)
    return ap


def _glue_values(argv: list[str]) -> list[str]:
    # let "--window -10:10" through argparse, which would read -10:10 as a flag
    out, i = [], 0
    takes = {"--window", "--omega", "--omega-pi", "--alpha", "--nu", "--theta", "--k", "--b", "--tol"}
    while i < len(argv):
        a = argv[i]
        if a in takes and i + 1 < len(argv) and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1 and (
            argv[i + 1][1].isdigit() or argv[i + 1][1] == "."
        ):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except ValueError as e:  # InvalidInput and unparsable numbers
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericalFailure as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
