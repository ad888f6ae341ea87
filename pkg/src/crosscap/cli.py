"""Command-line front end.

    crosscap generic   PROBLEM.json
    crosscap zeta      PROBLEM.json (--radius-squared Q | --annulus Q1 Q2 | --region U)
    crosscap crosscaps PROBLEM.json
    crosscap inumber   PROBLEM.json (--radius-squared Q | --auto-large-radius)

Exit codes: 0 success, 1 usage/parse error, 2 not generic, 3 not an
immersion, 4 hypothesis failure, 5 degenerate form.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import engine, oracle
from .groebner import InfiniteDimensionError
from .poly import ParseError, PolynomialError, PolynomialMap, UnknownVariableError, parse_polynomial

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_GENERIC = 2
EXIT_NOT_IMMERSION = 3
EXIT_HYPOTHESIS = 4
EXIT_DEGENERATE = 5

KINDS = ("crosscap", "immersion")


class ProblemFileError(ValueError):
    pass


@dataclass
class ProblemFile:
    variables: tuple
    map: PolynomialMap
    kind: str

    @property
    def crosscap_map(self) -> PolynomialMap:
        """The map whose cross-caps are counted: f itself, or (omega, g)."""
        return engine.augmented_map(self.map) if self.kind == "immersion" else self.map


def load_problem(source) -> ProblemFile:
    """Read and validate a problem file (path, file object or parsed dict)."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            if hasattr(source, "read"):
                data = json.load(source)
            else:
                with open(source) as fh:
                    data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must be a JSON object")
    variables = data.get("variables")
    texts = data.get("map")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ProblemFileError("'variables' must be a list of names")
    if len(set(variables)) != len(variables):
        raise ProblemFileError("duplicate variable names")
    if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
        raise ProblemFileError("'map' must be a list of polynomial strings")
    m = len(variables)
    kind = data.get("kind")
    if kind is None:
        kind = "immersion" if len(texts) == 2 * m - 2 else "crosscap"
    if kind not in KINDS:
        raise ProblemFileError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if m < 3 or m % 2 == 0:
        raise ProblemFileError(f"number of variables must be odd and >= 3, got {m}")
    want = 2 * m - 1 if kind == "crosscap" else 2 * m - 2
    if len(texts) != want:
        raise ProblemFileError(f"kind {kind!r} with m = {m} needs {want} components, got {len(texts)}")
    comps = []
    for i, t in enumerate(texts):
        try:
            comps.append(parse_polynomial(t, variables))
        except (ParseError, UnknownVariableError) as exc:
            exc.component = i
            raise
    return ProblemFile(tuple(variables), PolynomialMap(variables, comps), kind)


def parse_rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(f"give radii as exact rationals like 3 or 1/100, got {text!r}")
    return value


# ---------------------------------------------------------------------------
# reports


def _q(x) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def base_report(command: str) -> dict:
    return {
        "command": command,
        "zeta": None,
        "signatures": None,
        "dim_A": None,
        "hypotheses": None,
        "points": [],
        "totals": None,
        "retries": None,
    }


def _zeta_fields(report: dict, res: engine.ZetaResult) -> None:
    report["zeta"] = res.zeta
    report["signatures"] = {"delta": res.sig_delta, "u_delta": res.sig_u_delta}
    report["dim_A"] = res.dim_A
    report["hypotheses"] = dict(res.hypotheses)
    report["retries"] = res.retries_used


def _point_dict(cap: oracle.SignedCrossCap) -> dict:
    return {
        "coords": list(cap.point.coordinates),
        "sign": cap.sign,
        "residual": cap.point.residual,
    }


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if "error" in report:
        err = report["error"]
        lines.append(f"error: {err['code']}: {err['message']}")
        return "\n".join(lines)
    if "generic" in report:
        lines.append(f"generic: {'true' if report['generic'] else 'false'}")
        if report.get("witness") is not None:
            lines.append("witness: " + ", ".join(f"{c:.10g}" for c in report["witness"]))
    if report.get("region"):
        lines.append(f"region: {report['region']}")
    if report.get("radius_squared") is not None:
        lines.append(f"radius_squared: {report['radius_squared']}")
    if report.get("intersection_number") is not None:
        lines.append(f"intersection_number: {report['intersection_number']}")
    if report["zeta"] is not None:
        lines.append(f"zeta: {report['zeta']}")
    if report["signatures"] is not None:
        s = report["signatures"]
        lines.append(f"signatures: delta {s['delta']}, u_delta {s['u_delta']}")
    if report["dim_A"] is not None:
        lines.append(f"dim_A: {report['dim_A']}")
    if report["retries"] is not None:
        lines.append(f"retries: {report['retries']}")
    if report["hypotheses"]:
        lines.append(
            "hypotheses: " + ", ".join(f"{k}={v}" for k, v in report["hypotheses"].items())
        )
    if report["points"]:
        lines.append(f"{'#':>3}  {'sign':>4}  {'residual':>9}  coordinates")
        for i, pt in enumerate(report["points"], 1):
            sign = pt.get("sign")
            sign = "" if sign is None else f"{sign:+d}"
            coords = "  ".join(f"{c: .8f}" for c in pt["coords"])
            lines.append(f"{i:>3}  {sign:>4}  {pt['residual']:9.2e}  {coords}")
    if report["totals"] is not None:
        t = report["totals"]
        lines.append(
            f"totals: count {t['count']}, positive {t['positives']}, negative {t['negatives']}, zeta {t['zeta']}"
        )
    return "\n".join(lines)


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        stream.write(render_text(report) + "\n")


# ---------------------------------------------------------------------------
# commands; each returns (report, exit code)


def cmd_generic(problem: ProblemFile, args) -> tuple:
    p = engine.build_problem(problem.crosscap_map)
    rep = engine.check_generic(p, seed=args.seed)
    report = base_report("generic")
    report["dim_A"] = rep.dim_A
    report["generic"] = rep.generic
    report["exact"] = {"no_corank_two": rep.no_corank_two, "transversal": rep.transversal}
    report["witness"] = list(rep.witness) if rep.witness is not None else None
    report["points"] = [
        {
            "coords": list(v.coordinates),
            "rank_Df": v.rank_Df,
            "rank_Dmu": v.rank_Dmu,
            "crosscap": v.crosscap,
            "residual": v.residual,
        }
        for v in rep.points
    ]
    return report, EXIT_OK if rep.generic else EXIT_NOT_GENERIC


def _region(problem: ProblemFile, args) -> engine.Region:
    variables = problem.variables
    if args.region is not None:
        return engine.Region.custom(parse_polynomial(args.region, variables))
    if args.annulus is not None:
        return engine.Region.annulus(variables, *args.annulus)
    return engine.Region.ball(variables, args.radius_squared)


def _region_label(region: engine.Region) -> str:
    if region.kind == "ball":
        return f"ball radius^2={_q(region.params[0])}"
    if region.kind == "annulus":
        return f"annulus r1^2={_q(region.params[0])} r2^2={_q(region.params[1])}"
    return f"custom u={region.u}"


def cmd_zeta(problem: ProblemFile, args) -> tuple:
    if args.radius_squared is None and args.annulus is None and args.region is None:
        raise UsageError("zeta needs one of --radius-squared, --annulus, --region")
    region = _region(problem, args)
    p = engine.build_problem(problem.crosscap_map)
    _tune_points(p, args)
    res = engine.zeta(p, region, seed=args.seed, max_retries=args.max_retries)
    report = base_report("zeta")
    _zeta_fields(report, res)
    report["region"] = _region_label(region)
    return report, EXIT_OK


def _tune_points(p: engine.CrossCapProblem, args) -> None:
    # make the engine's cached oracle points honour the CLI tolerances
    if args.tol_residual != oracle.TOL_RESIDUAL or args.tol_dedup != oracle.TOL_DEDUP:
        pts = oracle.solve_singular_points(p.qa, list(p.mu), args.seed, args.tol_residual, args.tol_dedup, f=p.f)
        p._points[(args.seed, oracle.TOL_RESIDUAL, oracle.TOL_DEDUP)] = pts


def cmd_crosscaps(problem: ProblemFile, args) -> tuple:
    f = problem.crosscap_map
    p = engine.build_problem(f)
    _tune_points(p, args)
    caps, totals = oracle.classify_all(f, p.qa, list(p.mu), points=p.points(args.seed))
    report = base_report("crosscaps")
    report["dim_A"] = p.dim_A
    report["points"] = [_point_dict(c) for c in caps]
    report["count_real"] = engine.count_real(p)
    report["totals"] = {
        "count": totals.count,
        "positives": totals.positives,
        "negatives": totals.negatives,
        "zeta": totals.signed_sum,
    }
    return report, EXIT_OK


def cmd_inumber(problem: ProblemFile, args) -> tuple:
    if problem.kind != "immersion":
        raise UsageError("inumber needs a problem file of kind 'immersion'")
    if args.radius_squared is None and not args.auto_large_radius:
        raise UsageError("inumber needs --radius-squared or --auto-large-radius")
    g = problem.map
    p = engine.build_problem(engine.augmented_map(g))
    _tune_points(p, args)
    r2 = args.radius_squared
    if r2 is None:
        r2 = Fraction(engine.large_radius_squared(p.points(args.seed)))
    value = engine.intersection_number(g, r2, seed=args.seed, max_retries=args.max_retries, problem=p)
    res = engine.zeta(p, engine.Region.ball(g.variables, r2), args.seed, args.max_retries)
    report = base_report("inumber")
    _zeta_fields(report, res)
    report["radius_squared"] = _q(r2)
    report["intersection_number"] = value
    return report, EXIT_OK


COMMANDS = {
    "generic": cmd_generic,
    "zeta": cmd_zeta,
    "crosscaps": cmd_crosscaps,
    "inumber": cmd_inumber,
}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="problem file (JSON)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-retries", type=int, default=engine.DEFAULT_MAX_RETRIES)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--tol-residual", type=float, default=oracle.TOL_RESIDUAL)
    common.add_argument("--tol-dedup", type=float, default=oracle.TOL_DEDUP)

    parser = argparse.ArgumentParser(prog="crosscap", description="Count and sign cross-caps of polynomial maps.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generic", parents=[common], help="check that all singular points are cross-caps")
    z = sub.add_parser("zeta", parents=[common], help="signed cross-cap count over a region")
    grp = z.add_mutually_exclusive_group()
    grp.add_argument("--radius-squared", type=parse_rational)
    grp.add_argument("--annulus", nargs=2, type=parse_rational, metavar=("R1SQ", "R2SQ"))
    grp.add_argument("--region", metavar="U", help="polynomial u; region is {u >= 0}")
    sub.add_parser("crosscaps", parents=[common], help="list cross-caps with signs")
    i = sub.add_parser("inumber", parents=[common], help="intersection number of g on a sphere")
    grp = i.add_mutually_exclusive_group()
    grp.add_argument("--radius-squared", type=parse_rational)
    grp.add_argument("--auto-large-radius", action="store_true")
    return parser


def _error(command: str, code: str, message: str, **extra) -> dict:
    report = base_report(command)
    report["error"] = {"code": code, "message": message, **extra}
    return report


def run(argv: Sequence[str] | None = None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name in ("radius_squared", "annulus", "region", "auto_large_radius"):
        if not hasattr(args, name):
            setattr(args, name, None)
    command = args.command
    err_stream = stream or sys.stdout
    try:
        problem = load_problem(args.input)
        report, code = COMMANDS[command](problem, args)
    except ParseError as exc:
        report, code = _error(
            command, "parse", str(exc), position=exc.position, component=getattr(exc, "component", None)
        ), EXIT_USAGE
    except UnknownVariableError as exc:
        report, code = _error(
            command, "unknown_variable", str(exc), name=exc.name, component=getattr(exc, "component", None)
        ), EXIT_USAGE
    except (ProblemFileError, UsageError, OSError, PolynomialError) as exc:
        report, code = _error(command, "usage", str(exc)), EXIT_USAGE
    except engine.NotImmersion as exc:
        report, code = _error(
            command,
            exc.code,
            str(exc),
            radius_squared=_q(exc.radius_squared),
            witness=list(exc.witness) if exc.witness is not None else None,
        ), EXIT_NOT_IMMERSION
    except (engine.HypothesisFailure, engine.ParityError) as exc:
        report, code = _error(command, exc.code, str(exc)), EXIT_HYPOTHESIS
    except InfiniteDimensionError as exc:
        report, code = _error(command, "infinite_dimension", str(exc)), EXIT_HYPOTHESIS
    except (engine.DegenerateForm, engine.BoundaryHit) as exc:
        report, code = _error(command, exc.code, str(exc)), EXIT_DEGENERATE
    except (engine.ShapeError, ValueError) as exc:
        report, code = _error(command, "usage", str(exc)), EXIT_USAGE
    except oracle.OracleError as exc:
        report, code = _error(command, "oracle", str(exc)), EXIT_HYPOTHESIS
    emit(report, args.format, err_stream)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
