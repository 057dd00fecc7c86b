"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 the input is not a
covariance, 3 internal disagreement (c_k routes or a verification check).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import covariance as cov
from . import distribution as dist
from . import fps, synthesis, transforms
from .covariance import CovarianceSpec
from .errors import DomainError, NonIntegralLinearTerm, ParseError, PsdError
from .transforms import TransformSpec

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_DISAGREE = 3

VERIFY_LEVELS = ("none", "identities", "oracle")
DEFAULT_X = (Fraction(1, 4),)
ORACLE_MAX_ORDER = 128


@dataclass
class RunConfig:
    expression: str | None = None
    order: int = fps.DEFAULT_ORDER
    output_format: str = "text"
    transform: TransformSpec | None = None
    verify_level: str = "none"
    oracle_samples: int = 10**6
    seed: int = 0
    x_points: list[Fraction] = field(default_factory=list)
    preset: str | None = None
    s_lead: Fraction = Fraction(1)
    domain: Fraction | None = None


class UsageError(Exception):
    pass


def rational_json(q) -> dict:
    q = Fraction(q)
    return {"n": str(q.numerator), "d": str(q.denominator), "approx": float(q)}


def rational_from_json(obj) -> Fraction:
    return Fraction(int(obj["n"]), int(obj["d"]))


def series_json(s) -> list[dict]:
    return [rational_json(c) for c in s.coeffs]


def parse_expression(text: str) -> CovarianceSpec:
    return cov.parse_spec(text)


def _build_spec(config: RunConfig) -> CovarianceSpec:
    if config.preset is not None:
        spec = cov.preset(config.preset, max(config.order + 8, 128))
    elif config.expression is None:
        raise UsageError("an expression or --preset is required")
    else:
        spec = parse_expression(config.expression)
    if config.domain is not None:
        spec = spec.with_domain(config.domain)
    return spec


def _verdict_json(v: synthesis.ValidityVerdict) -> dict:
    return {
        "passed": v.passed,
        "analytic_proxy_ok": v.analytic_proxy_ok,
        "positivity_ok": v.positivity_ok,
        "sample_radius": v.sample_radius,
        "tau0_nonzero": v.tau0_nonzero,
        "tau0_positive": v.tau0_positive,
        "all_c_nonneg": v.all_c_nonneg,
        "first_negative_index": v.first_negative_index,
        "u_absolutely_monotone": v.u_absolutely_monotone,
        "checked_order": v.checked_order,
    }


def _identities(spec: CovarianceSpec, result: synthesis.SynthesisResult) -> dict:
    q = result.quadratures
    n = result.argpow
    v = cov.to_series(spec, q.order * n + 2)
    v_base = v.truncate(q.order + 2).scale_argument(n) / (n * n)
    r_s, r_b = synthesis.ode_residuals(v_base, q)
    count = min(q.order, 12)
    pde_y = synthesis.pde_residuals_y(result.c, min(result.order, 12), result.order)
    pde_x = synthesis.pde_residuals_x(v_base, q, result.base_c, count)
    return {
        "ode_s": r_s.is_zero(),
        "ode_b": r_b.is_zero(),
        "pde_y": all(r.is_zero() for r in pde_y),
        "pde_x": all(r.is_zero() for r in pde_x),
        "routes": result.route_agreement,
    }


def _oracle(spec: CovarianceSpec, result: synthesis.SynthesisResult, config: RunConfig) -> tuple[list[dict], bool, bool]:
    """Per-point reports plus (all verified, any point outside the domain).

    A point whose omega tail has not settled at the requested order is retried
    with the coefficient table recomputed at twice the order, up to
    ORACLE_MAX_ORDER.
    """
    points = []
    ok = True
    outside = False
    tables = {result.order: result.c}
    for x in config.x_points or DEFAULT_X:
        entry: dict = {"x": rational_json(x)}
        order = result.order
        try:
            while True:
                if order not in tables:
                    tables[order] = synthesis.synthesize(spec, order, config.s_lead).c
                try:
                    model = dist.model_at_mean(tables[order], x)
                    break
                except DomainError:
                    if order >= ORACLE_MAX_ORDER:
                        raise
                    order = min(2 * order, ORACLE_MAX_ORDER)
            entry["working_order"] = order
            report = dist.moments(model, spec)
            var_mc, se = dist.monte_carlo_variance(model, config.oracle_samples, config.seed)
        except PsdError as exc:
            entry["error"] = str(exc)
            outside = True
            points.append(entry)
            continue
        v = float(report.v_of_x)
        exact_ok = bool(report.agrees)
        mc_ok = abs(var_mc - v) <= 5 * se + report.tolerance
        entry.update(
            y=rational_json(model.y),
            mean=float(report.mean),
            variance=float(report.variance),
            v_of_x=v,
            tail_bound=report.tail_bound,
            variance_tolerance=report.tolerance,
            variance_ok=exact_ok,
            monte_carlo={"samples": config.oracle_samples, "seed": config.seed,
                         "variance": var_mc, "standard_error": se, "ok": mc_ok},
        )
        ok = ok and exact_ok and mc_ok
        points.append(entry)
    return points, ok, outside


def run(config: RunConfig) -> tuple[int, dict]:
    """Run one synthesis; returns (exit code, report). Diagnostics go in report["error"]."""
    report: dict = {"schema": SCHEMA_VERSION, "order": config.order}
    try:
        if config.order < 2:
            raise UsageError("--order must be at least 2")
        if config.verify_level not in VERIFY_LEVELS:
            raise UsageError(f"--verify must be one of {', '.join(VERIFY_LEVELS)}")
        if config.verify_level == "oracle" and config.oracle_samples < 1000:
            raise UsageError("--samples must be at least 1000 for the oracle check")
        spec = _build_spec(config)
    except (UsageError, ParseError, KeyError, PsdError) as exc:
        report["error"] = str(exc).strip("'\"")
        return EXIT_USAGE, report

    report["covariance"] = {"kind": spec.kind, "text": cov.spec_text(spec)}
    report["s_lead"] = rational_json(config.s_lead)
    try:
        result = synthesis.synthesize(spec, config.order, config.s_lead)
    except NonIntegralLinearTerm as exc:
        report["error"] = str(exc)
        report["verdict"] = {"passed": False, "normal_form": False}
        return EXIT_INVALID, report
    except (PsdError, ValueError) as exc:
        report["error"] = str(exc)
        return EXIT_USAGE, report

    q = result.quadratures
    report.update(
        argpow=result.argpow,
        quadratures={"s": series_json(q.s), "b": series_json(q.b), "tau": series_json(q.tau)},
        c=[rational_json(c) for c in result.c],
        route_agreement=result.route_agreement,
        verdict=_verdict_json(result.verdict),
    )
    code = EXIT_OK
    if not result.route_agreement:
        code = EXIT_DISAGREE
    elif not result.verdict.passed:
        code = EXIT_INVALID

    t = config.transform
    if t is not None and not t.is_identity:
        try:
            t_spec = transforms.transform_covariance(spec, t)
            t_omega = transforms.transform_omega(result.omega, t, config.order)
        except PsdError as exc:
            report["error"] = str(exc)
            return EXIT_USAGE, report
        report["transform"] = {
            "shift": t.shift_m, "power": t.power_k, "argpow": t.argpow_n,
            "scale": rational_json(t.scale_C),
            "covariance": cov.spec_text(t_spec),
            "omega": series_json(t_omega),
        }
        if config.verify_level != "none":
            roundtrip = transforms.verify_roundtrip(result.omega, t, config.order, spec)
            report["transform"]["roundtrip"] = roundtrip
            if not roundtrip and code == EXIT_OK:
                code = EXIT_DISAGREE

    if config.verify_level in ("identities", "oracle"):
        ident = _identities(spec, result)
        report["identities"] = ident
        if not all(ident.values()) and code == EXIT_OK:
            code = EXIT_DISAGREE
    if config.verify_level == "oracle" and code == EXIT_OK:
        points, ok, outside = _oracle(spec, result, config)
        report["oracle"] = points
        if not ok:
            code = EXIT_DISAGREE
        elif outside:
            code = EXIT_USAGE
    report["exit_code"] = code
    return code, report


def _fmt(q: dict) -> str:
    return q["n"] if q["d"] == "1" else f"{q['n']}/{q['d']}"


def render_text(report: dict) -> str:
    lines = []
    if "covariance" in report:
        lines.append(f"V(x) = {report['covariance']['text']}  [{report['covariance']['kind']}]")
    if "c" in report:
        lines.append(f"order {report['order']}, s'(0) = {_fmt(report['s_lead'])}" +
                     (f", omega in y^{report['argpow']}" if report.get("argpow", 1) > 1 else ""))
        lines.append("c_k:")
        for k, c in enumerate(report["c"]):
            lines.append(f"  c_{k} = {_fmt(c)}")
        lines.append(f"routes agree: {'yes' if report['route_agreement'] else 'NO'}")
    v = report.get("verdict")
    if v:
        lines.append(f"covariance check: {'passed' if v['passed'] else 'FAILED'}")
        for key in ("analytic_proxy_ok", "positivity_ok", "tau0_positive", "all_c_nonneg", "u_absolutely_monotone"):
            if key in v:
                lines.append(f"  {key}: {v[key]}")
        if v.get("first_negative_index") is not None:
            lines.append(f"  first negative c_k at k = {v['first_negative_index']}")
    t = report.get("transform")
    if t:
        lines.append(f"transform m={t['shift']} k={t['power']} n={t['argpow']}: V -> {t['covariance']}")
        lines.append("  omega: " + ", ".join(_fmt(c) for c in t["omega"]))
        if "roundtrip" in t:
            lines.append(f"  round trip: {'ok' if t['roundtrip'] else 'MISMATCH'}")
    if "identities" in report:
        lines.append("identities: " + ", ".join(f"{k}={'ok' if ok else 'FAIL'}" for k, ok in report["identities"].items()))
    for p in report.get("oracle", []):
        if "error" in p:
            lines.append(f"x = {_fmt(p['x'])}: {p['error']}")
            continue
        mc = p["monte_carlo"]
        lines.append(
            f"x = {_fmt(p['x'])}: variance {p['variance']:.12g} vs V(x) {p['v_of_x']:.12g}"
            f" ({'ok' if p['variance_ok'] else 'FAIL'}); Monte Carlo {mc['variance']:.6g}"
            f" +- {mc['standard_error']:.2g} ({'ok' if mc['ok'] else 'FAIL'})"
        )
    return "\n".join(lines)


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational_arg(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="psdsynth",
        description="Synthesize the power series distribution whose variance, as a function of the mean, is V(x).",
    )
    p.add_argument("expression", nargs="?", help="V(x) in x with + - * / ^ and parentheses; '-' reads stdin")
    p.add_argument("--order", type=int, default=fps.DEFAULT_ORDER, help="number of coefficients (default 16)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--shift", type=int, default=0, metavar="M", help="multiply omega by y^M")
    p.add_argument("--power", type=int, default=1, metavar="K", help="raise omega to the K-th power")
    p.add_argument("--argpow", type=int, default=1, metavar="N", help="replace y by y^N in omega")
    p.add_argument("--verify", choices=VERIFY_LEVELS, default="none")
    p.add_argument("--samples", type=int, default=10**6, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x", type=_rational_list, default=[], metavar="LIST", help="comma-separated means for the oracle")
    p.add_argument("--preset", choices=sorted(cov.PRESETS), help="built-in covariance outside the grammar")
    p.add_argument("--s-lead", type=_rational_arg, default=Fraction(1), metavar="Q",
                   help="leading coefficient of s(z); rescales c_k by Q^-k (default 1)")
    p.add_argument("--domain", type=_rational_arg, default=None, metavar="R",
                   help="right end of the interval (0, R) on which V must be positive")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags; 2 is reserved for invalid covariances
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    expression = args.expression
    if expression == "-":
        expression = sys.stdin.read()
    try:
        transform = TransformSpec(args.shift, args.power, args.argpow)
    except ValueError as exc:
        print(f"psdsynth: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.s_lead <= 0:
        print("psdsynth: --s-lead must be positive", file=sys.stderr)
        return EXIT_USAGE
    config = RunConfig(
        expression=expression,
        order=args.order,
        output_format=args.format,
        transform=transform,
        verify_level=args.verify,
        oracle_samples=args.samples,
        seed=args.seed,
        x_points=args.x,
        preset=args.preset,
        s_lead=args.s_lead,
        domain=args.domain,
    )
    code, report = run(config)
    if "error" in report:
        print(f"psdsynth: {report['error']}", file=sys.stderr)
    if args.format == "json":
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif "c" in report:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
