"""Command-line experiment runner.

Exit codes: 0 success, 1 invariant or self-test failure, 2 usage error,
3 input parse error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
import time
import warnings
from fractions import Fraction

import click

from . import __version__
from .algebra import PrimeField
from .constructions import (
    KINDS,
    ConstructionError,
    PointSetSpec,
    generate,
    isotropic_direction,
    max_points_on_isotropic_line,
    rng_for,
)
from .incidence import (
    LineSet,
    RegimeWarning,
    bichromatic_intersections,
    check_pencil_property,
    count_distance_pairs,
    count_incidences,
    evaluate_bound,
    regime_warnings,
    rich_points,
)
from .klein import ProjectivePoint3, plucker_from_direction, plucker_from_points
from .linecomplex import normal_for_radius, phi
from .pointio import PointSetParseError, format_pointset, read_pointset
from .selftest import run_selftest

EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_PARSE = 3

P_TWO = Fraction(2)
P_FOUR_THIRDS = Fraction(4, 3)


class InvariantFailure(click.ClickException):
    exit_code = EXIT_INVARIANT


class ParseFailure(click.ClickException):
    exit_code = EXIT_PARSE


class UsageFailure(click.ClickException):
    exit_code = EXIT_USAGE


# --- shared options ----------------------------------------------------------


def common_options(f):
    opts = [
        click.option("--p", "p", type=int, default=1009, show_default=True, help="Odd prime modulus."),
        click.option("--n", "n", type=int, default=100, show_default=True, help="Number of points (or lines)."),
        click.option("--m", "m", type=int, default=None, help="Second size parameter (points or lines)."),
        click.option("--r", "r", type=int, default=None, help="Distance / radius parameter."),
        click.option("--r1", "r1", type=int, default=None),
        click.option("--r2", "r2", type=int, default=None),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--input", "input_path", type=click.Path(), default=None, help="Point-set file."),
        click.option("--generator", type=click.Choice(KINDS), default="random", show_default=True),
        click.option("--k", "k", type=int, default=None, help="Stack count for isotropic generators."),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True),
        click.option("--workers", type=int, default=1, show_default=True),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _field(p: int) -> PrimeField:
    try:
        return PrimeField(p)
    except ValueError as exc:
        raise UsageFailure(str(exc)) from None


def _load_points(cfg: dict) -> tuple[int, list, dict]:
    """Points from --input or the generator; may override p and n from the file."""
    if cfg["input_path"]:
        try:
            p, points = read_pointset(cfg["input_path"])
        except PointSetParseError as exc:
            raise ParseFailure(str(exc)) from None
        cfg["p"], cfg["n"] = p, len(points)
        return p, points, {"source": "file"}
    spec = PointSetSpec(kind=cfg["generator"], p=cfg["p"], n=cfg["n"], k=cfg["k"], r=cfg["r"], seed=cfg["seed"])
    try:
        gen = generate(spec)
    except ConstructionError as exc:
        raise UsageFailure(str(exc)) from None
    return cfg["p"], gen.points, {"source": "generator", "generator": spec.to_dict(), **gen.meta}


def _radii(cfg: dict, default_r: int) -> tuple[int, int, int]:
    """Resolve (r, r1, r2) with r = r1 - r2; the default split is r1 = r, r2 = 0."""
    r, r1, r2 = cfg["r"], cfg["r1"], cfg["r2"]
    if r1 is not None or r2 is not None:
        r1 = r1 if r1 is not None else (r or 0) + (r2 or 0)
        r2 = r2 if r2 is not None else r1 - (r if r is not None else r1)
        if r is not None and r != r1 - r2:
            raise UsageFailure(f"inconsistent radii: r={r} but r1 - r2 = {r1 - r2}")
        return r1 - r2, r1, r2
    r = default_r if r is None else r
    return r, r, 0


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(report, indent=2, sort_keys=False))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["# config"])
    w.writerow(["key", "value"])
    for key, value in report["config"].items():
        w.writerow([key, json.dumps(value)])
    w.writerow([])
    w.writerow(["# measured"])
    w.writerow(["key", "value"])
    for key, value in report["measured"].items():
        w.writerow([key, json.dumps(value)])
    w.writerow([])
    w.writerow(["# bounds"])
    w.writerow(["formula", "params", "measured", "bound_value", "ratio", "ratio_float"])
    for b in report["bounds"]:
        w.writerow([b["formula"], json.dumps(b["params"]), b["measured"], b["bound_value"], b["ratio"], b["ratio_float"]])
    w.writerow([])
    w.writerow(["# warnings"])
    w.writerow(["message"])
    for msg in report["warnings"]:
        w.writerow([msg])
    click.echo(buf.getvalue(), nl=False)


def _report(command: str, cfg: dict, measured: dict, bounds: list, warns: list, started: float) -> dict:
    return {
        "tool": "kleinlines",
        "version": __version__,
        "command": command,
        "config": cfg,
        "measured": measured,
        "bounds": [b.to_dict() for b in bounds],
        "warnings": warns,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }


def _regime(p: int, n: int, exponent: Fraction) -> list[str]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        return regime_warnings(p, n, exponent)


# --- commands ----------------------------------------------------------------


@click.group()
@click.version_option(__version__, prog_name="kleinlines")
def main():
    """Exact line-geometry experiments over finite fields."""


@main.command()
def selftest():
    """Run the algebraic invariant suites at small p."""
    failed = None
    for res in run_selftest():
        status = "ok" if res.ok else "FAIL"
        click.echo(f"{res.name:10s} {res.passed}/{res.total} {status}")
        if not res.ok and failed is None:
            failed = res
    if failed is not None:
        raise InvariantFailure(f"suite {failed.name}: first failing identity: {failed.first_failure}")


@main.command()
@common_options
def distance(**cfg):
    """Count ordered pairs at distance r^2 and compare with the bounds."""
    started = time.perf_counter()
    p, points, source = _load_points(cfg)
    F = _field(p)
    r, r1, r2 = _radii(cfg, default_r=1)
    n = len(points)
    measured_pairs = count_distance_pairs(points, r, p)
    # line-based cross-check: red phi(A, r1) against black phi(A, r2)
    red = [phi(F, a, r1) for a in points]
    black = [phi(F, a, r2) for a in points]
    bichrom = bichromatic_intersections(LineSet.bichromatic(red, black)) if n else 0
    diagonal = n if (r * r) % p == 0 else 0
    if bichrom - diagonal != measured_pairs:
        raise InvariantFailure(
            f"distance oracle counted {measured_pairs}, line intersections {bichrom} - {diagonal} diagonal"
        )
    iso_max = max_points_on_isotropic_line(points, p)
    hyp_limit = math.isqrt(n - 1) + 1 if n > 0 else 0
    warns = _regime(p, n, P_FOUR_THIRDS)
    bounds = [evaluate_bound("distance_pairs", measured_pairs, n=n)]
    if p % 4 == 3 and r % p != 0:
        warns += _regime(p, n, P_TWO)
        bounds.append(evaluate_bound("distance_pairs_nonsplit", measured_pairs, n=n))
    measured = {
        "p": p,
        "n": n,
        "r": r,
        "r1": r1,
        "r2": r2,
        "distance_pairs": measured_pairs,
        "bichromatic_intersections": bichrom,
        "diagonal": diagonal,
        "max_points_on_isotropic_line": iso_max,
        "isotropic_hypothesis_limit": hyp_limit,
        "isotropic_hypothesis_holds": iso_max <= hyp_limit,
        "point_source": source,
    }
    _emit(_report("distance", cfg, measured, bounds, warns, started), cfg["fmt"])


def _random_isotropic_lines(F: PrimeField, count: int, seed: int) -> tuple[list, int]:
    if not F.split:
        raise UsageFailure(f"iso mode needs p = 1 mod 4 so isotropic lines lie in F_p^3 (p={F.p})")
    rng = rng_for(seed)
    seen: dict = {}
    attempts = 0
    while len(seen) < count:
        attempts += 1
        direction = isotropic_direction(F.p, int(rng.integers(1, F.p)))
        base = [int(v) for v in rng.integers(0, F.p, size=3)]
        seen.setdefault(plucker_from_direction(base, direction, F))
    return list(seen), attempts - count


def _incidence_points(F: PrimeField, lines: list, hist_points: list, count: int, how: str, seed: int) -> list:
    rng = rng_for(seed + 1)
    out: dict = {}
    if how == "random":
        while len(out) < count:
            out.setdefault(ProjectivePoint3.affine(F, *(int(v) for v in rng.integers(0, F.p, size=3))))
        return list(out)
    if how == "rich":
        for q in hist_points:
            if len(out) >= count:
                break
            out.setdefault(q)
    while len(out) < count:
        l = lines[int(rng.integers(0, len(lines)))]
        a, b = l.spanning_points()
        t = F(int(rng.integers(0, F.p)))
        q = ProjectivePoint3(tuple(x + t * y for x, y in zip(a.coords, b.coords)))
        if not q.at_infinity:
            out.setdefault(q)
    return list(out)


@main.command()
@common_options
@click.option("--mode", type=click.Choice(["complex", "iso"]), default="complex", show_default=True)
@click.option("--points", "point_mode", type=click.Choice(["random", "on_lines", "rich"]), default="on_lines",
              show_default=True, help="How the m points are chosen.")
@click.option("--engine", type=click.Choice(["both", "brute", "enumerate"]), default="both", show_default=True)
def incidence(mode, point_mode, engine, **cfg):
    """Count point-line incidences for complex lines or isotropic lines."""
    started = time.perf_counter()
    cfg.update(mode=mode, points=point_mode, engine=engine)
    warns: list[str] = []
    if mode == "complex":
        p, centres, source = _load_points(cfg)
        F = _field(p)
        r = cfg["r"] if cfg["r"] is not None else 0
        lines = [phi(F, a, r) for a in centres]
        n_lines = len(lines)
        m = cfg["m"] if cfg["m"] is not None else n_lines
        warns += _regime(p, n_lines, P_FOUR_THIRDS)
    else:
        F = _field(cfg["p"])
        p = F.p
        m_lines = cfg["m"] if cfg["m"] is not None else cfg["n"]
        lines, dupes = _random_isotropic_lines(F, m_lines, cfg["seed"])
        if dupes:
            warns.append(f"rejected {dupes} duplicate isotropic lines while sampling")
        source = {"source": "isotropic_lines"}
        m = cfg["n"]
        warns += _regime(p, m, P_FOUR_THIRDS)
    L = LineSet(lines)
    hist_points = list(rich_points(L, cfg["workers"]).entries) if point_mode == "rich" else []
    pts = _incidence_points(F, lines, hist_points, m, point_mode, cfg["seed"])
    try:
        count = count_incidences(pts, L, engine=engine, workers=cfg["workers"])
    except RuntimeError as exc:
        raise InvariantFailure(str(exc)) from None
    if mode == "complex":
        bounds = [evaluate_bound("complex_incidences", count, m=len(pts), n=len(L))]
    else:
        bounds = [evaluate_bound("isotropic_incidences", count, m=len(L), n=len(pts))]
    measured = {"p": p, "lines": len(L), "points": len(pts), "incidences": count, "line_source": source}
    _emit(_report("incidence", cfg, measured, bounds, warns, started), cfg["fmt"])


@main.command()
@common_options
@click.option("--mode", type=click.Choice(["complex", "arbitrary"]), default="complex", show_default=True)
def richpoints(mode, **cfg):
    """Histogram of k-rich points of a line family, with per-k bounds."""
    started = time.perf_counter()
    cfg.update(mode=mode)
    warns: list[str] = []
    if mode == "complex":
        p, centres, source = _load_points(cfg)
        F = _field(p)
        r = cfg["r"] if cfg["r"] is not None else 0
        lines = [phi(F, a, r) for a in centres]
    else:
        F = _field(cfg["p"])
        p = F.p
        rng = rng_for(cfg["seed"])
        seen: dict = {}
        while len(seen) < cfg["n"]:
            a = ProjectivePoint3.affine(F, *(int(v) for v in rng.integers(0, p, size=3)))
            b = ProjectivePoint3.affine(F, *(int(v) for v in rng.integers(0, p, size=3)))
            if a != b:
                seen.setdefault(plucker_from_points(a, b))
        lines = list(seen)
        source = {"source": "random_lines"}
    L = LineSet(lines)
    n = len(L)
    warns += _regime(p, n, P_TWO)
    hist = rich_points(L, cfg["workers"])
    if not hist.pair_identity_holds():
        raise InvariantFailure("sum of C(mult, 2) differs from the number of meeting pairs")
    measured = {
        "p": p,
        "lines": n,
        "meeting_pairs": hist.meeting_pairs,
        "rich_point_counts": {str(k): v for k, v in hist.counts().items()},
        "exact_multiplicity_counts": {str(k): v for k, v in hist.exact_counts().items()},
        "line_source": source,
    }
    if mode == "complex":
        C = normal_for_radius(F(r))
        bad = check_pencil_property(C, L, hist)
        measured["pencil_property_holds"] = not bad
        if bad:
            raise InvariantFailure(f"{len(bad)} rich points violate the pencil property, e.g. {bad[0]}")
    bounds = []
    for k, q_k in hist.counts().items():
        bounds.append(evaluate_bound("rich_points_complex", q_k, n=n, k=k))
        bounds.append(evaluate_bound("rich_points_generic", q_k, n=n, k=k))
    _emit(_report("richpoints", cfg, measured, bounds, warns, started), cfg["fmt"])


@main.command()
@click.option("--generator", type=click.Choice(KINDS), required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, default=0)
@click.option("--k", "k", type=int, default=None)
@click.option("--r", "r", type=int, default=None)
@click.option("--side", type=int, default=None, help="Grid side length (grid only).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(), default=None, help="Write here instead of stdout.")
def construct(generator, p, n, k, r, side, seed, output):
    """Write a generated point set in the point-set file format."""
    try:
        PrimeField(p)
        spec = PointSetSpec(kind=generator, p=p, n=n, k=k, r=r, seed=seed, side=side)
        gen = generate(spec)
    except (ConstructionError, ValueError) as exc:
        raise UsageFailure(str(exc)) from None
    comments = [f"generator: {json.dumps(spec.to_dict(), sort_keys=True)}"]
    if gen.meta:
        comments.append(f"meta: {json.dumps(gen.meta, sort_keys=True)}")
    comments.append(f"kleinlines {__version__}")
    text = format_pointset(p, gen.points, comments)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
