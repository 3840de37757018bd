"""Command line front end.

Exit codes: 0 for a definite answer, 2 when a budget ran out or the question
is undecided, 1 on errors (bad input, unsupported dimension, invalid
certificate).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import geometry as geo
from . import svg
from .certcheck import check_certificate
from .config import ParseError, build, config_from_obj, config_to_obj, load_config
from .cover import (
    CoversCertified,
    UncoveredWitness,
    UnsupportedDimension,
    covering_radius_enclosure,
    covering_radius_exact_full,
    is_covering,
)
from .density import Dense, NotDense, density_test, epsilon0_bound_full, uncovered_region
from .exactnum import QuadElem, fmt_rat, parse_rat, parse_rational_expr
from .explorer import DEFAULT_MAX_PAIRS, check_row_certificate, monotone_violations, sweep_pythagorean
from .intlinalg import lattice_contains
from .relations import (
    NotApplicable,
    classify_quadratic,
    is_periodic,
    period_lattice,
    relation_lattice,
    subgroup_param,
)
from .witness import NotPeriodicQuadratic, periodic_witness

OK, ERROR, UNKNOWN = 0, 1, 2


class CliError(Exception):
    pass


class Out:
    """Prints exact values, with a float next to them under --approx."""

    def __init__(self, approx: bool):
        self.approx = approx

    def num(self, x) -> str:
        if isinstance(x, QuadElem):
            s = x.to_text()
            return f"{s} (~{x.approx():.6g})" if self.approx and not x.is_rational() else s
        s = fmt_rat(x)
        if self.approx and Fraction(x).denominator != 1:
            s += f" (~{float(x):.6g})"
        return s

    def vec(self, xs) -> str:
        return "(" + ", ".join(self.num(x) for x in xs) + ")"

    def line(self, key: str, value) -> None:
        print(f"{key}: {value}")


# ---------------------------------------------------------------------------
# argument helpers


def _config(args):
    if args.config and args.builder:
        raise CliError("give either --builder or --config, not both")
    if args.config:
        return load_config(args.config)
    if args.builder:
        name, _, param = args.builder.partition(":")
        if name == "pythagorean":
            if not param:
                raise CliError("pythagorean needs a hypotenuse bound, e.g. pythagorean:25")
            return build(name, max_hypotenuse=int(param))
        if param:
            raise CliError(f"builder {name!r} takes no parameter")
        return build(name)
    raise CliError("a configuration is required (--builder NAME or --config FILE)")


def _rat(text: str, what: str) -> Fraction:
    try:
        return parse_rational_expr(text)
    except ValueError as exc:
        raise CliError(f"{what}: {exc}") from exc


def _eps(args) -> Fraction:
    if args.epsilon is None:
        raise CliError("--epsilon is required")
    e = _rat(args.epsilon, "--epsilon")
    if not 0 < e < Fraction(1, 2):
        raise CliError(f"--epsilon must lie strictly between 0 and 1/2, got {fmt_rat(e)}")
    return e


def _out_dir(args) -> Path:
    d = Path(args.out or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _slug(cfg) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", cfg.label or "config")


def _eps_slug(e: Fraction) -> str:
    return f"{e.numerator}_{e.denominator}"


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_relations(args, out: Out) -> int:
    cfg = _config(args)
    rl = relation_lattice(cfg)
    param = subgroup_param(rl)
    try:
        qc = classify_quadratic(cfg)
        qclass = {"D": qc.D, "M": qc.Mprod, "triples": [list(t) for t in qc.triples]}
    except NotApplicable:
        qclass = None
    report = {
        "vectors": len(cfg),
        "rank": rl.rank,
        "d": rl.dim_d,
        "basis": rl.basis.tolist(),
        "chart": None if param.chart is None else list(param.chart),
        "periodic": is_periodic(cfg),
        "quadratic_class": qclass,
    }
    checks = []
    for text in args.check or []:
        try:
            v = [int(x) for x in text.replace(",", " ").split()]
        except ValueError as exc:
            raise CliError(f"--check expects integers, got {text!r}") from exc
        checks.append({"vector": v, "lattice_contains": lattice_contains(rl.basis, v)})
    if checks:
        report["checks"] = checks
    # one top-level key per line keeps basis rows readable
    print("{\n" + ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in report.items()) + "\n}")
    return OK


def cmd_radius(args, out: Out) -> int:
    cfg = _config(args)
    rl = relation_lattice(cfg)
    if rl.dim_d <= 2 or rl.rank == 0:
        r = covering_radius_exact_full(cfg)
        print(out.num(r.value))
        if args.verbose:
            out.line("method", r.method)
            out.line("argmax (chart)", out.vec(r.point))
        return OK
    tol = _rat(args.tol, "--tol") if args.tol else Fraction(1, 1000)
    enc, log = covering_radius_enclosure(cfg, tol, args.budget)
    print(f"[{out.num(enc.lo)}, {out.num(enc.hi)}]")
    if args.verbose:
        out.line("method", "prover bisection")
        out.line("proof calls", len(log["steps"]))
    if log["stopped"] == "budget":
        out.line("stopped", "node budget exhausted")
        return UNKNOWN
    return OK


def cmd_verify(args, out: Out) -> int:
    cfg = _config(args)
    eps = _eps(args)
    v = is_covering(cfg, eps, args.budget)
    if isinstance(v, CoversCertified):
        print("CoversCertified")
        if v.method == "prover":
            cert = v.certificate
        else:
            cert = {
                "format": "pyjama-cover-exact/1",
                "config": config_to_obj(cfg),
                "epsilon": fmt_rat(eps),
                "radius": fmt_rat(v.radius),
                "method": v.certificate["method"],
            }
        path = _out_dir(args) / f"{_slug(cfg)}-cover-{_eps_slug(eps)}.json"
        _write_json(path, cert)
        out.line("method", v.method)
        out.line("certificate", path)
        return OK
    if isinstance(v, UncoveredWitness):
        print("UncoveredWitness")
        out.line("chart point", out.vec(v.point))
        if v.torus_point is not None:
            out.line("torus point", out.vec(v.torus_point))
        out.line("min distance", out.num(v.value))
        return OK
    print("Unknown")
    for k, val in v.report.items():
        out.line(k, val)
    return UNKNOWN


def cmd_witness(args, out: Out) -> int:
    cfg = _config(args)
    try:
        w = periodic_witness(cfg)
    except NotPeriodicQuadratic as exc:
        raise CliError(f"not a periodic quadratic configuration: {exc}") from exc
    out.line("case", w.case if w.p is None or w.case != "OddPrime" else f"OddPrime(p={w.p})")
    out.line("D", w.qclass.D)
    out.line("M", w.qclass.Mprod)
    out.line("point", out.vec(w.point))
    out.line("inner products", out.vec(w.inner_products))
    out.line("bound", out.num(w.bound))
    out.line("achieved", out.num(w.achieved))
    out.line("conclusion", f"the point is uncovered for every eps < {fmt_rat(w.achieved)}, "
             f"so these strips cover the plane only if eps >= {fmt_rat(w.achieved)}")
    return OK


def _plots(cfg, eps, X, dest: Path) -> list[Path]:
    paths = []
    tag = f"{_slug(cfg)}-{_eps_slug(eps)}"
    p = dest / f"{tag}-uncovered.svg"
    p.write_text(svg.torus_figure([(X, "#d62728", "uncovered region")], f"uncovered region, eps = {fmt_rat(eps)}",
                                  caption=f"data sha256 {svg.data_hash(X)}"))
    paths.append(p)
    D = geo.difference_set(X) if len(X) ** 2 <= DEFAULT_MAX_PAIRS * 10 else None
    if D is not None:
        p = dest / f"{tag}-difference.svg"
        p.write_text(svg.torus_figure([(D, "#1f77b4", "difference set"), (X, "#d62728", "uncovered region")],
                                      f"difference set, eps = {fmt_rat(eps)}", caption=f"data sha256 {svg.data_hash(D)}"))
        paths.append(p)
    basis = period_lattice(cfg)
    fb = None if basis is None else tuple((v[0].approx(), v[1].approx()) for v in basis)
    dirs = [(u.cos.approx(), u.sin.approx()) for u in cfg.vectors]
    p = dest / f"{tag}-strips.svg"
    data = {"vectors": [[u.cos.to_text(), u.sin.to_text()] for u in cfg.vectors], "eps": eps,
            "period": None if basis is None else [[x.to_text() for x in v] for v in basis]}
    p.write_text(svg.strips_figure(dirs, float(eps), fb, f"strips, eps = {fmt_rat(eps)}",
                                   caption=f"data sha256 {svg.data_hash(data)}"))
    paths.append(p)
    return paths


def cmd_density(args, out: Out) -> int:
    cfg = _config(args)
    eps = _eps(args)
    v = density_test(cfg, eps, args.max_pairs)
    report = {"epsilon": fmt_rat(eps), "verdict": type(v).__name__}
    if isinstance(v, NotDense):
        print("NotDense")
        out.line("center", out.vec(v.center))
        out.line("clearance", out.num(v.clearance))
        out.line("conclusion", f"eps_0 <= {fmt_rat(eps)}")
        report.update(center=[fmt_rat(x) for x in v.center], clearance=fmt_rat(v.clearance))
        code = OK
    elif isinstance(v, Dense):
        print("Dense")
        out.line("conclusion", "criterion inapplicable at this eps")
        code = OK
    else:
        print("Unknown")
        out.line("reason", v.reason)
        report["reason"] = v.reason
        code = UNKNOWN
    if args.out:
        dest = _out_dir(args)
        path = dest / f"{_slug(cfg)}-density-{_eps_slug(eps)}.json"
        _write_json(path, report)
        out.line("report", path)
        if code == OK:
            for p in _plots(cfg, eps, uncovered_region(cfg, eps), dest):
                out.line("figure", p)
    return code


def cmd_bound(args, out: Out) -> int:
    cfg = _config(args)
    tol = _rat(args.tol, "--tol") if args.tol else Fraction(1, 1000)
    if tol <= 0:
        raise CliError("--tol must be positive")
    br = epsilon0_bound_full(cfg, tol, args.max_pairs)
    print("none" if br.bound is None else out.num(br.bound))
    out.line("status", br.status)
    if br.dense_below is not None:
        out.line("dense at", out.num(br.dense_below))
    out.line("probes", len(br.probes))
    if br.certificate is not None:
        out.line("center", out.vec(br.certificate.center))
        out.line("clearance", out.num(br.certificate.clearance))
        out.line("conclusion", f"eps_0 <= {fmt_rat(br.bound)}")
    if args.out:
        path = _out_dir(args) / f"{_slug(cfg)}-bound.json"
        _write_json(path, {
            "bound": None if br.bound is None else fmt_rat(br.bound),
            "status": br.status,
            "dense_below": None if br.dense_below is None else fmt_rat(br.dense_below),
            "probes": [[fmt_rat(e), name] for e, name in br.probes],
            "center": None if br.certificate is None else [fmt_rat(x) for x in br.certificate.center],
            "clearance": None if br.certificate is None else fmt_rat(br.certificate.clearance),
        })
        out.line("report", path)
    return UNKNOWN if br.status == "budget" else OK


def cmd_sweep(args, out: Out) -> int:
    kw = {}
    if args.tol:
        kw["tol"] = _rat(args.tol, "--tol")
    dest = _out_dir(args)
    recs = sweep_pythagorean(args.max_hypotenuse, budget=args.budget, max_pairs=args.max_pairs,
                             workers=args.workers, out_dir=dest, **kw)
    print("N  vectors  d  radius  density_bound  status")
    for r in recs:
        db = "-" if r.density_bound is None else out.num(r.density_bound)
        rad = "-" if r.radius is None else out.num(r.radius_lo)
        print(f"{r.N}  {r.vector_count}  {r.d}  {rad}  {db}  {r.density_status}" + (f"  error: {r.error}" if r.error else ""))
    out.line("report", dest / "sweep.jsonl")
    bad = monotone_violations(recs)
    for b in bad:
        print(f"violation: {b}", file=sys.stderr)
    if bad or any(r.error for r in recs):
        return ERROR
    return OK


def cmd_plot(args, out: Out) -> int:
    cfg = _config(args)
    eps = _eps(args)
    X = uncovered_region(cfg, eps)
    for p in _plots(cfg, eps, X, _out_dir(args)):
        out.line("figure", p)
    return OK


def cmd_check_cert(args, out: Out) -> int:
    try:
        cert = json.loads(Path(args.certificate).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read certificate: {exc}") from exc
    fmt = cert.get("format", "") if isinstance(cert, dict) else ""
    cfg = _config(args) if (args.builder or args.config) else None
    eps = _eps(args) if args.epsilon else None
    ok = False
    if fmt.startswith("pyjama-emptiness-cert/"):
        ok = True
        if cfg is not None:
            basis = relation_lattice(cfg).basis
            try:
                ok = all(lattice_contains(basis, [int(x) for x in row]) for row in cert["relations"])
            except (KeyError, TypeError, ValueError):
                ok = False
        if eps is not None and ok:
            ok = parse_rat(cert.get("epsilon", "0")) <= eps
        ok = ok and check_certificate(cert, None, eps)
    elif fmt.startswith("pyjama-sweep-row/"):
        ok = check_row_certificate(cert)
    elif fmt.startswith("pyjama-cover-exact/"):
        c = cfg or config_from_obj(cert["config"])
        e = eps if eps is not None else parse_rat(cert["epsilon"])
        ok = covering_radius_exact_full(c).value == parse_rat(cert["radius"]) and e >= parse_rat(cert["radius"])
    else:
        raise CliError(f"unknown certificate format {fmt!r}")
    print("valid" if ok else "INVALID")
    return OK if ok else ERROR


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pyjama", description="Exact tools for covering the plane by rotated strips.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, epsilon=False, tol=False, out=False, pairs=False):
        p.add_argument("--builder", help="cube_roots, section3 or pythagorean:N")
        p.add_argument("--config", metavar="FILE", help="configuration JSON file")
        p.add_argument("--approx", action="store_true", help="also print float approximations")
        p.add_argument("--budget", type=int, default=10**6, metavar="NODES", help="prover node budget")
        if epsilon:
            p.add_argument("--epsilon", metavar="EXPR", help="strip half-width, e.g. 1/3-1/48")
        if tol:
            p.add_argument("--tol", metavar="EXPR", help="bisection tolerance, e.g. 1/1000")
        if out:
            p.add_argument("--out", metavar="DIR", help="output directory")
        if pairs:
            p.add_argument("--max-pairs", type=int, default=None, help="cap on difference-set piece pairs")
        return p

    p = common(sub.add_parser("relations", help="relation lattice of a configuration"))
    p.add_argument("--check", action="append", metavar="ROW", help="test lattice membership of an integer row")
    p.set_defaults(func=cmd_relations)
    p = common(sub.add_parser("radius", help="covering radius (exact, or an enclosure when d > 2)"), tol=True)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_radius)
    p = common(sub.add_parser("verify", help="decide covering at a given eps and write a certificate"), epsilon=True, out=True)
    p.set_defaults(func=cmd_verify)
    p = common(sub.add_parser("witness", help="uncovered point for a periodic quadratic configuration"))
    p.set_defaults(func=cmd_witness)
    p = common(sub.add_parser("density", help="difference-set density test at eps"), epsilon=True, out=True, pairs=True)
    p.set_defaults(func=cmd_density)
    p = common(sub.add_parser("bound", help="certified upper bound on eps_0 by bisection"), tol=True, out=True, pairs=True)
    p.set_defaults(func=cmd_bound)
    p = sub.add_parser("sweep", help="Pythagorean sweep report")
    p.add_argument("--max-hypotenuse", "-N", type=int, required=True)
    p.add_argument("--tol", metavar="EXPR")
    p.add_argument("--budget", type=int, default=10**6, metavar="NODES")
    p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", metavar="DIR", default="sweep-out")
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_sweep)
    p = common(sub.add_parser("plot", help="SVG figures of the uncovered region, difference set and strips"), epsilon=True, out=True)
    p.set_defaults(func=cmd_plot)
    p = common(sub.add_parser("check-cert", help="validate a certificate file"), epsilon=True)
    p.add_argument("certificate", metavar="FILE")
    p.set_defaults(func=cmd_check_cert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, Out(args.approx))
    except (CliError, ParseError, UnsupportedDimension, ValueError, OSError) as exc:
        loc = getattr(exc, "location", "")
        print(f"error: {exc}" + (f" (at {loc})" if loc and loc not in str(exc) else ""), file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
