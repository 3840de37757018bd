"""Pythagorean sweep: radius and density bounds as the hypotenuse bound grows.

Every row gets a certificate file beside the report. Output is deterministic
apart from the ``timing`` object of each JSONL row.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from . import svg
from .config import build_pythagorean, config_from_obj, config_to_obj, primitive_triples
from .cover import Enclosure, covering_radius_exact_full
from .density import epsilon0_bound_full
from .exactnum import dist_to_int, fmt_rat, parse_rat
from .relations import relation_lattice, subgroup_param

THIRD = Fraction(1, 3)
DEFAULT_TOL = Fraction(1, 64)
DEFAULT_MAX_PAIRS = 400


@dataclass
class SweepRecord:
    N: int
    vector_count: int
    d: int
    radius: Union[Fraction, Enclosure, None]
    radius_method: str
    density_bound: Optional[Fraction]
    density_status: str
    density_probes: int
    nodes: int
    certificate: str
    error: Optional[str] = None
    timing: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        r = self.radius
        if isinstance(r, Enclosure):
            rj = {"lo": fmt_rat(r.lo), "hi": fmt_rat(r.hi)}
        else:
            rj = None if r is None else fmt_rat(r)
        out = asdict(self)
        out["radius"] = rj
        out["density_bound"] = None if self.density_bound is None else fmt_rat(self.density_bound)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SweepRecord":
        obj = dict(obj)
        r = obj["radius"]
        if isinstance(r, dict):
            obj["radius"] = Enclosure(parse_rat(r["lo"]), parse_rat(r["hi"]))
        elif r is not None:
            obj["radius"] = parse_rat(r)
        if obj["density_bound"] is not None:
            obj["density_bound"] = parse_rat(obj["density_bound"])
        return cls(**obj)

    @property
    def radius_lo(self) -> Optional[Fraction]:
        r = self.radius
        return r.lo if isinstance(r, Enclosure) else r


def sweep_values(N_max: int) -> list[int]:
    """Hypotenuse bounds at which the configuration changes, plus the axes-only row."""
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    hyps = sorted({c for _, _, c in primitive_triples(N_max)})
    first = hyps[0] if hyps else N_max + 1
    return sorted({min(N_max, first - 1)} | set(hyps))


def _cert_name(N: int) -> str:
    return f"certs/N{N:04d}.json"


def _run_row(N: int, tol: Fraction, budget: int, max_pairs: Optional[int]) -> tuple[SweepRecord, dict]:
    """One sweep row and its certificate document."""
    t0 = time.perf_counter()
    cfg = build_pythagorean(N)
    rl = relation_lattice(cfg)
    cert = {
        "format": "pyjama-sweep-row/1",
        "N": N,
        "config": config_to_obj(cfg),
        "relations": rl.basis.tolist(),
    }
    rec = SweepRecord(N, len(cfg), rl.dim_d, None, "", None, "not-run", 0, 0, _cert_name(N))
    try:
        rr = covering_radius_exact_full(cfg)
        param = subgroup_param(rl) if rl.rank else None
        z = list(rr.point)
        w = param.B.apply(z) if param else z
        w = [x - (x.numerator // x.denominator) for x in w]
        rec.radius, rec.radius_method = rr.value, rr.method
        cert["radius"] = {
            "value": fmt_rat(rr.value),
            "method": rr.method,
            "chart_point": [fmt_rat(x) for x in z],
            "torus_point": [fmt_rat(x) for x in w],
        }
        if rl.dim_d == 2 and rr.value < THIRD:
            rec.error = f"radius {rr.value} below 1/3 contradicts the periodic lower bound"
        t1 = time.perf_counter()
        br = epsilon0_bound_full(cfg, tol, max_pairs)
        t2 = time.perf_counter()
        rec.density_bound = br.bound
        rec.density_status = br.status
        rec.density_probes = len(br.probes)
        dens = {
            "bound": None if br.bound is None else fmt_rat(br.bound),
            "status": br.status,
            "dense_below": None if br.dense_below is None else fmt_rat(br.dense_below),
            "probes": [[fmt_rat(e), v] for e, v in br.probes],
        }
        if br.certificate is not None:
            dens["center"] = [fmt_rat(x) for x in br.certificate.center]
            dens["clearance"] = fmt_rat(br.certificate.clearance)
        cert["density"] = dens
        rec.timing = {"radius_s": round(t1 - t0, 4), "density_s": round(t2 - t1, 4)}
    except Exception as exc:  # a failed row is recorded, not fatal
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.timing = {"radius_s": round(time.perf_counter() - t0, 4)}
    rec.timing["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return rec, cert


def sweep_pythagorean(
    N_max: int,
    tol: Fraction = DEFAULT_TOL,
    budget: int = 10**6,
    max_pairs: Optional[int] = DEFAULT_MAX_PAIRS,
    workers: int = 1,
    out_dir: Union[str, Path, None] = None,
) -> list[SweepRecord]:
    """Run the sweep; with ``out_dir`` also write the report, certificates and figure.

    ``budget`` caps prover nodes (unused while every row has d = 2);
    ``max_pairs`` caps each density test.
    """
    tol = Fraction(tol)
    Ns = sweep_values(N_max)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_row, Ns, [tol] * len(Ns), [budget] * len(Ns), [max_pairs] * len(Ns)))
    else:
        results = [_run_row(N, tol, budget, max_pairs) for N in Ns]
    results.sort(key=lambda rc: rc[0].N)
    records = [r for r, _ in results]
    if out_dir is not None:
        write_report(records, [c for _, c in results], out_dir)
    return records


def monotone_violations(records: list[SweepRecord]) -> list[str]:
    """Rows whose radius exceeds that of a smaller N, or falls below 1/3."""
    out = []
    prev = None
    for r in records:
        v = r.radius_lo
        if v is None:
            continue
        if v < THIRD and r.d == 2:
            out.append(f"N={r.N}: radius {v} < 1/3")
        if prev is not None and v > prev[1]:
            out.append(f"N={r.N}: radius {v} > radius {prev[1]} at N={prev[0]}")
        prev = (r.N, v)
    return out


CSV_FIELDS = [
    "N", "vector_count", "d", "radius", "radius_method",
    "density_bound", "density_status", "density_probes", "nodes", "certificate", "error",
]


def records_to_jsonl(records: list[SweepRecord]) -> str:
    return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in records)


def records_from_jsonl(text: str) -> list[SweepRecord]:
    return [SweepRecord.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def records_to_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = r.to_json()
        if isinstance(row["radius"], dict):
            row["radius"] = f"[{row['radius']['lo']}, {row['radius']['hi']}]"
        w.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_FIELDS})
    return buf.getvalue()


def sweep_figure(records: list[SweepRecord]) -> str:
    xs = [r.N for r in records]
    radius = [None if r.radius_lo is None else float(r.radius_lo) for r in records]
    dens = [None if r.density_bound is None else float(r.density_bound) for r in records]
    data = [[r.N, r.radius_lo, r.density_bound] for r in records]
    return svg.series_figure(
        xs,
        [("covering radius", "#1f77b4", radius), ("density bound", "#d62728", dens)],
        "Pythagorean sweep",
        caption=f"data sha256 {svg.data_hash(data)}",
    )


def write_report(records: list[SweepRecord], certs: list[dict], out_dir: Union[str, Path]) -> dict:
    out = Path(out_dir)
    (out / "certs").mkdir(parents=True, exist_ok=True)
    paths = {
        "jsonl": out / "sweep.jsonl",
        "csv": out / "sweep.csv",
        "svg": out / "sweep.svg",
    }
    paths["jsonl"].write_text(records_to_jsonl(records))
    paths["csv"].write_text(records_to_csv(records))
    paths["svg"].write_text(sweep_figure(records))
    for rec, cert in zip(records, certs):
        (out / rec.certificate).write_text(json.dumps(cert, indent=1, sort_keys=True) + "\n")
    return {k: os.fspath(v) for k, v in paths.items()}


def check_row_certificate(cert: dict) -> bool:
    """Re-derive the radius claim of a sweep row certificate.

    The torus point must satisfy every relation of the stored configuration
    (recomputed here, not read from the file) and reach the stated value. For
    the value 1/2 that is the whole claim, 1/2 being the largest possible.
    """
    rad = cert.get("radius")
    if rad is None:
        return False
    w = [parse_rat(x) for x in rad["torus_point"]]
    rels = relation_lattice(config_from_obj(cert["config"])).basis.tolist()
    if any(len(row) != len(w) for row in rels):
        return False
    for row in rels:
        s = sum(c * x for c, x in zip(row, w))
        if s.denominator != 1:
            return False
    value = parse_rat(rad["value"])
    return min((dist_to_int(x) for x in w), default=Fraction(1, 2)) == value
