import csv
import io
import json
import xml.etree.ElementTree as ET
from fractions import Fraction as F

import pytest

from pyjama.cover import Enclosure
from pyjama.explorer import (
    SweepRecord,
    check_row_certificate,
    monotone_violations,
    records_from_jsonl,
    records_to_csv,
    records_to_jsonl,
    sweep_figure,
    sweep_pythagorean,
    sweep_values,
)


@pytest.fixture(scope="module")
def sweep5(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep5")
    return sweep_pythagorean(5, out_dir=out), out


def _rec(N, radius, d=2):
    return SweepRecord(N, 2, d, radius, "x", None, "budget", 0, 0, f"certs/N{N:04d}.json")


def test_sweep_values():
    assert sweep_values(5) == [4, 5]
    assert sweep_values(25) == [4, 5, 13, 17, 25]
    assert sweep_values(3) == [3]
    assert sweep_values(12) == [4, 5]


def test_sweep_rows(sweep5):
    records, _ = sweep5
    assert [r.N for r in records] == [4, 5]
    assert [r.vector_count for r in records] == [2, 6]
    assert all(r.radius == F(1, 2) and r.d == 2 and r.error is None for r in records)
    assert records[0].density_status == "bisected"
    assert F(1, 4) < records[0].density_bound <= F(1, 4) + F(1, 64)
    assert records[1].density_bound is None or records[1].density_bound <= F(1, 2)
    assert monotone_violations(records) == []


def test_report_files(sweep5):
    records, out = sweep5
    for name in ("sweep.jsonl", "sweep.csv", "sweep.svg"):
        assert (out / name).is_file()
    assert records_from_jsonl((out / "sweep.jsonl").read_text()) == records
    rows = list(csv.DictReader(io.StringIO((out / "sweep.csv").read_text())))
    assert [int(r["N"]) for r in rows] == [4, 5]
    assert rows[0]["radius"] == "1/2"
    ET.fromstring((out / "sweep.svg").read_text())
    for r in records:
        cert = json.loads((out / r.certificate).read_text())
        assert cert["format"] == "pyjama-sweep-row/1"
        assert check_row_certificate(cert)


def test_row_certificate_tampering(sweep5):
    records, out = sweep5
    cert = json.loads((out / records[1].certificate).read_text())
    bad = json.loads(json.dumps(cert))
    bad["radius"]["torus_point"][0] = "1/3"
    assert not check_row_certificate(bad)
    bad = json.loads(json.dumps(cert))
    bad["radius"]["value"] = "1/3"
    assert not check_row_certificate(bad)


def test_sweep_is_deterministic(sweep5, tmp_path):
    records, out = sweep5
    again = sweep_pythagorean(5, out_dir=tmp_path, workers=2)
    assert again == records
    for name in ("sweep.csv", "sweep.svg"):
        assert (tmp_path / name).read_text() == (out / name).read_text()
    for r in records:
        assert (tmp_path / r.certificate).read_text() == (out / r.certificate).read_text()


def test_jsonl_round_trip_with_enclosure():
    recs = [_rec(4, F(1, 2)), _rec(7, Enclosure(F(1, 4), F(3, 10)), d=3), _rec(9, None)]
    recs[1].timing["radius_s"] = 0.5
    back = records_from_jsonl(records_to_jsonl(recs))
    assert back == recs
    assert back[1].radius == Enclosure(F(1, 4), F(3, 10))
    assert "[1/4, 3/10]" in records_to_csv(recs)


def test_monotone_violations():
    recs = [_rec(4, F(1, 2)), _rec(5, F(2, 5)), _rec(13, F(9, 20)), _rec(17, F(1, 4))]
    msgs = monotone_violations(recs)
    assert any("N=13" in m for m in msgs)
    assert any("N=17" in m and "1/3" in m for m in msgs)


def test_sweep_figure_is_svg():
    root = ET.fromstring(sweep_figure([_rec(4, F(1, 2)), _rec(5, None)]))
    assert root.tag.endswith("svg")
