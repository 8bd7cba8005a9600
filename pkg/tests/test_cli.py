import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import pinwheel, quadric_coarse, triangle_fine, twodex, orthant
from skelet.cli import run
from skelet.errors import JobParseError
from skelet.jobs import (
    JobSpec,
    decode_int,
    decode_rational,
    dumps,
    encode_int,
    encode_rational,
    parse_job_text,
    report_document,
    run_job,
)
from skelet.mesh import build_mesh, export_mesh
from skelet.skeleton import build_hatted, build_quotient_skeleton, build_skeleton
from skelet.torus import torus_arrangement
from skelet.errors import DimensionTooHigh

EXAMPLES = Path(__file__).parent.parent / "docs" / "examples"


def _run(tmp_path, job, *extra):
    src = tmp_path / "job.json"
    src.write_text(json.dumps(job) if isinstance(job, dict) else job)
    out = tmp_path / "report.json"
    code = run([ "run", str(src), "--out", str(out), *extra])
    return code, json.loads(out.read_text())


def test_twodex_job(tmp_path):
    code, rep = _run(tmp_path, {"lattice_rank": 2, "polytope": [[1, 0], [0, 1], [-1, -1]], "outputs": ["skeleton"]})
    assert code == 0
    assert rep["format"] == "skelet-report/1"
    assert rep["payload"]["models"]["skeleton"]["betti"] == [1, 4]


def test_quadric_quotient_job(tmp_path):
    job = {"lattice_rank": 3, "polytope": [[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2]],
           "triangulation": [[[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2]]],
           "cone": "positive-orthant", "outputs": ["quotient"]}
    code, rep = _run(tmp_path, job)
    assert code == 0
    assert rep["payload"]["models"]["quotient"]["betti"] == [1, 0, 1]


EXPECTED = {
    "twodex.json": ("skeleton", [1, 4]),
    "bouquet.json": ("skeleton", [1, 5]),
    "quotient_orthant.json": ("quotient", [1, 1]),
    "quadric_octahedron.json": ("quotient", [1, 0, 1]),
    "quadric_sandwich.json": ("quotient", [1, 0, 1]),
    "tetrahedron.json": ("skeleton", [1, 3, 6]),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_shipped_examples(tmp_path, name):
    code, rep = _run(tmp_path, (EXAMPLES / name).read_text())
    model, betti = EXPECTED[name]
    assert code == 0
    assert rep["payload"]["models"][model]["betti"] == betti


def test_missing_origin(tmp_path):
    code, rep = _run(tmp_path, {"lattice_rank": 2, "polytope": [[1, 0], [0, 1], [1, 1]]})
    assert code == 2
    assert rep["payload"]["error"]["type"] == "OriginMissing"


def test_bad_json(tmp_path):
    code, rep = _run(tmp_path, '{"lattice_rank": 2,\n "polytope": [}')
    assert code == 2 and rep["payload"]["error"]["type"] == "JobParseError"
    assert "line 2" in rep["payload"]["error"]["message"]


def test_schema_error_names_field(tmp_path):
    code, rep = _run(tmp_path, {"lattice_rank": 2, "polytope": [[1, "x"]]})
    assert code == 2
    assert "polytope" in rep["payload"]["error"]["message"]


def test_wrong_point_length(tmp_path):
    code, rep = _run(tmp_path, {"lattice_rank": 3, "polytope": [[1, 0], [0, 1], [-1, -1]]})
    assert code == 2


def test_rank_cap(tmp_path):
    job = {"lattice_rank": 3, "polytope": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]], "outputs": ["skeleton"]}
    code, rep = _run(tmp_path, job, "--rank-cap", "2")
    assert code == 4 and rep["payload"]["error"]["type"] == "RankCapExceeded"


def test_assumption_violation(tmp_path):
    job = {"lattice_rank": 2, "polytope": [[0, 0], [2, 0], [0, 2]], "cone": {"generators": [[1, 0], [1, 2]]},
           "outputs": ["quotient"]}
    code, rep = _run(tmp_path, job)
    assert code == 3 and rep["payload"]["error"]["type"] == "AssumptionViolation"


def _pinwheel_job():
    T = pinwheel()
    return {"lattice_rank": 3, "polytope": [list(p) for p in T.polytope.vertices],
            "triangulation": [[list(p) for p in T.coords(s)] for s in T.maximal], "outputs": ["hatted"]}


def test_nonregular_rejected_then_allowed(tmp_path):
    code, rep = _run(tmp_path, _pinwheel_job())
    assert code == 2 and rep["payload"]["error"]["type"] == "NonRegularTriangulation"
    code, rep = _run(tmp_path, _pinwheel_job(), "--allow-nonregular")
    assert code == 0
    reg = rep["payload"]["regularity"]
    assert reg["regular"] is False and reg["farkas_witness"]["verified"] is True
    assert rep["payload"]["warnings"]


def test_payload_is_deterministic():
    job = parse_job_text((EXAMPLES / "bouquet.json").read_text())
    a = dumps(report_document(run_job(job).payload))
    b = dumps(report_document(run_job(job).payload))
    assert a == b


def test_canonical_round_trip():
    for name in EXPECTED:
        job = parse_job_text((EXAMPLES / name).read_text())
        again = JobSpec.from_dict(json.loads(json.dumps(job.to_dict())))
        assert again == job
        assert again.to_dict() == job.to_dict()


@settings(max_examples=100)
@given(st.integers(-(2 ** 80), 2 ** 80), st.fractions())
def test_number_encoding_round_trip(n, q):
    e = encode_int(n)
    assert isinstance(e, int) or abs(n) >= 2 ** 53
    assert decode_int(json.loads(json.dumps(e))) == n
    assert decode_rational(json.loads(json.dumps(encode_rational(q)))) == q


def test_bad_rational():
    with pytest.raises(JobParseError):
        decode_rational("1/0", "x")
    with pytest.raises(JobParseError):
        decode_int(1.5, "x")


def test_mesh_torus(tmp_path):
    m = export_mesh(torus_arrangement(2), tmp_path / "t.off")
    assert m.euler_characteristic == 0
    text = (tmp_path / "t.off").read_text().splitlines()
    assert text[0] == "nOFF" and text[1] == "2"


def test_mesh_twodex_graph():
    m = build_mesh(build_skeleton(twodex()))
    assert not m.triangles
    assert m.euler_characteristic == -3


def test_mesh_quadric_quotient_sphere(tmp_path):
    Q = build_quotient_skeleton(quadric_coarse(), orthant(3))
    m = export_mesh(Q, tmp_path / "q.off")
    assert m.euler_characteristic == 2
    lines = (tmp_path / "q.off").read_text().splitlines()
    assert lines[0] == "nOFF"
    # every edge of a closed surface bounds exactly two triangles
    count = {}
    for t in m.triangles:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            count[e] = count.get(e, 0) + 1
    assert set(count.values()) == {2}


def test_mesh_hatted_and_too_high():
    assert build_mesh(build_hatted(quadric_coarse())).euler_characteristic == 2
    with pytest.raises(DimensionTooHigh):
        build_mesh(torus_arrangement(3))


def test_cli_mesh_export(tmp_path):
    off = tmp_path / "m.off"
    code, rep = _run(tmp_path, (EXAMPLES / "quotient_orthant.json").read_text(), "--export-off", str(off))
    assert code == 0 and off.exists()
    assert rep["payload"]["mesh"]["euler"] == 0


def test_schema_copies_agree():
    from skelet.jobs import load_schema

    assert json.loads((EXAMPLES.parent / "job.schema.json").read_text()) == load_schema()
