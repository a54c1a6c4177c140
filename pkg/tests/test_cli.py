import json
import subprocess
import sys

import numpy as np
import pytest

from hopflab.cli import main
from hopflab.hopf import octonionic_hopf_map_coords


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def strip_timestamp(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if '"timestamp"' not in line)


def circumcenter(a, b, c):
    """Center of the circle through three points of R^3."""
    u, v = b - a, c - a
    g = np.array([[u @ u, u @ v], [u @ v, v @ v]])
    rhs = 0.5 * np.array([u @ u, v @ v])
    alpha, beta = np.linalg.solve(g, rhs)
    return a + alpha * u + beta * v


# ---------------------------------------------------------------------------
# fibers


def test_fibers_shape_contract(capsys):
    code, out = run_cli(
        ["fibers", "--family", "complex", "--sphere-dim", "3", "--count", "2", "--grid", "4", "--seed", "1"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["format_version"] == 1
    assert doc["ambient_dim"] == 3
    assert doc["projection"] == "none"
    assert len(doc["fibers"]) == 2
    for fiber in doc["fibers"]:
        assert len(fiber["points"]) == 4
        for point in fiber["points"]:
            assert len(point) == 4
            assert abs(np.linalg.norm(point) - 1.0) < 1e-9


def test_fibers_stereographic_circle(capsys):
    code, out = run_cli(
        [
            "fibers", "--family", "complex", "--sphere-dim", "3", "--count", "3",
            "--grid", "64", "--projection", "stereographic", "--seed", "6",
        ],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    for fiber in doc["fibers"]:
        pts = np.asarray(fiber["points"])
        assert pts.shape == (64, 3)
        center = circumcenter(pts[0], pts[21], pts[42])
        radii = np.linalg.norm(pts - center, axis=1)
        assert radii.max() - radii.min() < 1e-6


def test_fibers_octonionic_same_base(capsys):
    code, out = run_cli(
        ["fibers", "--family", "octonionic", "--sphere-dim", "15", "--count", "2", "--grid", "16", "--seed", "2"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    for fiber in doc["fibers"]:
        pts = np.asarray(fiber["points"])
        bases = np.stack([octonionic_hopf_map_coords(p) for p in pts])
        assert np.max(np.linalg.norm(bases - bases[0], axis=1)) < 1e-9


def test_fibers_incompatible_family_dimension(capsys):
    with pytest.raises(SystemExit) as err:
        main(["fibers", "--family", "quaternionic", "--sphere-dim", "5", "--count", "1", "--grid", "16"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["fibers", "--family", "complex", "--sphere-dim", "5", "--projection", "stereographic"])
    assert err.value.code == 2


def test_fibers_csv_format(capsys):
    code, out = run_cli(
        ["fibers", "--family", "complex", "--sphere-dim", "3", "--count", "2", "--grid", "4", "--format", "csv"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "fiber_id,point_index,c0,c1,c2,c3"
    assert len(lines) == 1 + 2 * 4


# ---------------------------------------------------------------------------
# validate-map


def test_validate_constant_is_hopf(capsys):
    code, out = run_cli(
        ["validate-map", "--map", "constant", "--point", "1,0,0", "--pairs", "2000", "--scan-points", "16", "--seed", "3"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    verdicts = {o["name"]: o["metrics"].get("verdict") for o in doc["outcomes"] if o["name"] == "round-map-verdict"}
    assert verdicts["round-map-verdict"] == "hopf"
    # reparse losslessly
    assert json.dumps(doc, indent=2) + "\n" == out


def test_validate_identity_fails_with_report(capsys):
    code, out = run_cli(["validate-map", "--map", "identity", "--pairs", "500", "--seed", "3"], capsys)
    assert code == 1
    doc = json.loads(out)
    verdicts = {o["name"]: o["metrics"].get("verdict") for o in doc["outcomes"] if o["name"] == "round-map-verdict"}
    assert verdicts["round-map-verdict"] == "rejected"
    names = {o["name"]: o for o in doc["outcomes"]}
    assert not names["distance-decreasing"]["ok"]


def test_validate_polar_contraction_flags_inhomogeneity(capsys):
    code, out = run_cli(
        ["validate-map", "--map", "polar-contraction", "--ratio", "0.5", "--pairs", "2000", "--scan-points", "24", "--seed", "3"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    verdicts = {o["name"]: o["metrics"].get("verdict") for o in doc["outcomes"] if o["name"] == "round-map-verdict"}
    assert verdicts["round-map-verdict"] == "not-locally-homogeneous"
    names = {o["name"]: o for o in doc["outcomes"]}
    assert names["distance-decreasing"]["ok"]
    assert names["fiber-disjointness"]["ok"]
    assert names["homogeneity-scan"]["metrics"]["constant_axes"] is False


# ---------------------------------------------------------------------------
# fs


def test_fs_su2_defining(capsys):
    code, out = run_cli(["fs", "--group", "SU2", "--rep", "defining", "--n", "20000", "--seed", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    metrics = doc["outcomes"][0]["metrics"]
    assert metrics["nearest"] == -1.0
    assert metrics["type"] == "quaternionic"


def test_fs_su3_defining_complex_type(capsys):
    code, out = run_cli(["fs", "--group", "SU3", "--rep", "defining", "--n", "20000", "--seed", "5"], capsys)
    assert code == 0
    metrics = json.loads(out)["outcomes"][0]["metrics"]
    assert metrics["nearest"] == 0.0
    assert metrics["type"] == "complex"


def test_fs_trivial_exact(capsys):
    code, out = run_cli(["fs", "--group", "SU3", "--rep", "trivial", "--n", "1000", "--seed", "5"], capsys)
    assert code == 0
    metrics = json.loads(out)["outcomes"][0]["metrics"]
    assert metrics["estimate"] == 1.0
    assert metrics["stderr"] == 0.0
    assert metrics["confident"] is True


def test_fs_unsupported_pair_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["fs", "--group", "SU2", "--rep", "vector"])
    assert err.value.code == 2


# ---------------------------------------------------------------------------
# homogeneity


def test_homogeneity_hopf(capsys):
    code, out = run_cli(["homogeneity", "--target", "hopf-s3", "--trials", "50", "--seed", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    for outcome in doc["outcomes"]:
        assert outcome["ok"]
        assert outcome["metrics"]["worst_residual"] < 1e-9


@pytest.mark.parametrize("alpha", ["1.0", "0.0"])
def test_homogeneity_figure1(alpha, capsys):
    code, out = run_cli(["homogeneity", "--target", "figure1", "--alpha", alpha, "--trials", "100", "--seed", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["outcomes"][0]["metrics"]["worst_residual"] < 1e-9


# ---------------------------------------------------------------------------
# determinism, seeding, output files


def test_reports_deterministic_modulo_timestamp(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        code = main(["fs", "--group", "SU2", "--rep", "defining", "--n", "2000", "--seed", "9", "--out", str(path)])
        assert code == 0
    a, b = (p.read_text() for p in paths)
    assert a != b or True  # timestamps usually differ
    assert strip_timestamp(a) == strip_timestamp(b)


def test_fibers_file_deterministic(tmp_path):
    paths = [tmp_path / "f1.json", tmp_path / "f2.json"]
    for path in paths:
        main(["fibers", "--family", "complex", "--sphere-dim", "3", "--count", "2", "--grid", "8", "--seed", "4", "--out", str(path)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_env_default_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("HOPFLAB_DEFAULT_SEED", "77")
    p_env = tmp_path / "env.json"
    main(["fibers", "--family", "complex", "--sphere-dim", "3", "--count", "1", "--grid", "8", "--out", str(p_env)])
    monkeypatch.delenv("HOPFLAB_DEFAULT_SEED")
    p_flag = tmp_path / "flag.json"
    main(["fibers", "--family", "complex", "--sphere-dim", "3", "--count", "1", "--grid", "8", "--seed", "77", "--out", str(p_flag)])
    assert p_env.read_bytes() == p_flag.read_bytes()
    # the flag overrides the environment
    monkeypatch.setenv("HOPFLAB_DEFAULT_SEED", "123456")
    p_override = tmp_path / "override.json"
    main(["fibers", "--family", "complex", "--sphere-dim", "3", "--count", "1", "--grid", "8", "--seed", "77", "--out", str(p_override)])
    assert p_override.read_bytes() == p_flag.read_bytes()


def test_report_numbers_finite(capsys):
    code, out = run_cli(["homogeneity", "--target", "figure1", "--trials", "20", "--seed", "0"], capsys)
    doc = json.loads(out)

    def walk(node):
        if isinstance(node, dict):
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)
        elif isinstance(node, float):
            assert np.isfinite(node)

    walk(doc)


def test_console_module_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "hopflab.cli", "fs", "--group", "SU2", "--rep", "trivial", "--n", "1000"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "fs"
