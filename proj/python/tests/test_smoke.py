import pathlib

import numpy as np
import pytest

import rescert

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def test_constants():
    b = rescert.op_norm_bound(0.5758488557738615, 0.583052)
    assert 44.0 <= b <= 44.5
    assert rescert.eigenratio_r(0.49149149, 0.5758488557738615, 0.583052, 0.51) <= 2.21e14
    delta, delta_inv = rescert.delta_budget(2.0, 0.25)
    assert delta >= 0.5 and delta_inv <= 2.0


def test_svd_and_norms():
    a = np.diag([3.0, 1.0]).astype(complex)
    cert = rescert.certify_svd(a)
    lo = sorted(cert["intervals"])
    assert lo[0][0] <= 1.0 <= lo[0][1]
    assert lo[1][0] <= 3.0 <= lo[1][1]
    assert cert["theta"] <= 1.0
    assert rescert.spectral_norm_upper(np.eye(4, dtype=complex)) == 1.0
    assert rescert.smallest_sv_lower(np.eye(3, dtype=complex), np.full((3, 3), 1e-3)) <= 1.0


def test_schur_reconstructs():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    s = rescert.certify_schur(a)
    recon = s["Z"] @ s["T"] @ s["Z"].conj().T
    assert np.linalg.norm(recon - a, 2) <= s["epsilon"]
    assert np.allclose(np.tril(s["T"], -1), 0)


def test_errors_are_translated():
    with pytest.raises(rescert.CertificationError, match="ThetaNonpositive"):
        rescert.smallest_sv_lower(np.zeros((2, 2), dtype=complex))


def test_doubling_pipeline(tmp_path):
    cert = rescert.run_certification(CONFIGS / "doubling.ini", out_dir=tmp_path)
    assert cert["verdict"] == "proven"
    assert (tmp_path / "galerkin.txt").exists()
    assert [d["multiplicity"] for d in cert["disks"]] == [16, 1]
