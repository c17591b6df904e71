"""Python access to the rescert certification library."""

import json

from ._core import (
    CertificationError,
    certify_schur,
    certify_svd,
    delta_budget,
    discretization_error,
    eigenratio_r,
    op_norm_bound,
    run_certification_json,
    set_workers,
    smallest_sv_lower,
    spectral_norm_upper,
    worker_count,
)


def run_certification(config, preset="", out_dir=""):
    """Run the pipeline for a config file and return the certificate as a dict."""
    return json.loads(run_certification_json(str(config), preset, str(out_dir)))


__all__ = [
    "CertificationError",
    "certify_schur",
    "certify_svd",
    "delta_budget",
    "discretization_error",
    "eigenratio_r",
    "op_norm_bound",
    "run_certification",
    "set_workers",
    "smallest_sv_lower",
    "spectral_norm_upper",
    "worker_count",
]
