#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rescert/bounds.hpp"
#include "rescert/config.hpp"
#include "rescert/parallel.hpp"
#include "rescert/pipeline.hpp"
#include "rescert/schur_cert.hpp"
#include "rescert/svd_cert.hpp"

namespace py = pybind11;
using namespace rescert;

namespace {

BallMatrix make_ball(const CMatrix& centers, const std::optional<RMatrix>& radii) {
    return radii ? BallMatrix(centers, *radii) : BallMatrix(centers);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rigorous resolvent and spectrum enclosures for transfer operators";

    static py::exception<Error> error(m, "CertificationError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def("set_workers", &set_workers, py::arg("workers"));
    m.def("worker_count", &worker_count);

    m.def("op_norm_bound", py::overload_cast<double, double>(&op_norm_bound), py::arg("alpha"), py::arg("rho"));
    m.def(
        "discretization_error",
        [](double eta, double alpha, double rho, int K) { return discretization_error(AnnulusWidths{eta, alpha, rho}, K); },
        py::arg("eta"), py::arg("alpha"), py::arg("rho"), py::arg("K"));
    m.def(
        "eigenratio_r",
        [](double eta, double alpha, double rho, double exclusion_radius) {
            return eigenratio_r(AnnulusWidths{eta, alpha, rho}, exclusion_radius);
        },
        py::arg("eta"), py::arg("alpha"), py::arg("rho"), py::arg("exclusion_radius"));
    m.def(
        "delta_budget",
        [](double ratio_r, double disc_error) {
            const HouseholderBudget b = delta_budget(ratio_r, disc_error);
            return py::make_tuple(b.delta, b.delta_inv);
        },
        py::arg("ratio_r"), py::arg("disc_error"), "(delta rounded up, 1/delta rounded down)");

    m.def(
        "spectral_norm_upper",
        [](const CMatrix& c, const std::optional<RMatrix>& r) { return spectral_norm_upper(make_ball(c, r)); },
        py::arg("centers"), py::arg("radii") = py::none());
    m.def(
        "smallest_sv_lower",
        [](const CMatrix& c, const std::optional<RMatrix>& r) { return smallest_sv_lower(make_ball(c, r)); },
        py::arg("centers"), py::arg("radii") = py::none());
    m.def(
        "certify_svd",
        [](const CMatrix& c, const std::optional<RMatrix>& r) {
            const SVDCertificate s = certify_svd(make_ball(c, r));
            std::vector<std::pair<double, double>> iv;
            for (const Interval& i : s.intervals) iv.emplace_back(i.lo(), i.hi());
            return py::dict(py::arg("intervals") = iv, py::arg("theta") = s.theta);
        },
        py::arg("centers"), py::arg("radii") = py::none(), "singular value enclosures valid for every member");
    m.def(
        "certify_schur",
        [](const CMatrix& c, const std::optional<RMatrix>& r) {
            const CertifiedSchur s = certify_schur(make_ball(c, r));
            return py::dict(py::arg("Z") = s.Z, py::arg("T") = s.T, py::arg("epsilon") = s.epsilon,
                            py::arg("C0") = s.C0);
        },
        py::arg("centers"), py::arg("radii") = py::none());

    m.def(
        "run_certification_json",
        [](const std::string& path, const std::string& preset, const std::string& out_dir) {
            RunConfig cfg = load_config(path, preset);
            cfg.out_dir = out_dir;
            EnclosureCertificate cert;
            {
                py::gil_scoped_release release;
                cert = run_certification(cfg, {.arc_log = !out_dir.empty()});
            }
            return to_json(cert);
        },
        py::arg("config"), py::arg("preset") = "", py::arg("out_dir") = "",
        "run the full pipeline and return the certificate as JSON text");
}
