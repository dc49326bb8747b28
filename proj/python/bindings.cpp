// Python bindings for the main operations: spectral measures, field sampling
// and evaluation, nodal extraction, tangency counting, statistics and the
// Kac-Rice oracles.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tanglab/config.hpp"
#include "tanglab/kacrice.hpp"
#include "tanglab/serialize.hpp"

namespace py = pybind11;
using namespace tanglab;

namespace {

SpectralModel make_model(const std::string& variant, double alpha, int n,
                         const std::vector<double>& angles_deg,
                         const std::vector<double>& weights) {
    if (variant == "circle") return SpectralModel::circle();
    if (variant == "annulus") return SpectralModel::annulus(alpha);
    if (variant == "lattice") return SpectralModel::atomic_lattice(n);
    if (variant == "atomic") {
        std::vector<double> rad;
        for (double a : angles_deg) rad.push_back(a * 3.14159265358979323846 / 180.0);
        return SpectralModel::atomic_general(rad, weights);
    }
    throw std::invalid_argument("model variant must be circle|annulus|lattice|atomic");
}

}  // namespace

PYBIND11_MODULE(_tanglab, m) {
    m.doc() = "Monte Carlo laboratory for nodal tangency statistics of Gaussian random waves";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>())
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
        });

    py::class_<SpectralModel>(m, "SpectralModel")
        .def_static("make", &make_model, py::arg("variant"), py::arg("alpha") = 0.5,
                    py::arg("n") = 5, py::arg("angles_deg") = std::vector<double>{},
                    py::arg("weights") = std::vector<double>{})
        .def_property_readonly("tag", &SpectralModel::tag)
        .def_property_readonly("is_radial", &SpectralModel::is_radial)
        .def("has_no_atoms", &SpectralModel::has_no_atoms)
        .def("spans_plane", &SpectralModel::spans_plane)
        .def("has_interior", &SpectralModel::has_interior);

    m.def("lattice_points", &lattice_points, py::arg("n"),
          "All integer pairs (a, b) with a^2 + b^2 = n, lexicographic");
    m.def("covariance", &covariance, py::arg("model"), py::arg("r"));
    m.def(
        "covariance_lag",
        [](const SpectralModel& model, double ux, double uy) {
            return covariance_lag(model, {ux, uy});
        },
        py::arg("model"), py::arg("ux"), py::arg("uy"));
    m.def(
        "moment",
        [](const SpectralModel& model, int p, int q) {
            return moment_dir(model, {1, 0}, {0, 1}, p, q);
        },
        py::arg("model"), py::arg("p"), py::arg("q"));

    py::class_<FieldRealization>(m, "FieldRealization")
        .def_property_readonly("n_terms",
                               [](const FieldRealization& f) { return f.terms.size(); })
        .def_readonly("model_tag", &FieldRealization::model_tag)
        .def_readonly("torus_side", &FieldRealization::torus_side)
        .def("to_json",
             [](const FieldRealization& f) { return to_json(f).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return realization_from_json(nlohmann::json::parse(text));
        });

    m.def(
        "sample_field",
        [](const SpectralModel& model, int n_waves, std::uint64_t seed) {
            SplitMix64 rng(seed);
            return sample_field(model, n_waves, rng);
        },
        py::arg("model"), py::arg("n_waves"), py::arg("seed"));

    py::class_<FieldEvaluator>(m, "FieldEvaluator")
        .def(py::init<const FieldRealization&>(), py::keep_alive<1, 2>())
        .def("value",
             [](const FieldEvaluator& ev, double x, double y) { return ev.value({x, y}); })
        .def("gradient",
             [](const FieldEvaluator& ev, double x, double y) {
                 double v;
                 Vec2 g;
                 ev.value_grad({x, y}, v, g);
                 return py::make_tuple(v, g.x, g.y);
             })
        .def("hessian", [](const FieldEvaluator& ev, double x, double y) {
            EvalResult r = ev.full({x, y});
            return py::make_tuple(r.hess.xx, r.hess.xy, r.hess.yy);
        });

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_static("from_text", &RunConfig::from_text)
        .def("set", &RunConfig::apply_override)
        .def("validate", &RunConfig::validate)
        .def_property_readonly("canonical_hash", &RunConfig::canonical_hash)
        .def_property_readonly("canonical_text", &RunConfig::canonical_text);

    m.def(
        "run_estimate",
        [](const RunConfig& cfg) {
            EnsembleResult res =
                run_ensemble(cfg.build_model(), cfg.field_n_waves, cfg.build_vf(),
                             cfg.build_domain(), cfg.build_options(), cfg.run_seed,
                             cfg.run_trials, cfg.run_workers);
            nlohmann::json j = to_json(estimate_ck(res.trials));
            j["pooled"] = to_json(res.pooled);
            j["method_checked"] = res.method_checked;
            j["method_agree"] = res.method_agree;
            j["certified_count"] = res.certified_count;
            j["certified_k_lt2"] = res.certified_k_lt2;
            j["certified_odd_or_zero"] = res.certified_odd_or_zero;
            return j.dump();
        },
        py::arg("config"),
        "Full pipeline over an ensemble; returns the estimate document as JSON text");

    m.def(
        "kac_rice_tangency_density",
        [](const SpectralModel& model, double zeta_angle_deg, long n_mc, std::uint64_t seed) {
            double a = zeta_angle_deg * 3.14159265358979323846 / 180.0;
            auto est = kac_rice_tangency_density(model, {std::cos(a), std::sin(a)}, n_mc, seed);
            return py::make_tuple(est.density, est.stderr_);
        },
        py::arg("model"), py::arg("zeta_angle_deg") = 0.0, py::arg("n_mc") = 1000000,
        py::arg("seed") = 0x5eed);

    m.def(
        "kac_rice_critical_density",
        [](const SpectralModel& model, long n_mc, std::uint64_t seed) {
            auto est = kac_rice_critical_density(model, n_mc, seed);
            return py::make_tuple(est.density, est.stderr_);
        },
        py::arg("model"), py::arg("n_mc") = 1000000, py::arg("seed") = 0x5eed);

    m.def(
        "tv_distance",
        [](const std::map<int, double>& a, const std::map<int, double>& b) {
            return tv_distance(a, b);
        },
        py::arg("mu1"), py::arg("mu2"));

    m.attr("__version__") = "0.1.0";
}
