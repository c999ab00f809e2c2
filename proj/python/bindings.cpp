#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tweedie/divergence.hpp"
#include "tweedie/errors.hpp"
#include "tweedie/estimation.hpp"
#include "tweedie/model.hpp"
#include "tweedie/sampling.hpp"
#include "tweedie/version.hpp"

namespace py = pybind11;
using namespace tweedie;

namespace {

std::optional<DensityMethod> method_arg(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
    auto m = parse_density_method(*name);
    if (!m) throw py::value_error("unknown density method '" + *name + "'");
    return m;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

FitOptions options(std::optional<double> p_min, std::optional<double> p_max, double grid_step) {
    FitOptions o;
    o.p_min = p_min;
    o.p_max = p_max;
    o.grid_step = grid_step;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tweedie alpha/beta divergences, densities and maximum-likelihood fits";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UnsupportedMethod>(m, "UnsupportedMethod", PyExc_ValueError);
    py::register_exception<SeriesNonConvergence>(m, "SeriesNonConvergence", PyExc_RuntimeError);

    m.def("dual_cumulant", [](double p, double mu) { return dual_cumulant(PowerIndex(p), mu); },
          py::arg("p"), py::arg("mu"));
    m.def("beta_divergence",
          [](double p, double x, double mu) { return beta_divergence(PowerIndex(p), x, mu); },
          py::arg("p"), py::arg("x"), py::arg("mu"));
    m.def("alpha_divergence",
          [](double p, double x, double mu) { return alpha_divergence(PowerIndex(p), x, mu); },
          py::arg("p"), py::arg("x"), py::arg("mu"));
    m.def("beta_divergence_dmu",
          [](double p, double x, double mu) { return beta_divergence_dmu(PowerIndex(p), x, mu); },
          py::arg("p"), py::arg("x"), py::arg("mu"));
    m.def("alpha_dual_index", &alpha_dual_index, py::arg("p"));
    m.def("model_class", [](double p) { return std::string(to_string(PowerIndex(p).model_class())); },
          py::arg("p"));

    m.def(
        "log_density",
        [](double p, double mu, double phi, double x, std::optional<std::string> method) {
            const auto ev = log_density(TweedieParams::make(mu, phi, p), x, method_arg(method));
            py::dict d;
            d["log_density"] = ev.log_density;
            d["method"] = std::string(to_string(ev.method));
            d["series_terms_used"] = ev.series_terms_used;
            d["warnings"] = ev.warnings;
            return d;
        },
        py::arg("p"), py::arg("mu"), py::arg("phi"), py::arg("x"), py::arg("method") = py::none());

    m.def(
        "sample",
        [](double p, double mu, double phi, std::size_t n, std::uint64_t seed) {
            return to_array(sample(TweedieParams::make(mu, phi, p), {seed, n}));
        },
        py::arg("p"), py::arg("mu"), py::arg("phi"), py::arg("n"), py::arg("seed"));

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("mu_hat", &FitResult::mu_hat)
        .def_readonly("phi_hat", &FitResult::phi_hat)
        .def_readonly("p_hat", &FitResult::p_hat)
        .def_readonly("log_likelihood", &FitResult::log_likelihood)
        .def_readonly("total_deviance", &FitResult::total_deviance)
        .def_readonly("phi_mean_deviance", &FitResult::phi_mean_deviance)
        .def_property_readonly("method",
                               [](const FitResult& r) { return std::string(to_string(r.method)); })
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("p_feasible_interval", &FitResult::p_feasible_interval)
        .def("__repr__", [](const FitResult& r) {
            return "FitResult(p_hat=" + std::to_string(r.p_hat) +
                   ", mu_hat=" + std::to_string(r.mu_hat) +
                   ", phi_hat=" + std::to_string(r.phi_hat) + ")";
        });

    py::class_<ProfilePoint>(m, "ProfilePoint")
        .def_readonly("p", &ProfilePoint::p)
        .def_readonly("feasible", &ProfilePoint::feasible)
        .def_readonly("mu_hat", &ProfilePoint::mu_hat)
        .def_readonly("phi_hat", &ProfilePoint::phi_hat)
        .def_readonly("total_deviance", &ProfilePoint::total_deviance)
        .def_readonly("log_likelihood", &ProfilePoint::log_likelihood)
        .def_property_readonly(
            "method", [](const ProfilePoint& r) { return std::string(to_string(r.method)); })
        .def_readonly("iterations", &ProfilePoint::iterations)
        .def_readonly("converged", &ProfilePoint::converged);

    m.def(
        "fit",
        [](std::vector<double> data, std::optional<double> p_min, std::optional<double> p_max,
           double grid_step) {
            const Dataset ds(std::move(data));
            py::gil_scoped_release release;
            return fit(ds, options(p_min, p_max, grid_step));
        },
        py::arg("data"), py::arg("p_min") = py::none(), py::arg("p_max") = py::none(),
        py::arg("grid_step") = 0.1);

    m.def(
        "deviance_profile",
        [](std::vector<double> data, std::vector<double> p_values) {
            const Dataset ds(std::move(data));
            py::gil_scoped_release release;
            return deviance_profile(ds, p_values);
        },
        py::arg("data"), py::arg("p_values"));
}
