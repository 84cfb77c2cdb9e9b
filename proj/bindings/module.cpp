#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "monofit/errors.hpp"
#include "monofit/experiment.hpp"
#include "monofit/fourier.hpp"
#include "monofit/harness.hpp"
#include "monofit/influence.hpp"
#include "monofit/lower_bound.hpp"
#include "monofit/version.hpp"

namespace py = pybind11;
using namespace monofit;

namespace {

// report-like values cross the boundary as plain Python dicts
py::object json_to_py(const nlohmann::json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

nlohmann::json py_to_json(const py::object& obj) {
    py::object dumps = py::module_::import("json").attr("dumps");
    return nlohmann::json::parse(dumps(obj).cast<std::string>());
}

TruthTable table_from_values(const std::vector<double>& values) {
    std::size_t n = values.size();
    int dim = 0;
    while ((std::size_t{1} << dim) < n && dim < kMaxDenseDim + 1) ++dim;
    if (n < 2 || (std::size_t{1} << dim) != n)
        throw std::invalid_argument("values length must be a power of two, at least 2");
    return make_table(dim, values);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral estimation and analysis on the Boolean hypercube";
    m.attr("__version__") = kVersion;

    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // transforms
    m.def("character", &character, py::arg("subset"), py::arg("point"));
    m.def(
        "wht_forward",
        [](const std::vector<double>& values) { return wht_forward(table_from_values(values)).coeffs; },
        py::arg("values"), "Fourier coefficients of a dense table (index = subset mask)");
    m.def(
        "wht_inverse",
        [](const std::vector<double>& coeffs) {
            TruthTable t = table_from_values(coeffs);  // same power-of-two shape
            return wht_inverse(FourierSpectrum{t.dim, t.values}).values;
        },
        py::arg("coeffs"));
    m.def(
        "noise_operator",
        [](const std::vector<double>& coeffs, double rho) {
            TruthTable t = table_from_values(coeffs);
            return noise_operator(FourierSpectrum{t.dim, t.values}, rho).coeffs;
        },
        py::arg("coeffs"), py::arg("rho"));
    m.def(
        "lp_norm",
        [](const std::vector<double>& values, double p) { return lp_norm(table_from_values(values), p); },
        py::arg("values"), py::arg("p"));
    m.def(
        "hypercontractivity_check",
        [](const std::vector<double>& values) {
            HypercontractivityCheck h = hypercontractivity_check(table_from_values(values));
            return py::make_tuple(h.lhs, h.rhs, h.holds);
        },
        py::arg("values"), "Returns (lhs, rhs, holds)");

    // influences
    py::class_<InfluenceProfile>(m, "InfluenceProfile")
        .def_readonly("dim", &InfluenceProfile::dim)
        .def_readonly("l1", &InfluenceProfile::l1)
        .def_readonly("l2", &InfluenceProfile::l2)
        .def_readonly("total_l1", &InfluenceProfile::total_l1)
        .def_readonly("total_l2", &InfluenceProfile::total_l2);
    m.def(
        "influence_profile",
        [](const std::vector<double>& values) { return influence_profile(table_from_values(values)); },
        py::arg("values"));
    m.def(
        "is_monotone",
        [](const std::vector<double>& values) { return is_monotone(table_from_values(values)); },
        py::arg("values"));
    py::class_<ConcentrationReport>(m, "ConcentrationReport")
        .def_readonly("d0", &ConcentrationReport::d0)
        .def_readonly("delta", &ConcentrationReport::delta)
        .def_readonly("heavy_mask", &ConcentrationReport::heavy_mask)
        .def_readonly("heavy_count", &ConcentrationReport::heavy_count)
        .def_readonly("tail_weight", &ConcentrationReport::tail_weight)
        .def_readonly("bound", &ConcentrationReport::bound)
        .def_readonly("budget", &ConcentrationReport::budget)
        .def_readonly("total_l1", &ConcentrationReport::total_l1)
        .def_readonly("total_l2", &ConcentrationReport::total_l2)
        .def_readonly("holds", &ConcentrationReport::holds);
    m.def(
        "concentration_report",
        [](const std::vector<double>& values, int d0, double delta, double budget) {
            return concentration_report(table_from_values(values), d0, delta, budget);
        },
        py::arg("values"), py::arg("d0"), py::arg("delta"), py::arg("budget"));

    // function zoo
    py::class_<FunctionSpec>(m, "FunctionSpec")
        .def_property_readonly("dim", [](const FunctionSpec& f) { return f.dim; })
        .def_property_readonly("tag", [](const FunctionSpec& f) { return tag(f); })
        .def("evaluate", [](const FunctionSpec& f, Mask x) { return evaluate(f, x); }, py::arg("x"))
        .def("to_table", [](const FunctionSpec& f) { return to_table(f).values; })
        .def("to_json", [](const FunctionSpec& f) { return json_to_py(to_json(f)); })
        .def_static("from_json",
                    [](const py::object& obj) { return function_from_json(py_to_json(obj)); })
        .def_static("dictator", &make_dictator, py::arg("dim"), py::arg("coordinate"))
        .def_static("additive_junta", &make_additive_junta, py::arg("dim"), py::arg("coordinates"))
        .def_static("tribes", &make_tribes, py::arg("dim"), py::arg("width"), py::arg("blocks"))
        .def_static("majority", &make_majority, py::arg("dim"))
        .def_static("table", [](const std::vector<double>& values) {
            return make_table_fn(table_from_values(values));
        });
    m.def("tribes_influence_exact", &tribes_influence_exact, py::arg("width"), py::arg("blocks"));

    // noise + datasets
    py::class_<NoiseModel>(m, "NoiseModel")
        .def_static("gaussian", &NoiseModel::gaussian, py::arg("sigma"))
        .def_static("uniform_bounded", &NoiseModel::uniform_bounded, py::arg("half_width"))
        .def_static("none", &NoiseModel::none)
        .def_property_readonly("sub_gaussian_variance", &NoiseModel::sub_gaussian_variance);
    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](int dim, std::vector<Mask> x, std::vector<double> y) {
                 Dataset d;
                 d.dim = dim;
                 d.x = std::move(x);
                 d.y = std::move(y);
                 return d;
             }),
             py::arg("dim"), py::arg("x"), py::arg("y"))
        .def_readonly("dim", &Dataset::dim)
        .def_readonly("x", &Dataset::x)
        .def_readonly("y", &Dataset::y);
    m.def("generate_dataset", &generate_dataset, py::arg("f"), py::arg("n"), py::arg("noise"),
          py::arg("seed"));

    // estimator
    py::class_<EstimatorConfig>(m, "EstimatorConfig")
        .def(py::init([](double gamma, double c0, std::optional<int> d0_override,
                         std::uint64_t max_spectral_set) {
                 EstimatorConfig cfg{gamma, c0, d0_override, max_spectral_set};
                 validate(cfg);
                 return cfg;
             }),
             py::arg("gamma") = 2.5, py::arg("c0") = 3.0, py::arg("d0_override") = py::none(),
             py::arg("max_spectral_set") = std::uint64_t{1} << 20)
        .def_readonly("gamma", &EstimatorConfig::gamma)
        .def_readonly("c0", &EstimatorConfig::c0)
        .def_readonly("d0_override", &EstimatorConfig::d0_override)
        .def_readonly("max_spectral_set", &EstimatorConfig::max_spectral_set);
    m.def(
        "schedule",
        [](long long n, const EstimatorConfig& cfg) {
            Schedule s = schedule(n, cfg);
            return py::make_tuple(s.d0, s.delta);
        },
        py::arg("n"), py::arg("cfg") = EstimatorConfig{}, "Returns (d0, delta)");
    py::class_<EstimatorOutput>(m, "EstimatorOutput")
        .def_readonly("dim", &EstimatorOutput::dim)
        .def_readonly("d0", &EstimatorOutput::d0)
        .def_readonly("delta", &EstimatorOutput::delta)
        .def_readonly("influence_estimates", &EstimatorOutput::influence_estimates)
        .def_readonly("empty_bins", &EstimatorOutput::empty_bins)
        .def_readonly("selected", &EstimatorOutput::selected)
        .def_readonly("spectral_set", &EstimatorOutput::spectral_set)
        .def_readonly("coefficients", &EstimatorOutput::coefficients)
        .def("predict", &EstimatorOutput::predict, py::arg("x"))
        .def("predict_raw", &EstimatorOutput::predict_raw, py::arg("x"))
        .def("to_json", [](const EstimatorOutput& o) { return json_to_py(to_json(o)); });
    m.def("fit", &fit, py::arg("data"), py::arg("cfg") = EstimatorConfig{});

    // harness
    py::class_<RiskReport>(m, "RiskReport")
        .def_readonly("function_tag", &RiskReport::function_tag)
        .def_readonly("dim", &RiskReport::dim)
        .def_readonly("n", &RiskReport::n)
        .def_readonly("noise_sd", &RiskReport::noise_sd)
        .def_readonly("replicates", &RiskReport::replicates)
        .def_readonly("master_seed", &RiskReport::master_seed)
        .def_readonly("d0", &RiskReport::d0)
        .def_readonly("delta", &RiskReport::delta)
        .def_readonly("mean_risk", &RiskReport::mean_risk)
        .def_readonly("std_error", &RiskReport::std_error)
        .def_readonly("mean_selected", &RiskReport::mean_selected)
        .def_readonly("mean_spectral", &RiskReport::mean_spectral)
        .def_readonly("risks", &RiskReport::risks)
        .def_readonly("tail_weight", &RiskReport::tail_weight)
        .def_readonly("coeff_error", &RiskReport::coeff_error)
        .def_readonly("unclamped_risks", &RiskReport::unclamped_risks)
        .def_readonly("eval_se", &RiskReport::eval_se);
    m.def(
        "exact_risk",
        [](const EstimatorOutput& out, const FunctionSpec& f) {
            return exact_risk([&](Mask x) { return out.predict(x); }, f);
        },
        py::arg("fit"), py::arg("f"));
    m.def("mc_risk", &mc_risk, py::arg("f"), py::arg("n"), py::arg("noise"),
          py::arg("cfg") = EstimatorConfig{}, py::arg("replicates") = 1, py::arg("seed") = 1);
    m.def("constant_baseline_risk", &constant_baseline_risk, py::arg("f"), py::arg("n"),
          py::arg("noise"), py::arg("replicates") = 1, py::arg("seed") = 1);
    m.def("spectral_sweep", &spectral_sweep, py::arg("f"), py::arg("d0_list"),
          py::arg("delta_list"));

    // packing construction
    py::class_<PackingCode>(m, "PackingCode")
        .def_readonly("length", &PackingCode::length)
        .def_readonly("min_dist", &PackingCode::min_dist)
        .def_readonly("seed", &PackingCode::seed)
        .def_property_readonly("words",
                               [](const PackingCode& c) {
                                   std::vector<std::string> out;
                                   out.reserve(c.words.size());
                                   for (const BitVec& w : c.words) out.push_back(to_hex(w));
                                   return out;
                               })
        .def_property_readonly("size",
                               [](const PackingCode& c) { return c.words.size(); });
    m.def("vg_packing", &vg_packing, py::arg("length"), py::arg("min_dist"),
          py::arg("target_count"), py::arg("seed"));
    m.def("check_pairwise_distance", &check_pairwise_distance, py::arg("code"));
    m.def(
        "beta_from_budget",
        [](double k_budget, int s) {
            BetaBudget b = beta_from_budget(k_budget, s);
            return py::make_tuple(b.beta, b.coeff_a);
        },
        py::arg("k_budget"), py::arg("s"), "Returns (beta, coeff_a)");
    m.def("beta_b_from_budget", &beta_b_from_budget, py::arg("b_budget"), py::arg("s"),
          py::arg("a1"));
    m.def("default_a1", &default_a1, py::arg("s"));
    py::class_<MiddleLayerFamily>(m, "MiddleLayerFamily")
        .def_readonly("dim", &MiddleLayerFamily::dim)
        .def_readonly("s", &MiddleLayerFamily::s)
        .def_readonly("m", &MiddleLayerFamily::m)
        .def_readonly("support", &MiddleLayerFamily::support)
        .def_readonly("beta", &MiddleLayerFamily::beta)
        .def_readonly("code", &MiddleLayerFamily::code)
        .def_property_readonly("size", &MiddleLayerFamily::size)
        .def("to_json", [](const MiddleLayerFamily& f) { return json_to_py(to_json(f)); })
        .def_static("from_json",
                    [](const py::object& obj) { return family_from_json(py_to_json(obj)); });
    m.def(
        "build_family_l1",
        [](int dim, int s, double k_budget, int target_count, std::uint64_t seed) {
            FamilyBuild b = build_family_l1(dim, s, k_budget, target_count, seed);
            return py::make_tuple(b.family, b.coeff_a);
        },
        py::arg("dim"), py::arg("s"), py::arg("k_budget"), py::arg("target_count"),
        py::arg("seed"), "Returns (family, coeff_a)");
    m.def("make_f_omega", &make_f_omega, py::arg("family"), py::arg("index"));
    m.def("separation", &separation, py::arg("family"), py::arg("i"), py::arg("j"));
    m.def("kl_gaussian", &kl_gaussian, py::arg("sq_l2_dist"), py::arg("n"), py::arg("sigma"));
    m.def(
        "fano_budget",
        [](const MiddleLayerFamily& fam, long long n, double sigma) {
            FanoBudget f = fano_budget(fam, n, sigma);
            return py::make_tuple(f.kl_bar_bound, f.half_log_size, f.satisfied);
        },
        py::arg("family"), py::arg("n"), py::arg("sigma"),
        "Returns (kl_bar_bound, half_log_size, satisfied)");
    m.def(
        "verify_family",
        [](const MiddleLayerFamily& fam, double k_budget, std::optional<double> b_budget) {
            return json_to_py(to_json(verify_family(fam, k_budget, b_budget)));
        },
        py::arg("family"), py::arg("k_budget"), py::arg("b_budget") = py::none());

    // experiment driver
    m.def(
        "run_experiment",
        [](const py::object& config) {
            ExperimentResult res = run_experiment(py_to_json(config));
            return py::make_tuple(res.csv, json_to_py(res.provenance));
        },
        py::arg("config"), "Returns (csv_text, provenance_dict) without writing files");
    m.def(
        "lower_bound_demo",
        [](int s, double k_budget, double sigma, long long n, std::uint64_t seed,
           int target_count) { return json_to_py(lower_bound_demo(s, k_budget, sigma, n, seed, target_count)); },
        py::arg("s"), py::arg("k_budget"), py::arg("sigma"), py::arg("n"), py::arg("seed") = 1,
        py::arg("target_count") = 0);
}
