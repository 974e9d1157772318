#include "acilc/config.hpp"
#include "acilc/harness.hpp"
#include "acilc/learner.hpp"
#include "acilc/lti.hpp"
#include "acilc/noilc.hpp"
#include "acilc/numerics.hpp"
#include "acilc/trajectory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace acilc;

namespace {

WeightMatrix to_weight(const py::object& o) {
    if (py::isinstance<WeightMatrix>(o)) return o.cast<WeightMatrix>();
    if (py::isinstance<py::float_>(o) || py::isinstance<py::int_>(o)) return WeightMatrix::scalar(o.cast<double>());
    const auto m = o.cast<Eigen::MatrixXd>();
    if (m.cols() == 1) return WeightMatrix::diagonal(m.col(0));
    return WeightMatrix::dense(m);
}

py::dict summary_dict(const RunSummary& s) {
    py::dict d;
    d["method"] = s.method;
    d["seed"] = s.seed;
    d["final_cost"] = s.final_cost;
    d["min_cost"] = s.min_cost;
    d["convergence_trial"] = s.convergence_trial;
    d["final_upsilon"] = s.final_upsilon;
    d["convergence_margin"] = s.convergence_margin ? py::cast(*s.convergence_margin) : py::none();
    return d;
}

py::dict log_dict(const TrialLog& log) {
    std::vector<double> cost, e_norm;
    std::vector<Eigen::VectorXd> upsilon;
    for (const auto& r : log.records) {
        cost.push_back(r.cost);
        e_norm.push_back(r.e_norm);
        upsilon.push_back(r.upsilon);
    }
    py::dict d;
    d["method"] = log.method;
    d["seed"] = log.seed;
    d["cost"] = cost;
    d["e_norm"] = e_norm;
    d["upsilon"] = upsilon;
    d["final_upsilon"] = log.final_upsilon;
    d["final_error"] = log.final_error;
    d["final_feedforward"] = log.final_feedforward;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lifted ILC models, NOILC gain synthesis and the actor-critic learner";
    m.attr("__version__") = code_version();

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<AcilcDivergence>(m, "AcilcDivergence", PyExc_RuntimeError);

    py::class_<TransferFunction>(m, "TransferFunction")
        .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("numerator"),
             py::arg("denominator"), py::arg("sample_time"))
        .def_property_readonly("numerator", &TransferFunction::numerator)
        .def_property_readonly("denominator", &TransferFunction::denominator)
        .def_property_readonly("sample_time", &TransferFunction::sample_time)
        .def_property_readonly("order", &TransferFunction::order)
        .def_property_readonly("relative_degree", &TransferFunction::relative_degree)
        .def("markov_parameters", &TransferFunction::markov_parameters, py::arg("n"));

    py::class_<LiftedSystem>(m, "LiftedSystem")
        .def_readonly("S", &LiftedSystem::S)
        .def_readonly("J", &LiftedSystem::J)
        .def_readonly("horizon", &LiftedSystem::horizon)
        .def_readonly("sample_time", &LiftedSystem::sample_time)
        .def_readonly("spectral_radius", &LiftedSystem::spectral_radius);

    m.def("closed_loop_maps", &closed_loop_maps, py::arg("plant"), py::arg("controller"), py::arg("horizon"));
    m.def("simulate_trial", &simulate_trial, py::arg("system"), py::arg("reference"), py::arg("feedforward"));

    py::class_<SegmentSpec>(m, "SegmentSpec")
        .def(py::init([](double d, double v, double a, double j, double rest) {
                 return SegmentSpec{d, v, a, j, rest};
             }),
             py::arg("displacement"), py::arg("max_velocity") = 0.6, py::arg("max_acceleration") = 10.0,
             py::arg("max_jerk") = 400.0, py::arg("rest_duration") = 0.1)
        .def_readwrite("displacement", &SegmentSpec::displacement)
        .def_readwrite("max_velocity", &SegmentSpec::max_velocity)
        .def_readwrite("max_acceleration", &SegmentSpec::max_acceleration)
        .def_readwrite("max_jerk", &SegmentSpec::max_jerk)
        .def_readwrite("rest_duration", &SegmentSpec::rest_duration);

    py::class_<ReferenceProfile>(m, "ReferenceProfile")
        .def(py::init([](Eigen::VectorXd samples, double ts) { return ReferenceProfile{std::move(samples), ts, {}}; }),
             py::arg("samples"), py::arg("sample_time"))
        .def_readonly("samples", &ReferenceProfile::samples)
        .def_readonly("sample_time", &ReferenceProfile::sample_time);

    py::class_<BasisMatrix>(m, "BasisMatrix")
        .def_readonly("columns", &BasisMatrix::columns)
        .def_readonly("labels", &BasisMatrix::labels)
        .def_readonly("source_reference", &BasisMatrix::source_reference);

    m.def("third_order_reference", &third_order_reference, py::arg("segments"), py::arg("sample_time"),
          py::arg("horizon"));
    m.def("build_basis", &build_basis, py::arg("reference"));
    m.def("identity_basis", &identity_basis, py::arg("horizon"));

    py::class_<WeightMatrix>(m, "WeightMatrix");
    py::class_<Weighting>(m, "Weighting")
        .def(py::init([](const py::object& we, const py::object& wv, const py::object& wdv) {
                 Weighting w{to_weight(we), to_weight(wv), to_weight(wdv)};
                 w.validate();
                 return w;
             }),
             py::arg("W_e") = 1e6, py::arg("W_upsilon") = 1e-6, py::arg("W_delta_upsilon") = 0.0);

    m.def("trial_cost", &trial_cost, py::arg("e"), py::arg("upsilon"), py::arg("upsilon_next"), py::arg("weights"));
    m.def("spectral_norm", &spectral_norm, py::arg("M"));

    py::class_<NoilcGains>(m, "NoilcGains")
        .def_readonly("Q", &NoilcGains::Q)
        .def_readonly("L", &NoilcGains::L)
        .def_readonly("convergence_margin", &NoilcGains::convergence_margin);
    m.def("synthesize_gains", &synthesize_gains, py::arg("J"), py::arg("Psi"), py::arg("weights"));
    m.def("noilc_update", &noilc_update, py::arg("gains"), py::arg("upsilon"), py::arg("e"));
    m.def("convergence_margin", &convergence_margin, py::arg("gains"), py::arg("J"), py::arg("Psi"));

    py::class_<ActorState>(m, "ActorState")
        .def(py::init([](Eigen::MatrixXd theta, double sigma2) { return ActorState{std::move(theta), 0.0, sigma2}; }),
             py::arg("theta"), py::arg("sigma2"))
        .def_readonly("theta", &ActorState::theta)
        .def_readonly("sigma2", &ActorState::sigma2);
    m.def("policy_mean", &policy_mean, py::arg("actor"), py::arg("phi"));
    m.def("log_policy_gradient", &log_policy_gradient, py::arg("action"), py::arg("mean"), py::arg("sigma2"),
          py::arg("phi"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("horizon_samples", &ExperimentConfig::horizon_samples)
        .def_readwrite("num_trials", &ExperimentConfig::num_trials)
        .def_readwrite("seeds", &ExperimentConfig::seeds)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readonly("defaulted", &ExperimentConfig::defaulted)
        .def_property(
            "method", [](const ExperimentConfig& c) { return std::string(method_name(c.method)); },
            [](ExperimentConfig& c, const std::string& s) {
                if (s == "noilc") c.method = Method::Noilc;
                else if (s == "acilc") c.method = Method::Acilc;
                else if (s == "both") c.method = Method::Both;
                else throw py::value_error("method must be 'noilc', 'acilc' or 'both'");
            })
        .def("to_yaml", &config_to_yaml);

    m.def("load_config", &load_config, py::arg("source"));
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("preset_text", &preset_text, py::arg("name"));

    m.def(
        "run_experiment",
        [](const ExperimentConfig& cfg, std::vector<std::uint64_t> seeds, std::optional<int> num_trials,
           std::optional<std::string> output_dir, bool write_files) {
            RunOptions o;
            o.seeds = std::move(seeds);
            o.num_trials = num_trials;
            o.output_dir = std::move(output_dir);
            o.write_files = write_files;
            ExperimentResult res;
            {
                py::gil_scoped_release release;
                res = run_experiment(cfg, o);
            }
            py::list summaries, logs;
            for (const auto& s : res.summaries) summaries.append(summary_dict(s));
            for (const auto& l : res.logs) logs.append(log_dict(l));
            py::dict out;
            out["summaries"] = summaries;
            out["logs"] = logs;
            out["failures"] = res.failures;
            out["output_dir"] = res.output_dir;
            out["convergence_margin"] = res.gains ? py::cast(res.gains->convergence_margin) : py::none();
            return out;
        },
        py::arg("config"), py::arg("seeds") = std::vector<std::uint64_t>{}, py::arg("num_trials") = py::none(),
        py::arg("output_dir") = py::none(), py::arg("write_files") = false);
}
