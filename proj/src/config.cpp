#include "acilc/config.hpp"

#include "acilc/io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>

namespace acilc {

namespace {

#include "presets.inc"

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration:";
    for (const auto& p : problems) out += "\n  " + p;
    return out;
}

class Reader {
public:
    std::vector<std::string> errors;
    std::vector<std::string> defaulted;

    static std::string child(const std::string& path, const std::string& key) {
        return path.empty() || path == "<root>" ? key : path + "." + key;
    }

    bool mapping(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
        if (!node.IsMap()) {
            errors.push_back(path + ": expected a mapping");
            return false;
        }
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) errors.push_back(child(path, key) + ": unknown key");
        }
        return true;
    }

    // The child node, or nothing (recorded as defaulted) if absent.
    std::optional<YAML::Node> get(const YAML::Node& parent, const std::string& key, const std::string& path) {
        const YAML::Node& p = parent;
        if (p.IsMap() && p[key]) return p[key];
        defaulted.push_back(child(path, key));
        return std::nullopt;
    }

    void number(const YAML::Node& parent, const std::string& key, const std::string& path, double& out) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        to_number(n, child(path, key), out);
    }

    bool to_number(const YAML::Node& n, const std::string& path, double& out) {
        if (n.IsScalar()) {
            try {
                out = parse_double(n.Scalar());
                return true;
            } catch (const std::exception&) {
            }
        }
        errors.push_back(path + ": expected a number");
        return false;
    }

    void integer(const YAML::Node& parent, const std::string& key, const std::string& path, long long& out) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        try {
            out = n.as<long long>();
        } catch (const std::exception&) {
            errors.push_back(child(path, key) + ": expected an integer");
        }
    }

    void boolean(const YAML::Node& parent, const std::string& key, const std::string& path, bool& out) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        try {
            out = n.as<bool>();
        } catch (const std::exception&) {
            errors.push_back(child(path, key) + ": expected true or false");
        }
    }

    void text(const YAML::Node& parent, const std::string& key, const std::string& path, std::string& out) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        if (!n.IsScalar()) {
            errors.push_back(child(path, key) + ": expected a string");
            return;
        }
        out = n.Scalar();
    }

    bool numbers(const YAML::Node& n, const std::string& path, std::vector<double>& out) {
        if (!n.IsSequence()) {
            errors.push_back(path + ": expected a list of numbers");
            return false;
        }
        out.clear();
        bool ok = true;
        for (std::size_t i = 0; i < n.size(); ++i) {
            double v = 0.0;
            ok = to_number(n[i], path + "[" + std::to_string(i) + "]", v) && ok;
            out.push_back(v);
        }
        return ok;
    }

    void schedule(const YAML::Node& parent, const std::string& key, const std::string& path, DecaySchedule& out) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        const std::string p = child(path, key);
        if (!mapping(n, p, {"initial", "rate", "floor"})) return;
        number(n, "initial", p, out.initial);
        number(n, "rate", p, out.rate);
        number(n, "floor", p, out.floor);
        try {
            out.validate(p.c_str());
        } catch (const std::exception& ex) {
            errors.push_back(ex.what());
        }
    }

    void weight(const YAML::Node& parent, const std::string& key, const std::string& path, WeightMatrix& out) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        const std::string p = child(path, key);
        if (n.IsScalar()) {
            double v = 0.0;
            if (to_number(n, p, v)) out = WeightMatrix::scalar(v);
            return;
        }
        if (n.IsSequence() && n.size() > 0 && n[0].IsSequence()) {
            const auto rows = static_cast<Eigen::Index>(n.size());
            Eigen::MatrixXd m(rows, rows);
            for (Eigen::Index i = 0; i < rows; ++i) {
                std::vector<double> row;
                const std::string rp = p + "[" + std::to_string(i) + "]";
                if (!numbers(n[static_cast<std::size_t>(i)], rp, row)) return;
                if (static_cast<Eigen::Index>(row.size()) != rows) {
                    errors.push_back(rp + ": weight matrix must be square");
                    return;
                }
                for (Eigen::Index k = 0; k < rows; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
            }
            try {
                out = WeightMatrix::dense(m);
            } catch (const std::exception& ex) {
                errors.push_back(p + ": " + ex.what());
            }
            return;
        }
        std::vector<double> d;
        if (numbers(n, p, d)) out = WeightMatrix::diagonal(Eigen::Map<Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size())));
    }

    // "auto", "none" or a value/list.
    void scaling_mode(const YAML::Node& parent, const std::string& key, const std::string& path,
                      LearnerScaling::Mode& mode, Eigen::VectorXd* vec, double* scalar) {
        auto found = get(parent, key, path);
        if (!found) return;
        const YAML::Node n = *found;
        const std::string p = child(path, key);
        if (n.IsScalar() && (n.Scalar() == "auto" || n.Scalar() == "none")) {
            mode = n.Scalar() == "auto" ? LearnerScaling::Mode::Auto : LearnerScaling::Mode::None;
            return;
        }
        if (vec) {
            std::vector<double> v;
            if (!numbers(n, p, v)) return;
            *vec = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
            if (!vec->allFinite() || (vec->array() <= 0.0).any()) errors.push_back(p + ": scale factors must be positive");
        } else {
            if (!to_number(n, p, *scalar)) return;
            if (!(*scalar > 0.0)) errors.push_back(p + ": scale factor must be positive");
        }
        mode = LearnerScaling::Mode::Explicit;
    }

    void transfer_function(const YAML::Node& root, const std::string& key, TransferFunctionConfig& out) {
        const YAML::Node& r = root;
        if (!r[key]) {
            errors.push_back(key + ": required");
            return;
        }
        YAML::Node n = r[key];
        if (!mapping(n, key, {"gain", "numerator", "denominator", "sample_time_s", "fixed_poles", "minreal_tolerance"})) return;
        number(n, "gain", key, out.gain);
        for (const char* field : {"numerator", "denominator"}) {
            if (!n[field]) {
                errors.push_back(child(key, field) + ": required");
                continue;
            }
            numbers(n[field], child(key, field), std::string(field) == "numerator" ? out.numerator : out.denominator);
        }
        number(n, "sample_time_s", key, out.sample_time_s);
        if (auto fp = get(n, "fixed_poles", key)) numbers(*fp, child(key, "fixed_poles"), out.fixed_poles);
        number(n, "minreal_tolerance", key, out.minreal_tolerance);
        if (!(out.minreal_tolerance >= 0.0)) errors.push_back(child(key, "minreal_tolerance") + ": must be nonnegative");
    }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

TransferFunction TransferFunctionConfig::build() const {
    std::vector<double> num = numerator;
    for (double& v : num) v *= gain;
    TransferFunction tf(num, denominator, sample_time_s);
    tf = constrain_poles(tf, fixed_poles);
    return minreal(tf, minreal_tolerance);
}

std::vector<SegmentSpec> default_reference() {
    const SegmentSpec move{0.1, 0.6, 10.0, 400.0, 0.1};
    return {move, move};
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Noilc: return "noilc";
        case Method::Acilc: return "acilc";
        case Method::Both: return "both";
    }
    return "?";
}

std::string preset_text(const std::string& name) {
    if (name == "paper_sec5") return std::string(kPresetPaperSec5);
    throw std::invalid_argument("unknown preset: " + name);
}

ExperimentConfig load_config(const std::string& source) {
    const std::filesystem::path path(source);
    if (std::filesystem::exists(path)) return parse_config(read_text_file(path));
    if (source == "paper_sec5") return parse_config(preset_text(source));
    throw std::runtime_error("config file not found: " + source);
}

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& ex) {
        throw ConfigError({std::string("parse error: ") + ex.what()});
    }
    ExperimentConfig cfg;
    cfg.reference = default_reference();
    cfg.weights.W_e = WeightMatrix::scalar(1e6);
    cfg.weights.W_upsilon = WeightMatrix::scalar(1e-6);
    cfg.weights.W_delta_upsilon = WeightMatrix::scalar(0.0);

    Reader rd;
    if (!rd.mapping(root, "<root>", {"plant", "controller", "horizon_samples", "reference", "basis", "weights", "method",
                                     "num_trials", "seeds", "output_dir", "acilc", "defaulted", "derived"})) {
        throw ConfigError(rd.errors);
    }
    rd.transfer_function(root, "plant", cfg.plant);
    rd.transfer_function(root, "controller", cfg.controller);

    long long horizon = cfg.horizon_samples;
    rd.integer(root, "horizon_samples", "", horizon);
    if (horizon < 3 || horizon > 100000) rd.errors.push_back("horizon_samples: must be in [3, 100000]");
    cfg.horizon_samples = static_cast<int>(horizon);

    if (auto found_ref = rd.get(root, "reference", "")) {
        const YAML::Node ref = *found_ref;
        if (rd.mapping(ref, "reference", {"segments"})) {
            auto found_segs = rd.get(ref, "segments", "reference");
            const YAML::Node segs = found_segs ? *found_segs : YAML::Node();
            if (found_segs && !segs.IsSequence()) {
                rd.errors.push_back("reference.segments: expected a list");
            } else if (found_segs) {
                cfg.reference.clear();
                for (std::size_t i = 0; i < segs.size(); ++i) {
                    const std::string p = "reference.segments[" + std::to_string(i) + "]";
                    SegmentSpec s{0.0, 0.6, 10.0, 400.0, 0.0};
                    YAML::Node sn = segs[i];
                    if (rd.mapping(sn, p, {"displacement", "max_velocity_per_s", "max_acceleration_per_s2",
                                           "max_jerk_per_s3", "rest_s"})) {
                        if (!sn["displacement"]) rd.errors.push_back(p + ".displacement: required");
                        rd.number(sn, "displacement", p, s.displacement);
                        rd.number(sn, "max_velocity_per_s", p, s.max_velocity);
                        rd.number(sn, "max_acceleration_per_s2", p, s.max_acceleration);
                        rd.number(sn, "max_jerk_per_s3", p, s.max_jerk);
                        rd.number(sn, "rest_s", p, s.rest_duration);
                    }
                    cfg.reference.push_back(s);
                }
            }
        }
    }

    std::string basis = "derivative";
    rd.text(root, "basis", "", basis);
    if (basis == "derivative") cfg.basis = BasisKind::Derivative;
    else if (basis == "identity") cfg.basis = BasisKind::Identity;
    else rd.errors.push_back("basis: expected 'derivative' or 'identity'");

    if (auto found_w = rd.get(root, "weights", "")) {
        const YAML::Node w = *found_w;
        if (rd.mapping(w, "weights", {"W_e", "W_upsilon", "W_delta_upsilon"})) {
            rd.weight(w, "W_e", "weights", cfg.weights.W_e);
            rd.weight(w, "W_upsilon", "weights", cfg.weights.W_upsilon);
            rd.weight(w, "W_delta_upsilon", "weights", cfg.weights.W_delta_upsilon);
        }
    } else {
        for (const char* k : {"W_e", "W_upsilon", "W_delta_upsilon"}) rd.defaulted.push_back(std::string("weights.") + k);
    }
    try {
        cfg.weights.validate();
    } catch (const std::exception& ex) {
        rd.errors.push_back(std::string("weights: ") + ex.what());
    }

    std::string method = "both";
    rd.text(root, "method", "", method);
    if (method == "noilc") cfg.method = Method::Noilc;
    else if (method == "acilc") cfg.method = Method::Acilc;
    else if (method == "both") cfg.method = Method::Both;
    else rd.errors.push_back("method: expected 'noilc', 'acilc' or 'both'");

    long long trials = cfg.num_trials;
    rd.integer(root, "num_trials", "", trials);
    if (trials < 0 || trials > 1000000) rd.errors.push_back("num_trials: must be in [0, 1000000]");
    cfg.num_trials = static_cast<int>(trials);

    if (auto found_s = rd.get(root, "seeds", "")) {
        const YAML::Node s = *found_s;
        cfg.seeds.clear();
        try {
            if (s.IsSequence()) {
                for (const auto& v : s) cfg.seeds.push_back(v.as<std::uint64_t>());
            } else {
                cfg.seeds.push_back(s.as<std::uint64_t>());
            }
            if (cfg.seeds.empty()) rd.errors.push_back("seeds: at least one seed is required");
        } catch (const std::exception&) {
            rd.errors.push_back("seeds: expected a nonnegative integer or a list of them");
        }
    }
    rd.text(root, "output_dir", "", cfg.output_dir);

    AcilcConfig& ac = cfg.acilc;
    auto found_a = rd.get(root, "acilc", "");
    const YAML::Node a = found_a ? *found_a : YAML::Node(YAML::NodeType::Map);
    if (rd.mapping(a, "acilc", {"gamma", "alpha_w", "alpha_theta", "sigma", "constant_feature", "feature_scaling",
                                "feature_gain", "action_scaling", "cost_scaling", "cost_timing", "td_error_clip",
                                "initial_policy", "evaluation_mode", "store_errors"})) {
        const std::string p = "acilc";
        rd.number(a, "gamma", p, ac.gamma);
        if (!(ac.gamma > 0.0 && ac.gamma <= 1.0)) rd.errors.push_back("acilc.gamma: must be in (0, 1]");
        rd.schedule(a, "alpha_w", p, ac.schedules.alpha_w);
        rd.schedule(a, "alpha_theta", p, ac.schedules.alpha_theta);
        rd.schedule(a, "sigma", p, ac.schedules.sigma);
        rd.boolean(a, "constant_feature", p, ac.scaling.constant_feature);
        rd.scaling_mode(a, "feature_scaling", p, ac.scaling.feature_mode, &ac.scaling.feature_scale, nullptr);
        rd.number(a, "feature_gain", p, ac.scaling.feature_gain);
        if (!(ac.scaling.feature_gain > 0.0)) rd.errors.push_back("acilc.feature_gain: must be positive");
        rd.scaling_mode(a, "action_scaling", p, ac.scaling.action_mode, &ac.scaling.action_scale, nullptr);
        rd.scaling_mode(a, "cost_scaling", p, ac.scaling.cost_mode, nullptr, &ac.scaling.cost_scale);
        std::string timing = "post_action";
        rd.text(a, "cost_timing", p, timing);
        if (timing == "post_action") ac.cost_timing = CostTiming::PostAction;
        else if (timing == "pre_action") ac.cost_timing = CostTiming::PreAction;
        else rd.errors.push_back("acilc.cost_timing: expected 'post_action' or 'pre_action'");
        rd.number(a, "td_error_clip", p, ac.td_error_clip);
        if (!(ac.td_error_clip >= 0.0)) rd.errors.push_back("acilc.td_error_clip: must be nonnegative");
        std::string init = "zero";
        rd.text(a, "initial_policy", p, init);
        if (init == "zero") ac.initialize_from_noilc = false;
        else if (init == "noilc") ac.initialize_from_noilc = true;
        else rd.errors.push_back("acilc.initial_policy: expected 'zero' or 'noilc'");
        if (ac.initialize_from_noilc && !ac.scaling.constant_feature) {
            rd.errors.push_back("acilc.initial_policy: 'noilc' needs constant_feature: true");
        }
        rd.boolean(a, "evaluation_mode", p, ac.evaluation_mode);
        rd.boolean(a, "store_errors", p, ac.store_errors);
    }

    if (rd.errors.empty()) {
        // Structural checks that need the assembled values.
        for (auto* tf : {&cfg.plant, &cfg.controller}) {
            const std::string name = tf == &cfg.plant ? "plant" : "controller";
            try {
                (void)tf->build();
            } catch (const std::exception& ex) {
                rd.errors.push_back(name + ": " + ex.what());
            }
        }
        if (cfg.plant.sample_time_s != cfg.controller.sample_time_s) {
            rd.errors.push_back("controller.sample_time_s: must equal plant.sample_time_s");
        }
        try {
            (void)third_order_reference(cfg.reference, cfg.plant.sample_time_s, cfg.horizon_samples);
        } catch (const std::exception& ex) {
            rd.errors.push_back(std::string("reference: ") + ex.what());
        }
        const auto n = static_cast<Eigen::Index>(cfg.horizon_samples);
        const Eigen::Index m = cfg.basis == BasisKind::Identity ? n : 2;
        auto dim_check = [&](const WeightMatrix& w, Eigen::Index want, const char* name) {
            if (w.dimension() >= 0 && w.dimension() != want) {
                rd.errors.push_back(std::string("weights.") + name + ": dimension " + std::to_string(w.dimension()) +
                                    " does not match " + std::to_string(want));
            }
        };
        dim_check(cfg.weights.W_e, n, "W_e");
        dim_check(cfg.weights.W_upsilon, m, "W_upsilon");
        dim_check(cfg.weights.W_delta_upsilon, m, "W_delta_upsilon");
        auto vec_check = [&](const LearnerScaling::Mode mode, const Eigen::VectorXd& v, const char* name) {
            if (mode == LearnerScaling::Mode::Explicit && v.size() != m) {
                rd.errors.push_back(std::string("acilc.") + name + ": needs one entry per basis column");
            }
        };
        vec_check(ac.scaling.feature_mode, ac.scaling.feature_scale, "feature_scaling");
        vec_check(ac.scaling.action_mode, ac.scaling.action_scale, "action_scaling");
    }

    if (!rd.errors.empty()) throw ConfigError(rd.errors);
    cfg.defaulted = rd.defaulted;
    return cfg;
}

namespace {

void emit_numbers(YAML::Emitter& out, const std::vector<double>& v) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << format_double(x);
    out << YAML::EndSeq;
}

void emit_weight(YAML::Emitter& out, const WeightMatrix& w) {
    switch (w.kind()) {
        case WeightMatrix::Kind::Scalar: out << format_double(w.scalar_value()); break;
        case WeightMatrix::Kind::Diagonal: {
            const auto& d = w.diagonal_values();
            emit_numbers(out, std::vector<double>(d.data(), d.data() + d.size()));
            break;
        }
        case WeightMatrix::Kind::Dense: {
            const auto& m = w.dense_values();
            out << YAML::BeginSeq;
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                std::vector<double> row(static_cast<std::size_t>(m.cols()));
                for (Eigen::Index k = 0; k < m.cols(); ++k) row[static_cast<std::size_t>(k)] = m(i, k);
                emit_numbers(out, row);
            }
            out << YAML::EndSeq;
            break;
        }
    }
}

void emit_tf(YAML::Emitter& out, const char* key, const TransferFunctionConfig& tf) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "gain" << YAML::Value << format_double(tf.gain);
    out << YAML::Key << "numerator" << YAML::Value;
    emit_numbers(out, tf.numerator);
    out << YAML::Key << "denominator" << YAML::Value;
    emit_numbers(out, tf.denominator);
    out << YAML::Key << "sample_time_s" << YAML::Value << format_double(tf.sample_time_s);
    out << YAML::Key << "fixed_poles" << YAML::Value;
    emit_numbers(out, tf.fixed_poles);
    out << YAML::Key << "minreal_tolerance" << YAML::Value << format_double(tf.minreal_tolerance);
    out << YAML::EndMap;
}

void emit_schedule(YAML::Emitter& out, const char* key, const DecaySchedule& s) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "initial" << YAML::Value << format_double(s.initial);
    out << YAML::Key << "rate" << YAML::Value << format_double(s.rate);
    out << YAML::Key << "floor" << YAML::Value << format_double(s.floor);
    out << YAML::EndMap;
}

void emit_mode(YAML::Emitter& out, LearnerScaling::Mode mode, const Eigen::VectorXd* vec, double scalar) {
    if (mode == LearnerScaling::Mode::Auto) {
        out << "auto";
    } else if (mode == LearnerScaling::Mode::None) {
        out << "none";
    } else if (vec) {
        emit_numbers(out, std::vector<double>(vec->data(), vec->data() + vec->size()));
    } else {
        out << format_double(scalar);
    }
}

}  // namespace

std::string config_to_yaml(const ExperimentConfig& cfg) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    emit_tf(out, "plant", cfg.plant);
    emit_tf(out, "controller", cfg.controller);
    out << YAML::Key << "horizon_samples" << YAML::Value << cfg.horizon_samples;
    out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap << YAML::Key << "segments" << YAML::Value
        << YAML::BeginSeq;
    for (const auto& s : cfg.reference) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "displacement" << YAML::Value << format_double(s.displacement);
        out << YAML::Key << "max_velocity_per_s" << YAML::Value << format_double(s.max_velocity);
        out << YAML::Key << "max_acceleration_per_s2" << YAML::Value << format_double(s.max_acceleration);
        out << YAML::Key << "max_jerk_per_s3" << YAML::Value << format_double(s.max_jerk);
        out << YAML::Key << "rest_s" << YAML::Value << format_double(s.rest_duration);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    out << YAML::Key << "basis" << YAML::Value << (cfg.basis == BasisKind::Identity ? "identity" : "derivative");
    out << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "W_e" << YAML::Value;
    emit_weight(out, cfg.weights.W_e);
    out << YAML::Key << "W_upsilon" << YAML::Value;
    emit_weight(out, cfg.weights.W_upsilon);
    out << YAML::Key << "W_delta_upsilon" << YAML::Value;
    emit_weight(out, cfg.weights.W_delta_upsilon);
    out << YAML::EndMap;
    out << YAML::Key << "method" << YAML::Value << method_name(cfg.method);
    out << YAML::Key << "num_trials" << YAML::Value << cfg.num_trials;
    out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << cfg.seeds;
    out << YAML::Key << "output_dir" << YAML::Value << YAML::DoubleQuoted << cfg.output_dir;

    const AcilcConfig& ac = cfg.acilc;
    out << YAML::Key << "acilc" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "gamma" << YAML::Value << format_double(ac.gamma);
    emit_schedule(out, "alpha_w", ac.schedules.alpha_w);
    emit_schedule(out, "alpha_theta", ac.schedules.alpha_theta);
    emit_schedule(out, "sigma", ac.schedules.sigma);
    out << YAML::Key << "constant_feature" << YAML::Value << ac.scaling.constant_feature;
    out << YAML::Key << "feature_scaling" << YAML::Value;
    emit_mode(out, ac.scaling.feature_mode, &ac.scaling.feature_scale, 0.0);
    out << YAML::Key << "feature_gain" << YAML::Value << format_double(ac.scaling.feature_gain);
    out << YAML::Key << "action_scaling" << YAML::Value;
    emit_mode(out, ac.scaling.action_mode, &ac.scaling.action_scale, 0.0);
    out << YAML::Key << "cost_scaling" << YAML::Value;
    emit_mode(out, ac.scaling.cost_mode, nullptr, ac.scaling.cost_scale);
    out << YAML::Key << "cost_timing" << YAML::Value
        << (ac.cost_timing == CostTiming::PostAction ? "post_action" : "pre_action");
    out << YAML::Key << "td_error_clip" << YAML::Value << format_double(ac.td_error_clip);
    out << YAML::Key << "initial_policy" << YAML::Value << (ac.initialize_from_noilc ? "noilc" : "zero");
    out << YAML::Key << "evaluation_mode" << YAML::Value << ac.evaluation_mode;
    out << YAML::Key << "store_errors" << YAML::Value << ac.store_errors;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace acilc
