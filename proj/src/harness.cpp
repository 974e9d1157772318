#include "acilc/harness.hpp"

#include "acilc/io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <future>
#include <sstream>
#include <thread>

#ifndef ACILC_VERSION
#define ACILC_VERSION "0.0.0"
#endif

namespace acilc {

std::string code_version() { return ACILC_VERSION; }

ExperimentSystem build_system(const ExperimentConfig& cfg) {
    TransferFunction P = cfg.plant.build();
    TransferFunction C = cfg.controller.build();
    LiftedSystem lifted = closed_loop_maps(P, C, cfg.horizon_samples);
    ReferenceProfile ref = third_order_reference(cfg.reference, P.sample_time(), cfg.horizon_samples);
    BasisMatrix basis = cfg.basis == BasisKind::Identity ? identity_basis(cfg.horizon_samples) : build_basis(ref);
    return ExperimentSystem{std::move(P), std::move(C), std::move(lifted), std::move(ref), std::move(basis)};
}

TrialLog run_noilc(const ExperimentSystem& sys, const Weighting& W, const NoilcGains& gains, int num_trials) {
    TrialLog log;
    log.method = "noilc";
    log.convergence_margin = gains.convergence_margin;
    const Eigen::MatrixXd& psi = sys.basis.columns;
    const int m = sys.basis.size();
    Eigen::VectorXd previous = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd upsilon = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < num_trials; ++j) {
        const Eigen::VectorXd f = psi * upsilon;
        const Eigen::VectorXd e = simulate_trial(sys.lifted, sys.reference.samples, f);
        TrialRecord rec;
        rec.j = j;
        rec.upsilon = upsilon;
        rec.e_norm = e.norm();
        rec.cost = trial_cost(e, previous, upsilon, W);
        rec.x = psi.transpose() * e;
        log.records.push_back(rec);
        log.final_error = e;
        log.final_feedforward = f;
        previous = upsilon;
        upsilon = noilc_update(gains, upsilon, e);
    }
    log.final_upsilon = log.records.empty() ? Eigen::VectorXd::Zero(m) : log.records.back().upsilon;
    return log;
}

MdpConfig make_mdp(const ExperimentConfig& cfg, const ExperimentSystem& sys) {
    MdpConfig mdp;
    mdp.gamma = cfg.acilc.gamma;
    mdp.weights = cfg.weights;
    mdp.basis = sys.basis;
    return mdp;
}

AcilcOptions make_acilc_options(const ExperimentConfig& cfg, const Eigen::VectorXd& noilc_upsilon) {
    AcilcOptions opt;
    opt.scaling = cfg.acilc.scaling;
    opt.cost_timing = cfg.acilc.cost_timing;
    opt.td_error_clip = cfg.acilc.td_error_clip;
    opt.evaluation_mode = cfg.acilc.evaluation_mode;
    opt.store_errors = cfg.acilc.store_errors;
    if (cfg.acilc.initialize_from_noilc) {
        opt.initial_policy = InitialPolicy::Given;
        opt.initial_policy_upsilon = noilc_upsilon;
    }
    return opt;
}

TrialLog run_acilc_seed(const ExperimentConfig& cfg, const ExperimentSystem& sys, std::uint64_t seed,
                        const Eigen::VectorXd& noilc_upsilon) {
    SeededSampler sampler(seed);
    const AcilcResult res = run_acilc(sys.lifted, sys.reference, make_mdp(cfg, sys), cfg.acilc.schedules,
                                      make_acilc_options(cfg, noilc_upsilon), sampler, cfg.num_trials);
    TrialLog log;
    log.method = "acilc";
    log.seed = seed;
    log.records = res.records;
    const int m = sys.basis.size();
    log.final_upsilon = res.records.empty() ? Eigen::VectorXd::Zero(m) : res.greedy_upsilon;
    if (!res.records.empty()) {
        log.final_error = res.final_error;
        log.final_feedforward = sys.basis.columns * res.records.back().upsilon;
    }
    return log;
}

RunSummary summarize(const TrialLog& log) {
    RunSummary s;
    s.method = log.method;
    s.seed = log.seed;
    s.final_upsilon = log.final_upsilon;
    s.convergence_margin = log.convergence_margin;
    if (log.records.empty()) return s;
    s.final_cost = log.records.back().cost;
    s.min_cost = s.final_cost;
    for (const auto& r : log.records) s.min_cost = std::min(s.min_cost, r.cost);
    s.convergence_trial = log.records.back().j;
    for (const auto& r : log.records) {
        if (std::abs(r.cost - s.final_cost) <= 0.05 * std::abs(s.final_cost)) {
            s.convergence_trial = r.j;
            break;
        }
    }
    return s;
}

Comparison compare_runs(const TrialLog& a, const TrialLog& b) {
    if (a.final_feedforward.size() != b.final_feedforward.size()) {
        throw std::invalid_argument("compare_runs: logs have different horizons");
    }
    if (a.final_upsilon.size() != b.final_upsilon.size()) {
        throw std::invalid_argument("compare_runs: logs have different basis sizes");
    }
    Comparison c;
    c.a = summarize(a);
    c.b = summarize(b);
    c.final_cost_ratio = c.a.final_cost != 0.0 ? c.b.final_cost / c.a.final_cost
                                               : (c.b.final_cost == 0.0 ? 1.0 : INFINITY);
    c.upsilon_delta = c.b.final_upsilon - c.a.final_upsilon;
    c.feedforward_max_abs_diff =
        a.final_feedforward.size() ? (b.final_feedforward - a.final_feedforward).cwiseAbs().maxCoeff() : 0.0;
    return c;
}

std::string trial_csv(const TrialLog& log) {
    const Eigen::Index m = log.records.empty() ? log.final_upsilon.size() : log.records.front().upsilon.size();
    std::string out = "j,cost,e_norm2";
    for (Eigen::Index i = 0; i < m; ++i) out += ",upsilon_" + std::to_string(i);
    out += ",delta,sigma2,alpha_w,alpha_theta\n";
    for (const auto& r : log.records) {
        out += std::to_string(r.j) + ',' + format_double(r.cost) + ',' + format_double(r.e_norm);
        for (Eigen::Index i = 0; i < m; ++i) out += ',' + format_double(r.upsilon(i));
        out += ',' + format_double(r.delta) + ',' + format_double(r.sigma2) + ',' + format_double(r.alpha_w) + ',' +
               format_double(r.alpha_theta) + '\n';
    }
    return out;
}

namespace {

std::string column_csv(const char* header, const Eigen::VectorXd& v) {
    std::string out = std::string(header) + '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) out += format_double(v(i)) + '\n';
    return out;
}

Eigen::VectorXd read_column(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    Eigen::VectorXd v(static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) v(static_cast<Eigen::Index>(i)) = t.rows[i].at(0);
    return v;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void export_csv(const TrialLog& log, const std::filesystem::path& path) {
    write_text_file(path, trial_csv(log));
    const auto dir = path.parent_path();
    write_text_file(dir / "e_final.csv", column_csv("e", log.final_error));
    write_text_file(dir / "f_final.csv", column_csv("f", log.final_feedforward));
    std::string u;
    for (Eigen::Index i = 0; i < log.final_upsilon.size(); ++i) u += (i ? ",upsilon_" : "upsilon_") + std::to_string(i);
    u += '\n';
    for (Eigen::Index i = 0; i < log.final_upsilon.size(); ++i) u += (i ? "," : "") + format_double(log.final_upsilon(i));
    write_text_file(dir / "upsilon_final.csv", u + '\n');
}

TrialLog read_trial_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const auto& h = t.header;
    if (h.size() < 7 || h[0] != "j" || h[1] != "cost" || h[2] != "e_norm2" || h[h.size() - 4] != "delta" ||
        h[h.size() - 3] != "sigma2" || h[h.size() - 2] != "alpha_w" || h[h.size() - 1] != "alpha_theta") {
        throw std::runtime_error(path.string() + ": not a trial log");
    }
    const auto m = static_cast<Eigen::Index>(h.size() - 7);
    TrialLog log;
    bool learner_columns = false;
    for (const auto& row : t.rows) {
        TrialRecord r;
        r.j = static_cast<int>(row[0]);
        r.cost = row[1];
        r.e_norm = row[2];
        r.upsilon.resize(m);
        for (Eigen::Index i = 0; i < m; ++i) r.upsilon(i) = row[static_cast<std::size_t>(3 + i)];
        const std::size_t k = static_cast<std::size_t>(3 + m);
        r.delta = row[k];
        r.sigma2 = row[k + 1];
        r.alpha_w = row[k + 2];
        r.alpha_theta = row[k + 3];
        learner_columns = learner_columns || r.delta != 0.0 || r.sigma2 != 0.0 || r.alpha_w != 0.0 || r.alpha_theta != 0.0;
        log.records.push_back(std::move(r));
    }
    log.method = learner_columns ? "acilc" : "noilc";
    const auto dir = path.parent_path();
    const std::string dirname = dir.filename().string();
    if (dirname.rfind("seed_", 0) == 0) {
        try {
            log.seed = std::stoull(dirname.substr(5));
        } catch (const std::exception&) {
        }
    }
    if (std::filesystem::exists(dir / "e_final.csv")) log.final_error = read_column(dir / "e_final.csv");
    if (std::filesystem::exists(dir / "f_final.csv")) log.final_feedforward = read_column(dir / "f_final.csv");
    if (std::filesystem::exists(dir / "upsilon_final.csv")) {
        const CsvTable u = read_csv(dir / "upsilon_final.csv");
        if (!u.rows.empty()) log.final_upsilon = Eigen::Map<const Eigen::VectorXd>(u.rows[0].data(), static_cast<Eigen::Index>(u.rows[0].size()));
    } else if (!log.records.empty()) {
        log.final_upsilon = log.records.back().upsilon;
    }
    return log;
}

std::string reference_csv(const ReferenceProfile& r) { return column_csv("r", r.samples); }

namespace {

std::string summary_csv(const std::vector<RunSummary>& summaries, Eigen::Index m) {
    std::string out = "method,seed,final_cost,min_cost,convergence_trial";
    for (Eigen::Index i = 0; i < m; ++i) out += ",upsilon_" + std::to_string(i);
    out += ",convergence_margin\n";
    for (const auto& s : summaries) {
        out += s.method + ',' + std::to_string(s.seed) + ',' + format_double(s.final_cost) + ',' +
               format_double(s.min_cost) + ',' + std::to_string(s.convergence_trial);
        for (Eigen::Index i = 0; i < m; ++i) out += ',' + (i < s.final_upsilon.size() ? format_double(s.final_upsilon(i)) : "nan");
        out += ',' + (s.convergence_margin ? format_double(*s.convergence_margin) : std::string("nan")) + '\n';
    }
    return out;
}

std::string comparison_csv(const std::vector<Comparison>& comps, Eigen::Index m) {
    std::string out = "seed,final_cost_ratio";
    for (Eigen::Index i = 0; i < m; ++i) out += ",upsilon_delta_" + std::to_string(i);
    out += ",f_max_abs_diff\n";
    for (const auto& c : comps) {
        out += std::to_string(c.b.seed) + ',' + format_double(c.final_cost_ratio);
        for (Eigen::Index i = 0; i < m; ++i) out += ',' + format_double(c.upsilon_delta(i));
        out += ',' + format_double(c.feedforward_max_abs_diff) + '\n';
    }
    return out;
}

std::string metadata_yaml(const ExperimentResult& res, const ExperimentSystem& sys) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "defaulted" << YAML::Value << YAML::BeginSeq;
    for (const auto& d : res.config.defaulted) out << d;
    out << YAML::EndSeq;
    out << YAML::Key << "derived" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "code_version" << YAML::Value << code_version();
    out << YAML::Key << "created_utc" << YAML::Value << utc_timestamp();
    out << YAML::Key << "rng" << YAML::Value << SeededSampler::algorithm_id;
    if (res.gains) {
        out << YAML::Key << "convergence_margin" << YAML::Value << format_double(res.gains->convergence_margin);
    }
    out << YAML::Key << "closed_loop_spectral_radius" << YAML::Value << format_double(sys.lifted.spectral_radius);
    auto seq = [&](const char* key, const std::vector<double>& v) {
        out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double x : v) out << format_double(x);
        out << YAML::EndSeq;
    };
    seq("plant_numerator_used", sys.plant.numerator());
    seq("plant_denominator_used", sys.plant.denominator());
    seq("controller_numerator_used", sys.controller.numerator());
    seq("controller_denominator_used", sys.controller.denominator());
    out << YAML::Key << "reference" << YAML::Value << sys.basis.source_reference;
    out << YAML::Key << "basis_labels" << YAML::Value << YAML::Flow << sys.basis.labels;
    out << YAML::Key << "failures" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : res.failures) out << f;
    out << YAML::EndSeq;
    out << YAML::EndMap << YAML::EndMap;
    return config_to_yaml(res.config) + out.c_str() + "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& input, const RunOptions& options) {
    ExperimentResult res;
    res.config = input;
    if (!options.seeds.empty()) res.config.seeds = options.seeds;
    if (options.num_trials) {
        if (*options.num_trials < 0) throw std::invalid_argument("number of trials must be nonnegative");
        res.config.num_trials = *options.num_trials;
    }
    if (options.output_dir) res.config.output_dir = *options.output_dir;
    const ExperimentConfig& cfg = res.config;

    const ExperimentSystem sys = build_system(cfg);
    const bool want_noilc = cfg.method != Method::Acilc;
    const bool want_acilc = cfg.method != Method::Noilc;
    const int m = sys.basis.size();

    Eigen::VectorXd noilc_upsilon = Eigen::VectorXd::Zero(m);
    std::optional<TrialLog> noilc_log;
    if (want_noilc || cfg.acilc.initialize_from_noilc) {
        res.gains = synthesize_gains(sys.lifted.J, sys.basis.columns, cfg.weights);
    }
    if (want_noilc) {
        noilc_log = run_noilc(sys, cfg.weights, *res.gains, cfg.num_trials);
        res.logs.push_back(*noilc_log);
    }
    if (cfg.acilc.initialize_from_noilc) {
        // Fixed point of the NOILC iteration: (I - Q + L G) v = L S r.
        const Eigen::MatrixXd G = sys.lifted.J * sys.basis.columns;
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - res.gains->Q + res.gains->L * G;
        noilc_upsilon = A.partialPivLu().solve(res.gains->L * (sys.lifted.S * sys.reference.samples));
    }

    if (want_acilc) {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t batch = options.max_parallel ? options.max_parallel : hw;
        std::vector<std::optional<TrialLog>> logs(cfg.seeds.size());
        std::vector<std::string> errors(cfg.seeds.size());
        for (std::size_t start = 0; start < cfg.seeds.size(); start += batch) {
            std::vector<std::future<void>> jobs;
            for (std::size_t i = start; i < std::min(cfg.seeds.size(), start + batch); ++i) {
                jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred, [&, i] {
                    try {
                        logs[i] = run_acilc_seed(cfg, sys, cfg.seeds[i], noilc_upsilon);
                    } catch (const AcilcDivergence& ex) {
                        errors[i] = "seed " + std::to_string(cfg.seeds[i]) + ": " + ex.what();
                    }
                }));
            }
            for (auto& j : jobs) j.get();
        }
        for (std::size_t i = 0; i < logs.size(); ++i) {
            if (logs[i]) {
                res.logs.push_back(*logs[i]);
                if (noilc_log) res.comparisons.push_back(compare_runs(*noilc_log, *logs[i]));
            } else {
                res.failures.push_back(errors[i]);
            }
        }
    }
    for (const auto& log : res.logs) res.summaries.push_back(summarize(log));

    res.output_dir = cfg.output_dir;
    if (options.write_files) {
        const std::filesystem::path out(cfg.output_dir);
        write_text_file(out / "reference.csv", reference_csv(sys.reference));
        for (const auto& log : res.logs) {
            const auto dir = log.method == "noilc" ? out / "noilc" : out / "acilc" / ("seed_" + std::to_string(log.seed));
            export_csv(log, dir / "trials.csv");
        }
        if (res.gains) export_gains_csv(*res.gains, (out / "noilc").string());
        write_text_file(out / "summary.csv", summary_csv(res.summaries, m));
        if (!res.comparisons.empty()) write_text_file(out / "comparison.csv", comparison_csv(res.comparisons, m));
        write_text_file(out / "metadata.yaml", metadata_yaml(res, sys));
    }
    return res;
}

}  // namespace acilc
