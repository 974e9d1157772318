#include "acilc/harness.hpp"
#include "acilc/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

namespace {

std::string vec_text(const Eigen::VectorXd& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + acilc::format_double(v(i));
    return s + "]";
}

void print_summary(const acilc::RunSummary& s) {
    std::cout << s.method;
    if (s.method == "acilc") std::cout << " seed " << s.seed;
    std::cout << ": final cost " << acilc::format_double(s.final_cost) << ", min cost "
              << acilc::format_double(s.min_cost) << ", converged at trial " << s.convergence_trial
              << ", upsilon " << vec_text(s.final_upsilon);
    if (s.convergence_margin) std::cout << ", margin " << acilc::format_double(*s.convergence_margin);
    std::cout << '\n';
}

std::filesystem::path log_path(const std::string& arg) {
    std::filesystem::path p(arg);
    if (std::filesystem::is_directory(p)) p /= "trials.csv";
    return p;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Norm-optimal and actor-critic iterative learning control experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::uint64_t> seeds;
    int trials = -1;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file or preset name");
    run->add_option("config", config_path, "Config file, or 'paper_sec5'")->required();
    run->add_option("--seed", seeds, "Seed(s) for the learner; replaces the config's list");
    run->add_option("--trials", trials, "Number of trials, including trial 0")->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_dir, "Output directory");

    std::string log_a, log_b;
    auto* compare = app.add_subcommand("compare", "Compare two trial logs (trials.csv or its directory)");
    compare->add_option("logA", log_a)->required();
    compare->add_option("logB", log_b)->required();

    bool full = false;
    auto* gains = app.add_subcommand("gains", "Print the NOILC gains Q, L and the convergence margin");
    gains->add_option("config", config_path, "Config file, or 'paper_sec5'")->required();
    gains->add_option("--out", out_dir, "Write Q.csv and L.csv to this directory");
    gains->add_flag("--full", full, "Print every entry of L");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            acilc::RunOptions opt;
            opt.seeds = seeds;
            if (trials >= 0) opt.num_trials = trials;
            if (!out_dir.empty()) opt.output_dir = out_dir;
            const auto res = acilc::run_experiment(acilc::load_config(config_path), opt);
            for (const auto& s : res.summaries) print_summary(s);
            for (const auto& f : res.failures) std::cout << "diverged: " << f << '\n';
            if (!res.comparisons.empty()) {
                std::vector<double> ratios;
                for (const auto& c : res.comparisons) ratios.push_back(c.final_cost_ratio);
                std::cout << "median final-cost ratio acilc/noilc over " << ratios.size() << " seed(s): "
                          << acilc::format_double(median(ratios)) << '\n';
            }
            std::cout << "output written to " << res.output_dir.string() << '\n';
        } else if (*compare) {
            const auto a = acilc::read_trial_csv(log_path(log_a));
            const auto b = acilc::read_trial_csv(log_path(log_b));
            const auto c = acilc::compare_runs(a, b);
            std::cout << "A ";
            print_summary(c.a);
            std::cout << "B ";
            print_summary(c.b);
            std::cout << "final cost ratio B/A: " << acilc::format_double(c.final_cost_ratio) << '\n'
                      << "upsilon delta B-A: " << vec_text(c.upsilon_delta) << '\n'
                      << "feedforward max |fB - fA|: " << acilc::format_double(c.feedforward_max_abs_diff) << '\n';
        } else if (*gains) {
            const auto cfg = acilc::load_config(config_path);
            const auto sys = acilc::build_system(cfg);
            const auto g = acilc::synthesize_gains(sys.lifted.J, sys.basis.columns, cfg.weights);
            std::cout << "Q (" << g.Q.rows() << "x" << g.Q.cols() << "):\n" << acilc::matrix_csv(g.Q);
            std::cout << "L (" << g.L.rows() << "x" << g.L.cols() << ")";
            if (full) {
                std::cout << ":\n" << acilc::matrix_csv(g.L);
            } else {
                std::cout << " row norms: " << vec_text(g.L.rowwise().norm()) << '\n';
            }
            std::cout << "convergence margin: " << acilc::format_double(g.convergence_margin)
                      << (g.convergence_margin < 1.0 ? " (monotonic)" : " (not certified)") << '\n';
            if (!out_dir.empty()) {
                acilc::export_gains_csv(g, out_dir);
                std::cout << "wrote Q.csv and L.csv to " << out_dir << '\n';
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
