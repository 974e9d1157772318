#include "acilc/config.hpp"
#include "acilc/io.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>

using namespace acilc;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal config fills and lists defaults") {
    const auto cfg = parse_config(fixture::minimal_yaml());
    CHECK(cfg.horizon_samples == 2000);
    CHECK(cfg.method == Method::Both);
    CHECK(cfg.num_trials == 40);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{0});
    CHECK(cfg.acilc.gamma == 0.5);
    CHECK(cfg.weights.W_e.scalar_value() == 1e6);
    CHECK(cfg.weights.W_upsilon.scalar_value() == 1e-6);
    CHECK(cfg.weights.W_delta_upsilon.scalar_value() == 0.0);
    CHECK(cfg.reference.size() == 1);
    CHECK(cfg.reference[0].max_velocity == 0.6);
    for (const char* key : {"horizon_samples", "basis", "weights.W_e", "weights.W_upsilon", "weights.W_delta_upsilon",
                            "method", "num_trials", "seeds", "output_dir", "acilc.gamma", "acilc.alpha_w",
                            "acilc.alpha_theta", "acilc.sigma", "plant.gain", "plant.fixed_poles",
                            "controller.minreal_tolerance", "reference.segments[0].max_jerk_per_s3"}) {
        CHECK_MESSAGE(contains(cfg.defaulted, key), key);
    }
    CHECK(!contains(cfg.defaulted, "plant.numerator"));
}

TEST_CASE("validation errors") {
    SUBCASE("W_e = 0") {
        const auto p = problems_of(fixture::minimal_yaml() + "weights: {W_e: 0}\n");
        CHECK(any_contains(p, "W_e must be positive definite"));
    }
    SUBCASE("problems are aggregated") {
        const auto p = problems_of(fixture::minimal_yaml() +
                                   "num_trails: 40\nmethod: maybe\nacilc: {gamma: 2, sigmaa: 1}\n");
        CHECK(p.size() >= 4);
        CHECK(contains(p, "num_trails: unknown key"));
        CHECK(contains(p, "acilc.sigmaa: unknown key"));
        CHECK(any_contains(p, "method:"));
        CHECK(any_contains(p, "acilc.gamma"));
    }
    SUBCASE("missing sections") {
        const auto p = problems_of("horizon_samples: 100\n");
        CHECK(contains(p, "plant: required"));
        CHECK(contains(p, "controller: required"));
    }
    SUBCASE("message heading") {
        try {
            parse_config("plant: 3\n");
            FAIL("expected an error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).rfind("invalid configuration:", 0) == 0);
        }
    }
    SUBCASE("wrong types") {
        const auto p = problems_of(fixture::minimal_yaml() + "horizon_samples: many\n");
        CHECK(any_contains(p, "horizon_samples"));
    }
    SUBCASE("weight dimension") {
        const auto p = problems_of(fixture::minimal_yaml() + "weights: {W_upsilon: [1, 1, 1]}\n");
        CHECK(any_contains(p, "W_upsilon: dimension 3"));
    }
    SUBCASE("infeasible reference") {
        const auto p = problems_of(fixture::minimal_yaml() + "horizon_samples: 100\n");
        CHECK(any_contains(p, "reference:"));
    }
    SUBCASE("parse error") {
        const auto p = problems_of("plant: [1, 2\n");
        REQUIRE(p.size() == 1);
        CHECK(p[0].rfind("parse error", 0) == 0);
    }
    SUBCASE("missing file") { CHECK_THROWS(load_config("/nonexistent/acilc.yaml")); }
}

TEST_CASE("shipped preset") {
    const auto& cfg = fixture::preset();
    CHECK(cfg.plant.gain == 1e-8);
    CHECK(cfg.plant.numerator == std::vector<double>{24.24, 130.3, 32.95, -8.486});
    CHECK(cfg.plant.denominator == std::vector<double>{1, -3.761, 5.438, -3.593, 0.9157, 0});
    CHECK(cfg.controller.numerator == std::vector<double>{108.6, 112.9, -100, -104.3});
    CHECK(cfg.controller.denominator == std::vector<double>{1, -0.6499, -0.9465, 0.7035});
    CHECK(cfg.plant.sample_time_s == 0.001);
    CHECK(cfg.weights.W_e.scalar_value() == 1e6);
    CHECK(cfg.weights.W_upsilon.scalar_value() == 1e-6);
    CHECK(cfg.weights.W_delta_upsilon.scalar_value() == 0.0);
    CHECK(cfg.num_trials == 40);
    CHECK(cfg.seeds.size() == 11);
    CHECK(cfg.horizon_samples == 2000);
    CHECK(cfg.basis == BasisKind::Derivative);
    CHECK(cfg.defaulted.empty());
    CHECK_THROWS_AS(preset_text("nope"), std::invalid_argument);

    // The conditioned models used for simulation.
    const auto P = cfg.plant.build();
    const auto& a = P.denominator();
    REQUIRE(a.size() == 6);
    CHECK(a[1] == doctest::Approx(-3.761195439739414).epsilon(1e-12));
    CHECK(a[4] == doctest::Approx(0.9157068403908795).epsilon(1e-12));
    const auto C = cfg.controller.build();
    CHECK(C.order() == 2);
    CHECK(C.denominator()[1] == doctest::Approx(-1.649929820402074).epsilon(1e-9));
}

TEST_CASE("config_to_yaml round trip") {
    auto cfg = parse_config(fixture::minimal_yaml() +
                            "weights: {W_e: 2.5, W_upsilon: [0.1, 0.2], W_delta_upsilon: [[1, 0.5], [0.5, 1]]}\n"
                            "seeds: [3, 4]\nacilc: {sigma: {initial: 0.7, rate: 0.9, floor: 0.01},"
                            " feature_scaling: [1, 2], cost_scaling: 0.5}\n");
    const auto again = parse_config(config_to_yaml(cfg));
    CHECK(config_to_yaml(again) == config_to_yaml(cfg));
    CHECK(again.weights.W_upsilon.diagonal_values() == cfg.weights.W_upsilon.diagonal_values());
    CHECK(again.weights.W_delta_upsilon.dense_values() == cfg.weights.W_delta_upsilon.dense_values());
    CHECK(again.seeds == cfg.seeds);
    CHECK(again.acilc.schedules.sigma.initial == 0.7);
    CHECK(again.acilc.scaling.feature_scale == cfg.acilc.scaling.feature_scale);
    CHECK(again.acilc.scaling.cost_scale == 0.5);
    CHECK(again.defaulted.empty());

    const auto preset_again = parse_config(config_to_yaml(fixture::preset()));
    CHECK(config_to_yaml(preset_again) == config_to_yaml(fixture::preset()));
}

TEST_CASE("load_config from a file") {
    const auto dir = fixture::temp_dir("config");
    write_text_file(dir / "c.yaml", fixture::minimal_yaml());
    CHECK(load_config((dir / "c.yaml").string()).horizon_samples == 2000);
}
