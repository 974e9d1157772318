#pragma once

#include "acilc/config.hpp"
#include "acilc/harness.hpp"

#include <filesystem>
#include <string>

namespace fixture {

inline const acilc::ExperimentConfig& preset() {
    static const acilc::ExperimentConfig cfg = acilc::load_config("paper_sec5");
    return cfg;
}

inline const acilc::ExperimentSystem& preset_system() {
    static const acilc::ExperimentSystem sys = acilc::build_system(preset());
    return sys;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("acilc_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::string minimal_yaml() {
    return "plant: {numerator: [1, 0], denominator: [1, -1.5, 0.56], sample_time_s: 0.001}\n"
           "controller: {numerator: [0.2], denominator: [1], sample_time_s: 0.001}\n"
           "reference: {segments: [{displacement: 0.1}]}\n";
}

}  // namespace fixture
