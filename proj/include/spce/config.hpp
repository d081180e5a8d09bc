#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spce/inequalities.hpp"
#include "spce/model.hpp"
#include "spce/simulator.hpp"

namespace spce {

// Whole-run description: the generative model, the context cycle, the
// (W, Delta) grid and the analysis settings. Parsed strictly: unknown keys
// are rejected and everything is validated before any computation starts.
struct RunConfig {
    ModelConfig model;
    CyclicSystemSpec system;
    // Per context (in cycle order): the (A-side, B-side) setting labels.
    std::vector<std::pair<std::string, std::string>> context_settings;
    std::vector<std::int64_t> windows_ns;
    std::vector<std::int64_t> shifts_ns;
    double alpha = 0.05;
    SVariant variant = SVariant::s_cbd;
    std::string out_dir;  // optional default output directory
};

RunConfig parse_run_config(const std::string& text, const std::string& source_name);

RunConfig load_run_config(const std::string& path);

}  // namespace spce
