#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracspec/config.hpp"
#include "fracspec/estimate.hpp"

namespace fracspec {

struct RunResult {
    Json report;
    std::vector<std::filesystem::path> files;  // report first, then series
};

// Runs one experiment and writes report.json plus CSV series into out_dir.
RunResult run_experiment(const ExperimentConfig& config, const Budget& budget, const std::filesystem::path& out_dir);

// Field-by-field differences between two reports. Throws KindMismatch unless
// both reports come from the same kind (the two triple kinds count as one).
Json compare_reports(const Json& a, const Json& b);

// Deterministic JSON text: numbers as %.17g, non-finite numbers as strings.
std::string dump_json(const Json& j, int indent = 2);

// {"value", "lo", "hi"}
Json estimate_json(const Estimate& e);

}  // namespace fracspec
