#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/exemplars.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/sequence.hpp"
#include "fracspec/spectral_triples.hpp"

namespace fracspec {

using Json = nlohmann::ordered_json;

enum class ExperimentKind { SequenceAnalysis, Exemplar, IfsClassical, GapTriple, PairTriple, LinkCheck };
std::string experiment_kind_name(ExperimentKind kind);

struct Budget {
    std::uint64_t entries = 2'000'000;
    std::uint64_t words = 10'000'000;
};

struct ValidationIssue {
    std::string path;
    std::string message;
};

// Every problem found in a configuration, each tagged with its JSON path.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

struct OutputOptions {
    bool csv = true;
    std::uint64_t max_rows = 100'000;
};

// Validated configuration. `raw` is kept verbatim for the report echo.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SequenceAnalysis;
    std::string name;
    std::uint64_t seed = 0;
    Json raw;
    Json params;
    OutputOptions output;
};

// Throws ValidationError listing every issue found.
ExperimentConfig parse_config(const Json& j, const Budget& budget);
ExperimentConfig load_config(const std::filesystem::path& path, const Budget& budget);

// Builders for validated parameter objects.
LimitIfs build_ifs(const Json& j);
EigenvalueSequence build_sequence(const Json& j);
TwoSlopeSpec build_two_slope(const Json& j);
StepSpec build_step(const Json& j);
Functional build_functional(const Json& j, const LimitIfs* ifs);

Json config_schema();

}  // namespace fracspec
