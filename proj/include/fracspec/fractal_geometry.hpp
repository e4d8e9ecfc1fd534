#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fracspec/estimate.hpp"
#include "fracspec/ifs.hpp"

namespace fracspec {

struct SimilarityDimension {
    double value = 0.0;
    bool degenerate = false;  // single map
};

SimilarityDimension similarity_dimension(const LimitIfs& ifs);
// Root of sum ratio_j^s = 1.
SimilarityDimension similarity_dimension(std::span<const double> ratios);

struct ContractionResult {
    PointCloud cloud;
    std::vector<double> steps;   // rho(S_{n+1} K, S_n K) for n = 0 .. m-1
    std::vector<double> bounds;  // M * prod_{j <= n} lambda_j
    double m_constant = 0.0;
    bool dominated = true;
};

// Iterates S_n(K) = W_1 o ... o W_n (K) for the explicit list of levels.
ContractionResult contraction_limit(const std::vector<std::vector<Similarity>>& levels, const PointCloud& seed,
                                    std::size_t depth);
ContractionResult contraction_limit(const LimitIfs& ifs, const PointCloud& seed, std::size_t depth);

struct AttractorCloud {
    PointCloud points;  // lexicographic word order
    std::size_t depth = 0;
};

AttractorCloud attractor_cloud(const LimitIfs& ifs, std::size_t depth, std::span<const double> seed,
                               std::uint64_t word_budget = 10'000'000);
void write_cloud_csv(std::ostream& out, const LimitIfs& ifs, const AttractorCloud& cloud);

struct CylinderMeasure {
    double s = 0.0;
    std::size_t depth = 0;
    std::vector<double> weights;  // lexicographic word order
};

CylinderMeasure cylinder_measure(const LimitIfs& ifs, double s, std::size_t depth,
                                 std::uint64_t word_budget = 10'000'000);
double cylinder_weight(const LimitIfs& ifs, double s, const Word& w);

struct BoxDimension {
    Estimate dimension;  // value from the full-grid fit; lo/hi from window slopes
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> eps;
    std::vector<double> counts;
};

// Default grid: ratio 0.9 from diameter/4 down to 4 * resolution.
BoxDimension box_dimension_estimate(const PointCloud& cloud, double resolution, std::vector<double> eps_grid = {});

struct Gap {
    double left = 0.0;
    double right = 0.0;
    double length = 0.0;
};

struct GapList {
    double a = 0.0;
    double b = 1.0;
    std::vector<Gap> gaps;  // nonincreasing length
    std::vector<std::pair<double, double>> residuals;
    double residual_total = 0.0;
    double complete_above = 0.0;  // every gap longer than this is listed
    double max_gap_fraction = 0.0;  // largest gap of one level relative to [a, b]
    bool exact = false;             // rational endpoint arithmetic was used
    bool exact_conserved = false;   // sum of gaps + residuals == b - a exactly
    std::string exact_total;        // that sum as a fraction
};

// All gaps created up to the given depth.
GapList gaps_from_interval_ifs(const LimitIfs& ifs, std::size_t depth);
// Expands the longest remaining interval first until `target` gaps of length at
// least `complete_above` are known.
GapList gaps_by_count(const LimitIfs& ifs, std::size_t target);

struct MinkowskiEstimate {
    Estimate content;  // value: mean over the small-epsilon half; band over that half
    bool measurable = false;
    std::vector<double> eps;
    std::vector<double> normalized;  // vol S_eps / eps^(1-d)
};

MinkowskiEstimate minkowski_content_estimate(const GapList& gaps, double d, std::vector<double> eps_grid = {});

struct TranslationDimension {
    Estimate limsup;  // max of R_n over the tail half
    Estimate liminf;
    std::vector<double> partial_ratios;
    std::optional<double> closed_form;
};

TranslationDimension translation_dimension_formula(const LimitIfs& ifs, std::size_t depth);

}  // namespace fracspec
