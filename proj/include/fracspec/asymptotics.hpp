#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fracspec/estimate.hpp"
#include "fracspec/sequence.hpp"

namespace fracspec {

enum class SumKind { NonTraceClass, TraceClass };
std::string_view sum_kind_name(SumKind kind);

enum class TailKind { Exhausted, Analytic, PowerLaw, Geometric };
std::string_view tail_kind_name(TailKind kind);

// Model of the sum of all eigenvalues beyond the cap.
struct TailModel {
    TailKind kind = TailKind::Exhausted;
    double remainder = 0.0;
    double error = 0.0;
    double coefficient = 0.0;  // power law c * n^-a
    double exponent = 0.0;
    double ratio = 0.0;        // geometric decay ratio
};

// Throws TailUnfittable when the sequence is neither exhausted, analytic,
// power-law-like nor geometric over its last decade.
TailModel fit_tail(const EigenvalueSequence& seq);

struct PartialSumSeries {
    SumKind kind = SumKind::NonTraceClass;
    std::vector<std::uint64_t> indices;  // sorted ascending
    std::vector<double> values;
    TailModel tail;     // meaningful for TraceClass only
    double error = 0.0; // absolute error shared by every value
};

PartialSumSeries partial_sums(const EigenvalueSequence& seq, SumKind kind, std::vector<std::uint64_t> indices);

// Weighted variant: sum of weight_k * mu_k. Weights beyond the cap are taken
// as the mean weight of the last decade when a tail is needed.
PartialSumSeries partial_sums(const WeightedSequence& seq, SumKind kind, std::vector<std::uint64_t> indices);

struct OrderEstimate {
    Estimate ord;
    std::vector<double> window_slopes;
    std::vector<double> window_starts;  // log n where each window begins
    std::size_t corners = 0;
};

// liminf log mu_n / log(1/n) from regressions over nested tail windows.
OrderEstimate order_of_infinitesimal(const EigenvalueSequence& seq);

struct LogProfile {
    double dt = 0.01;
    std::vector<double> f;  // f[i] = -log mu(e^(i dt))
    double t_max() const { return f.empty() ? 0.0 : dt * static_cast<double>(f.size() - 1); }
};

LogProfile log_profile(const EigenvalueSequence& seq, double dt = 0.01);

struct CBoundsOptions {
    double h_min = 0.0;  // 0 means 2 dt
    double h_ratio = 1.1;
    std::size_t min_samples = 10;
};

struct CBounds {
    Estimate lower;
    Estimate upper;
    bool lower_unresolved = false;  // reported as ~0: increments dominated by jumps
    bool upper_unresolved = false;  // reported as infinity: increments dominated by plateaus
    double h_sup = 0.0;             // largest reliable window for the sup side
    double h_inf = 0.0;
    double h_grid_max = 0.0;
    std::vector<double> h_grid;
    std::vector<double> sup_quotient;
    std::vector<double> inf_quotient;
};

CBounds c_bounds(const LogProfile& profile, const CBoundsOptions& options = {});

enum class IdealClass { L1, L1Weak, L1Weak0, None, Inconclusive };
std::string_view ideal_class_name(IdealClass c);

struct IdealReport {
    IdealClass classification = IdealClass::Inconclusive;
    bool in_l1 = false;
    bool in_l1_weak = false;
    bool in_l1_weak_0 = false;
    Estimate exponent;            // order of seq^alpha
    Estimate log_decay;           // q in dS/dlog n ~ (log n)^-q
    std::vector<double> slopes;   // dS/dlog n over tail sub-windows
    std::optional<bool> convergent;  // known from an analytic tail
};

IdealReport classify_ideal(const EigenvalueSequence& seq, double alpha);

// Kind of partial sum used for scans: TraceClass only for classification L1.
SumKind sum_kind_for(const EigenvalueSequence& seq);

struct EccentricityScan {
    SumKind kind = SumKind::NonTraceClass;
    double tolerance = 0.02;
    std::vector<std::uint64_t> grid;
    std::vector<double> gaps;  // |S_2n / S_n - 1| per grid point
    std::vector<std::uint64_t> accepted;
    double min_gap = kInf;
    std::uint64_t argmin = 0;
};

EccentricityScan eccentricity_scan(const EigenvalueSequence& seq, SumKind kind, double tolerance = 0.02,
                                   double grid_ratio = 1.1, std::span<const std::uint64_t> extra_points = {});

struct TraceEstimate {
    Estimate value;
    bool measurable = false;  // band narrower than 1% of the value
    std::vector<std::uint64_t> indices;
    std::vector<double> ratios;
};

TraceEstimate singular_trace_estimate(const WeightedSequence& numerator, const EigenvalueSequence& denominator,
                                      std::span<const std::uint64_t> subsequence,
                                      SumKind kind = SumKind::NonTraceClass);

TraceEstimate dixmier_trace_estimate(const EigenvalueSequence& seq);

// Slopes of S_n against log n over eight log-spaced sub-windows of [N^0.5, N].
struct LogSlopes {
    std::vector<double> edges;
    std::vector<double> slopes;
};
LogSlopes log_slopes(const EigenvalueSequence& seq);

struct TraceabilityReport {
    OrderEstimate order;
    Estimate dimension;
    CBounds bounds;
    IdealReport ideal;
    EccentricityScan scan;
    std::optional<TraceEstimate> dixmier;
    bool not_traceable_at_1 = false;
};

TraceabilityReport analyze(const EigenvalueSequence& seq, double tolerance = 0.02);

}  // namespace fracspec
