#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracspec/asymptotics.hpp"
#include "fracspec/estimate.hpp"
#include "fracspec/fractal_geometry.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/sequence.hpp"

namespace fracspec {

// Closed form of sum mu^s for models built from a stationary or periodic
// system. Level k of the block scales by ratios[k] and adds entries whose
// lengths (relative to the parent) are weights[k].
struct ClosedZeta {
    std::vector<std::vector<double>> ratios;
    std::vector<std::vector<double>> weights;

    // +inf when s does not exceed the dimension.
    double operator()(double s) const;
    // Root of prod_k sum_j ratios[k][j]^s = 1.
    double dimension() const;
    // lim (s - d) zeta(s) as s decreases to d.
    double residue(double d) const;
};

// Eigen-entries come in equal pairs; block b holds entries 2b+1 and 2b+2 and
// carries the tag points x_b, y_b.
struct TripleModel {
    EigenvalueSequence eigen;
    std::size_t dim = 1;
    std::vector<double> tag_x;  // block-major, dim values per block
    std::vector<double> tag_y;
    std::optional<ClosedZeta> zeta;
    std::optional<double> exact_dimension;
    std::vector<double> lattice_ratios;  // all ratios of the source system
    std::optional<LimitIfs> source;

    std::size_t blocks() const { return tag_x.size() / dim; }
    const double* x_of_entry(std::uint64_t k) const { return tag_x.data() + ((k - 1) / 2) * dim; }
    const double* y_of_entry(std::uint64_t k) const { return tag_y.data() + ((k - 1) / 2) * dim; }
};

struct GapTripleModel : TripleModel {
    GapList gaps;
};

struct PairTripleModel : TripleModel {
    std::vector<double> seed_x;
    std::vector<double> seed_y;
    double seed_distance = 0.0;
    std::size_t depth_reached = 0;
    bool depth_limited = false;
};

// Uses the gaps longer than gaps.complete_above. `source` adds the closed-form
// zeta when it is stationary or periodic.
GapTripleModel gap_triple(const GapList& gaps, const LimitIfs* source = nullptr);

// Words enumerated longest-first with a priority queue; ties keep
// lexicographic order. Default seeds are the fixed points of the first two
// maps of level 1.
PairTripleModel pair_triple(const LimitIfs& ifs,
                            std::optional<std::pair<std::vector<double>, std::vector<double>>> seeds,
                            std::size_t depth_cap, std::uint64_t entry_cap = 2'000'000);

void write_model_csv(std::ostream& out, const TripleModel& model);

struct SpectralDimension {
    Estimate dimension;
    OrderEstimate order;
    std::optional<Estimate> linear;  // log n / |log l_n| over the tail, gap triples only
};

SpectralDimension spectral_dimension(const TripleModel& model);
SpectralDimension spectral_dimension(const GapTripleModel& model);

struct ZetaPartial {
    double s = 0.0;
    double partial = 0.0;  // sum over the enumerated entries
    Estimate value;        // partial + fitted remainder
    std::string tail_kind;
    std::optional<double> closed_form;
};

// Throws SBelowDimension when s does not exceed the model's dimension.
ZetaPartial zeta_partial(const TripleModel& model, double s);

struct ZetaResidue {
    double d = 0.0;
    double analytic = 0.0;
    Estimate numeric;               // extrapolation of (s - d) zeta(s)
    double log_normalized = 0.0;    // analytic / d: limit of S_n / log n for mu^d
    std::vector<double> s_grid;
    std::vector<double> scaled;     // (s - d) zeta(s)
};

ZetaResidue zeta_residue(const TripleModel& model);

// Scalar function evaluated at tag points.
class Functional {
public:
    enum class Kind { Constant, Affine, SmoothedCylinder, Tabulated };

    static Functional constant(double c);
    static Functional affine(double offset, std::vector<double> gradient);
    // 1 on the image of the system's bounding box under the cylinder map,
    // decaying linearly to 0 within `width` of it. width <= 0 picks a tenth of
    // the cylinder diameter.
    static Functional smoothed_cylinder(const LimitIfs& ifs, const Word& word, double width = 0.0);
    static Functional tabulated(std::size_t dim, std::vector<double> points, std::vector<double> values,
                                double tolerance);

    Kind kind() const { return kind_; }
    double operator()(const double* x) const;
    double lipschitz() const { return lipschitz_; }
    std::string describe() const;
    bool is_constant() const { return kind_ == Kind::Constant; }

private:
    Kind kind_ = Kind::Constant;
    double constant_ = 1.0;
    std::vector<double> gradient_;
    double lipschitz_ = 0.0;
    // cylinder: inverse map x -> inv_scale * O^T (x - shift), box in base coordinates
    double cyl_ratio_ = 1.0;
    std::vector<double> cyl_orthogonal_;
    std::vector<double> cyl_shift_;
    Box cyl_box_;
    double width_ = 0.0;
    std::string label_;
    // tabulated: sorted by first coordinate
    std::size_t dim_ = 1;
    std::vector<double> points_;
    std::vector<double> values_;
    double tolerance_ = 0.0;
};

// Bounding box containing the attractor.
Box attractor_box(const LimitIfs& ifs);

struct FunctionalValue {
    TraceEstimate trace;
    std::vector<std::uint64_t> subsequence;
    std::string subsequence_source;  // "log_windows", "eccentricity_scan", "given", "normalization"
};

// Ratio of sum avg(f(x_k), f(y_k)) mu_k^d to sum mu_k^d along the subsequence.
// An empty subsequence picks one from the classification of mu^d.
FunctionalValue hausdorff_functional(const TripleModel& model, const Functional& f, double d,
                                     std::vector<std::uint64_t> subsequence = {});

struct LinkCheck {
    double d = 0.0;
    TraceEstimate dixmier;
    MinkowskiEstimate minkowski;
    Estimate scaled_content;  // 2^d (1 - d) M_d
    bool lattice = false;
    bool equality_asserted = false;
    bool overlap = false;
};

// Dixmier trace of |D|^-d against 2^d (1 - d) times the Minkowski content.
LinkCheck minkowski_link_check(const GapTripleModel& model, double d);

}  // namespace fracspec
