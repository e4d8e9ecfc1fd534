#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracspec {

// x -> ratio * O x + translation with O orthogonal (identity when empty).
struct Similarity {
    double ratio = 0.5;
    std::vector<double> orthogonal;  // row-major N x N
    std::vector<double> translation;

    std::size_t dim() const { return translation.size(); }
    void apply(const double* x, double* out) const;
    std::vector<double> apply(std::span<const double> x) const;
    // Checks ratio > 0 (and < 1 when contracting is required) and that O is
    // orthogonal to 1e-12.
    void validate(bool require_contraction = true) const;

    static Similarity scaling(double ratio, std::vector<double> translation);
};

enum class Generation { Stationary, Periodic, Explicit };
std::string generation_name(Generation g);

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

// Level-indexed family of similarity lists. Levels are 1-based.
class LimitIfs {
public:
    LimitIfs() = default;
    LimitIfs(Generation generation, std::vector<std::vector<Similarity>> block);

    static LimitIfs stationary(std::vector<Similarity> maps);
    static LimitIfs periodic(std::vector<std::vector<Similarity>> block);
    static LimitIfs explicit_levels(std::vector<std::vector<Similarity>> levels);

    Generation generation() const { return generation_; }
    const std::vector<std::vector<Similarity>>& block() const { return block_; }
    std::size_t dim() const { return block_.front().front().dim(); }
    // Explicit specs have finitely many levels; others are unbounded.
    std::optional<std::size_t> level_count() const;

    const std::vector<Similarity>& level(std::size_t k) const;
    std::size_t maps_at(std::size_t k) const { return level(k).size(); }
    double max_ratio(std::size_t k) const;
    bool translation_flag() const;

    std::optional<Box> osc_box;
    // Bounding interval [a, b] for subsets of the line; computed when absent.
    std::optional<std::pair<double, double>> interval;

private:
    Generation generation_ = Generation::Stationary;
    std::vector<std::vector<Similarity>> block_;
};

// Finite-depth evidence for the open set condition on the asserted box V.
struct OscEvidence {
    bool asserted = false;
    bool images_inside = true;
    bool images_disjoint = true;
    std::size_t levels_checked = 0;
};
OscEvidence osc_evidence(const LimitIfs& ifs, std::size_t depth);

struct Word {
    std::vector<std::uint32_t> digits;  // 0-based digit per level

    std::size_t length() const { return digits.size(); }
    std::string to_string() const;  // 1-based digits joined by '.'
};

double word_ratio(const LimitIfs& ifs, const Word& w);
// w_sigma(x) = w_{1 s1}( w_{2 s2}( ... w_{n sn}(x)))
std::vector<double> apply_word(const LimitIfs& ifs, const Word& w, std::span<const double> x);
// Word at lexicographic position `index` among words of the given depth.
Word word_at(const LimitIfs& ifs, std::size_t depth, std::uint64_t index);
// Number of words of the given depth, or nullopt when above `limit`.
std::optional<std::uint64_t> word_count(const LimitIfs& ifs, std::size_t depth, std::uint64_t limit);

// Points stored row-major.
struct PointCloud {
    std::size_t dim = 1;
    std::vector<double> coords;

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
    const double* point(std::size_t i) const { return coords.data() + i * dim; }
    void push(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
    double diameter() const;
};

double hausdorff_distance(const PointCloud& a, const PointCloud& b);

// True when every log ratio is an integer multiple of a common real within 1e-9.
bool is_lattice(std::span<const double> ratios);

}  // namespace fracspec
