#include "fracspec/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fracspec/error.hpp"

namespace fracspec {

namespace {
constexpr std::size_t kBlock = 4096;
}

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

EigenvalueSequence EigenvalueSequence::from_values(std::vector<double> values, bool exhausted, TailSum tail) {
    EigenvalueSequence s;
    s.size_ = values.size();
    s.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    s.exhausted_ = exhausted;
    s.tail_ = std::move(tail);
    return s;
}

EigenvalueSequence EigenvalueSequence::from_generator(Generator generator, std::uint64_t cap, TailSum tail) {
    require(static_cast<bool>(generator), ErrorCode::InvalidArgument, "empty generator");
    EigenvalueSequence s;
    s.generator_ = std::move(generator);
    s.size_ = cap;
    s.tail_ = std::move(tail);
    return s;
}

double EigenvalueSequence::raw(std::uint64_t n) const {
    return values_ ? (*values_)[n - 1] : generator_(n);
}

double EigenvalueSequence::operator()(std::uint64_t n) const {
    if (n == 0 || n > size_) fail(ErrorCode::CapExceeded, "index " + std::to_string(n) + " outside [1, " +
                                                              std::to_string(size_) + "]");
    double v = raw(n);
    return exponent_ == 1.0 ? v : std::pow(v, exponent_);
}

EigenvalueSequence EigenvalueSequence::power(double alpha) const {
    require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "power exponent must be positive");
    EigenvalueSequence s = *this;
    s.exponent_ = exponent_ * alpha;
    return s;
}

EigenvalueSequence EigenvalueSequence::truncated(std::uint64_t cap) const {
    EigenvalueSequence s = *this;
    s.size_ = std::min(cap, size_);
    if (s.size_ < size_) s.exhausted_ = false;
    return s;
}

std::optional<double> EigenvalueSequence::analytic_tail(std::uint64_t n) const {
    if (exhausted_ && n >= size_) return 0.0;
    if (!tail_) return std::nullopt;
    return tail_(n, exponent_);
}

void EigenvalueSequence::for_each_block(std::uint64_t first, std::uint64_t last,
                                        const std::function<void(std::uint64_t, std::span<const double>)>& fn) const {
    if (first < 1) first = 1;
    if (last > size_) fail(ErrorCode::CapExceeded, "block end beyond cap");
    if (first > last) return;
    if (values_ && exponent_ == 1.0) {
        for (std::uint64_t b = first; b <= last; b += kBlock) {
            std::uint64_t e = std::min<std::uint64_t>(last, b + kBlock - 1);
            fn(b, std::span<const double>(values_->data() + (b - 1), e - b + 1));
        }
        return;
    }
    std::vector<double> buf(kBlock);
    for (std::uint64_t b = first; b <= last; b += kBlock) {
        std::uint64_t e = std::min<std::uint64_t>(last, b + kBlock - 1);
        std::size_t len = e - b + 1;
        for (std::size_t i = 0; i < len; ++i) {
            double v = raw(b + i);
            buf[i] = exponent_ == 1.0 ? v : std::pow(v, exponent_);
        }
        fn(b, std::span<const double>(buf.data(), len));
    }
}

std::vector<double> EigenvalueSequence::materialize() const { return materialize(1, size_); }

std::vector<double> EigenvalueSequence::materialize(std::uint64_t first, std::uint64_t last) const {
    std::vector<double> out;
    if (first > last) return out;
    out.reserve(last - first + 1);
    for_each_block(first, last, [&](std::uint64_t, std::span<const double> b) { out.insert(out.end(), b.begin(), b.end()); });
    return out;
}

void EigenvalueSequence::validate() const {
    require(size_ > 0, ErrorCode::InvalidArgument, "empty sequence");
    double prev = 0.0, first = 0.0;
    for_each_block(1, size_, [&](std::uint64_t start, std::span<const double> b) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::uint64_t n = start + i;
            double v = b[i];
            if (!(v > 0.0) || !std::isfinite(v))
                fail(ErrorCode::NotPositive, "mu_" + std::to_string(n) + " = " + format_double(v));
            if (n == 1) first = v;
            else if (v > prev)
                fail(ErrorCode::NotMonotone, "mu_" + std::to_string(n) + " exceeds mu_" + std::to_string(n - 1));
            prev = v;
        }
    });
    if (!exhausted_ && size_ > 1 && prev == first)
        fail(ErrorCode::NotVanishing, "sequence is constant up to the cap");
}

void EigenvalueSequence::write_csv(std::ostream& out) const {
    out << "n,mu_n\n";
    for_each_block(1, size_, [&](std::uint64_t start, std::span<const double> b) {
        for (std::size_t i = 0; i < b.size(); ++i) out << (start + i) << ',' << format_double(b[i]) << '\n';
    });
}

}  // namespace fracspec
