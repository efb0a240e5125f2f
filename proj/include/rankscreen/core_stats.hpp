// Rank-concordance kernels: exact pair classification in O(n log n) via
// sort + merge inversion counting, Kendall tau (tau-a form, ties contribute
// zero), the quarter-scaled strict-inequality omega statistic, and Pearson
// correlation. All functions are pure; counts are exact 64-bit integers.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace rankscreen {

// Signals a column with zero variance (or otherwise unusable for a
// correlation-type statistic). `column` is -1 when no column index applies.
class DegenerateColumnError : public std::runtime_error {
  public:
    explicit DegenerateColumnError(const std::string& what, int column = -1)
        : std::runtime_error(what), column_(column) {}
    int column() const { return column_; }

  private:
    int column_;
};

// A validated pair of equal-length samples. Construction throws
// std::invalid_argument on length mismatch, n < 2 or non-finite values.
class PairedSample {
  public:
    PairedSample(std::span<const double> x, std::span<const double> y);

    std::span<const double> x() const { return x_; }
    std::span<const double> y() const { return y_; }
    std::size_t size() const { return x_.size(); }

  private:
    std::span<const double> x_;
    std::span<const double> y_;
};

struct ConcordanceCounts {
    std::int64_t concordant = 0;   // strictly concordant unordered pairs
    std::int64_t discordant = 0;   // strictly discordant unordered pairs
    std::int64_t tied_x = 0;       // tied in x only
    std::int64_t tied_y = 0;       // tied in y only
    std::int64_t tied_both = 0;    // tied in both coordinates
    std::int64_t total_pairs = 0;  // n(n-1)/2
};

// Classify all unordered pairs. O(n log n); the five categories partition
// total_pairs for every input.
ConcordanceCounts concordance_counts(const PairedSample& s);

// tau = 2(concordant - discordant) / (n(n-1)). Tied pairs contribute zero
// (tau-a); no tie correction is applied.
double kendall_tau(const PairedSample& s);

// omega = C / (n(n-1)) - 1/4 with C = #{ordered (i,j), i != j : x_i < x_j
// and y_i < y_j}. Equals tau/4 exactly on tie-free data; ties reduce C.
double omega_score(const PairedSample& s);

// Literal O(n^2) double-loop evaluation of omega; the test oracle for the
// fast kernel.
double brute_force_omega(const PairedSample& s);

// Sample Pearson correlation. Throws DegenerateColumnError when either
// coordinate has zero variance.
double pearson(const PairedSample& s);

// Span-pair conveniences.
inline ConcordanceCounts concordance_counts(std::span<const double> x, std::span<const double> y) {
    return concordance_counts(PairedSample(x, y));
}
inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
    return kendall_tau(PairedSample(x, y));
}
inline double omega_score(std::span<const double> x, std::span<const double> y) {
    return omega_score(PairedSample(x, y));
}
inline double brute_force_omega(std::span<const double> x, std::span<const double> y) {
    return brute_force_omega(PairedSample(x, y));
}
inline double pearson(std::span<const double> x, std::span<const double> y) {
    return pearson(PairedSample(x, y));
}

}  // namespace rankscreen
