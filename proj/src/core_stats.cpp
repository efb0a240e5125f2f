#include "rankscreen/core_stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rankscreen {

namespace {

std::int64_t pairs_of(std::int64_t g) { return g * (g - 1) / 2; }

// Count strict inversions (a[i] > a[j] for i < j) with a bottom-up merge.
// Equal elements are taken from the left run first and are never counted.
std::int64_t count_inversions(std::vector<double>& a, std::vector<double>& buf) {
    const std::size_t n = a.size();
    std::int64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (a[j] < a[i]) {
                    inversions += static_cast<std::int64_t>(mid - i);
                    buf[k++] = a[j++];
                } else {
                    buf[k++] = a[i++];
                }
            }
            while (i < mid) buf[k++] = a[i++];
            while (j < hi) buf[k++] = a[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      a.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

}  // namespace

PairedSample::PairedSample(std::span<const double> x, std::span<const double> y) : x_(x), y_(y) {
    if (x.size() != y.size())
        throw std::invalid_argument("PairedSample: length mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()) + ")");
    if (x.size() < 2) throw std::invalid_argument("PairedSample: need n >= 2");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("PairedSample: non-finite value at index " + std::to_string(i));
    }
}

ConcordanceCounts concordance_counts(const PairedSample& s) {
    const std::size_t n = s.size();
    const auto x = s.x();
    const auto y = s.y();

    std::vector<std::pair<double, double>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i]};
    std::sort(pts.begin(), pts.end());

    ConcordanceCounts c;
    c.total_pairs = pairs_of(static_cast<std::int64_t>(n));

    // Pairs tied in x, and within those tied in both, from runs of the
    // (x, y)-sorted sequence.
    std::int64_t tied_x_any = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pts[j].first == pts[i].first) ++j;
        tied_x_any += pairs_of(static_cast<std::int64_t>(j - i));
        for (std::size_t k = i; k < j;) {
            std::size_t m = k;
            while (m < j && pts[m].second == pts[k].second) ++m;
            c.tied_both += pairs_of(static_cast<std::int64_t>(m - k));
            k = m;
        }
        i = j;
    }
    c.tied_x = tied_x_any - c.tied_both;

    // Discordant pairs are exactly the strict inversions of the y-sequence:
    // within an equal-x run y is ascending, so every counted inversion has
    // x strictly increasing and y strictly decreasing.
    std::vector<double> yseq(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) yseq[i] = pts[i].second;
    {
        std::vector<double> ysorted = yseq;
        c.discordant = count_inversions(yseq, buf);
        std::sort(ysorted.begin(), ysorted.end());
        std::int64_t tied_y_any = 0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && ysorted[j] == ysorted[i]) ++j;
            tied_y_any += pairs_of(static_cast<std::int64_t>(j - i));
            i = j;
        }
        c.tied_y = tied_y_any - c.tied_both;
    }

    c.concordant = c.total_pairs - c.discordant - c.tied_x - c.tied_y - c.tied_both;
    return c;
}

double kendall_tau(const PairedSample& s) {
    const ConcordanceCounts c = concordance_counts(s);
    return static_cast<double>(c.concordant - c.discordant) / static_cast<double>(c.total_pairs);
}

double omega_score(const PairedSample& s) {
    const ConcordanceCounts c = concordance_counts(s);
    // Each strictly concordant unordered pair contributes exactly one
    // ordered pair with both strict increases, so the ordered count is
    // c.concordant and omega = C/(n(n-1)) - 1/4 = (2C - T)/(4T) with
    // T = n(n-1)/2. The integer numerator makes the tie-free identity
    // omega == tau/4 hold bit-exactly (dividing by 4 is exact).
    return static_cast<double>(2 * c.concordant - c.total_pairs) /
           static_cast<double>(4 * c.total_pairs);
}

double brute_force_omega(const PairedSample& s) {
    const std::size_t n = s.size();
    const auto x = s.x();
    const auto y = s.y();
    std::int64_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && x[i] < x[j] && y[i] < y[j]) ++count;
    const auto ordered = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1);
    return static_cast<double>(4 * count - ordered) / static_cast<double>(4 * ordered);
}

double pearson(const PairedSample& s) {
    const std::size_t n = s.size();
    const auto x = s.x();
    const auto y = s.y();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw DegenerateColumnError("pearson: zero variance in x");
    if (syy == 0.0) throw DegenerateColumnError("pearson: zero variance in y");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace rankscreen
