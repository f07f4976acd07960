#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here deliberately takes the naive route (direct summation,
// exhaustive enumeration, recompute-from-scratch) and shares no code with
// the implementation paths it verifies.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "facegate/dataset.hpp"
#include "facegate/types.hpp"

namespace oracle {

// Element-wise square/sum/sqrt with long double accumulation.
inline double resultant(const facegate::SensorSample& s) {
    long double acc = 0.0L;
    for (int i = 0; i < 3; ++i) acc += static_cast<long double>(s.accel[static_cast<std::size_t>(i)]) *
                                       static_cast<long double>(s.accel[static_cast<std::size_t>(i)]);
    return static_cast<double>(std::sqrt(acc));
}

// The nine per-channel statistics by direct summation. Quantiles use linear
// interpolation between closest ranks, written out independently.
struct ChannelStats {
    double min, max, mean, q25, q75, stddev, skewness, kurtosis, autocorr;
};

inline double quantile_by_rank(std::vector<double> sorted, double p) {
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double rank = p * static_cast<double>(n - 1);
    const auto below = static_cast<std::size_t>(std::floor(rank));
    const auto above = std::min(below + 1, n - 1);
    const double w = rank - std::floor(rank);
    return sorted[below] * (1.0 - w) + sorted[above] * w;
}

inline ChannelStats channel_stats(std::span<const double> x) {
    const std::size_t n = x.size();
    ChannelStats s{};
    s.min = *std::min_element(x.begin(), x.end());
    s.max = *std::max_element(x.begin(), x.end());

    long double sum = 0.0L;
    for (double v : x) sum += v;
    const double mu = static_cast<double>(sum / static_cast<long double>(n));
    s.mean = mu;

    s.q25 = quantile_by_rank({x.begin(), x.end()}, 0.25);
    s.q75 = quantile_by_rank({x.begin(), x.end()}, 0.75);

    long double s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
    for (double v : x) {
        const long double d = static_cast<long double>(v) - mu;
        s2 += d * d;
        s3 += d * d * d;
        s4 += d * d * d * d;
    }
    const auto var = static_cast<double>(s2 / static_cast<long double>(n));
    s.stddev = std::sqrt(var);
    if (s.stddev > 0.0) {
        s.skewness = static_cast<double>(s3 / static_cast<long double>(n)) /
                     (s.stddev * s.stddev * s.stddev);
        s.kurtosis = static_cast<double>(s4 / static_cast<long double>(n)) / (var * var);
    }

    if (s.stddev > 0.0 && n >= 2) {
        // Pearson correlation of x[0..n-2] with x[1..n-1].
        const std::size_t m = n - 1;
        long double sa = 0.0L, sb = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            sa += x[i];
            sb += x[i + 1];
        }
        const double ma = static_cast<double>(sa / static_cast<long double>(m));
        const double mb = static_cast<double>(sb / static_cast<long double>(m));
        long double cab = 0.0L, va = 0.0L, vb = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            cab += (static_cast<long double>(x[i]) - ma) * (static_cast<long double>(x[i + 1]) - mb);
            va += (static_cast<long double>(x[i]) - ma) * (static_cast<long double>(x[i]) - ma);
            vb += (static_cast<long double>(x[i + 1]) - mb) * (static_cast<long double>(x[i + 1]) - mb);
        }
        if (va > 0.0L && vb > 0.0L)
            s.autocorr = static_cast<double>(cab / std::sqrt(va * vb));
    }
    return s;
}

// Scalar STA/LTA reference: keeps the full history and recomputes both
// window means from scratch at every step.
class NaiveGate {
public:
    NaiveGate(std::size_t n_sta, std::size_t n_lta, double threshold)
        : n_sta_(n_sta), n_lta_(n_lta), threshold_(threshold) {}

    bool step(double resultant_value) {
        history_.push_back(resultant_value);
        if (history_.size() > n_lta_) history_.pop_front();
        if (history_.size() < n_lta_ && !filled_) return false;
        filled_ = true;
        double lta = 0.0;
        for (double v : history_) lta += v;
        lta /= static_cast<double>(n_lta_);
        double sta = 0.0;
        for (std::size_t i = history_.size() - n_sta_; i < history_.size(); ++i) sta += history_[i];
        sta /= static_cast<double>(n_sta_);
        last_sta_ = sta;
        last_lta_ = lta;
        return lta > 0.0 && sta / lta > threshold_;
    }

    double last_sta() const { return last_sta_; }
    double last_lta() const { return last_lta_; }

private:
    std::size_t n_sta_, n_lta_;
    double threshold_;
    std::deque<double> history_;
    bool filled_ = false;
    double last_sta_ = 0.0, last_lta_ = 0.0;
};

// Best training accuracy of any depth-2 axis-aligned tree, by exhaustive
// enumeration of root splits with independently optimal depth-1 children.
double best_depth2_accuracy(const facegate::LabeledMatrix& data);

// Dominant eigenvalue of a symmetric matrix by power iteration with
// deflation-free share computation (share = lambda_max / trace).
double power_iteration_top_share(const std::vector<std::vector<double>>& sym, int iters = 2000);

}  // namespace oracle
