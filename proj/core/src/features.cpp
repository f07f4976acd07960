#include "facegate/features.hpp"

#include <algorithm>
#include <cmath>

#include "facegate/error.hpp"

namespace facegate {

namespace {

const char* kChannelNames[kNumChannels] = {"ax", "ay", "az", "gx", "gy", "gz"};
const char* kStatNames[kStatsPerChannel] = {"min",  "max",      "mean",     "q25",     "q75",
                                            "std",  "skewness", "kurtosis", "autocorr"};

// Linear-interpolation quantile between closest ranks on sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Pearson correlation of x[0..n-2] with x[1..n-1], population moments.
double lag1_autocorr(std::span<const double> x) {
    const std::size_t m = x.size() - 1;  // number of pairs
    if (m < 1) return 0.0;
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_a += x[i];
        mean_b += x[i + 1];
    }
    mean_a /= static_cast<double>(m);
    mean_b /= static_cast<double>(m);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double da = x[i] - mean_a;
        const double db = x[i + 1] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a <= 0.0 || var_b <= 0.0) return 0.0;  // constant lagged series
    return cov / std::sqrt(var_a * var_b);
}

}  // namespace

std::size_t window_sample_count(double window_seconds, double sample_rate) {
    // Small epsilon so products meant to be integral do not round down.
    return static_cast<std::size_t>(std::floor(window_seconds * sample_rate + 1e-9));
}

std::size_t poly_pair_index(std::size_t i, std::size_t j, std::size_t n) {
    // Pairs start after bias + n linear terms; (i, j) with i <= j in
    // lexicographic order.
    return 1 + n + i * n - i * (i - 1) / 2 + (j - i);
}

std::vector<WindowInstance> segment(std::span<const SensorSample> slice, const ActivityLabel& label,
                                    const std::string& participant, double window_seconds,
                                    double sample_rate) {
    if (window_seconds <= 0.0) throw InvalidConfig("window_seconds must be positive");
    const std::size_t w = window_sample_count(window_seconds, sample_rate);
    std::vector<WindowInstance> out;
    if (w == 0 || slice.size() < w) return out;
    const std::size_t count = slice.size() / w;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        WindowInstance inst;
        inst.samples.assign(slice.begin() + static_cast<std::ptrdiff_t>(k * w),
                            slice.begin() + static_cast<std::ptrdiff_t>((k + 1) * w));
        inst.label = label.category;
        inst.participant = participant;
        inst.source = label;
        out.push_back(std::move(inst));
    }
    return out;
}

std::array<double, kStatsPerChannel> channel_stats(std::span<const double> x) {
    const std::size_t n = x.size();
    std::array<double, kStatsPerChannel> s{};

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    s[0] = sorted.front();
    s[1] = sorted.back();

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    s[2] = mean;

    s[3] = quantile_sorted(sorted, 0.25);
    s[4] = quantile_sorted(sorted, 0.75);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    m2 *= inv_n;
    m3 *= inv_n;
    m4 *= inv_n;

    const double sd = std::sqrt(m2);
    s[5] = sd;
    // Standardized population moments; zero by convention on constant data.
    s[6] = sd > 0.0 ? m3 / (sd * sd * sd) : 0.0;
    s[7] = sd > 0.0 ? m4 / (m2 * m2) : 0.0;
    s[8] = sd > 0.0 ? lag1_autocorr(x) : 0.0;
    return s;
}

FeatureVector base_features(std::span<const SensorSample> samples) {
    if (samples.size() < 2)
        throw WindowTooShort("window has " + std::to_string(samples.size()) +
                             " samples; need at least 2");
    FeatureVector f;
    std::vector<double> series(samples.size());
    for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
        for (std::size_t i = 0; i < samples.size(); ++i) series[i] = samples[i].channel(ch);
        const auto stats = channel_stats(series);
        std::copy(stats.begin(), stats.end(), f.v.begin() + static_cast<std::ptrdiff_t>(ch * kStatsPerChannel));
    }
    return f;
}

FeatureVector base_features(const WindowInstance& w) {
    return base_features(std::span<const SensorSample>(w.samples));
}

std::vector<double> poly_expand(std::span<const double> base) {
    const std::size_t n = base.size();
    for (double v : base)
        if (!std::isfinite(v)) throw NonFiniteFeature("non-finite base feature value");
    std::vector<double> out;
    out.reserve(poly_feature_count(n));
    out.push_back(1.0);
    for (double v : base) out.push_back(v);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out.push_back(base[i] * base[j]);
    return out;
}

PolyFeatureVector poly_expand(const FeatureVector& f) {
    return PolyFeatureVector{poly_expand(std::span<const double>(f.v))};
}

const std::vector<std::string>& base_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        out.reserve(kBaseFeatureCount);
        for (std::size_t ch = 0; ch < kNumChannels; ++ch)
            for (std::size_t st = 0; st < kStatsPerChannel; ++st)
                out.push_back(std::string(kChannelNames[ch]) + "_" + kStatNames[st]);
        return out;
    }();
    return names;
}

const std::vector<std::string>& poly_feature_names() {
    static const std::vector<std::string> names = [] {
        const auto& base = base_feature_names();
        std::vector<std::string> out;
        out.reserve(kPolyFeatureCount);
        out.emplace_back("bias");
        for (const auto& b : base) out.push_back(b);
        for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t j = i; j < base.size(); ++j) out.push_back(base[i] + "*" + base[j]);
        return out;
    }();
    return names;
}

}  // namespace facegate
