#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "facegate/types.hpp"

namespace facegate {

inline constexpr std::size_t kStatsPerChannel = 9;
inline constexpr std::size_t kBaseFeatureCount = kStatsPerChannel * kNumChannels;  // 54

// Degree-2 expansion size: bias + linear + all unordered pairs (squares included).
constexpr std::size_t poly_feature_count(std::size_t n) {
    return (n + 1) * (n + 2) / 2;
}
inline constexpr std::size_t kPolyFeatureCount = poly_feature_count(kBaseFeatureCount);  // 1540

// Number of samples per window: floor(window_seconds * sample_rate).
std::size_t window_sample_count(double window_seconds, double sample_rate);

// A fixed-length slice with its binary label, kept by value.
struct WindowInstance {
    std::vector<SensorSample> samples;
    Category label = Category::NoFaceTouch;
    std::string participant;
    ActivityLabel source;
};

// The 54 base statistics, channel-major (ax ay az gx gy gz) x stat-minor
// (min max mean q25 q75 std skewness kurtosis autocorr).
struct FeatureVector {
    std::array<double, kBaseFeatureCount> v{};

    double operator[](std::size_t i) const { return v[i]; }
};

struct PolyFeatureVector {
    std::vector<double> v;  // length 1540 when built from 54 base features
};

// Index bookkeeping for the expansion ordering: bias, linear terms in input
// order, then pairs (i, j) with i <= j lexicographically.
std::size_t poly_pair_index(std::size_t i, std::size_t j, std::size_t n);

// Non-overlapping consecutive windows; trailing remainder discarded. Slices
// shorter than one window yield an empty list.
std::vector<WindowInstance> segment(std::span<const SensorSample> slice, const ActivityLabel& label,
                                    const std::string& participant, double window_seconds,
                                    double sample_rate);

// The nine per-channel statistics. Window length must be >= 2.
FeatureVector base_features(const WindowInstance& w);
FeatureVector base_features(std::span<const SensorSample> samples);

// Per-channel stats over one value series; exposed for reuse and testing.
std::array<double, kStatsPerChannel> channel_stats(std::span<const double> x);

PolyFeatureVector poly_expand(const FeatureVector& f);
std::vector<double> poly_expand(std::span<const double> base);

const std::vector<std::string>& base_feature_names();
const std::vector<std::string>& poly_feature_names();

}  // namespace facegate
