#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "facegate/types.hpp"

namespace facegate {

// Window lengths in seconds; ratio threshold strictly above 1.
struct GateConfig {
    double t_sta = 0.5;
    double t_lta = 30.0;
    double threshold = 1.5;
    double sample_rate = 102.4;

    void validate() const;  // throws InvalidConfig
    std::size_t short_window_samples() const;  // ceil(t_sta * sample_rate)
    std::size_t long_window_samples() const;   // ceil(t_lta * sample_rate)
};

enum class GateDecision : std::uint8_t { Blocked = 0, Pass = 1 };
enum class ArmState : std::uint8_t { Dormant = 0, Active = 1 };

// Ring buffer of resultant-acceleration values with O(1) incremental short
// and long running sums. Single-owner mutable; one instance per stream.
class GateState {
public:
    explicit GateState(const GateConfig& config);

    // Feed one sample; Pass iff the long buffer has filled at least once and
    // short_mean / long_mean > threshold. A zero long mean blocks.
    GateDecision step(const SensorSample& s);

    ArmState state() const { return state_; }
    bool warmed_up() const { return filled_; }
    double short_mean() const;
    double long_mean() const;
    // short_mean / long_mean; 0 while warming up or when the long mean is 0.
    double ratio() const;

    const GateConfig& config() const { return config_; }

private:
    void recompute_sums();

    GateConfig config_;
    std::vector<double> buffer_;  // capacity long_window_samples()
    std::size_t head_ = 0;        // next write slot
    std::size_t count_ = 0;       // valid entries until first wrap
    bool filled_ = false;
    std::size_t n_sta_;
    double sum_sta_ = 0.0;
    double sum_lta_ = 0.0;
    std::uint64_t steps_since_recompute_ = 0;
    ArmState state_ = ArmState::Dormant;
};

struct DutyCycleReport {
    std::uint64_t total_samples = 0;
    std::uint64_t passed_samples = 0;
    double pass_fraction = 0.0;  // passed / total (0 on an empty stream)
    std::size_t warmup_samples = 0;
    GateConfig config;
};

struct GateStreamResult {
    std::vector<GateDecision> decisions;
    DutyCycleReport report;
};

// Fold of GateState::step over an ordered sample sequence.
GateStreamResult gate_stream(std::span<const SensorSample> samples, const GateConfig& config);

}  // namespace facegate
