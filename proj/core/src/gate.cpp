#include "facegate/gate.hpp"

#include <cmath>

#include "facegate/error.hpp"

namespace facegate {

void GateConfig::validate() const {
    if (!(sample_rate > 0.0)) throw InvalidConfig("sample_rate must be positive");
    if (!(t_sta > 0.0) || !(t_sta < t_lta))
        throw InvalidConfig("window lengths must satisfy 0 < t_sta < t_lta");
    if (!(threshold > 1.0)) throw InvalidConfig("threshold must be > 1");
    if (short_window_samples() >= long_window_samples())
        throw InvalidConfig("short window must hold fewer samples than long window");
}

std::size_t GateConfig::short_window_samples() const {
    return static_cast<std::size_t>(std::ceil(t_sta * sample_rate));
}

std::size_t GateConfig::long_window_samples() const {
    return static_cast<std::size_t>(std::ceil(t_lta * sample_rate));
}

GateState::GateState(const GateConfig& config) : config_(config) {
    config_.validate();
    buffer_.assign(config_.long_window_samples(), 0.0);
    n_sta_ = config_.short_window_samples();
}

double GateState::short_mean() const {
    if (!filled_) return 0.0;
    return sum_sta_ / static_cast<double>(n_sta_);
}

double GateState::long_mean() const {
    if (!filled_) return 0.0;
    return sum_lta_ / static_cast<double>(buffer_.size());
}

double GateState::ratio() const {
    const double lta = long_mean();
    if (!filled_ || lta == 0.0) return 0.0;
    return short_mean() / lta;
}

void GateState::recompute_sums() {
    // Running sums drift under long streams; rebuild them from the buffer.
    sum_lta_ = 0.0;
    for (double v : buffer_) sum_lta_ += v;
    sum_sta_ = 0.0;
    const std::size_t cap = buffer_.size();
    for (std::size_t k = 0; k < n_sta_; ++k) {
        const std::size_t idx = (head_ + cap - 1 - k) % cap;
        sum_sta_ += buffer_[idx];
    }
}

GateDecision GateState::step(const SensorSample& s) {
    const double value = resultant_acceleration(s);
    const std::size_t cap = buffer_.size();

    const double evicted_long = buffer_[head_];
    sum_lta_ += value - (filled_ || count_ >= cap ? evicted_long : 0.0);

    // The value leaving the short window is n_sta_ samples back from the new
    // write position (present only once that many samples were seen).
    if (count_ >= n_sta_ || filled_) {
        const std::size_t leaving = (head_ + cap - n_sta_) % cap;
        sum_sta_ += value - buffer_[leaving];
    } else {
        sum_sta_ += value;
    }

    buffer_[head_] = value;
    head_ = (head_ + 1) % cap;
    if (!filled_) {
        ++count_;
        if (count_ >= cap) filled_ = true;
    }

    if (++steps_since_recompute_ >= cap) {
        recompute_sums();
        steps_since_recompute_ = 0;
    }

    GateDecision decision = GateDecision::Blocked;
    if (filled_) {
        const double lta = sum_lta_ / static_cast<double>(cap);
        const double sta = sum_sta_ / static_cast<double>(n_sta_);
        if (lta > 0.0 && sta / lta > config_.threshold) decision = GateDecision::Pass;
    }
    state_ = decision == GateDecision::Pass ? ArmState::Active : ArmState::Dormant;
    return decision;
}

GateStreamResult gate_stream(std::span<const SensorSample> samples, const GateConfig& config) {
    GateState state(config);
    GateStreamResult result;
    result.decisions.reserve(samples.size());
    std::uint64_t passed = 0;
    for (const auto& s : samples) {
        const GateDecision d = state.step(s);
        result.decisions.push_back(d);
        if (d == GateDecision::Pass) ++passed;
    }
    result.report.total_samples = samples.size();
    result.report.passed_samples = passed;
    result.report.pass_fraction =
        samples.empty() ? 0.0 : static_cast<double>(passed) / static_cast<double>(samples.size());
    result.report.warmup_samples = config.long_window_samples();
    result.report.config = config;
    return result;
}

}  // namespace facegate
