#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "facegate/forest.hpp"
#include "facegate/gate.hpp"
#include "facegate/rng.hpp"
#include "facegate/types.hpp"

namespace facegate {

struct AlertEvent {
    double t = 0.0;  // window end time
    std::array<std::uint64_t, 2> votes{0, 0};
    double gate_pass_fraction = 0.0;  // running fraction at emission
};

struct LatencyStats {
    std::uint64_t count = 0;
    double mean_us = 0.0;
    double max_us = 0.0;
};

struct RunReport {
    std::uint64_t total_samples = 0;
    double gate_pass_fraction = 0.0;
    std::uint64_t windows_classified = 0;
    std::uint64_t alerts_emitted = 0;
    // Wall-clock per-window featurize+classify timings. Nondeterministic by
    // nature; excluded from machine-readable report files.
    LatencyStats latency;
};

struct StreamResult {
    std::vector<AlertEvent> alerts;
    RunReport report;
};

// Replays a trace through gate -> windowing -> features -> forest. A window
// is classified only once `window_samples` consecutive Pass samples have
// accumulated; the buffer then advances by one full window (non-overlapping).
// The model may consume all 1540 poly features or a top-k subset via its
// feature_indices map.
StreamResult run_stream(std::span<const SensorSample> trace, const GateConfig& gate_config,
                        const Forest& model, double window_seconds);

// ---- synthetic trace generation ----

enum class SegmentKind : std::uint8_t { Rest, Swing, Burst };

struct SynthSegment {
    SegmentKind kind = SegmentKind::Rest;
    double duration = 1.0;   // seconds
    double amplitude = 1.0;  // device units
    double freq = 0.0;       // Hz; 0 picks the template default
};

struct SynthSpec {
    double sample_rate = 102.4;
    double noise_sigma = 0.0;
    std::vector<SynthSegment> segments;
};

// Deterministic concatenation of parameterized segments with seeded Gaussian
// noise on every channel:
//   rest  — constant accel (0, 0, A), zero gyro
//   swing — three-phase sinusoid, default 1.5 Hz
//   burst — Hann-windowed three-phase sinusoid, default 8 Hz
std::vector<SensorSample> synth_trace(const SynthSpec& spec, RngSeed seed);

// Text form: 'sample_rate'/'noise' headers plus one
// 'segment <rest|swing|burst> <duration> <amplitude> [freq]' line each.
SynthSpec parse_synth_spec(const std::string& text);
SynthSpec load_synth_spec(const std::string& path);

}  // namespace facegate
