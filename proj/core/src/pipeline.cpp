#include "facegate/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "facegate/error.hpp"
#include "facegate/features.hpp"
#include "facegate/textio.hpp"

namespace facegate {

StreamResult run_stream(std::span<const SensorSample> trace, const GateConfig& gate_config,
                        const Forest& model, double window_seconds) {
    const std::size_t window_samples = window_sample_count(window_seconds, gate_config.sample_rate);
    if (window_samples < 2) throw InvalidConfig("window too short for feature extraction");

    // The model either consumes the full poly expansion or a subset of it.
    if (model.feature_indices.empty()) {
        if (model.n_features != kPolyFeatureCount)
            throw ModelDimensionMismatch("model expects " + std::to_string(model.n_features) +
                                         " features; extractor produces " +
                                         std::to_string(kPolyFeatureCount));
    } else {
        if (model.feature_indices.size() != model.n_features)
            throw ModelDimensionMismatch("model feature map does not match its feature count");
        for (std::size_t idx : model.feature_indices)
            if (idx >= kPolyFeatureCount)
                throw ModelDimensionMismatch("model feature map index " + std::to_string(idx) +
                                             " exceeds the 1540-dim feature space");
    }

    GateState gate(gate_config);
    StreamResult result;

    std::vector<SensorSample> ring(window_samples);
    std::size_t write = 0;
    std::size_t consecutive_pass = 0;
    std::uint64_t total = 0, passed = 0;

    std::vector<SensorSample> window(window_samples);
    std::vector<double> selected(model.n_features);
    double latency_sum_us = 0.0;

    for (const auto& sample : trace) {
        ++total;
        const GateDecision decision = gate.step(sample);
        if (decision != GateDecision::Pass) {
            consecutive_pass = 0;  // a blocked sample breaks the run
            continue;
        }
        ++passed;
        ring[write] = sample;
        write = (write + 1) % window_samples;
        if (++consecutive_pass < window_samples) continue;

        // Materialize the last window_samples pushes in time order.
        for (std::size_t i = 0; i < window_samples; ++i)
            window[i] = ring[(write + i) % window_samples];

        const auto t0 = std::chrono::steady_clock::now();
        const FeatureVector base = base_features(window);
        const auto poly = poly_expand(base);
        const std::vector<double>* input = &poly.v;
        if (!model.feature_indices.empty()) {
            for (std::size_t i = 0; i < model.feature_indices.size(); ++i)
                selected[i] = poly.v[model.feature_indices[i]];
            input = &selected;
        }
        const Prediction pred = predict(model, *input);
        const auto t1 = std::chrono::steady_clock::now();

        const double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
        latency_sum_us += us;
        if (us > result.report.latency.max_us) result.report.latency.max_us = us;
        ++result.report.latency.count;

        ++result.report.windows_classified;
        if (pred.label == 1) {
            AlertEvent ev;
            ev.t = sample.t;
            ev.votes = pred.votes;
            ev.gate_pass_fraction = static_cast<double>(passed) / static_cast<double>(total);
            result.alerts.push_back(ev);
        }
        consecutive_pass = 0;  // advance by one full window
    }

    result.report.total_samples = total;
    result.report.gate_pass_fraction =
        total == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(total);
    result.report.alerts_emitted = result.alerts.size();
    if (result.report.latency.count > 0)
        result.report.latency.mean_us = latency_sum_us / static_cast<double>(result.report.latency.count);
    return result;
}

namespace {

constexpr double kDefaultSwingHz = 1.5;
constexpr double kDefaultBurstHz = 8.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::vector<SensorSample> synth_trace(const SynthSpec& spec, RngSeed seed) {
    if (!(spec.sample_rate > 0.0)) throw InvalidConfig("sample_rate must be positive");
    for (const auto& seg : spec.segments)
        if (!(seg.duration > 0.0)) throw InvalidConfig("segment durations must be positive");

    Rng rng{seed};
    std::vector<SensorSample> out;
    const double dt = 1.0 / spec.sample_rate;

    std::size_t index = 0;
    double seg_start = 0.0;
    for (const auto& seg : spec.segments) {
        const auto n = static_cast<std::size_t>(std::floor(seg.duration * spec.sample_rate + 1e-9));
        for (std::size_t i = 0; i < n; ++i, ++index) {
            const double t = static_cast<double>(index) * dt;
            const double tau = t - seg_start;
            SensorSample s;
            s.t = t;
            switch (seg.kind) {
                case SegmentKind::Rest:
                    s.accel = {0.0, 0.0, seg.amplitude};
                    break;
                case SegmentKind::Swing: {
                    const double f = seg.freq > 0.0 ? seg.freq : kDefaultSwingHz;
                    const double th = kTwoPi * f * tau;
                    s.accel = {seg.amplitude * std::sin(th),
                               seg.amplitude * std::sin(th + kTwoPi / 3.0),
                               seg.amplitude * std::sin(th + 2.0 * kTwoPi / 3.0)};
                    s.gyro = {0.5 * seg.amplitude * std::cos(th),
                              0.5 * seg.amplitude * std::cos(th + kTwoPi / 3.0),
                              0.5 * seg.amplitude * std::cos(th + 2.0 * kTwoPi / 3.0)};
                    break;
                }
                case SegmentKind::Burst: {
                    const double f = seg.freq > 0.0 ? seg.freq : kDefaultBurstHz;
                    const double hann = 0.5 * (1.0 - std::cos(kTwoPi * tau / seg.duration));
                    const double th = kTwoPi * f * tau;
                    const double a = seg.amplitude * hann;
                    s.accel = {a * std::sin(th), a * std::sin(th + kTwoPi / 3.0),
                               a * std::sin(th + 2.0 * kTwoPi / 3.0)};
                    s.gyro = {0.5 * a * std::cos(th), 0.5 * a * std::cos(th + kTwoPi / 3.0),
                              0.5 * a * std::cos(th + 2.0 * kTwoPi / 3.0)};
                    break;
                }
            }
            if (spec.noise_sigma > 0.0) {
                for (auto& v : s.accel) v += spec.noise_sigma * rng.next_normal();
                for (auto& v : s.gyro) v += spec.noise_sigma * rng.next_normal();
            }
            out.push_back(s);
        }
        seg_start += static_cast<double>(n) * dt;
    }
    return out;
}

SynthSpec parse_synth_spec(const std::string& text) {
    SynthSpec spec;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) pos = text.size();
        const std::string line{trim(text.substr(start, pos - start))};
        start = pos + 1;
        if (pos == text.size() && line.empty()) break;
        if (line.empty() || line[0] == '#') continue;

        const auto toks = split_ws(line);
        if (toks[0] == "sample_rate" && toks.size() == 2) {
            const auto v = parse_double(toks[1]);
            if (!v || !(*v > 0.0)) throw InvalidConfig("bad sample_rate in synth spec");
            spec.sample_rate = *v;
        } else if (toks[0] == "noise" && toks.size() == 2) {
            const auto v = parse_double(toks[1]);
            if (!v || *v < 0.0) throw InvalidConfig("bad noise level in synth spec");
            spec.noise_sigma = *v;
        } else if (toks[0] == "segment" && (toks.size() == 4 || toks.size() == 5)) {
            SynthSegment seg;
            if (toks[1] == "rest") seg.kind = SegmentKind::Rest;
            else if (toks[1] == "swing") seg.kind = SegmentKind::Swing;
            else if (toks[1] == "burst") seg.kind = SegmentKind::Burst;
            else throw InvalidConfig("unknown segment kind: " + toks[1]);
            const auto dur = parse_double(toks[2]);
            const auto amp = parse_double(toks[3]);
            if (!dur || !(*dur > 0.0) || !amp) throw InvalidConfig("bad segment parameters");
            seg.duration = *dur;
            seg.amplitude = *amp;
            if (toks.size() == 5) {
                const auto f = parse_double(toks[4]);
                if (!f || !(*f > 0.0)) throw InvalidConfig("bad segment frequency");
                seg.freq = *f;
            }
            spec.segments.push_back(seg);
        } else {
            throw InvalidConfig("unrecognized synth spec line: " + line);
        }
        if (pos == text.size()) break;
    }
    if (spec.segments.empty()) throw InvalidConfig("synth spec has no segments");
    return spec;
}

SynthSpec load_synth_spec(const std::string& path) {
    return parse_synth_spec(read_text_file(path));
}

}  // namespace facegate
