// Acceptance suite: runs every promised guarantee at its stated tolerance and
// prints one line per criterion. Exit code 0 iff nothing failed (waived
// criteria do not fail; the waiver lands in the run manifest).
//
// Usage: facegate_acceptance <path-to-facegate-cli>
// Optional: FACEGATE_DATASET=<dir with features.csv and sessions/> enables the
// published-dataset reproduction criteria (7 and the real-data half of 8).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "facegate/error.hpp"
#include "facegate/eval.hpp"
#include "facegate/features.hpp"
#include "facegate/feature_io.hpp"
#include "facegate/forest.hpp"
#include "facegate/gate.hpp"
#include "facegate/pipeline.hpp"
#include "facegate/session_io.hpp"
#include "facegate/textio.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace facegate;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool passed = false;
    bool waived = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool rel_close(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

std::string cli_path;
std::vector<std::pair<std::string, std::string>> manifest;

int run_cli(const std::string& args) {
    const std::string cmd = cli_path + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) { return read_text_file(path); }

// ---------------------------------------------------------------- criterion 1
Outcome feature_oracle_equivalence() {
    const auto t0 = Clock::now();
    Rng rng(1001);
    std::vector<double> series(40);
    double worst = 0.0;
    for (int w = 0; w < 10000; ++w) {
        std::vector<SensorSample> window(40);
        for (auto& s : window) {
            for (auto& v : s.accel) v = 4.0 * rng.next_normal() + rng.next_double();
            for (auto& v : s.gyro) v = 50.0 * rng.next_normal();
        }
        const FeatureVector f = base_features(window);
        for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
            for (std::size_t i = 0; i < 40; ++i) series[i] = window[i].channel(ch);
            const auto want = oracle::channel_stats(series);
            const double ref[9] = {want.min,      want.max,      want.mean,
                                   want.q25,      want.q75,      want.stddev,
                                   want.skewness, want.kurtosis, want.autocorr};
            for (std::size_t k = 0; k < 9; ++k) {
                const double got = f[ch * 9 + k];
                const double rel =
                    std::abs(got - ref[k]) / std::max(1.0, std::abs(ref[k]));
                worst = std::max(worst, rel);
                if (rel > 1e-9)
                    return {false, false,
                            "feature " + base_feature_names()[ch * 9 + k] +
                                " off by relative " + format_g(rel, 3)};
            }
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 10.0) return {false, false, "took " + format_g(dt, 3) + " s (budget 10 s)"};
    return {true, false,
            "10000 windows x 54 features within 1e-9 of the naive oracle (worst " +
                format_g(worst, 3) + ") in " + format_g(dt, 3) + " s"};
}

// ---------------------------------------------------------------- criterion 2
Outcome poly_expansion_counts() {
    if (poly_feature_count(54) != 1540) return {false, false, "54 -> count != 1540"};
    for (std::size_t n = 1; n <= 54; ++n) {
        std::vector<double> in(n);
        Rng rng(2000 + n);
        for (auto& v : in) v = rng.next_normal();
        const auto out = poly_expand(in);
        if (out.size() != (n + 1) * (n + 2) / 2)
            return {false, false, "n=" + std::to_string(n) + " count mismatch"};
        std::size_t idx = 1 + n;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j, ++idx)
                if (out[idx] != in[i] * in[j])
                    return {false, false, "pair term (" + std::to_string(i) + "," +
                                              std::to_string(j) + ") not the exact product"};
    }
    return {true, false,
            "54 -> 1540; counts match (n+1)(n+2)/2 for n in 1..54; all pair terms exact"};
}

// ---------------------------------------------------------------- criterion 3
Outcome gate_correctness() {
    GateConfig cfg;  // defaults: t_sta 0.5, t_lta 30, threshold 1.5, 102.4 Hz
    // (a) constant traces: zero and nonzero.
    for (const double level : {0.0, 2.0}) {
        SynthSpec spec;
        spec.segments = {{SegmentKind::Rest, 60.0, level, 0.0}};
        const auto trace = synth_trace(spec, RngSeed{1});
        const auto res = gate_stream(trace, cfg);
        if (res.report.pass_fraction != 0.0)
            return {false, false, "constant trace (level " + format_g(level, 2) + ") passed"};
    }

    // (b) activity bursts (constant-envelope swings) occupying exactly 10%
    // of a 400 s trace.
    SynthSpec spec;
    spec.noise_sigma = 0.02;
    spec.segments = {{SegmentKind::Rest, 36.0, 0.7, 0.0}};
    for (int k = 0; k < 10; ++k) {
        spec.segments.push_back({SegmentKind::Swing, 4.0, 8.0, 0.0});
        spec.segments.push_back({SegmentKind::Rest, 32.4, 0.7, 0.0});
    }
    const auto trace = synth_trace(spec, RngSeed{33});
    const auto res = gate_stream(trace, cfg);
    const double frac = res.report.pass_fraction;
    if (frac < 0.08 || frac > 0.20)
        return {false, false, "10% burst trace pass fraction " + format_g(frac, 4) +
                                  " outside [0.08, 0.20]"};
    {
        // The exact fraction must match the scalar reference gate.
        oracle::NaiveGate ref(cfg.short_window_samples(), cfg.long_window_samples(),
                              cfg.threshold);
        std::uint64_t ref_passed = 0;
        for (const auto& s : trace)
            if (ref.step(resultant_acceleration(s))) ++ref_passed;
        if (ref_passed != res.report.passed_samples)
            return {false, false, "pass count diverged from the scalar reference gate"};
    }

    // (c) exact scale invariance.
    for (const double scale : {0.5, 4.0, 1024.0, 3.0}) {
        auto scaled = trace;
        for (auto& s : scaled)
            for (auto& v : s.accel) v *= scale;
        const auto res2 = gate_stream(scaled, cfg);
        if (res2.decisions != res.decisions)
            return {false, false, "decisions changed under scale " + format_g(scale, 4)};
    }

    // (d) incremental sums vs naive recompute over 1e5 random steps.
    GateConfig fast = cfg;
    fast.t_lta = 10.0;
    GateState gate(fast);
    oracle::NaiveGate naive(fast.short_window_samples(), fast.long_window_samples(),
                            fast.threshold);
    Rng rng(44);
    for (int i = 0; i < 100000; ++i) {
        SensorSample s;
        const double amp = rng.next_below(40) == 0 ? 8.0 : 1.0;
        s.accel = {amp * rng.next_double(), amp * rng.next_double(), amp * rng.next_double()};
        const bool got = gate.step(s) == GateDecision::Pass;
        const bool want = naive.step(resultant_acceleration(s));
        if (got != want) return {false, false, "decision diverged from oracle at step " +
                                                   std::to_string(i)};
        if (gate.warmed_up()) {
            if (!rel_close(gate.short_mean(), naive.last_sta(), 1e-9) ||
                !rel_close(gate.long_mean(), naive.last_lta(), 1e-9))
                return {false, false,
                        "running sums drifted beyond 1e-9 at step " + std::to_string(i)};
        }
    }
    return {true, false,
            "constant traces blocked; 10% bursts -> pass fraction " + format_g(frac, 4) +
                " in [0.08, 0.20]; scale-invariant; sums match oracle over 1e5 steps"};
}

// ---------------------------------------------------------------- criterion 4
Outcome forest_validity_audit() {
    synth::BaseMatrixSpec mspec;
    mspec.n_rows = 2000;
    mspec.seed = 404;
    const auto data = synth::make_base_matrix(mspec);

    for (const bool bootstrap : {false, true}) {
        ForestConfig cfg;  // Table-4 defaults: 150 trees, depth 10, leaf 5, split 20
        cfg.bootstrap = bootstrap;
        cfg.seed = RngSeed{5150};
        const Forest forest = train_forest(data, cfg, 2);

        double total = 0.0;
        for (double v : forest.importances) {
            if (v < 0.0) return {false, false, "negative importance"};
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9)
            return {false, false, "importances sum to " + format_g(total, 12)};

        for (const auto& tree : forest.trees) {
            std::function<Outcome(std::int32_t, std::size_t)> walk =
                [&](std::int32_t idx, std::size_t depth) -> Outcome {
                const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
                if (depth > cfg.max_depth) return {false, false, "depth bound violated"};
                const std::uint64_t n = node.counts[0] + node.counts[1];
                if (node.is_leaf()) {
                    if (n < cfg.min_samples_leaf)
                        return {false, false, "leaf below min_samples_leaf"};
                    return {true, false, ""};
                }
                if (n < cfg.min_samples_split)
                    return {false, false, "internal node below min_samples_split"};
                const Outcome l = walk(node.left, depth + 1);
                if (!l.passed) return l;
                return walk(node.right, depth + 1);
            };
            const Outcome o = walk(0, 0);
            if (!o.passed) return o;
        }

        const Forest again = train_forest(data, cfg, 1);
        if (serialize_model(forest) != serialize_model(again))
            return {false, false, "same seed did not reproduce a bit-identical model"};
    }
    return {true, false,
            "150-tree forests (plain + bootstrap): all leaves/depths/split sizes within "
            "bounds, importances sum to 1 +- 1e-9, fixed seed bit-identical"};
}

// ---------------------------------------------------------------- criterion 5
Outcome small_instance_tree_oracle() {
    const auto t0 = Clock::now();
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.max_depth = 400;
    cfg.min_samples_leaf = 1;
    cfg.min_samples_split = 2;
    cfg.max_features = MaxFeatures::all();

    for (std::uint64_t i = 0; i < 20; ++i) {
        const std::size_t rows = 40 + (i * 37) % 161;      // up to 200
        const std::size_t cols = 1 + i % 6;                // up to 6
        const bool quantized = i % 3 == 0;                 // force duplicate rows sometimes
        const auto data = synth::make_random_dataset(rows, cols, quantized, 7000 + i);

        const Tree tree = train_tree(data, cfg, Rng(i));
        std::size_t ok = 0;
        for (std::size_t r = 0; r < data.n_rows; ++r)
            if (tree.predict(data.row(r)) == data.labels[r]) ++ok;
        const double acc = static_cast<double>(ok) / static_cast<double>(data.n_rows);
        const double oracle_acc = oracle::best_depth2_accuracy(data);
        if (acc < oracle_acc)
            return {false, false,
                    "dataset " + std::to_string(i) + ": tree " + format_g(acc, 6) +
                        " < depth-2 oracle " + format_g(oracle_acc, 6)};
    }
    const double dt = seconds_since(t0);
    if (dt >= 60.0) return {false, false, "took " + format_g(dt, 3) + " s (budget 60 s)"};
    return {true, false,
            "20 datasets: tree training accuracy >= exhaustive depth-2 oracle, in " +
                format_g(dt, 3) + " s"};
}

// ---------------------------------------------------------------- criterion 6
Outcome synthetic_end_to_end() {
    const auto t0 = Clock::now();

    synth::BaseMatrixSpec mspec;  // 5 informative + 49 noise, 2000 rows, 10 participants
    mspec.seed = 606;
    const LabeledMatrix base = synth::make_base_matrix(mspec);
    const LabeledMatrix poly = synth::expand_matrix(base);

    ForestConfig cfg;  // Table-4 values
    cfg.seed = RngSeed{8080};
    const EvalReport split = eval_split(poly, cfg, 0.2, RngSeed{8080}, {}, 2);
    if (split.accuracy < 0.95)
        return {false, false, "split accuracy " + format_g(split.accuracy, 4) + " < 0.95"};

    // Rank on the training rows of the same split, then sweep prefixes.
    const SplitIndices idx = split_train_test(poly, 0.2, RngSeed{8080});
    const Forest ranker = train_forest(poly.select_rows(idx.train), cfg, 2);

    ForestConfig sweep_cfg = cfg;
    sweep_cfg.n_trees = 25;  // the sweep retrains 154 times; smaller forests keep it honest and fast
    const FeatureSweepResult sweep =
        sweep_feature_count(poly, ranker.importances, sweep_cfg, 0.2, RngSeed{8080}, 10, 2);
    if (sweep.rows.size() != 154)
        return {false, false, "sweep produced " + std::to_string(sweep.rows.size()) + " rows"};
    if (sweep.elbow_k > 200)
        return {false, false, "elbow k = " + std::to_string(sweep.elbow_k) + " > 200"};

    const double dt = seconds_since(t0);
    if (dt >= 300.0) return {false, false, "took " + format_g(dt, 3) + " s (budget 300 s)"};
    return {true, false,
            "split accuracy " + format_g(split.accuracy, 4) + " >= 0.95; elbow k = " +
                std::to_string(sweep.elbow_k) + " <= 200; " + format_g(dt, 3) + " s"};
}

// ---------------------------------------------------------------- criterion 7
Outcome dataset_reproduction() {
    const char* env = std::getenv("FACEGATE_DATASET");
    if (!env || !fs::exists(fs::path(env) / "features.csv")) {
        manifest.emplace_back("criterion7_dataset_reproduction", "waived_dataset_unavailable");
        return {true, true,
                "published dataset not available (set FACEGATE_DATASET to a prepared "
                "directory); criteria 1-6 govern acceptance"};
    }
    const FeatureTable table = load_features_csv((fs::path(env) / "features.csv").string());
    LabeledMatrix poly;
    {
        LabeledMatrix tmp = table.matrix;
        poly = tmp.feature_names == base_feature_names() ? synth::expand_matrix(tmp)
                                                         : std::move(tmp);
        poly.participants = table.matrix.participants;
    }

    ForestConfig cfg;  // Table-4 hyperparameters
    cfg.seed = RngSeed{42};

    const SplitIndices idx = split_train_test(poly, 0.2, RngSeed{42});
    std::string detail;
    if (poly.n_rows == 4271 && idx.test.size() != 855)
        return {false, false, "expected an 855-row test split, got " +
                                  std::to_string(idx.test.size())};
    detail += "test rows " + std::to_string(idx.test.size());

    const Forest ranker = train_forest(poly.select_rows(idx.train), cfg, 2);
    const auto subset = top_k_columns(rank_by_importance(ranker.importances), 340);
    const EvalReport split = eval_split(poly, cfg, 0.2, RngSeed{42}, subset, 2);
    detail += "; top-340 split accuracy " + format_g(split.accuracy, 4);
    if (std::abs(split.accuracy - 0.884) > 0.03)
        return {false, false, detail + " outside 0.884 +- 0.03"};
    if (std::abs(split.fpr - 0.155) > 0.05 || std::abs(split.fnr - 0.10) > 0.05)
        return {false, false,
                detail + "; fpr/fnr " + format_g(split.fpr, 4) + "/" + format_g(split.fnr, 4) +
                    " outside 0.155/0.10 +- 0.05"};

    const EvalReport loo = leave_one_out(poly, cfg, subset, 2);
    detail += "; loo mean " + format_g(loo.accuracy, 4);
    if (std::abs(loo.accuracy - 0.703) > 0.05)
        return {false, false, detail + " outside 0.703 +- 0.05"};

    manifest.emplace_back("criterion7_dataset_reproduction", "ran");
    return {true, false, detail};
}

// ---------------------------------------------------------------- criterion 8
Outcome window_sweep_shape() {
    ForestConfig cfg;
    cfg.n_trees = 30;
    cfg.seed = RngSeed{909};

    // Synthetic half (always runs): weak mean shift inside transitions, so
    // longer windows average away more noise by construction.
    const auto sessions = synth::make_session_set(8, 2, 0.5, 0.45, 424242);
    const auto rows =
        sweep_window_size(sessions, std::vector<double>{0.2, 0.4}, cfg, 0.2, RngSeed{909}, 2);
    if (rows[1].accuracy <= rows[0].accuracy)
        return {false, false,
                "synthetic: accuracy(0.4 s) " + format_g(rows[1].accuracy, 4) +
                    " <= accuracy(0.2 s) " + format_g(rows[0].accuracy, 4)};
    std::string detail = "synthetic: 0.2 s -> " + format_g(rows[0].accuracy, 4) +
                         ", 0.4 s -> " + format_g(rows[1].accuracy, 4);

    const char* env = std::getenv("FACEGATE_DATASET");
    if (env && fs::exists(fs::path(env) / "sessions")) {
        std::vector<Session> real;
        for (const auto& entry : fs::directory_iterator(fs::path(env) / "sessions"))
            if (entry.path().extension() == ".fgs")
                real.push_back(load_session_file(entry.path().string()).session);
        const auto real_rows =
            sweep_window_size(real, std::vector<double>{0.2, 0.4}, cfg, 0.2, RngSeed{909}, 2);
        if (real_rows[1].accuracy <= real_rows[0].accuracy)
            return {false, false, "published dataset: 0.4 s did not beat 0.2 s"};
        detail += "; dataset: 0.2 s -> " + format_g(real_rows[0].accuracy, 4) + ", 0.4 s -> " +
                  format_g(real_rows[1].accuracy, 4);
        manifest.emplace_back("criterion8_dataset_half", "ran");
    } else {
        manifest.emplace_back("criterion8_dataset_half", "waived_dataset_unavailable");
        detail += "; dataset half waived (no FACEGATE_DATASET)";
    }
    return {true, false, detail};
}

// ---------------------------------------------------------------- criterion 9
Outcome pipeline_determinism(const fs::path& work) {
    // Train a small model on elevated-vs-resting windows, save it, then drive
    // the CLI `simulate` repeatedly and byte-compare the reports.
    LabeledMatrix train;
    train.n_cols = kPolyFeatureCount;
    train.feature_names = poly_feature_names();
    Rng rng(777);
    std::vector<SensorSample> window(40);
    for (int i = 0; i < 160; ++i) {
        const bool positive = i % 2 == 0;
        const double level = positive ? 3.0 : 1.0;
        for (std::size_t k = 0; k < window.size(); ++k) {
            window[k].t = static_cast<double>(k) / 102.4;
            window[k].accel = {0.05 * rng.next_normal(), 0.05 * rng.next_normal(),
                               level + 0.05 * rng.next_normal()};
            window[k].gyro = {0.0, 0.0, 0.0};
        }
        train.push_row(poly_expand(base_features(window)).v, positive ? 1 : 0);
    }
    ForestConfig cfg;
    cfg.n_trees = 9;
    cfg.max_depth = 5;
    cfg.min_samples_leaf = 2;
    cfg.min_samples_split = 4;
    cfg.seed = RngSeed{31337};
    save_model(train_forest(train, cfg), (work / "model.fgm").string());

    write_text_file((work / "trace.spec").string(),
                    "sample_rate 102.4\nnoise 0.03\nsegment rest 8 1\nsegment rest 1.2 3\n"
                    "segment rest 3 1\nsegment burst 1 6\nsegment rest 4 1\n");

    std::string reference_alerts, reference_report;
    const unsigned thread_settings[5] = {1, 2, 4, 2, 1};
    for (int run = 0; run < 5; ++run) {
        const fs::path out = work / ("sim_run" + std::to_string(run));
        const int rc = run_cli("simulate --synth " + (work / "trace.spec").string() + " --model " +
                               (work / "model.fgm").string() +
                               " --t-sta 0.5 --t-lta 5 --threshold 1.5 --window 0.4 --seed 99 " +
                               "--threads " + std::to_string(thread_settings[run]) + " --report " +
                               out.string());
        if (rc != 0) return {false, false, "simulate exited nonzero on run " + std::to_string(run)};
        const std::string alerts = slurp((out / "alerts.csv").string());
        const std::string report = slurp((out / "run_report.kv").string());
        if (run == 0) {
            reference_alerts = alerts;
            reference_report = report;
            if (report.find("windows_classified=0") != std::string::npos)
                return {false, false, "probe trace classified no windows"};
        } else if (alerts != reference_alerts || report != reference_report) {
            return {false, false, "run " + std::to_string(run) + " (threads " +
                                      std::to_string(thread_settings[run]) +
                                      ") diverged byte-wise"};
        }
    }
    return {true, false,
            "5 simulate runs across thread settings {1,2,4}: alerts.csv and run_report.kv "
            "byte-identical"};
}

// --------------------------------------------------------------- criterion 10
Outcome duty_cycle_energy_proxy() {
    // Battery-hour figures need the watch hardware; the algorithmic energy
    // claim is audited instead: the expensive classifier runs exactly once
    // per gated window, and raising the threshold never raises duty cycle.
    LabeledMatrix train = synth::expand_matrix(synth::make_base_matrix([] {
        synth::BaseMatrixSpec s;
        s.n_rows = 300;
        s.n_cols = 54;
        s.seed = 111;
        return s;
    }()));
    ForestConfig cfg;
    cfg.n_trees = 5;
    cfg.max_depth = 4;
    cfg.min_samples_leaf = 2;
    cfg.min_samples_split = 4;
    const Forest model = train_forest(train, cfg);

    SynthSpec spec;
    spec.noise_sigma = 0.05;
    spec.segments = {{SegmentKind::Rest, 12.0, 0.8, 0.0}, {SegmentKind::Burst, 2.0, 8.0, 0.0},
                     {SegmentKind::Rest, 6.0, 0.8, 0.0},  {SegmentKind::Burst, 1.0, 8.0, 0.0},
                     {SegmentKind::Rest, 5.0, 0.8, 0.0}};
    const auto trace = synth_trace(spec, RngSeed{10});

    GateConfig gate;
    gate.t_lta = 8.0;
    const StreamResult res = run_stream(trace, gate, model, 0.4);
    if (res.report.latency.count != res.report.windows_classified)
        return {false, false, "classifier invocations != windows classified"};

    double last = 1.1;
    for (const double thr : {1.2, 1.5, 2.5, 4.0}) {
        GateConfig g = gate;
        g.threshold = thr;
        const double f = gate_stream(trace, g).report.pass_fraction;
        if (f > last) return {false, false, "duty cycle rose with the threshold"};
        last = f;
    }
    return {true, false,
            "battery-hour figures not reproducible at desk scale; duty-cycle proxy holds: "
            "classifier invocations == windows classified (" +
                std::to_string(res.report.windows_classified) +
                "), duty cycle monotone in threshold"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: facegate_acceptance <path-to-facegate-cli>\n";
        return 2;
    }
    cli_path = argv[1];

    const fs::path work = fs::temp_directory_path() / "facegate_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    struct Criterion {
        int number;
        std::string name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "feature oracle equivalence", feature_oracle_equivalence},
        {2, "polynomial expansion count", poly_expansion_counts},
        {3, "gate correctness", gate_correctness},
        {4, "forest validity audit", forest_validity_audit},
        {5, "small-instance tree oracle", small_instance_tree_oracle},
        {6, "synthetic end-to-end", synthetic_end_to_end},
        {7, "dataset reproduction", dataset_reproduction},
        {8, "window sweep shape", window_sweep_shape},
        {9, "pipeline determinism", [&] { return pipeline_determinism(work); }},
        {10, "duty-cycle energy proxy", duty_cycle_energy_proxy},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, false, std::string("exception: ") + e.what()};
        }
        const char* verdict = o.waived ? "WAIVED" : (o.passed ? "PASS" : "FAIL");
        if (!o.passed && !o.waived) ++failures;
        std::printf("criterion %2d (%s): %s — %s\n", c.number, c.name.c_str(), verdict,
                    o.detail.c_str());
        std::fflush(stdout);
        manifest.emplace_back("criterion" + std::to_string(c.number), verdict);
    }

    // Run manifest, including any waivers.
    std::string kv;
    for (const auto& [k, v] : manifest) kv += k + "=" + v + "\n";
    write_text_file("acceptance_manifest.kv", kv);

    if (failures > 0) {
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed (waivers recorded in acceptance_manifest.kv)\n");
    return 0;
}
