#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "facegate/dataset.hpp"
#include "facegate/forest.hpp"
#include "facegate/rng.hpp"
#include "facegate/types.hpp"

namespace facegate {

// FaceTouch is the positive class throughout.
struct ConfusionMatrix {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
    double fpr() const;  // fp / (fp + tn); 0 when there are no negatives
    double fnr() const;  // fn / (fn + tp); 0 when there are no positives

    ConfusionMatrix& operator+=(const ConfusionMatrix& o);
};

ConfusionMatrix confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> truths);

struct FoldReport {
    std::string participant;
    ConfusionMatrix cm;
    double accuracy = 0.0;
    std::size_t test_rows = 0;
};

struct EvalReport {
    ConfusionMatrix cm;             // aggregate over folds for leave-one-out
    double accuracy = 0.0;          // split: (tp+tn)/total; loo: unweighted fold mean
    double fpr = 0.0;
    double fnr = 0.0;
    std::vector<FoldReport> per_participant;  // leave-one-out only
    ForestConfig config;
    std::vector<std::size_t> feature_subset;  // column indices used; empty = all
};

// Stratified 80/20-style split. Total test size is ceil(n * test_fraction);
// strata get floor(n_i * f) each plus largest-remainder top-up (ties -> lower
// label first). Deterministic under seed; exact disjoint partition.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
SplitIndices split_train_test(const LabeledMatrix& data, double test_fraction, RngSeed seed);

// Train on the train rows, score on the test rows; subset (optional) selects
// feature columns for both.
EvalReport eval_split(const LabeledMatrix& data, const ForestConfig& config, double test_fraction,
                      RngSeed split_seed, const std::vector<std::size_t>& feature_subset = {},
                      unsigned threads = 1);

// One fold per participant (ascending id order); overall accuracy is the
// unweighted mean of per-fold accuracies, the aggregate matrix the
// element-wise sum. Needs >= 2 participants.
EvalReport leave_one_out(const LabeledMatrix& data, const ForestConfig& config,
                         const std::vector<std::size_t>& feature_subset = {},
                         unsigned threads = 1);

// Feature ranking by importance, descending; ties resolve to the lower index.
std::vector<std::size_t> rank_by_importance(std::span<const double> importances);

// First k of the ranking, reordered ascending so that k = p reproduces the
// original column order exactly.
std::vector<std::size_t> top_k_columns(const std::vector<std::size_t>& ranking, std::size_t k);

// ---- sweeps ----

struct WindowSweepRow {
    double window_seconds = 0.0;
    double accuracy = 0.0;
    std::size_t n_windows = 0;
};

// Re-segments, re-featurizes (54 base -> 1540 poly), retrains and evaluates
// per window size under one fixed seed.
std::vector<WindowSweepRow> sweep_window_size(std::span<const Session> sessions,
                                              std::span<const double> sizes,
                                              const ForestConfig& config, double test_fraction,
                                              RngSeed seed, unsigned threads = 1);

struct FeatureSweepRow {
    std::size_t k = 0;
    double accuracy = 0.0;
};

struct FeatureSweepResult {
    std::vector<FeatureSweepRow> rows;
    std::size_t elbow_k = 0;  // smallest k with accuracy >= max accuracy - 0.005
    double elbow_accuracy = 0.0;
};

// Retrains on each importance-ranked prefix (k = step, 2*step, ..., p) over
// one fixed split.
FeatureSweepResult sweep_feature_count(const LabeledMatrix& data,
                                       std::span<const double> importances,
                                       const ForestConfig& config, double test_fraction,
                                       RngSeed seed, std::size_t step = 10, unsigned threads = 1);

// ---- PCA participant-variance study ----

struct PcaRow {
    std::size_t participants = 0;
    double first_component_share = 0.0;  // in [0, 1]
    double eigenvalue_sum = 0.0;         // equals n_cols_used after standardization
    std::size_t n_cols_used = 0;
};

struct PcaStudy {
    std::vector<PcaRow> rows;  // prefix sizes 1..P in participant id order
    std::vector<std::string> warnings;
};

// For each prefix of participants, standardizes columns (dropping constant
// ones with a warning), eigendecomposes the covariance and reports the top
// eigenvalue's share of total variance.
PcaStudy pca_first_component_variance(const LabeledMatrix& data);

}  // namespace facegate
