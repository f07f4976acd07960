#include "facegate/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "facegate/error.hpp"
#include "facegate/features.hpp"
#include "facegate/ingest.hpp"
#include "facegate/parallel.hpp"

namespace facegate {

double ConfusionMatrix::accuracy() const {
    const std::uint64_t n = total();
    return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double ConfusionMatrix::fpr() const {
    const std::uint64_t neg = fp + tn;
    return neg == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(neg);
}

double ConfusionMatrix::fnr() const {
    const std::uint64_t pos = fn + tp;
    return pos == 0 ? 0.0 : static_cast<double>(fn) / static_cast<double>(pos);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

ConfusionMatrix confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> truths) {
    if (predictions.size() != truths.size())
        throw LengthMismatch("predictions (" + std::to_string(predictions.size()) +
                             ") and truths (" + std::to_string(truths.size()) +
                             ") differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred = predictions[i] != 0;
        const bool truth = truths[i] != 0;
        if (truth && pred) ++cm.tp;
        else if (truth && !pred) ++cm.fn;
        else if (!truth && pred) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

SplitIndices split_train_test(const LabeledMatrix& data, double test_fraction, RngSeed seed) {
    if (data.n_rows < 5) throw InsufficientData("need at least 5 rows to split");
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw InsufficientData("test_fraction must lie strictly between 0 and 1");

    std::vector<std::size_t> strata[2];
    for (std::size_t i = 0; i < data.n_rows; ++i) strata[data.labels[i] ? 1 : 0].push_back(i);

    const auto target_total = static_cast<std::size_t>(
        std::ceil(static_cast<double>(data.n_rows) * test_fraction - 1e-12));

    std::size_t base[2];
    double rem[2];
    std::size_t base_total = 0;
    for (int c = 0; c < 2; ++c) {
        const double exact = static_cast<double>(strata[c].size()) * test_fraction;
        base[c] = static_cast<std::size_t>(std::floor(exact + 1e-12));
        rem[c] = exact - static_cast<double>(base[c]);
        base_total += base[c];
    }
    std::size_t deficit = target_total > base_total ? target_total - base_total : 0;
    // Largest remainder first; remainder ties go to the lower label.
    int order[2] = {0, 1};
    if (rem[1] > rem[0]) std::swap(order[0], order[1]);
    for (int i = 0; i < 2 && deficit > 0; ++i) {
        const int c = order[i];
        if (base[c] < strata[c].size()) {
            ++base[c];
            --deficit;
        }
    }

    SplitIndices out;
    Rng rng{seed};
    for (int c = 0; c < 2; ++c) {
        auto rows = strata[c];
        Rng stream = rng.split(static_cast<std::uint64_t>(c));
        stream.shuffle(rows);
        const std::size_t take = std::min(base[c], rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < take ? out.test : out.train).push_back(rows[i]);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    if (out.test.empty()) throw InsufficientData("empty test set");
    if (out.train.empty()) throw InsufficientData("empty train set");
    return out;
}

std::vector<std::size_t> rank_by_importance(std::span<const double> importances) {
    std::vector<std::size_t> order(importances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (importances[a] != importances[b]) return importances[a] > importances[b];
        return a < b;
    });
    return order;
}

std::vector<std::size_t> top_k_columns(const std::vector<std::size_t>& ranking, std::size_t k) {
    if (k > ranking.size()) k = ranking.size();
    std::vector<std::size_t> cols(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(cols.begin(), cols.end());
    return cols;
}

namespace {

double score_forest(const Forest& forest, const LabeledMatrix& test,
                    ConfusionMatrix* cm_out = nullptr) {
    std::vector<std::uint8_t> preds(test.n_rows);
    for (std::size_t i = 0; i < test.n_rows; ++i) preds[i] = predict(forest, test.row(i)).label;
    const ConfusionMatrix cm = confusion(preds, test.labels);
    if (cm_out) *cm_out = cm;
    return cm.accuracy();
}

}  // namespace

EvalReport eval_split(const LabeledMatrix& data, const ForestConfig& config, double test_fraction,
                      RngSeed split_seed, const std::vector<std::size_t>& feature_subset,
                      unsigned threads) {
    const SplitIndices idx = split_train_test(data, test_fraction, split_seed);
    const LabeledMatrix base = feature_subset.empty() ? data : data.select_columns(feature_subset);
    const LabeledMatrix train = base.select_rows(idx.train);
    const LabeledMatrix test = base.select_rows(idx.test);

    const Forest forest = train_forest(train, config, threads);

    EvalReport report;
    report.config = config;
    report.feature_subset = feature_subset;
    report.accuracy = score_forest(forest, test, &report.cm);
    report.fpr = report.cm.fpr();
    report.fnr = report.cm.fnr();
    return report;
}

EvalReport leave_one_out(const LabeledMatrix& data, const ForestConfig& config,
                         const std::vector<std::size_t>& feature_subset, unsigned threads) {
    if (data.participants.size() != data.n_rows)
        throw InsufficientData("leave-one-out needs a participant id per row");
    std::set<std::string> ids(data.participants.begin(), data.participants.end());
    if (ids.size() < 2) throw SingleParticipant("leave-one-out needs at least 2 participants");

    const std::vector<std::string> order(ids.begin(), ids.end());  // ascending id order
    const LabeledMatrix base = feature_subset.empty() ? data : data.select_columns(feature_subset);

    std::vector<FoldReport> folds(order.size());
    parallel_for(order.size(), threads, [&](std::size_t f) {
        const std::string& held_out = order[f];
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < base.n_rows; ++i)
            (base.participants[i] == held_out ? test_rows : train_rows).push_back(i);

        ForestConfig fold_cfg = config;
        fold_cfg.seed = RngSeed{Rng{config.seed}.split(f).construction_seed()};
        const Forest forest = train_forest(base.select_rows(train_rows), fold_cfg, 1);
        const LabeledMatrix test = base.select_rows(test_rows);

        FoldReport fr;
        fr.participant = held_out;
        fr.accuracy = score_forest(forest, test, &fr.cm);
        fr.test_rows = test_rows.size();
        folds[f] = std::move(fr);
    });

    EvalReport report;
    report.config = config;
    report.feature_subset = feature_subset;
    report.per_participant = std::move(folds);
    double mean = 0.0;
    for (const auto& fr : report.per_participant) {
        report.cm += fr.cm;
        mean += fr.accuracy;
    }
    report.accuracy = mean / static_cast<double>(report.per_participant.size());
    report.fpr = report.cm.fpr();
    report.fnr = report.cm.fnr();
    return report;
}

std::vector<WindowSweepRow> sweep_window_size(std::span<const Session> sessions,
                                              std::span<const double> sizes,
                                              const ForestConfig& config, double test_fraction,
                                              RngSeed seed, unsigned threads) {
    std::vector<WindowSweepRow> rows(sizes.size());
    parallel_for(sizes.size(), threads, [&](std::size_t s) {
        const double window_seconds = sizes[s];
        LabeledMatrix mat;
        mat.feature_names = poly_feature_names();
        for (const auto& session : sessions) {
            for (const auto& slice : extract_transitions(session)) {
                for (const auto& w :
                     segment(slice.samples, slice.label, slice.participant, window_seconds,
                             session.sample_rate)) {
                    const auto poly = poly_expand(base_features(w));
                    mat.push_row(poly.v, w.label == Category::FaceTouch ? 1 : 0, w.participant);
                }
            }
        }
        const EvalReport report = eval_split(mat, config, test_fraction, seed, {}, 1);
        rows[s] = WindowSweepRow{window_seconds, report.accuracy, mat.n_rows};
    });
    return rows;
}

FeatureSweepResult sweep_feature_count(const LabeledMatrix& data,
                                       std::span<const double> importances,
                                       const ForestConfig& config, double test_fraction,
                                       RngSeed seed, std::size_t step, unsigned threads) {
    if (importances.size() != data.n_cols)
        throw DimensionMismatch("importances length does not match feature count");
    if (step < 1) throw InvalidConfig("step must be >= 1");

    const auto ranking = rank_by_importance(importances);
    std::vector<std::size_t> ks;
    for (std::size_t k = step; k < data.n_cols; k += step) ks.push_back(k);
    ks.push_back(data.n_cols);

    // One split shared by every prefix so rows differ only in k.
    const SplitIndices idx = split_train_test(data, test_fraction, seed);

    FeatureSweepResult result;
    result.rows.resize(ks.size());
    parallel_for(ks.size(), threads, [&](std::size_t i) {
        const auto cols = top_k_columns(ranking, ks[i]);
        const LabeledMatrix sub = data.select_columns(cols);
        const Forest forest = train_forest(sub.select_rows(idx.train), config, 1);
        const double acc = score_forest(forest, sub.select_rows(idx.test));
        result.rows[i] = FeatureSweepRow{ks[i], acc};
    });

    double max_acc = 0.0;
    for (const auto& row : result.rows) max_acc = std::max(max_acc, row.accuracy);
    for (const auto& row : result.rows) {
        if (row.accuracy >= max_acc - 0.005) {
            result.elbow_k = row.k;
            result.elbow_accuracy = row.accuracy;
            break;
        }
    }
    return result;
}

}  // namespace facegate
