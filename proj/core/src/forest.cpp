#include "facegate/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "facegate/error.hpp"
#include "facegate/parallel.hpp"
#include "facegate/textio.hpp"

namespace facegate {

namespace {

// Column-major copy of the feature matrix; split scans walk one column at a
// time so this keeps them cache-friendly.
struct ColumnView {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> v;

    explicit ColumnView(const LabeledMatrix& m) : n_rows(m.n_rows), n_cols(m.n_cols) {
        v.resize(n_rows * n_cols);
        for (std::size_t r = 0; r < n_rows; ++r) {
            const double* src = m.values.data() + r * n_cols;
            for (std::size_t c = 0; c < n_cols; ++c) v[c * n_rows + r] = src[c];
        }
    }

    const double* col(std::size_t c) const { return v.data() + c * n_rows; }
};

void check_training_data(const LabeledMatrix& data, const ForestConfig& config) {
    if (data.n_rows < config.min_samples_split)
        throw InsufficientData("need at least min_samples_split=" +
                               std::to_string(config.min_samples_split) + " rows, got " +
                               std::to_string(data.n_rows));
    if (data.n_cols == 0) throw InsufficientData("no feature columns");
    for (double v : data.values)
        if (!std::isfinite(v)) throw NonFiniteFeature("training matrix has a non-finite value");
    for (auto l : data.labels)
        if (l > 1) throw InvalidConfig("labels must be binary (0/1)");
}

// Per-feature row indices sorted by (value, index): deterministic regardless
// of the sort implementation. One block of length m per feature.
std::vector<std::int32_t> sorted_root_arena(const ColumnView& cols,
                                            std::span<const std::int32_t> rows) {
    const std::size_t m = rows.size();
    std::vector<std::int32_t> arena(cols.n_cols * m);
    std::vector<std::int32_t> order(m);
    for (std::size_t f = 0; f < cols.n_cols; ++f) {
        const double* col = cols.col(f);
        for (std::size_t i = 0; i < m; ++i) order[i] = static_cast<std::int32_t>(i);
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            const double va = col[rows[a]], vb = col[rows[b]];
            if (va != vb) return va < vb;
            return a < b;
        });
        std::int32_t* block = arena.data() + f * m;
        for (std::size_t i = 0; i < m; ++i) block[i] = rows[order[i]];
    }
    return arena;
}

struct SplitChoice {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::size_t left_count = 0;
    double child_impurity_mass = 0.0;  // sum over children of m_child * gini_child
};

// Grows one tree over `arena` (modified in place). `m` is the number of rows
// this tree trains on (arena block length); `importances` accumulates
// impurity-decrease mass divided by m.
Tree grow_tree(const ColumnView& cols, std::span<const std::uint8_t> labels,
               const ForestConfig& cfg, std::size_t max_feats, std::vector<std::int32_t>& arena,
               std::size_t m, Rng rng, std::vector<double>* importances) {
    const std::size_t k = cols.n_cols;
    const bool use_all_features = max_feats >= k;

    Tree tree;
    std::vector<std::uint8_t> goes_left(cols.n_rows, 0);
    std::vector<std::int32_t> scratch(m);
    std::vector<std::size_t> all_features;
    if (use_all_features) {
        all_features.resize(k);
        for (std::size_t f = 0; f < k; ++f) all_features[f] = f;
    }

    struct Item {
        std::size_t begin, end, depth;
        std::int32_t slot;
    };
    std::vector<Item> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, m, 0, 0});

    while (!stack.empty()) {
        const Item item = stack.back();
        stack.pop_back();
        const std::size_t b = item.begin, e = item.end;
        const std::size_t mm = e - b;

        std::uint64_t c0 = 0, c1 = 0;
        {
            const std::int32_t* seg = arena.data();  // block of feature 0
            for (std::size_t i = b; i < e; ++i) labels[seg[i]] ? ++c1 : ++c0;
        }
        tree.nodes[item.slot].counts = {c0, c1};

        const bool can_split = c0 != 0 && c1 != 0 && item.depth < cfg.max_depth &&
                               mm >= cfg.min_samples_split && mm >= 2 * cfg.min_samples_leaf;

        SplitChoice best;
        double best_score = std::numeric_limits<double>::infinity();
        if (can_split) {
            std::vector<std::size_t> sampled;
            if (!use_all_features) sampled = rng.sample_without_replacement(k, max_feats);
            const std::vector<std::size_t>& candidates = use_all_features ? all_features : sampled;
            for (const std::size_t f : candidates) {
                const double* col = cols.col(f);
                const std::int32_t* seg = arena.data() + f * m;
                std::uint64_t l0 = 0, l1 = 0;
                for (std::size_t i = b; i + 1 < e; ++i) {
                    const std::int32_t row = seg[i];
                    labels[row] ? ++l1 : ++l0;
                    const double v = col[row];
                    const double vn = col[seg[i + 1]];
                    if (!(vn > v)) continue;  // boundaries lie between distinct values
                    const std::size_t mL = i + 1 - b;
                    const std::size_t mR = mm - mL;
                    if (mL < cfg.min_samples_leaf || mR < cfg.min_samples_leaf) continue;
                    const std::uint64_t r0 = c0 - l0, r1 = c1 - l1;
                    const double sl =
                        static_cast<double>(l0) * static_cast<double>(l0) +
                        static_cast<double>(l1) * static_cast<double>(l1);
                    const double sr =
                        static_cast<double>(r0) * static_cast<double>(r0) +
                        static_cast<double>(r1) * static_cast<double>(r1);
                    // m_child * gini_child summed over children; lower is better.
                    const double score = (static_cast<double>(mL) - sl / static_cast<double>(mL)) +
                                         (static_cast<double>(mR) - sr / static_cast<double>(mR));
                    if (score < best_score) {
                        double thr = v + (vn - v) * 0.5;
                        if (!(thr < vn)) thr = v;  // keep x <= thr strictly splitting
                        best_score = score;
                        best = SplitChoice{static_cast<std::int32_t>(f), thr, mL, score};
                    }
                }
            }
        }

        if (best.feature < 0) {
            tree.nodes[item.slot].feature = -1;
            continue;
        }

        if (importances) {
            const double parent_mass =
                static_cast<double>(mm) -
                (static_cast<double>(c0) * static_cast<double>(c0) +
                 static_cast<double>(c1) * static_cast<double>(c1)) /
                    static_cast<double>(mm);
            (*importances)[static_cast<std::size_t>(best.feature)] +=
                (parent_mass - best.child_impurity_mass) / static_cast<double>(m);
        }

        // Mark rows, then stable-partition every feature block so descendant
        // segments stay sorted.
        {
            const double* col = cols.col(static_cast<std::size_t>(best.feature));
            const std::int32_t* seg = arena.data() + static_cast<std::size_t>(best.feature) * m;
            for (std::size_t i = b; i < e; ++i) {
                const std::int32_t row = seg[i];
                goes_left[row] = col[row] <= best.threshold ? 1 : 0;
            }
        }
        for (std::size_t f = 0; f < k; ++f) {
            std::int32_t* seg = arena.data() + f * m;
            std::size_t w = b, s = 0;
            for (std::size_t i = b; i < e; ++i) {
                const std::int32_t row = seg[i];
                if (goes_left[row]) seg[w++] = row;
                else scratch[s++] = row;
            }
            std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(s), seg + w);
        }

        const auto left_slot = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        const auto right_slot = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        TreeNode& node = tree.nodes[item.slot];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left_slot;
        node.right = right_slot;

        // LIFO: left subtree is grown first, fixing the rng consumption order.
        stack.push_back({b + best.left_count, e, item.depth + 1, right_slot});
        stack.push_back({b, b + best.left_count, item.depth + 1, left_slot});
    }
    return tree;
}

std::vector<std::int32_t> bootstrap_arena(const ColumnView& cols, Rng& rng) {
    const std::size_t n = cols.n_rows;
    std::vector<std::int32_t> sample(n);
    for (auto& s : sample) s = static_cast<std::int32_t>(rng.next_below(n));
    std::vector<std::int32_t> arena(cols.n_cols * n);
    std::vector<std::int32_t> order(n);
    for (std::size_t f = 0; f < cols.n_cols; ++f) {
        const double* col = cols.col(f);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::int32_t>(i);
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            const double va = col[sample[a]], vb = col[sample[b]];
            if (va != vb) return va < vb;
            return a < b;  // draw position breaks value ties
        });
        std::int32_t* block = arena.data() + f * n;
        for (std::size_t i = 0; i < n; ++i) block[i] = sample[order[i]];
    }
    return arena;
}

}  // namespace

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
    std::size_t out = n_features;
    switch (kind) {
        case Kind::Sqrt:
            out = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
            break;
        case Kind::All:
            out = n_features;
            break;
        case Kind::Count:
            out = static_cast<std::size_t>(value);
            break;
        case Kind::Fraction:
            out = static_cast<std::size_t>(value * static_cast<double>(n_features));
            break;
    }
    if (out < 1) out = 1;
    if (out > n_features) out = n_features;
    return out;
}

std::string MaxFeatures::to_string() const {
    switch (kind) {
        case Kind::Sqrt: return "sqrt";
        case Kind::All: return "all";
        case Kind::Count: return std::to_string(static_cast<std::size_t>(value));
        case Kind::Fraction: return format_full(value);
    }
    return "sqrt";
}

MaxFeatures MaxFeatures::from_string(const std::string& tok) {
    if (tok == "sqrt") return sqrt();
    if (tok == "all") return all();
    if (tok.find('.') == std::string::npos) {
        const auto c = parse_int(tok);
        if (c && *c >= 1) return count(static_cast<std::size_t>(*c));
        throw InvalidConfig("max_features count must be a positive integer: " + tok);
    }
    const auto f = parse_double(tok);
    if (f && *f > 0.0 && *f <= 1.0) return fraction(*f);
    throw InvalidConfig("max_features fraction must lie in (0, 1]: " + tok);
}

void ForestConfig::validate() const {
    if (n_trees < 1) throw InvalidConfig("n_trees must be >= 1");
    if (max_depth < 1) throw InvalidConfig("max_depth must be >= 1");
    if (min_samples_leaf < 1) throw InvalidConfig("min_samples_leaf must be >= 1");
    if (min_samples_split < 2 * min_samples_leaf)
        throw InvalidConfig("min_samples_split (" + std::to_string(min_samples_split) +
                            ") must be >= 2 * min_samples_leaf (" +
                            std::to_string(min_samples_leaf) + ")");
    if (max_features.kind == MaxFeatures::Kind::Count && max_features.value < 1.0)
        throw InvalidConfig("max_features count must be >= 1");
    if (max_features.kind == MaxFeatures::Kind::Fraction &&
        !(max_features.value > 0.0 && max_features.value <= 1.0))
        throw InvalidConfig("max_features fraction must lie in (0, 1]");
}

std::string ForestConfig::to_string() const {
    std::string out;
    out += "n_trees=" + std::to_string(n_trees);
    out += " max_depth=" + std::to_string(max_depth);
    out += " min_samples_leaf=" + std::to_string(min_samples_leaf);
    out += " min_samples_split=" + std::to_string(min_samples_split);
    out += std::string(" bootstrap=") + (bootstrap ? "true" : "false");
    out += " max_features=" + max_features.to_string();
    out += " seed=" + std::to_string(seed.seed);
    return out;
}

const TreeNode& Tree::leaf_for(std::span<const double> x) const {
    const TreeNode* node = &nodes[0];
    while (!node->is_leaf()) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
                   ? &nodes[static_cast<std::size_t>(node->left)]
                   : &nodes[static_cast<std::size_t>(node->right)];
    }
    return *node;
}

std::uint8_t Tree::predict(std::span<const double> x) const {
    const TreeNode& leaf = leaf_for(x);
    return leaf.counts[1] >= leaf.counts[0] ? 1 : 0;
}

Tree train_tree(const LabeledMatrix& data, const ForestConfig& config, const Rng& stream) {
    config.validate();
    check_training_data(data, config);
    const ColumnView cols(data);
    const std::size_t max_feats = config.max_features.resolve(cols.n_cols);

    Rng rng = stream;
    std::vector<std::int32_t> arena;
    std::size_t m = cols.n_rows;
    if (config.bootstrap) {
        arena = bootstrap_arena(cols, rng);
    } else {
        std::vector<std::int32_t> rows(cols.n_rows);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::int32_t>(i);
        arena = sorted_root_arena(cols, rows);
    }
    return grow_tree(cols, data.labels, config, max_feats, arena, m, rng, nullptr);
}

Forest train_forest(const LabeledMatrix& data, const ForestConfig& config, unsigned threads) {
    config.validate();
    check_training_data(data, config);
    const ColumnView cols(data);
    const std::size_t max_feats = config.max_features.resolve(cols.n_cols);

    std::vector<std::int32_t> root_template;
    if (!config.bootstrap) {
        std::vector<std::int32_t> rows(cols.n_rows);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::int32_t>(i);
        root_template = sorted_root_arena(cols, rows);
    }

    const Rng base(config.seed);
    std::vector<Tree> trees(config.n_trees);
    std::vector<std::vector<double>> tree_importances(config.n_trees);

    parallel_for(config.n_trees, threads, [&](std::size_t t) {
        Rng rng = base.split(t);
        std::vector<double> imp(cols.n_cols, 0.0);
        std::vector<std::int32_t> arena =
            config.bootstrap ? bootstrap_arena(cols, rng) : root_template;
        trees[t] = grow_tree(cols, data.labels, config, max_feats, arena, cols.n_rows, rng, &imp);
        tree_importances[t] = std::move(imp);
    });

    Forest forest;
    forest.config = config;
    forest.trees = std::move(trees);
    forest.n_features = cols.n_cols;
    forest.feature_names = data.feature_names;
    forest.importances.assign(cols.n_cols, 0.0);
    for (const auto& imp : tree_importances)
        for (std::size_t f = 0; f < cols.n_cols; ++f) forest.importances[f] += imp[f];
    double total = 0.0;
    for (double& v : forest.importances) {
        v /= static_cast<double>(config.n_trees);
        total += v;
    }
    if (total > 0.0)
        for (double& v : forest.importances) v /= total;
    return forest;
}

Prediction predict(const Forest& forest, std::span<const double> x) {
    if (x.size() != forest.n_features)
        throw DimensionMismatch("input has " + std::to_string(x.size()) + " features, model has " +
                                std::to_string(forest.n_features));
    Prediction p;
    for (const auto& tree : forest.trees) ++p.votes[tree.predict(x)];
    p.label = p.votes[1] >= p.votes[0] ? 1 : 0;
    return p;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const std::uint8_t> labels,
                                                       std::size_t k, Rng rng) {
    if (k < 2) throw InvalidConfig("need at least 2 folds");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] ? 1 : 0].push_back(i);
    for (const auto& cls : by_class)
        if (cls.size() < k)
            throw InsufficientData("a class has fewer rows (" + std::to_string(cls.size()) +
                                   ") than folds (" + std::to_string(k) + ")");
    std::vector<std::vector<std::size_t>> folds(k);
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        for (std::size_t i = 0; i < cls.size(); ++i) folds[i % k].push_back(cls[i]);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

void SearchSpace::validate() const {
    if (n_draws < 1) throw InvalidConfig("n_draws must be >= 1");
    if (folds < 2) throw InvalidConfig("folds must be >= 2");
    if (n_trees.empty() || max_depth.empty() || min_samples_leaf.empty() ||
        min_samples_split.empty() || bootstrap.empty() || max_features.empty())
        throw InvalidConfig("every search-space dimension needs at least one candidate");
}

SearchResult randomized_search(const LabeledMatrix& data, const SearchSpace& space,
                               unsigned threads) {
    space.validate();

    Rng master{space.seed};
    auto pick_size = [&](const std::vector<std::size_t>& v) {
        return v[master.next_below(v.size())];
    };

    std::vector<ForestConfig> draws;
    std::size_t attempts = 0;
    const std::size_t attempt_cap = space.n_draws * 10000 + 1000;
    while (draws.size() < space.n_draws) {
        if (++attempts > attempt_cap)
            throw InvalidConfig("search space contains no valid configuration");
        ForestConfig c;
        c.n_trees = pick_size(space.n_trees);
        c.max_depth = pick_size(space.max_depth);
        c.min_samples_leaf = pick_size(space.min_samples_leaf);
        c.min_samples_split = pick_size(space.min_samples_split);
        c.bootstrap = space.bootstrap[master.next_below(space.bootstrap.size())];
        c.max_features = space.max_features[master.next_below(space.max_features.size())];
        c.seed = RngSeed{Rng{space.seed}.split(1000 + draws.size()).construction_seed()};
        try {
            c.validate();
        } catch (const InvalidConfig&) {
            continue;  // rejection keeps draws uniform over valid configs
        }
        draws.push_back(c);
    }

    const auto folds = stratified_folds(data.labels, space.folds, Rng{space.seed}.split(0xF01D));
    std::vector<std::vector<std::size_t>> train_rows(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<bool> in_test(data.n_rows, false);
        for (std::size_t i : folds[f]) in_test[i] = true;
        for (std::size_t i = 0; i < data.n_rows; ++i)
            if (!in_test[i]) train_rows[f].push_back(i);
    }

    const std::size_t n_tasks = draws.size() * folds.size();
    std::vector<double> fold_acc(n_tasks, 0.0);
    parallel_for(n_tasks, threads, [&](std::size_t task) {
        const std::size_t d = task / folds.size();
        const std::size_t f = task % folds.size();
        ForestConfig cfg = draws[d];
        cfg.seed = RngSeed{Rng{cfg.seed}.split(f).construction_seed()};
        const LabeledMatrix train = data.select_rows(train_rows[f]);
        const Forest forest = train_forest(train, cfg, 1);
        std::size_t correct = 0;
        for (std::size_t i : folds[f])
            if (predict(forest, data.row(i)).label == data.labels[i]) ++correct;
        fold_acc[task] = folds[f].empty()
                             ? 0.0
                             : static_cast<double>(correct) / static_cast<double>(folds[f].size());
    });

    SearchResult result;
    double best_mean = -1.0;
    for (std::size_t d = 0; d < draws.size(); ++d) {
        CvRow row;
        row.config = draws[d];
        row.fold_accuracies.assign(fold_acc.begin() + static_cast<std::ptrdiff_t>(d * folds.size()),
                                   fold_acc.begin() +
                                       static_cast<std::ptrdiff_t>((d + 1) * folds.size()));
        double mean = 0.0;
        for (double a : row.fold_accuracies) mean += a;
        mean /= static_cast<double>(row.fold_accuracies.size());
        double var = 0.0;
        for (double a : row.fold_accuracies) var += (a - mean) * (a - mean);
        var /= static_cast<double>(row.fold_accuracies.size());
        row.mean_accuracy = mean;
        row.std_accuracy = std::sqrt(var);
        if (mean > best_mean) {  // strict: ties keep the first draw
            best_mean = mean;
            result.best = row.config;
        }
        result.table.push_back(std::move(row));
    }
    return result;
}

}  // namespace facegate
