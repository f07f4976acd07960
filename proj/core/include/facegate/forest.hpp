#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "facegate/dataset.hpp"
#include "facegate/rng.hpp"

namespace facegate {

// How many candidate features each split draws.
struct MaxFeatures {
    enum class Kind : std::uint8_t { Sqrt, All, Count, Fraction };
    Kind kind = Kind::Sqrt;
    double value = 0.0;  // Count: >= 1; Fraction: (0, 1]

    static MaxFeatures sqrt() { return {Kind::Sqrt, 0.0}; }
    static MaxFeatures all() { return {Kind::All, 0.0}; }
    static MaxFeatures count(std::size_t c) { return {Kind::Count, static_cast<double>(c)}; }
    static MaxFeatures fraction(double f) { return {Kind::Fraction, f}; }

    std::size_t resolve(std::size_t n_features) const;
    std::string to_string() const;
    static MaxFeatures from_string(const std::string& tok);  // throws InvalidConfig
};

struct ForestConfig {
    std::size_t n_trees = 150;
    std::size_t max_depth = 10;
    std::size_t min_samples_leaf = 5;
    std::size_t min_samples_split = 20;
    bool bootstrap = false;
    MaxFeatures max_features = MaxFeatures::sqrt();
    RngSeed seed{0};

    void validate() const;       // throws InvalidConfig naming the bad field(s)
    std::string to_string() const;  // key=value echo used in files and manifests
};

// Flat tree node: internal iff feature >= 0. Leaves carry class counts.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::array<std::uint64_t, 2> counts{0, 0};

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    // Leaf reached by x; split rule is x[feature] <= threshold -> left.
    const TreeNode& leaf_for(std::span<const double> x) const;
    std::uint8_t predict(std::span<const double> x) const;
};

struct Forest {
    ForestConfig config;
    std::vector<Tree> trees;
    std::vector<double> importances;          // per feature, sums to 1 when any split gained
    std::vector<std::size_t> feature_indices; // map into the 1540-dim space; empty = identity
    std::vector<std::string> feature_names;
    std::size_t n_features = 0;
};

struct Prediction {
    std::uint8_t label = 0;
    std::array<std::uint64_t, 2> votes{0, 0};
};

// Single CART tree; greedy Gini splits over midpoints of sorted distinct
// values, candidate features drawn per node from `stream`.
Tree train_tree(const LabeledMatrix& data, const ForestConfig& config, const Rng& stream);

// n_trees trees on substreams split(seed, tree_index); with bootstrap=false
// every tree sees all rows. Importances are mean decrease in Gini impurity,
// normalized to sum 1.
Forest train_forest(const LabeledMatrix& data, const ForestConfig& config, unsigned threads = 1);

// Plurality over per-tree majority votes; ties resolve to FaceTouch (the
// false-negative-critical class).
Prediction predict(const Forest& forest, std::span<const double> x);

// ---- randomized hyperparameter search ----

struct SearchSpace {
    std::vector<std::size_t> n_trees{50, 100, 150, 200};
    std::vector<std::size_t> max_depth{5, 10, 15, 1540};
    std::vector<std::size_t> min_samples_leaf{1, 5, 10};
    std::vector<std::size_t> min_samples_split{2, 10, 20, 40};
    std::vector<bool> bootstrap{true, false};
    std::vector<MaxFeatures> max_features{MaxFeatures::sqrt()};
    std::size_t n_draws = 25;
    std::size_t folds = 5;
    RngSeed seed{0};

    void validate() const;
};

struct CvRow {
    ForestConfig config;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    std::vector<double> fold_accuracies;
};

struct SearchResult {
    ForestConfig best;
    std::vector<CvRow> table;  // in draw order
};

// Stratified fold assignment: per-class shuffle, round-robin deal. Every
// class must have at least `k` rows.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const std::uint8_t> labels,
                                                       std::size_t k, Rng rng);

// Uniform draws over the valid configurations of the space (invalid
// combinations are rejected and redrawn); each draw scored by stratified
// k-fold CV mean accuracy; ties keep the first draw.
SearchResult randomized_search(const LabeledMatrix& data, const SearchSpace& space,
                               unsigned threads = 1);

// ---- model file (.fgm) ----

// Versioned self-describing text document with an FNV-1a checksum trailer.
// Thresholds and importances are written with 17 significant digits.
std::string serialize_model(const Forest& forest);
Forest parse_model(const std::string& text);
void save_model(const Forest& forest, const std::string& path);
Forest load_model(const std::string& path);

}  // namespace facegate
