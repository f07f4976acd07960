#pragma once

#include <CLI11.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "facegate/dataset.hpp"
#include "facegate/forest.hpp"
#include "facegate/gate.hpp"

namespace facegate::cli {

// Ordered key=value list: config files, manifests and machine reports all
// share this shape.
using KvList = std::vector<std::pair<std::string, std::string>>;

std::string format_kv(const KvList& kv);
void write_kv_file(const std::string& path, const KvList& kv);
KvList parse_kv(const std::string& text);  // '#' comments, key=value lines

struct CommonOpts {
    std::uint64_t seed = 42;
    unsigned threads = 0;  // 0: hardware concurrency
    bool verbose = false;
};

// --seed / --threads (FACEGATE_THREADS fallback) / --verbose
void add_common(CLI::App* cmd, CommonOpts& opts);

// Forest hyperparameter flags with optional key=value config file; explicit
// flags override file values, file values override defaults.
struct ForestOpts {
    std::size_t n_trees = 150;
    std::size_t max_depth = 10;
    std::size_t min_samples_leaf = 5;
    std::size_t min_samples_split = 20;
    bool bootstrap = false;
    std::string max_features = "sqrt";
    std::string config_path;

    CLI::Option* o_trees = nullptr;
    CLI::Option* o_depth = nullptr;
    CLI::Option* o_leaf = nullptr;
    CLI::Option* o_split = nullptr;
    CLI::Option* o_bootstrap = nullptr;
    CLI::Option* o_feats = nullptr;

    void add_to(CLI::App* cmd, const std::string& config_flag);
    ForestConfig resolve(std::uint64_t seed) const;  // throws InvalidConfig
};

// Gate flags (--t-sta/--t-lta/--threshold/--sample-rate) plus config file.
struct GateOpts {
    double t_sta = 0.5;
    double t_lta = 30.0;
    double threshold = 1.5;
    double sample_rate = 102.4;
    std::string config_path;

    CLI::Option* o_sta = nullptr;
    CLI::Option* o_lta = nullptr;
    CLI::Option* o_thr = nullptr;
    CLI::Option* o_rate = nullptr;

    void add_to(CLI::App* cmd, const std::string& config_flag);
    GateConfig resolve() const;  // throws InvalidConfig
};

ForestConfig forest_config_from_kv(const KvList& kv, ForestConfig base);
GateConfig gate_config_from_kv(const KvList& kv, GateConfig base);

// Manifest written on completion: subcommand, every resolved parameter, and
// a final status line. A missing or non-ok manifest flags a partial run.
struct Manifest {
    KvList entries;
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::uint64_t value);
    void write_ok(const std::string& path) const;
    void write_failed(const std::string& path, const std::string& error) const;
};

void ensure_parent_dir(const std::string& file_path);
void ensure_dir(const std::string& dir_path);

// Loads a features csv and returns the poly-expanded matrix: 54 base columns
// are expanded to 1540; an already-expanded file is used as-is.
LabeledMatrix load_poly_matrix(const std::string& path);

// .fgs files in a directory, lexicographically sorted.
std::vector<std::string> list_session_files(const std::string& dir);

}  // namespace facegate::cli
