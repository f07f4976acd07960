#include "cli_common.hpp"

#include <algorithm>
#include <filesystem>

#include "facegate/error.hpp"
#include "facegate/feature_io.hpp"
#include "facegate/features.hpp"
#include "facegate/textio.hpp"

namespace fs = std::filesystem;

namespace facegate::cli {

std::string format_kv(const KvList& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

void write_kv_file(const std::string& path, const KvList& kv) {
    ensure_parent_dir(path);
    write_text_file(path, format_kv(kv));
}

KvList parse_kv(const std::string& text) {
    KvList out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) pos = text.size();
        const std::string line{trim(text.substr(start, pos - start))};
        start = pos + 1;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("config line is not key=value: " + line);
        out.emplace_back(std::string(trim(line.substr(0, eq))),
                         std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "Seed for every stochastic step")->capture_default_str();
    cmd->add_option("--threads", opts.threads,
                    "Worker threads (0 = hardware concurrency)")
        ->envname("FACEGATE_THREADS")
        ->capture_default_str();
    cmd->add_flag("--verbose", opts.verbose, "Print progress detail");
}

void ForestOpts::add_to(CLI::App* cmd, const std::string& config_flag) {
    cmd->add_option(config_flag, config_path,
                    "key=value file with forest hyperparameters");
    o_trees = cmd->add_option("--n-trees", n_trees, "Trees in the forest")->capture_default_str();
    o_depth = cmd->add_option("--max-depth", max_depth, "Maximum tree depth")->capture_default_str();
    o_leaf = cmd->add_option("--min-samples-leaf", min_samples_leaf, "Minimum samples per leaf")
                 ->capture_default_str();
    o_split = cmd->add_option("--min-samples-split", min_samples_split,
                              "Minimum samples to split a node")
                  ->capture_default_str();
    o_bootstrap = cmd->add_flag("--bootstrap,!--no-bootstrap", bootstrap,
                                "Bootstrap row sampling per tree")
                      ->capture_default_str();
    o_feats = cmd->add_option("--max-features", max_features,
                              "Features per split: sqrt, all, a count, or a fraction")
                  ->capture_default_str();
}

ForestConfig ForestOpts::resolve(std::uint64_t seed) const {
    ForestConfig cfg;
    if (!config_path.empty())
        cfg = forest_config_from_kv(parse_kv(read_text_file(config_path)), cfg);
    if (!o_trees || o_trees->count() > 0) cfg.n_trees = n_trees;
    if (!o_depth || o_depth->count() > 0) cfg.max_depth = max_depth;
    if (!o_leaf || o_leaf->count() > 0) cfg.min_samples_leaf = min_samples_leaf;
    if (!o_split || o_split->count() > 0) cfg.min_samples_split = min_samples_split;
    if (!o_bootstrap || o_bootstrap->count() > 0) cfg.bootstrap = bootstrap;
    if (!o_feats || o_feats->count() > 0) cfg.max_features = MaxFeatures::from_string(max_features);
    cfg.seed = RngSeed{seed};
    try {
        cfg.validate();
    } catch (const InvalidConfig& e) {
        // Surface the flag names so the diagnostic points at what to change.
        throw InvalidConfig(std::string(e.what()) +
                            " (see --min-samples-split / --min-samples-leaf / --n-trees / "
                            "--max-depth / --max-features)");
    }
    return cfg;
}

void GateOpts::add_to(CLI::App* cmd, const std::string& config_flag) {
    cmd->add_option(config_flag, config_path, "key=value file with gate parameters");
    o_sta = cmd->add_option("--t-sta", t_sta, "Short window length, seconds")->capture_default_str();
    o_lta = cmd->add_option("--t-lta", t_lta, "Long window length, seconds")->capture_default_str();
    o_thr = cmd->add_option("--threshold", threshold, "STA/LTA trigger ratio")->capture_default_str();
    o_rate = cmd->add_option("--sample-rate", sample_rate, "Stream sample rate, Hz")
                 ->capture_default_str();
}

GateConfig GateOpts::resolve() const {
    GateConfig cfg;
    if (!config_path.empty()) cfg = gate_config_from_kv(parse_kv(read_text_file(config_path)), cfg);
    if (!o_sta || o_sta->count() > 0) cfg.t_sta = t_sta;
    if (!o_lta || o_lta->count() > 0) cfg.t_lta = t_lta;
    if (!o_thr || o_thr->count() > 0) cfg.threshold = threshold;
    if (!o_rate || o_rate->count() > 0) cfg.sample_rate = sample_rate;
    try {
        cfg.validate();
    } catch (const InvalidConfig& e) {
        throw InvalidConfig(std::string(e.what()) + " (see --t-sta / --t-lta / --threshold)");
    }
    return cfg;
}

ForestConfig forest_config_from_kv(const KvList& kv, ForestConfig base) {
    for (const auto& [key, val] : kv) {
        if (key == "n_trees" || key == "max_depth" || key == "min_samples_leaf" ||
            key == "min_samples_split") {
            const auto v = parse_int(val);
            if (!v || *v < 0) throw InvalidConfig("bad value for " + key + ": " + val);
            if (key == "n_trees") base.n_trees = static_cast<std::size_t>(*v);
            else if (key == "max_depth") base.max_depth = static_cast<std::size_t>(*v);
            else if (key == "min_samples_leaf") base.min_samples_leaf = static_cast<std::size_t>(*v);
            else base.min_samples_split = static_cast<std::size_t>(*v);
        } else if (key == "bootstrap") {
            base.bootstrap = val == "true" || val == "1";
        } else if (key == "max_features") {
            base.max_features = MaxFeatures::from_string(val);
        } else if (key == "seed") {
            const auto v = parse_int(val);
            if (!v || *v < 0) throw InvalidConfig("bad seed: " + val);
            base.seed = RngSeed{static_cast<std::uint64_t>(*v)};
        } else {
            throw InvalidConfig("unknown forest config key: " + key);
        }
    }
    return base;
}

GateConfig gate_config_from_kv(const KvList& kv, GateConfig base) {
    for (const auto& [key, val] : kv) {
        const auto v = parse_double(val);
        if (!v) throw InvalidConfig("bad value for " + key + ": " + val);
        if (key == "t_sta") base.t_sta = *v;
        else if (key == "t_lta") base.t_lta = *v;
        else if (key == "threshold") base.threshold = *v;
        else if (key == "sample_rate") base.sample_rate = *v;
        else throw InvalidConfig("unknown gate config key: " + key);
    }
    return base;
}

void Manifest::set(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
}
void Manifest::set(const std::string& key, double value) {
    entries.emplace_back(key, format_full(value));
}
void Manifest::set(const std::string& key, std::uint64_t value) {
    entries.emplace_back(key, std::to_string(value));
}

void Manifest::write_ok(const std::string& path) const {
    KvList kv = entries;
    kv.emplace_back("status", "ok");
    write_kv_file(path, kv);
}

void Manifest::write_failed(const std::string& path, const std::string& error) const {
    KvList kv = entries;
    kv.emplace_back("status", "failed");
    kv.emplace_back("error", error);
    write_kv_file(path, kv);
}

void ensure_parent_dir(const std::string& file_path) {
    const fs::path parent = fs::path(file_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

void ensure_dir(const std::string& dir_path) {
    if (!dir_path.empty()) fs::create_directories(dir_path);
}

LabeledMatrix load_poly_matrix(const std::string& path) {
    FeatureTable table = load_features_csv(path);
    if (table.matrix.feature_names == base_feature_names()) {
        LabeledMatrix poly;
        poly.n_cols = kPolyFeatureCount;
        poly.feature_names = poly_feature_names();
        poly.labels = table.matrix.labels;
        poly.participants = table.matrix.participants;
        poly.n_rows = table.matrix.n_rows;
        poly.values.reserve(poly.n_rows * poly.n_cols);
        for (std::size_t r = 0; r < table.matrix.n_rows; ++r) {
            const auto row = poly_expand(table.matrix.row(r));
            poly.values.insert(poly.values.end(), row.begin(), row.end());
        }
        return poly;
    }
    return std::move(table.matrix);
}

std::vector<std::string> list_session_files(const std::string& dir) {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".fgs")
            out.push_back(entry.path().string());
    }
    if (ec) throw IoError("cannot list directory: " + dir + " (" + ec.message() + ")");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace facegate::cli
