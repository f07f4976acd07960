#include <sstream>

#include "facegate/error.hpp"
#include "facegate/forest.hpp"
#include "facegate/textio.hpp"

namespace facegate {

namespace {

constexpr const char* kMagicPrefix = "facegate-model v";
constexpr int kVersion = 1;

ForestConfig parse_config_echo(const std::string& line) {
    ForestConfig cfg;
    for (const auto& tok : split_ws(line)) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw CorruptModel("bad config token: " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "n_trees" || key == "max_depth" || key == "min_samples_leaf" ||
            key == "min_samples_split" || key == "seed") {
            const auto v = parse_int(val);
            if (!v || *v < 0) throw CorruptModel("bad config value: " + tok);
            if (key == "n_trees") cfg.n_trees = static_cast<std::size_t>(*v);
            else if (key == "max_depth") cfg.max_depth = static_cast<std::size_t>(*v);
            else if (key == "min_samples_leaf") cfg.min_samples_leaf = static_cast<std::size_t>(*v);
            else if (key == "min_samples_split") cfg.min_samples_split = static_cast<std::size_t>(*v);
            else cfg.seed.seed = static_cast<std::uint64_t>(*v);
        } else if (key == "bootstrap") {
            cfg.bootstrap = val == "true";
        } else if (key == "max_features") {
            try {
                cfg.max_features = MaxFeatures::from_string(val);
            } catch (const InvalidConfig& e) {
                throw CorruptModel(e.what());
            }
        } else {
            throw CorruptModel("unknown config key: " + key);
        }
    }
    return cfg;
}

}  // namespace

std::string serialize_model(const Forest& forest) {
    if (forest.trees.empty()) throw InvalidConfig("cannot save an empty forest (0 trees)");
    if (forest.importances.size() != forest.n_features)
        throw InvalidConfig("importances size does not match feature count");

    std::string out;
    out.reserve(1 << 20);
    out += kMagicPrefix + std::to_string(kVersion) + "\n";
    out += "n_features " + std::to_string(forest.n_features) + "\n";
    out += "classes no_face face\n";
    out += "config " + forest.config.to_string() + "\n";

    if (forest.feature_indices.empty()) {
        out += "feature_map identity\n";
    } else {
        out += "feature_map";
        for (std::size_t i : forest.feature_indices) out += " " + std::to_string(i);
        out += "\n";
    }

    out += "feature_names " + std::to_string(forest.feature_names.size()) + "\n";
    for (const auto& name : forest.feature_names) out += name + "\n";

    out += "importances " + std::to_string(forest.importances.size()) + "\n";
    for (std::size_t i = 0; i < forest.importances.size(); ++i) {
        if (i) out += ' ';
        out += format_full(forest.importances[i]);
    }
    out += "\n";

    out += "trees " + std::to_string(forest.trees.size()) + "\n";
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const auto& tree = forest.trees[t];
        out += "tree " + std::to_string(t) + " nodes " + std::to_string(tree.nodes.size()) + "\n";
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) {
                out += "l " + std::to_string(node.counts[0]) + " " +
                       std::to_string(node.counts[1]) + "\n";
            } else {
                out += "i " + std::to_string(node.feature) + " " + format_full(node.threshold) +
                       " " + std::to_string(node.left) + " " + std::to_string(node.right) + "\n";
            }
        }
    }
    out += "end\n";
    out += "checksum " + to_hex(fnv1a64(out)) + "\n";
    return out;
}

Forest parse_model(const std::string& text) {
    // The checksum line covers every byte through "end\n".
    const std::string end_marker = "end\nchecksum ";
    const std::size_t end_pos = text.rfind(end_marker);
    if (end_pos == std::string::npos) throw CorruptModel("missing end/checksum trailer (truncated file?)");
    const std::size_t payload_len = end_pos + 4;  // through "end\n"
    const std::string stated = std::string(trim(text.substr(end_pos + end_marker.size())));
    if (stated != to_hex(fnv1a64(std::string_view(text).substr(0, payload_len))))
        throw CorruptModel("checksum mismatch");

    std::istringstream in(text.substr(0, payload_len));
    std::string line;
    auto next_line = [&](const char* what) -> const std::string& {
        if (!std::getline(in, line)) throw CorruptModel(std::string("truncated model: expected ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto expect_kv = [&](const char* key) -> std::string {
        const std::string& l = next_line(key);
        const std::string prefix = std::string(key) + " ";
        if (l.rfind(prefix, 0) != 0)
            throw CorruptModel(std::string("expected '") + key + "' line, got: " + l);
        return l.substr(prefix.size());
    };
    auto expect_count = [&](const char* key) -> std::size_t {
        const auto v = parse_int(expect_kv(key));
        if (!v || *v < 0) throw CorruptModel(std::string("bad count for ") + key);
        return static_cast<std::size_t>(*v);
    };

    {
        const std::string& magic = next_line("magic");
        if (magic.rfind(kMagicPrefix, 0) != 0) throw CorruptModel("not a facegate model file");
        const auto v = parse_int(magic.substr(std::string(kMagicPrefix).size()));
        if (!v || *v != kVersion)
            throw UnsupportedVersion("model file version " + magic.substr(std::string(kMagicPrefix).size()) +
                                     " not supported (expected " + std::to_string(kVersion) + ")");
    }

    Forest forest;
    forest.n_features = expect_count("n_features");
    if (expect_kv("classes") != "no_face face") throw CorruptModel("unexpected class table");
    forest.config = parse_config_echo(expect_kv("config"));

    {
        const std::string map = expect_kv("feature_map");
        if (map != "identity") {
            for (const auto& tok : split_ws(map)) {
                const auto v = parse_int(tok);
                if (!v || *v < 0) throw CorruptModel("bad feature_map entry: " + tok);
                forest.feature_indices.push_back(static_cast<std::size_t>(*v));
            }
            if (forest.feature_indices.size() != forest.n_features)
                throw CorruptModel("feature_map length does not match n_features");
        }
    }

    const std::size_t n_names = expect_count("feature_names");
    forest.feature_names.reserve(n_names);
    for (std::size_t i = 0; i < n_names; ++i) forest.feature_names.push_back(next_line("feature name"));

    const std::size_t n_imp = expect_count("importances");
    if (n_imp != forest.n_features) throw CorruptModel("importances count mismatch");
    {
        const auto toks = split_ws(next_line("importances row"));
        if (toks.size() != n_imp) throw CorruptModel("importances row length mismatch");
        forest.importances.reserve(n_imp);
        for (const auto& tok : toks) {
            const auto v = parse_double(tok);
            if (!v) throw CorruptModel("bad importance value: " + tok);
            forest.importances.push_back(*v);
        }
    }

    const std::size_t n_trees = expect_count("trees");
    if (n_trees == 0) throw CorruptModel("model has no trees");
    forest.trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        const auto header = split_ws(expect_kv("tree"));
        if (header.size() != 3 || header[1] != "nodes") throw CorruptModel("bad tree header");
        const auto tree_idx = parse_int(header[0]);
        const auto n_nodes = parse_int(header[2]);
        if (!tree_idx || static_cast<std::size_t>(*tree_idx) != t || !n_nodes || *n_nodes < 1)
            throw CorruptModel("bad tree header");
        Tree tree;
        tree.nodes.reserve(static_cast<std::size_t>(*n_nodes));
        for (long long n = 0; n < *n_nodes; ++n) {
            const auto toks = split_ws(next_line("node row"));
            TreeNode node;
            if (!toks.empty() && toks[0] == "l" && toks.size() == 3) {
                const auto c0 = parse_int(toks[1]);
                const auto c1 = parse_int(toks[2]);
                if (!c0 || !c1 || *c0 < 0 || *c1 < 0) throw CorruptModel("bad leaf row");
                node.counts = {static_cast<std::uint64_t>(*c0), static_cast<std::uint64_t>(*c1)};
            } else if (!toks.empty() && toks[0] == "i" && toks.size() == 5) {
                const auto feat = parse_int(toks[1]);
                const auto thr = parse_double(toks[2]);
                const auto left = parse_int(toks[3]);
                const auto right = parse_int(toks[4]);
                if (!feat || !thr || !left || !right || *feat < 0 ||
                    static_cast<std::size_t>(*feat) >= forest.n_features || *left < 1 ||
                    *right < 1 || *left >= *n_nodes || *right >= *n_nodes)
                    throw CorruptModel("bad internal node row");
                node.feature = static_cast<std::int32_t>(*feat);
                node.threshold = *thr;
                node.left = static_cast<std::int32_t>(*left);
                node.right = static_cast<std::int32_t>(*right);
            } else {
                throw CorruptModel("unrecognized node row");
            }
            tree.nodes.push_back(node);
        }
        forest.trees.push_back(std::move(tree));
    }
    if (next_line("end") != "end") throw CorruptModel("missing end marker");
    return forest;
}

void save_model(const Forest& forest, const std::string& path) {
    write_text_file(path, serialize_model(forest));
}

Forest load_model(const std::string& path) {
    return parse_model(read_text_file(path));
}

}  // namespace facegate
