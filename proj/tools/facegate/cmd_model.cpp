// train + search: forest fitting and randomized hyperparameter search.

#include <filesystem>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "commands.hpp"
#include "facegate/error.hpp"
#include "facegate/eval.hpp"
#include "facegate/parallel.hpp"
#include "facegate/textio.hpp"

namespace fs = std::filesystem;

namespace facegate::cli {

namespace {

SearchSpace space_from_kv(const KvList& kv, SearchSpace base) {
    auto parse_size_list = [](const std::string& val, const std::string& key) {
        std::vector<std::size_t> out;
        for (const auto& tok : split(val, ',')) {
            const auto v = parse_int(trim(tok));
            if (!v || *v < 0) throw InvalidConfig("bad " + key + " entry: " + tok);
            out.push_back(static_cast<std::size_t>(*v));
        }
        if (out.empty()) throw InvalidConfig(key + " list is empty");
        return out;
    };
    for (const auto& [key, val] : kv) {
        if (key == "n_trees") base.n_trees = parse_size_list(val, key);
        else if (key == "max_depth") base.max_depth = parse_size_list(val, key);
        else if (key == "min_samples_leaf") base.min_samples_leaf = parse_size_list(val, key);
        else if (key == "min_samples_split") base.min_samples_split = parse_size_list(val, key);
        else if (key == "bootstrap") {
            base.bootstrap.clear();
            for (const auto& tok : split(val, ','))
                base.bootstrap.push_back(trim(tok) == "true" || trim(tok) == "1");
        } else if (key == "max_features") {
            base.max_features.clear();
            for (const auto& tok : split(val, ','))
                base.max_features.push_back(MaxFeatures::from_string(std::string(trim(tok))));
        } else {
            throw InvalidConfig("unknown search space key: " + key);
        }
    }
    return base;
}

}  // namespace

void register_train(CLI::App& app) {
    auto cmd = app.add_subcommand("train", "Train a random forest on a feature table");
    auto opts = std::make_shared<CommonOpts>();
    auto forest_opts = std::make_shared<ForestOpts>();
    auto features_path = std::make_shared<std::string>();
    auto out_file = std::make_shared<std::string>();
    auto top_k = std::make_shared<std::size_t>(0);

    cmd->add_option("--features", *features_path, "Features CSV (base 54 or --poly output)")
        ->required();
    cmd->add_option("--out", *out_file, "Output model path (.fgm)")->required();
    cmd->add_option("--top-k", *top_k,
                    "Keep only the k most important features (0 = all 1540): trains a full "
                    "forest for ranking, then retrains on the subset")
        ->capture_default_str();
    forest_opts->add_to(cmd, "--config");
    add_common(cmd, *opts);

    cmd->callback([=] {
        const ForestConfig cfg = forest_opts->resolve(opts->seed);

        Manifest manifest;
        manifest.set("subcommand", "train");
        manifest.set("features", *features_path);
        manifest.set("out", *out_file);
        manifest.set("top_k", std::uint64_t{*top_k});
        manifest.set("config", cfg.to_string());
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = *out_file + ".manifest.kv";

        try {
            const LabeledMatrix data = load_poly_matrix(*features_path);
            const unsigned threads = opts->threads;

            Forest forest = train_forest(data, cfg, threads);
            if (*top_k > 0 && *top_k < data.n_cols) {
                const auto subset = top_k_columns(rank_by_importance(forest.importances), *top_k);
                forest = train_forest(data.select_columns(subset), cfg, threads);
                forest.feature_indices = subset;
            }

            std::size_t correct = 0;
            const LabeledMatrix scored =
                forest.feature_indices.empty() ? data : data.select_columns(forest.feature_indices);
            for (std::size_t r = 0; r < scored.n_rows; ++r)
                if (predict(forest, scored.row(r)).label == scored.labels[r]) ++correct;

            save_model(forest, *out_file);
            manifest.set("rows", std::uint64_t{data.n_rows});
            manifest.set("features_used", std::uint64_t{forest.n_features});
            manifest.set("training_accuracy",
                         static_cast<double>(correct) / static_cast<double>(data.n_rows));
            manifest.write_ok(manifest_path);
            std::cout << "train: " << data.n_rows << " rows, " << forest.n_features
                      << " features -> " << *out_file << " (training accuracy "
                      << format_g(static_cast<double>(correct) / static_cast<double>(data.n_rows), 4)
                      << ")\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

void register_search(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "search", "Randomized hyperparameter search with stratified k-fold cross-validation");
    auto opts = std::make_shared<CommonOpts>();
    auto features_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto space_path = std::make_shared<std::string>();
    auto draws = std::make_shared<std::size_t>(25);
    auto folds = std::make_shared<std::size_t>(5);

    cmd->add_option("--features", *features_path, "Features CSV")->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    cmd->add_option("--draws", *draws, "Configurations sampled from the space")
        ->capture_default_str();
    cmd->add_option("--folds", *folds, "Cross-validation folds")->capture_default_str();
    cmd->add_option("--space", *space_path,
                    "key=value file with comma-separated candidate lists per hyperparameter");
    add_common(cmd, *opts);

    cmd->callback([=] {
        SearchSpace space;
        if (!space_path->empty())
            space = space_from_kv(parse_kv(read_text_file(*space_path)), space);
        space.n_draws = *draws;
        space.folds = *folds;
        space.seed = RngSeed{opts->seed};
        space.validate();

        ensure_dir(*out_dir);
        Manifest manifest;
        manifest.set("subcommand", "search");
        manifest.set("features", *features_path);
        manifest.set("out", *out_dir);
        manifest.set("draws", std::uint64_t{*draws});
        manifest.set("folds", std::uint64_t{*folds});
        manifest.set("space", space_path->empty() ? "default" : *space_path);
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*out_dir) / "manifest.kv").string();

        try {
            const LabeledMatrix data = load_poly_matrix(*features_path);
            const SearchResult result = randomized_search(data, space, opts->threads);

            std::string csv =
                "draw,n_trees,max_depth,min_samples_leaf,min_samples_split,bootstrap,"
                "max_features,mean_accuracy,std_accuracy\n";
            for (std::size_t d = 0; d < result.table.size(); ++d) {
                const auto& row = result.table[d];
                csv += std::to_string(d) + "," + std::to_string(row.config.n_trees) + "," +
                       std::to_string(row.config.max_depth) + "," +
                       std::to_string(row.config.min_samples_leaf) + "," +
                       std::to_string(row.config.min_samples_split) + "," +
                       (row.config.bootstrap ? "true" : "false") + "," +
                       row.config.max_features.to_string() + "," + format_full(row.mean_accuracy) +
                       "," + format_full(row.std_accuracy) + "\n";
            }
            write_text_file((fs::path(*out_dir) / "cv_table.csv").string(), csv);

            KvList best;
            best.emplace_back("n_trees", std::to_string(result.best.n_trees));
            best.emplace_back("max_depth", std::to_string(result.best.max_depth));
            best.emplace_back("min_samples_leaf", std::to_string(result.best.min_samples_leaf));
            best.emplace_back("min_samples_split", std::to_string(result.best.min_samples_split));
            best.emplace_back("bootstrap", result.best.bootstrap ? "true" : "false");
            best.emplace_back("max_features", result.best.max_features.to_string());
            write_kv_file((fs::path(*out_dir) / "best_config.kv").string(), best);

            manifest.write_ok(manifest_path);
            double best_mean = 0.0;
            for (const auto& row : result.table)
                if (row.config.to_string() == result.best.to_string())
                    best_mean = std::max(best_mean, row.mean_accuracy);
            std::cout << "search: best of " << result.table.size() << " draws -> "
                      << result.best.to_string() << " (cv mean accuracy "
                      << format_g(best_mean, 4) << ")\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

}  // namespace facegate::cli
