// eval + sweep-window + sweep-features + pca-study: the evaluation protocols.

#include <filesystem>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "commands.hpp"
#include "facegate/error.hpp"
#include "facegate/eval.hpp"
#include "facegate/feature_io.hpp"
#include "facegate/features.hpp"
#include "facegate/session_io.hpp"
#include "facegate/textio.hpp"

namespace fs = std::filesystem;

namespace facegate::cli {

namespace {

std::string report_text(const EvalReport& r, const std::string& mode) {
    std::string out;
    out += "mode: " + mode + "\n";
    out += "config: " + r.config.to_string() + "\n";
    out += "features used: " +
           (r.feature_subset.empty() ? std::string("all") : std::to_string(r.feature_subset.size())) +
           "\n";
    out += "accuracy: " + format_g(r.accuracy, 6) + "\n";
    out += "fpr: " + format_g(r.fpr, 6) + "\n";
    out += "fnr: " + format_g(r.fnr, 6) + "\n";
    out += "confusion (positive = face touch):\n";
    out += "  tp=" + std::to_string(r.cm.tp) + " fn=" + std::to_string(r.cm.fn) + "\n";
    out += "  fp=" + std::to_string(r.cm.fp) + " tn=" + std::to_string(r.cm.tn) + "\n";
    if (!r.per_participant.empty()) {
        out += "per participant:\n";
        for (const auto& fold : r.per_participant)
            out += "  " + fold.participant + ": accuracy " + format_g(fold.accuracy, 6) + " over " +
                   std::to_string(fold.test_rows) + " rows\n";
    }
    return out;
}

KvList report_kv(const EvalReport& r, const std::string& mode) {
    KvList kv;
    kv.emplace_back("mode", mode);
    kv.emplace_back("accuracy", format_full(r.accuracy));
    kv.emplace_back("fpr", format_full(r.fpr));
    kv.emplace_back("fnr", format_full(r.fnr));
    kv.emplace_back("tp", std::to_string(r.cm.tp));
    kv.emplace_back("fp", std::to_string(r.cm.fp));
    kv.emplace_back("tn", std::to_string(r.cm.tn));
    kv.emplace_back("fn", std::to_string(r.cm.fn));
    kv.emplace_back("test_rows", std::to_string(r.cm.total()));
    kv.emplace_back("features_used",
                    r.feature_subset.empty() ? "all" : std::to_string(r.feature_subset.size()));
    return kv;
}

}  // namespace

void register_eval(CLI::App& app) {
    auto cmd = app.add_subcommand("eval", "Train-test-split or leave-one-participant-out evaluation");
    auto opts = std::make_shared<CommonOpts>();
    auto forest_opts = std::make_shared<ForestOpts>();
    auto features_path = std::make_shared<std::string>();
    auto report_dir = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("split");
    auto top_k = std::make_shared<std::size_t>(0);
    auto test_fraction = std::make_shared<double>(0.2);

    cmd->add_option("--features", *features_path, "Features CSV")->required();
    cmd->add_option("--mode", *mode, "split or loo")
        ->check(CLI::IsMember({"split", "loo"}))
        ->capture_default_str();
    cmd->add_option("--top-k", *top_k, "Evaluate on the k most important features (0 = all)")
        ->capture_default_str();
    cmd->add_option("--test-fraction", *test_fraction, "Held-out fraction for split mode")
        ->capture_default_str();
    cmd->add_option("--report", *report_dir, "Report output directory")->required();
    forest_opts->add_to(cmd, "--model-config");
    add_common(cmd, *opts);

    cmd->callback([=] {
        const ForestConfig cfg = forest_opts->resolve(opts->seed);
        if (!(*test_fraction > 0.0) || !(*test_fraction < 1.0))
            throw InvalidConfig("--test-fraction must lie strictly between 0 and 1");

        ensure_dir(*report_dir);
        Manifest manifest;
        manifest.set("subcommand", "eval");
        manifest.set("features", *features_path);
        manifest.set("mode", *mode);
        manifest.set("top_k", std::uint64_t{*top_k});
        manifest.set("test_fraction", *test_fraction);
        manifest.set("report", *report_dir);
        manifest.set("config", cfg.to_string());
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*report_dir) / "manifest.kv").string();

        try {
            const LabeledMatrix data = load_poly_matrix(*features_path);

            // Feature subset: ranked by a full-feature forest. Split mode
            // ranks on the training rows only; leave-one-out ranks on all
            // rows (the subset is an input to the protocol, not per-fold).
            std::vector<std::size_t> subset;
            if (*top_k > 0 && *top_k < data.n_cols) {
                LabeledMatrix rank_data = data;
                if (*mode == "split") {
                    const SplitIndices idx =
                        split_train_test(data, *test_fraction, RngSeed{opts->seed});
                    rank_data = data.select_rows(idx.train);
                }
                const Forest ranker = train_forest(rank_data, cfg, opts->threads);
                subset = top_k_columns(rank_by_importance(ranker.importances), *top_k);
            }

            const EvalReport report =
                *mode == "split"
                    ? eval_split(data, cfg, *test_fraction, RngSeed{opts->seed}, subset,
                                 opts->threads)
                    : leave_one_out(data, cfg, subset, opts->threads);

            write_text_file((fs::path(*report_dir) / "report.txt").string(),
                            report_text(report, *mode));
            write_kv_file((fs::path(*report_dir) / "report.kv").string(), report_kv(report, *mode));
            {
                std::string csv = "truth\\prediction,face,no_face\n";
                csv += "face," + std::to_string(report.cm.tp) + "," + std::to_string(report.cm.fn) +
                       "\n";
                csv += "no_face," + std::to_string(report.cm.fp) + "," +
                       std::to_string(report.cm.tn) + "\n";
                write_text_file((fs::path(*report_dir) / "confusion.csv").string(), csv);
            }
            if (!report.per_participant.empty()) {
                std::string csv = "participant,accuracy,test_rows,tp,fp,tn,fn\n";
                for (const auto& fold : report.per_participant)
                    csv += fold.participant + "," + format_full(fold.accuracy) + "," +
                           std::to_string(fold.test_rows) + "," + std::to_string(fold.cm.tp) + "," +
                           std::to_string(fold.cm.fp) + "," + std::to_string(fold.cm.tn) + "," +
                           std::to_string(fold.cm.fn) + "\n";
                write_text_file((fs::path(*report_dir) / "per_participant.csv").string(), csv);
            }

            manifest.write_ok(manifest_path);
            std::cout << report_text(report, *mode);
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

void register_sweep_window(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "sweep-window", "Re-segment, retrain and score across window sizes (plot-ready table)");
    auto opts = std::make_shared<CommonOpts>();
    auto forest_opts = std::make_shared<ForestOpts>();
    auto sessions_dir = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto sizes = std::make_shared<std::vector<double>>();
    auto test_fraction = std::make_shared<double>(0.2);

    cmd->add_option("--sessions", *sessions_dir, "Directory of .fgs session files")->required();
    cmd->add_option("--sizes", *sizes, "Window sizes in seconds")
        ->delimiter(',')
        ->default_val(std::vector<double>{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8})
        ->capture_default_str();
    cmd->add_option("--test-fraction", *test_fraction, "Held-out fraction")->capture_default_str();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    forest_opts->add_to(cmd, "--model-config");
    add_common(cmd, *opts);

    cmd->callback([=] {
        const ForestConfig cfg = forest_opts->resolve(opts->seed);
        for (double s : *sizes)
            if (!(s > 0.0)) throw InvalidConfig("--sizes entries must be positive");

        ensure_dir(*out_dir);
        Manifest manifest;
        manifest.set("subcommand", "sweep-window");
        manifest.set("sessions", *sessions_dir);
        {
            std::string list;
            for (double s : *sizes) list += (list.empty() ? "" : ",") + format_g(s, 17);
            manifest.set("sizes", list);
        }
        manifest.set("test_fraction", *test_fraction);
        manifest.set("out", *out_dir);
        manifest.set("config", cfg.to_string());
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*out_dir) / "manifest.kv").string();

        try {
            std::vector<Session> sessions;
            for (const auto& path : list_session_files(*sessions_dir))
                sessions.push_back(load_session_file(path).session);
            if (sessions.empty()) throw IoError("no .fgs session files in " + *sessions_dir);

            const auto rows = sweep_window_size(sessions, *sizes, cfg, *test_fraction,
                                                RngSeed{opts->seed}, opts->threads);

            std::string csv = "window_seconds,accuracy\n";
            for (const auto& row : rows)
                csv += format_g(row.window_seconds, 17) + "," + format_full(row.accuracy) + "\n";
            write_text_file((fs::path(*out_dir) / "window_sweep.csv").string(), csv);

            manifest.write_ok(manifest_path);
            for (const auto& row : rows)
                std::cout << "window " << format_g(row.window_seconds, 3) << " s: accuracy "
                          << format_g(row.accuracy, 4) << " (" << row.n_windows << " windows)\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

void register_sweep_features(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "sweep-features",
        "Retrain on importance-ranked feature prefixes and pick the elbow (plot-ready table)");
    auto opts = std::make_shared<CommonOpts>();
    auto forest_opts = std::make_shared<ForestOpts>();
    auto features_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto step = std::make_shared<std::size_t>(10);
    auto test_fraction = std::make_shared<double>(0.2);

    cmd->add_option("--features", *features_path, "Features CSV")->required();
    cmd->add_option("--step", *step, "Prefix size increment")->capture_default_str();
    cmd->add_option("--test-fraction", *test_fraction, "Held-out fraction")->capture_default_str();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    forest_opts->add_to(cmd, "--model-config");
    add_common(cmd, *opts);

    cmd->callback([=] {
        const ForestConfig cfg = forest_opts->resolve(opts->seed);
        if (*step < 1) throw InvalidConfig("--step must be >= 1");

        ensure_dir(*out_dir);
        Manifest manifest;
        manifest.set("subcommand", "sweep-features");
        manifest.set("features", *features_path);
        manifest.set("step", std::uint64_t{*step});
        manifest.set("test_fraction", *test_fraction);
        manifest.set("out", *out_dir);
        manifest.set("config", cfg.to_string());
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*out_dir) / "manifest.kv").string();

        try {
            const LabeledMatrix data = load_poly_matrix(*features_path);

            // Rank on the training portion of the shared split.
            const SplitIndices idx = split_train_test(data, *test_fraction, RngSeed{opts->seed});
            const Forest ranker = train_forest(data.select_rows(idx.train), cfg, opts->threads);

            const FeatureSweepResult sweep = sweep_feature_count(
                data, ranker.importances, cfg, *test_fraction, RngSeed{opts->seed}, *step,
                opts->threads);

            std::string csv = "k,accuracy\n";
            for (const auto& row : sweep.rows)
                csv += std::to_string(row.k) + "," + format_full(row.accuracy) + "\n";
            write_text_file((fs::path(*out_dir) / "feature_sweep.csv").string(), csv);

            double max_acc = 0.0;
            for (const auto& row : sweep.rows) max_acc = std::max(max_acc, row.accuracy);
            KvList elbow;
            elbow.emplace_back("elbow_k", std::to_string(sweep.elbow_k));
            elbow.emplace_back("elbow_accuracy", format_full(sweep.elbow_accuracy));
            elbow.emplace_back("max_accuracy", format_full(max_acc));
            write_kv_file((fs::path(*out_dir) / "elbow.kv").string(), elbow);

            manifest.write_ok(manifest_path);
            std::cout << "sweep-features: elbow at k=" << sweep.elbow_k << " (accuracy "
                      << format_g(sweep.elbow_accuracy, 4) << ", max " << format_g(max_acc, 4)
                      << ")\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

void register_pca_study(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "pca-study",
        "First-principal-component variance share over growing participant prefixes");
    auto opts = std::make_shared<CommonOpts>();
    auto features_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    auto top_k = std::make_shared<std::size_t>(340);
    auto use_poly = std::make_shared<bool>(false);

    cmd->add_option("--features", *features_path, "Features CSV")->required();
    cmd->add_option("--model", *model_path,
                    "Model whose importances select the studied columns (with --top-k)");
    cmd->add_option("--top-k", *top_k, "Columns to keep when --model is given")
        ->capture_default_str();
    cmd->add_flag("--poly", *use_poly, "Expand to 1540 poly features when no model is given");
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    add_common(cmd, *opts);

    cmd->callback([=] {
        ensure_dir(*out_dir);
        Manifest manifest;
        manifest.set("subcommand", "pca-study");
        manifest.set("features", *features_path);
        manifest.set("model", model_path->empty() ? "none" : *model_path);
        manifest.set("top_k", std::uint64_t{*top_k});
        manifest.set("poly", *use_poly ? "true" : "false");
        manifest.set("out", *out_dir);
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*out_dir) / "manifest.kv").string();

        try {
            LabeledMatrix data;
            if (!model_path->empty()) {
                data = load_poly_matrix(*features_path);
                const Forest model = load_model(*model_path);
                if (model.importances.size() != data.n_cols)
                    throw DimensionMismatch("model importances do not match the feature table");
                data = data.select_columns(
                    top_k_columns(rank_by_importance(model.importances), *top_k));
            } else if (*use_poly) {
                data = load_poly_matrix(*features_path);
            } else {
                data = load_features_csv(*features_path).matrix;
            }

            const PcaStudy study = pca_first_component_variance(data);
            for (const auto& w : study.warnings) std::cerr << "warning: " << w << "\n";

            std::string csv = "participants,first_pc_variance_pct\n";
            for (const auto& row : study.rows)
                csv += std::to_string(row.participants) + "," +
                       format_full(100.0 * row.first_component_share) + "\n";
            write_text_file((fs::path(*out_dir) / "pca_variance.csv").string(), csv);

            manifest.set("columns_studied", std::uint64_t{data.n_cols});
            manifest.write_ok(manifest_path);
            for (const auto& row : study.rows)
                std::cout << row.participants << " participant(s): first component "
                          << format_g(100.0 * row.first_component_share, 4) << "% of variance\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

}  // namespace facegate::cli
