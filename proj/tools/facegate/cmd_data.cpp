// ingest + extract: raw csv logs -> normalized sessions -> feature table.

#include <filesystem>
#include <iostream>
#include <memory>
#include <mutex>

#include "cli_common.hpp"
#include "commands.hpp"
#include "facegate/error.hpp"
#include "facegate/feature_io.hpp"
#include "facegate/features.hpp"
#include "facegate/ingest.hpp"
#include "facegate/parallel.hpp"
#include "facegate/session_io.hpp"
#include "facegate/textio.hpp"

namespace fs = std::filesystem;

namespace facegate::cli {

void register_ingest(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "ingest", "Parse sensor CSV logs + annotations into normalized session files");
    auto opts = std::make_shared<CommonOpts>();
    auto sensors = std::make_shared<std::string>();
    auto annotations = std::make_shared<std::string>();
    auto mapping_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto trim_margin = std::make_shared<double>(2.5);

    cmd->add_option("--sensors", *sensors, "Directory of raw sensor CSV files (<session_id>.csv)")
        ->required();
    cmd->add_option("--annotations", *annotations, "Annotation CSV file")->required();
    cmd->add_option("--mapping", *mapping_path, "Column mapping file")->required();
    cmd->add_option("--out", *out_dir, "Output directory for .fgs session files")->required();
    cmd->add_option("--trim", *trim_margin, "Seconds discarded from each session edge (0 disables)")
        ->capture_default_str();
    add_common(cmd, *opts);

    cmd->callback([=] {
        if (*trim_margin < 0.0) throw InvalidConfig("--trim must be >= 0");
        ensure_dir(*out_dir);

        Manifest manifest;
        manifest.set("subcommand", "ingest");
        manifest.set("sensors", *sensors);
        manifest.set("annotations", *annotations);
        manifest.set("mapping", *mapping_path);
        manifest.set("out", *out_dir);
        manifest.set("trim", *trim_margin);
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*out_dir) / "manifest.kv").string();

        try {
            const ColumnMapping mapping = load_mapping(*mapping_path);
            const auto records = load_annotations(*annotations);

            std::mutex io_mutex;
            std::size_t written = 0;
            parallel_for(records.size(), opts->threads, [&](std::size_t i) {
                const auto& rec = records[i];
                const std::string sensor_file =
                    (fs::path(*sensors) / (rec.session_id + ".csv")).string();
                std::vector<std::string> warnings;
                Session session = load_session(sensor_file, rec, mapping,
                                               [&](const std::string& w) { warnings.push_back(w); });
                if (*trim_margin > 0.0) session = trim_session(session, *trim_margin);
                save_session(session, rec.session_id,
                             (fs::path(*out_dir) / (rec.session_id + ".fgs")).string());
                std::lock_guard<std::mutex> lock(io_mutex);
                ++written;
                for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
                if (opts->verbose)
                    std::cout << "ingested " << rec.session_id << " (" << session.samples.size()
                              << " samples, " << session.phases.size() << " phases)\n";
            });

            manifest.set("sessions_written", std::uint64_t{written});
            manifest.write_ok(manifest_path);
            std::cout << "ingest: wrote " << written << " session file(s) to " << *out_dir << "\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

void register_extract(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "extract", "Window transition slices and compute the 54 base statistical features");
    auto opts = std::make_shared<CommonOpts>();
    auto sessions_dir = std::make_shared<std::string>();
    auto out_file = std::make_shared<std::string>();
    auto window = std::make_shared<double>(0.4);
    auto poly = std::make_shared<bool>(false);

    cmd->add_option("--sessions", *sessions_dir, "Directory of .fgs session files")->required();
    cmd->add_option("--window", *window, "Window length in seconds")->capture_default_str();
    cmd->add_option("--out", *out_file, "Output features CSV path")->required();
    cmd->add_flag("--poly", *poly, "Materialize all 1540 polynomial columns instead of the 54 base");
    add_common(cmd, *opts);

    cmd->callback([=] {
        if (!(*window > 0.0)) throw InvalidConfig("--window must be positive");

        Manifest manifest;
        manifest.set("subcommand", "extract");
        manifest.set("sessions", *sessions_dir);
        manifest.set("window", *window);
        manifest.set("poly", *poly ? "true" : "false");
        manifest.set("out", *out_file);
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = *out_file + ".manifest.kv";

        try {
            const auto files = list_session_files(*sessions_dir);
            if (files.empty()) throw IoError("no .fgs session files in " + *sessions_dir);

            std::vector<FeatureRow> rows;
            std::size_t n_slices = 0;
            for (const auto& path : files) {
                const LoadedSession loaded = load_session_file(path);
                const Session& s = loaded.session;
                for (const auto& slice : extract_transitions(s)) {
                    ++n_slices;
                    for (const auto& w : segment(slice.samples, slice.label, slice.participant,
                                                 *window, s.sample_rate)) {
                        FeatureRow row;
                        row.participant = w.participant;
                        row.activity = to_token(w.source.activity);
                        row.stance = to_token(w.source.stance);
                        row.label = w.label == Category::FaceTouch ? 1 : 0;
                        const FeatureVector base = base_features(w);
                        if (*poly) row.values = poly_expand(base).v;
                        else row.values.assign(base.v.begin(), base.v.end());
                        rows.push_back(std::move(row));
                    }
                }
            }
            save_features_csv(*out_file, rows, *poly ? poly_feature_names() : base_feature_names());

            manifest.set("sessions_read", std::uint64_t{files.size()});
            manifest.set("transition_slices", std::uint64_t{n_slices});
            manifest.set("windows", std::uint64_t{rows.size()});
            manifest.write_ok(manifest_path);
            std::cout << "extract: " << rows.size() << " windows from " << n_slices
                      << " transition slices across " << files.size() << " sessions -> "
                      << *out_file << "\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

}  // namespace facegate::cli
