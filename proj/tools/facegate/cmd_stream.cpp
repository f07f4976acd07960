// gate-stats + simulate: the streaming side.

#include <filesystem>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "commands.hpp"
#include "facegate/error.hpp"
#include "facegate/pipeline.hpp"
#include "facegate/session_io.hpp"
#include "facegate/textio.hpp"

namespace fs = std::filesystem;

namespace facegate::cli {

void register_gate_stats(CLI::App& app) {
    auto cmd = app.add_subcommand("gate-stats",
                                  "Replay a session through the STA/LTA gate and report duty cycle");
    auto opts = std::make_shared<CommonOpts>();
    auto gate_opts = std::make_shared<GateOpts>();
    auto session_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();

    cmd->add_option("--session", *session_path, "Session file (.fgs)")->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    gate_opts->add_to(cmd, "--gate-config");
    add_common(cmd, *opts);

    cmd->callback([=] {
        const GateConfig cfg = gate_opts->resolve();

        ensure_dir(*out_dir);
        Manifest manifest;
        manifest.set("subcommand", "gate-stats");
        manifest.set("session", *session_path);
        manifest.set("out", *out_dir);
        manifest.set("t_sta", cfg.t_sta);
        manifest.set("t_lta", cfg.t_lta);
        manifest.set("threshold", cfg.threshold);
        manifest.set("sample_rate", cfg.sample_rate);
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*out_dir) / "manifest.kv").string();

        try {
            const LoadedSession loaded = load_session_file(*session_path);
            const auto result = gate_stream(loaded.session.samples, cfg);
            const auto& rep = result.report;

            KvList kv;
            kv.emplace_back("total_samples", std::to_string(rep.total_samples));
            kv.emplace_back("passed_samples", std::to_string(rep.passed_samples));
            kv.emplace_back("pass_fraction", format_full(rep.pass_fraction));
            kv.emplace_back("warmup_samples", std::to_string(rep.warmup_samples));
            kv.emplace_back("t_sta", format_full(cfg.t_sta));
            kv.emplace_back("t_lta", format_full(cfg.t_lta));
            kv.emplace_back("threshold", format_full(cfg.threshold));
            kv.emplace_back("sample_rate", format_full(cfg.sample_rate));
            write_kv_file((fs::path(*out_dir) / "gate_report.kv").string(), kv);

            manifest.write_ok(manifest_path);
            std::cout << "gate-stats: " << rep.passed_samples << " of " << rep.total_samples
                      << " samples pass (duty cycle " << format_g(rep.pass_fraction, 4)
                      << "), warm-up " << rep.warmup_samples << " samples\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

void register_simulate(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "simulate", "Stream a recorded or synthetic trace through gate -> features -> forest");
    auto opts = std::make_shared<CommonOpts>();
    auto gate_opts = std::make_shared<GateOpts>();
    auto trace_path = std::make_shared<std::string>();
    auto synth_path = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    auto report_dir = std::make_shared<std::string>();
    auto window = std::make_shared<double>(0.4);

    auto* trace_opt = cmd->add_option("--trace", *trace_path, "Recorded trace: session file (.fgs)");
    auto* synth_opt = cmd->add_option("--synth", *synth_path, "Synthetic trace spec file");
    trace_opt->excludes(synth_opt);
    cmd->add_option("--model", *model_path, "Trained model (.fgm)")->required();
    cmd->add_option("--window", *window, "Classification window, seconds")->capture_default_str();
    cmd->add_option("--report", *report_dir, "Report output directory")->required();
    gate_opts->add_to(cmd, "--gate-config");
    add_common(cmd, *opts);

    cmd->callback([=] {
        const GateConfig cfg = gate_opts->resolve();
        if (trace_path->empty() == synth_path->empty())
            throw InvalidConfig("exactly one of --trace or --synth is required");
        if (!(*window > 0.0)) throw InvalidConfig("--window must be positive");

        ensure_dir(*report_dir);
        Manifest manifest;
        manifest.set("subcommand", "simulate");
        manifest.set("trace", trace_path->empty() ? "synth:" + *synth_path : *trace_path);
        manifest.set("model", *model_path);
        manifest.set("window", *window);
        manifest.set("report", *report_dir);
        manifest.set("t_sta", cfg.t_sta);
        manifest.set("t_lta", cfg.t_lta);
        manifest.set("threshold", cfg.threshold);
        manifest.set("sample_rate", cfg.sample_rate);
        manifest.set("seed", std::uint64_t{opts->seed});
        const std::string manifest_path = (fs::path(*report_dir) / "manifest.kv").string();

        try {
            std::vector<SensorSample> trace;
            if (!trace_path->empty()) {
                trace = load_session_file(*trace_path).session.samples;
            } else {
                SynthSpec spec = load_synth_spec(*synth_path);
                spec.sample_rate = cfg.sample_rate;
                trace = synth_trace(spec, RngSeed{opts->seed});
            }

            const Forest model = load_model(*model_path);
            const StreamResult result = run_stream(trace, cfg, model, *window);

            // Alert lines on stdout, mirrored into the report file.
            std::string alerts_csv = "t,votes_no_face,votes_face,gate_pass_fraction\n";
            for (const auto& alert : result.alerts) {
                std::cout << "alert t=" << format_g(alert.t, 9) << " verdict=face votes="
                          << alert.votes[0] << "," << alert.votes[1]
                          << " pass_fraction=" << format_g(alert.gate_pass_fraction, 6) << "\n";
                alerts_csv += format_g(alert.t, 17) + "," + std::to_string(alert.votes[0]) + "," +
                              std::to_string(alert.votes[1]) + "," +
                              format_full(alert.gate_pass_fraction) + "\n";
            }
            write_text_file((fs::path(*report_dir) / "alerts.csv").string(), alerts_csv);

            const auto& rep = result.report;
            KvList kv;
            kv.emplace_back("total_samples", std::to_string(rep.total_samples));
            kv.emplace_back("gate_pass_fraction", format_full(rep.gate_pass_fraction));
            kv.emplace_back("windows_classified", std::to_string(rep.windows_classified));
            kv.emplace_back("alerts_emitted", std::to_string(rep.alerts_emitted));
            kv.emplace_back("window_seconds", format_full(*window));
            write_kv_file((fs::path(*report_dir) / "run_report.kv").string(), kv);

            manifest.write_ok(manifest_path);
            // Latency is wall-clock and nondeterministic; console only.
            std::cout << "simulate: " << rep.total_samples << " samples, duty cycle "
                      << format_g(rep.gate_pass_fraction, 4) << ", " << rep.windows_classified
                      << " windows classified, " << rep.alerts_emitted << " alerts\n";
            if (rep.latency.count > 0)
                std::cout << "latency per window: mean " << format_g(rep.latency.mean_us, 4)
                          << " us, max " << format_g(rep.latency.max_us, 4) << " us over "
                          << rep.latency.count << " windows\n";
        } catch (const std::exception& e) {
            manifest.write_failed(manifest_path, e.what());
            throw;
        }
    });
}

}  // namespace facegate::cli
