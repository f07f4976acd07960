#pragma once

#include <CLI11.hpp>

namespace facegate::cli {

// Each registration wires one subcommand onto the app; the callback runs the
// whole command and may throw facegate errors (mapped to exit codes in main).
void register_ingest(CLI::App& app);
void register_extract(CLI::App& app);
void register_train(CLI::App& app);
void register_search(CLI::App& app);
void register_eval(CLI::App& app);
void register_sweep_window(CLI::App& app);
void register_sweep_features(CLI::App& app);
void register_pca_study(CLI::App& app);
void register_gate_stats(CLI::App& app);
void register_simulate(CLI::App& app);

}  // namespace facegate::cli
