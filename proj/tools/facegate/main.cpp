#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "facegate/error.hpp"

using namespace facegate;

namespace {

// 0 success; 1 validation problem (bad flags/config/data shape); 2 I/O or
// file-format problem.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const MalformedRow*>(&e) ||
        dynamic_cast<const TimestampOrderViolation*>(&e) ||
        dynamic_cast<const MissingColumn*>(&e) || dynamic_cast<const InvalidAnnotation*>(&e) ||
        dynamic_cast<const CorruptModel*>(&e) || dynamic_cast<const UnsupportedVersion*>(&e))
        return 2;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "facegate — face-touch detection pipeline: STA/LTA gating, statistical + polynomial "
        "features, random forest, evaluation protocols and streaming replay"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    cli::register_ingest(app);
    cli::register_extract(app);
    cli::register_train(app);
    cli::register_search(app);
    cli::register_eval(app);
    cli::register_sweep_window(app);
    cli::register_sweep_features(app);
    cli::register_pca_study(app);
    cli::register_gate_stats(app);
    cli::register_simulate(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage text
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
