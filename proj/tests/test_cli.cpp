#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "facegate/ingest.hpp"
#include "facegate/session_io.hpp"
#include "facegate/textio.hpp"
#include "support/synthetic.hpp"

#ifndef FACEGATE_CLI_PATH
#error "FACEGATE_CLI_PATH must point at the facegate binary"
#endif

namespace fs = std::filesystem;
using namespace facegate;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FACEGATE_CLI_PATH) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// Scratch workspace with raw csv logs, annotations and a mapping file built
// from synthetic sessions.
struct Workspace {
    fs::path root;

    explicit Workspace(const std::string& name) {
        root = fs::temp_directory_path() / ("facegate_test_" + name);
        fs::remove_all(root);
        fs::create_directories(root / "sensors");
    }
    ~Workspace() { fs::remove_all(root); }

    std::string path(const std::string& rel) const { return (root / rel).string(); }

    void populate(std::size_t n_participants, std::size_t sessions_per_class) {
        const auto sessions = synth::make_session_set(n_participants, sessions_per_class, 1.1,
                                                      0.45, 20250811);
        ColumnMapping mapping;  // default layout: t,ax,ay,az,gx,gy,gz with header
        std::string annotations = "session_id,participant,activity,stance,phase,start,end\n";
        for (std::size_t i = 0; i < sessions.size(); ++i) {
            const auto& s = sessions[i];
            const std::string id = "sess" + std::to_string(i);
            write_text_file(path("sensors/" + id + ".csv"), write_sensor_csv(s, mapping));
            for (const auto& p : s.phases)
                annotations += id + "," + s.participant + "," + to_token(s.label.activity) + "," +
                               to_token(s.label.stance) + "," + to_token(p.phase) + "," +
                               format_g(p.start, 9) + "," + format_g(p.end, 9) + "\n";
        }
        write_text_file(path("annotations.csv"), annotations);
        write_text_file(path("mapping.kv"),
                        "t 0\nax 1\nay 2\naz 3\ngx 4\ngy 5\ngz 6\ndelimiter comma\nheader true\n");
    }
};

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_CASE("cli end-to-end: ingest -> extract -> train -> eval -> simulate") {
    Workspace ws("e2e");
    ws.populate(3, 1);

    // ingest
    auto r = run_cli("ingest --sensors " + ws.path("sensors") + " --annotations " +
                     ws.path("annotations.csv") + " --mapping " + ws.path("mapping.kv") +
                     " --out " + ws.path("sessions") + " --trim 0.5");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(ws.path("sessions/sess0.fgs")));
    {
        const std::string manifest = slurp(ws.path("sessions/manifest.kv"));
        CHECK(manifest.find("subcommand=ingest") != std::string::npos);
        CHECK(manifest.find("status=ok") != std::string::npos);
    }

    // extract
    r = run_cli("extract --sessions " + ws.path("sessions") + " --window 0.4 --out " +
                ws.path("features.csv"));
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(ws.path("features.csv")));
    {
        std::ifstream in(ws.path("features.csv"));
        std::string header;
        std::getline(in, header);
        CHECK(header.rfind("participant,activity,stance,label,ax_min,", 0) == 0);
    }

    // train (tiny forest so the test stays fast)
    const std::string small = " --n-trees 6 --max-depth 6 --min-samples-leaf 2 "
                              "--min-samples-split 4 --seed 3";
    r = run_cli("train --features " + ws.path("features.csv") + " --out " + ws.path("model.fgm") +
                small);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(ws.path("model.fgm")));
    CHECK(slurp(ws.path("model.fgm.manifest.kv")).find("status=ok") != std::string::npos);

    // eval split
    r = run_cli("eval --mode split --features " + ws.path("features.csv") + " --report " +
                ws.path("report") + small);
    CHECK(r.exit_code == 0);
    {
        const std::string kv = slurp(ws.path("report/report.kv"));
        CHECK(kv.find("mode=split") != std::string::npos);
        CHECK(kv.find("accuracy=") != std::string::npos);
        CHECK(fs::exists(ws.path("report/confusion.csv")));
    }

    // eval loo with a feature subset
    r = run_cli("eval --mode loo --top-k 50 --features " + ws.path("features.csv") +
                " --report " + ws.path("report_loo") + small);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(ws.path("report_loo/per_participant.csv")));

    // gate-stats on one normalized session
    r = run_cli("gate-stats --session " + ws.path("sessions/sess0.fgs") +
                " --t-sta 0.5 --t-lta 5 --threshold 1.5 --out " + ws.path("gate"));
    CHECK(r.exit_code == 0);
    CHECK(slurp(ws.path("gate/gate_report.kv")).find("pass_fraction=") != std::string::npos);

    // simulate on a synthetic trace
    write_text_file(ws.path("trace.spec"),
                    "sample_rate 102.4\nnoise 0.05\nsegment rest 8 1\nsegment burst 1.5 8\n"
                    "segment rest 3 1\n");
    r = run_cli("simulate --synth " + ws.path("trace.spec") + " --model " + ws.path("model.fgm") +
                " --t-sta 0.5 --t-lta 5 --threshold 1.5 --window 0.4 --report " + ws.path("sim"));
    CHECK(r.exit_code == 0);
    {
        const std::string kv = slurp(ws.path("sim/run_report.kv"));
        CHECK(kv.find("windows_classified=") != std::string::npos);
        CHECK(kv.find("gate_pass_fraction=") != std::string::npos);
        // Latency never lands in machine-readable output.
        CHECK(kv.find("latency") == std::string::npos);
        CHECK(fs::exists(ws.path("sim/alerts.csv")));
    }

    // sweep-features (coarse step to stay fast)
    r = run_cli("sweep-features --features " + ws.path("features.csv") + " --step 500 --out " +
                ws.path("sweepf") + small);
    CHECK(r.exit_code == 0);
    CHECK(slurp(ws.path("sweepf/elbow.kv")).find("elbow_k=") != std::string::npos);

    // pca-study over base features
    r = run_cli("pca-study --features " + ws.path("features.csv") + " --out " + ws.path("pca"));
    CHECK(r.exit_code == 0);
    {
        const std::string csv = slurp(ws.path("pca/pca_variance.csv"));
        CHECK(csv.rfind("participants,first_pc_variance_pct", 0) == 0);
    }
}

TEST_CASE("cli determinism: identical runs produce byte-identical machine outputs") {
    Workspace ws("determinism");
    ws.populate(2, 1);

    REQUIRE(run_cli("ingest --sensors " + ws.path("sensors") + " --annotations " +
                    ws.path("annotations.csv") + " --mapping " + ws.path("mapping.kv") +
                    " --out " + ws.path("sessions") + " --trim 0")
                .exit_code == 0);

    const std::string small = " --n-trees 5 --max-depth 5 --min-samples-leaf 2 "
                              "--min-samples-split 4 --seed 11";
    for (const char* tag : {"a", "b"}) {
        const std::string t(tag);
        REQUIRE(run_cli("extract --sessions " + ws.path("sessions") + " --out " +
                        ws.path("features_" + t + ".csv"))
                    .exit_code == 0);
        REQUIRE(run_cli("train --features " + ws.path("features_" + t + ".csv") + " --out " +
                        ws.path("model_" + t + ".fgm") + small + " --threads " +
                        (t == "a" ? "1" : "2"))
                    .exit_code == 0);
        REQUIRE(run_cli("eval --mode split --features " + ws.path("features_" + t + ".csv") +
                        " --report " + ws.path("report_" + t) + small)
                    .exit_code == 0);
    }
    CHECK(slurp(ws.path("features_a.csv")) == slurp(ws.path("features_b.csv")));
    CHECK(slurp(ws.path("model_a.fgm")) == slurp(ws.path("model_b.fgm")));
    CHECK(slurp(ws.path("report_a/report.kv")) == slurp(ws.path("report_b/report.kv")));
    CHECK(slurp(ws.path("report_a/confusion.csv")) == slurp(ws.path("report_b/confusion.csv")));
}

TEST_CASE("cli validation and io exit codes") {
    Workspace ws("exitcodes");

    // Invariant violation names both offending flags and exits 1.
    auto r = run_cli("train --features nowhere.csv --out " + ws.path("m.fgm") +
                     " --min-samples-leaf 15 --min-samples-split 20");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("--min-samples-split") != std::string::npos);
    CHECK(r.output.find("--min-samples-leaf") != std::string::npos);

    // Unknown subcommand: usage text, exit 1.
    r = run_cli("frobnicate");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("Usage") != std::string::npos);

    // Missing input file: exit 2.
    r = run_cli("train --features " + ws.path("missing.csv") + " --out " + ws.path("m.fgm") +
                " --min-samples-leaf 2 --min-samples-split 4");
    CHECK(r.exit_code == 2);

    // Corrupt model file: exit 2.
    write_text_file(ws.path("bad.fgm"), "not a model\n");
    write_text_file(ws.path("trace.spec"), "segment rest 1 1\n");
    r = run_cli("simulate --synth " + ws.path("trace.spec") + " --model " + ws.path("bad.fgm") +
                " --report " + ws.path("simbad"));
    CHECK(r.exit_code == 2);

    // Failed runs leave a failed-status manifest, flagging partial output.
    CHECK(slurp(ws.path("simbad/manifest.kv")).find("status=failed") != std::string::npos);
}

TEST_CASE("help output carries the documented defaults") {
    auto r = run_cli("extract --help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.4") != std::string::npos);  // window default

    r = run_cli("train --help");
    CHECK(r.output.find("150") != std::string::npos);  // n_trees default
    CHECK(r.output.find("sqrt") != std::string::npos); // max_features default

    r = run_cli("gate-stats --help");
    CHECK(r.output.find("0.5") != std::string::npos);  // t_sta default
    CHECK(r.output.find("30") != std::string::npos);   // t_lta default
    CHECK(r.output.find("1.5") != std::string::npos);  // threshold default

    r = run_cli("search --help");
    CHECK(r.output.find("25") != std::string::npos);   // draws default
    CHECK(r.output.find("5") != std::string::npos);    // folds default
}
