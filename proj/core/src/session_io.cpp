#include "facegate/session_io.hpp"

#include <sstream>

#include "facegate/error.hpp"
#include "facegate/textio.hpp"

namespace facegate {

namespace {
constexpr const char* kMagic = "facegate-session v1";
}

std::string format_session(const Session& s, const std::string& id) {
    std::string out;
    out.reserve(64 * s.samples.size() + 256);
    out += kMagic;
    out += '\n';
    out += "id " + id + "\n";
    out += "participant " + s.participant + "\n";
    out += "activity " + to_token(s.label.activity) + "\n";
    out += "stance " + to_token(s.label.stance) + "\n";
    out += "sample_rate " + format_full(s.sample_rate) + "\n";
    out += "phases " + std::to_string(s.phases.size()) + "\n";
    for (const auto& p : s.phases)
        out += to_token(p.phase) + " " + format_g(p.start, 9) + " " + format_g(p.end, 9) + "\n";
    out += "samples " + std::to_string(s.samples.size()) + "\n";
    out += "t ax ay az gx gy gz\n";
    for (const auto& smp : s.samples) {
        out += format_g(smp.t, 9);
        for (double a : smp.accel) out += " " + format_g(a, 9);
        for (double g : smp.gyro) out += " " + format_g(g, 9);
        out += '\n';
    }
    out += "end\n";
    return out;
}

void save_session(const Session& s, const std::string& id, const std::string& path) {
    write_text_file(path, format_session(s, id));
}

LoadedSession parse_session(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    auto next_line = [&](const char* what) -> std::string {
        if (!std::getline(in, line)) throw IoError(std::string("truncated session file: expected ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto expect_kv = [&](const char* key) -> std::string {
        const std::string l = next_line(key);
        const std::string prefix = std::string(key) + " ";
        if (l.rfind(prefix, 0) != 0) throw IoError(std::string("expected '") + key + "' line, got: " + l);
        return l.substr(prefix.size());
    };

    if (next_line("magic") != kMagic) throw IoError("not a facegate session file");

    LoadedSession out;
    out.id = expect_kv("id");
    out.session.participant = expect_kv("participant");

    const auto activity = activity_from_token(expect_kv("activity"));
    if (!activity) throw IoError("unknown activity token");
    const auto stance = stance_from_token(expect_kv("stance"));
    if (!stance) throw IoError("unknown stance token");
    out.session.label = ActivityLabel::make(*activity, *stance);

    const auto rate = parse_double(expect_kv("sample_rate"));
    if (!rate || !(*rate > 0.0)) throw IoError("bad sample_rate");
    out.session.sample_rate = *rate;

    const auto n_phases = parse_int(expect_kv("phases"));
    if (!n_phases || *n_phases < 0) throw IoError("bad phases count");
    for (long long i = 0; i < *n_phases; ++i) {
        const auto toks = split_ws(next_line("phase row"));
        if (toks.size() != 3) throw IoError("phase row needs 3 tokens");
        const auto phase = phase_from_token(toks[0]);
        const auto a = parse_double(toks[1]);
        const auto b = parse_double(toks[2]);
        if (!phase || !a || !b) throw IoError("bad phase row");
        out.session.phases.push_back(PhaseInterval{*a, *b, *phase});
    }

    const auto n_samples = parse_int(expect_kv("samples"));
    if (!n_samples || *n_samples < 0) throw IoError("bad samples count");
    next_line("sample header");  // column names, informational
    out.session.samples.reserve(static_cast<std::size_t>(*n_samples));
    for (long long i = 0; i < *n_samples; ++i) {
        const auto toks = split_ws(next_line("sample row"));
        if (toks.size() != 7) throw IoError("sample row needs 7 values");
        double vals[7];
        for (std::size_t c = 0; c < 7; ++c) {
            const auto v = parse_double(toks[c]);
            if (!v) throw IoError("non-numeric sample value: " + toks[c]);
            vals[c] = *v;
        }
        SensorSample smp;
        smp.t = vals[0];
        smp.accel = {vals[1], vals[2], vals[3]};
        smp.gyro = {vals[4], vals[5], vals[6]};
        out.session.samples.push_back(smp);
    }
    if (next_line("end") != "end") throw IoError("missing end marker");
    return out;
}

LoadedSession load_session_file(const std::string& path) {
    return parse_session(read_text_file(path));
}

}  // namespace facegate
