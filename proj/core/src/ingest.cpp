#include "facegate/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "facegate/error.hpp"
#include "facegate/textio.hpp"

namespace facegate {

namespace {

struct ResolvedColumns {
    std::array<std::size_t, 7> idx;  // t ax ay az gx gy gz
};

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                           const char* channel) {
    if (std::holds_alternative<std::size_t>(ref)) return std::get<std::size_t>(ref);
    const auto& name = std::get<std::string>(ref);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw MissingColumn(std::string("column '") + name + "' for channel " + channel +
                        " not found in header");
}

ResolvedColumns resolve_columns(const ColumnMapping& m, const std::vector<std::string>& header) {
    ResolvedColumns r;
    const ColumnRef* refs[7] = {&m.t, &m.ax, &m.ay, &m.az, &m.gx, &m.gy, &m.gz};
    const char* names[7] = {"t", "ax", "ay", "az", "gx", "gy", "gz"};
    for (std::size_t i = 0; i < 7; ++i) r.idx[i] = resolve_column(*refs[i], header, names[i]);
    return r;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) pos = text.size();
        std::string line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
        if (pos == text.size()) break;
        start = pos + 1;
    }
    return lines;
}

ColumnRef parse_column_ref(const std::string& tok) {
    if (auto idx = parse_int(tok); idx && *idx >= 0) return ColumnRef{static_cast<std::size_t>(*idx)};
    return ColumnRef{tok};
}

}  // namespace

void ColumnMapping::validate() const {
    // Name/index collisions are only fully detectable after header
    // resolution; same-kind duplicates are caught here.
    std::set<std::string> names;
    std::set<std::size_t> indices;
    std::size_t n_names = 0, n_indices = 0;
    for (const ColumnRef* ref : {&t, &ax, &ay, &az, &gx, &gy, &gz}) {
        if (std::holds_alternative<std::size_t>(*ref)) {
            indices.insert(std::get<std::size_t>(*ref));
            ++n_indices;
        } else {
            names.insert(std::get<std::string>(*ref));
            ++n_names;
        }
    }
    if (names.size() != n_names || indices.size() != n_indices)
        throw InvalidConfig("column mapping assigns one column to several channels");
    if (time_scale <= 0.0) throw InvalidConfig("time_scale must be positive");
}

ColumnMapping parse_mapping(const std::string& text) {
    ColumnMapping m;
    for (const auto& raw : csv_lines(text)) {
        const auto line = std::string(trim(raw));
        if (line.empty() || line[0] == '#') continue;
        const auto toks = split_ws(line);
        if (toks.size() != 2) throw InvalidConfig("mapping line must be 'key value': " + line);
        const std::string& key = toks[0];
        const std::string& val = toks[1];
        if (key == "t") m.t = parse_column_ref(val);
        else if (key == "ax") m.ax = parse_column_ref(val);
        else if (key == "ay") m.ay = parse_column_ref(val);
        else if (key == "az") m.az = parse_column_ref(val);
        else if (key == "gx") m.gx = parse_column_ref(val);
        else if (key == "gy") m.gy = parse_column_ref(val);
        else if (key == "gz") m.gz = parse_column_ref(val);
        else if (key == "delimiter") {
            if (val == "comma") m.delimiter = ',';
            else if (val == "tab") m.delimiter = '\t';
            else if (val == "semicolon") m.delimiter = ';';
            else if (val == "space") m.delimiter = ' ';
            else if (val.size() == 1) m.delimiter = val[0];
            else throw InvalidConfig("unrecognized delimiter: " + val);
        } else if (key == "header") {
            if (val == "true" || val == "1") m.header = true;
            else if (val == "false" || val == "0") m.header = false;
            else throw InvalidConfig("header must be true or false");
        } else if (key == "time_scale") {
            const auto v = parse_double(val);
            if (!v) throw InvalidConfig("time_scale must be numeric");
            m.time_scale = *v;
        } else {
            throw InvalidConfig("unknown mapping key: " + key);
        }
    }
    m.validate();
    return m;
}

ColumnMapping load_mapping(const std::string& path) {
    return parse_mapping(read_text_file(path));
}

std::vector<AnnotationRecord> parse_annotations(const std::string& text) {
    const auto lines = csv_lines(text);
    if (lines.empty()) throw InvalidAnnotation("annotation file is empty");

    std::vector<AnnotationRecord> records;
    std::map<std::string, std::size_t> by_id;

    std::size_t row = 0;
    for (const auto& line : lines) {
        ++row;
        if (row == 1 && line.rfind("session_id", 0) == 0) continue;  // header
        const auto cells = split(line, ',');
        if (cells.size() != 7)
            throw MalformedRow(row, "annotation rows need 7 columns, got " +
                                        std::to_string(cells.size()));
        const std::string& id = cells[0];
        const auto activity = activity_from_token(cells[2]);
        if (!activity) throw MalformedRow(row, "unknown activity: " + cells[2]);
        const auto stance = stance_from_token(cells[3]);
        if (!stance) throw MalformedRow(row, "unknown stance: " + cells[3]);

        auto it = by_id.find(id);
        if (it == by_id.end()) {
            AnnotationRecord rec;
            rec.session_id = id;
            rec.participant = cells[1];
            rec.label = ActivityLabel::make(*activity, *stance);
            by_id.emplace(id, records.size());
            records.push_back(std::move(rec));
            it = by_id.find(id);
        }
        AnnotationRecord& rec = records[it->second];
        if (rec.participant != cells[1])
            throw MalformedRow(row, "session " + id + " listed under two participants");

        const bool has_phase = !cells[4].empty() || !cells[5].empty() || !cells[6].empty();
        if (!has_phase) continue;  // stance-only rows carry no interval
        const auto phase = phase_from_token(cells[4]);
        if (!phase) throw MalformedRow(row, "unknown phase: " + cells[4]);
        const auto start = parse_double(cells[5]);
        const auto end = parse_double(cells[6]);
        if (!start || !end) throw MalformedRow(row, "non-numeric phase times");
        if (!(*start < *end)) throw MalformedRow(row, "phase start must precede end");
        rec.phases.push_back(PhaseInterval{*start, *end, *phase});
    }

    for (const auto& rec : records) {
        if (rec.label.activity != Activity::Stance && rec.phases.empty())
            throw InvalidAnnotation("session " + rec.session_id +
                                    ": non-stance sessions need at least one phase interval");
    }
    return records;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
    return parse_annotations(read_text_file(path));
}

Session parse_session_csv(const std::string& csv_text, const AnnotationRecord& annotation,
                          const ColumnMapping& mapping, const WarningSink& warn) {
    mapping.validate();
    const auto lines = csv_lines(csv_text);
    std::size_t row = 0;
    std::size_t body_start = 0;

    std::vector<std::string> header;
    if (mapping.header) {
        if (lines.empty()) throw MalformedRow(1, "file has no header row");
        header = split(lines[0], mapping.delimiter);
        body_start = 1;
    }
    const ResolvedColumns cols = resolve_columns(mapping, header);
    {
        std::set<std::size_t> uniq(cols.idx.begin(), cols.idx.end());
        if (uniq.size() != cols.idx.size())
            throw InvalidConfig("column mapping assigns one column to several channels");
    }

    Session s;
    s.participant = annotation.participant;
    s.label = annotation.label;
    s.samples.reserve(lines.size());

    double prev_raw_t = 0.0;
    for (std::size_t li = body_start; li < lines.size(); ++li) {
        row = li + 1;
        const auto cells = split(lines[li], mapping.delimiter);
        const std::size_t max_col = *std::max_element(cols.idx.begin(), cols.idx.end());
        if (cells.size() <= max_col)
            throw MalformedRow(row, "row has " + std::to_string(cells.size()) +
                                        " cells; mapping needs column " + std::to_string(max_col));
        double values[7];
        for (std::size_t c = 0; c < 7; ++c) {
            const auto v = parse_double(trim(cells[cols.idx[c]]));
            if (!v || !std::isfinite(*v))
                throw MalformedRow(row, "non-numeric cell '" + cells[cols.idx[c]] + "'");
            values[c] = *v;
        }
        const double raw_t = values[0] * mapping.time_scale;
        if (!s.samples.empty() && raw_t < prev_raw_t)
            throw TimestampOrderViolation(row, "timestamp decreases");
        prev_raw_t = raw_t;
        SensorSample smp;
        smp.t = raw_t;
        smp.accel = {values[1], values[2], values[3]};
        smp.gyro = {values[4], values[5], values[6]};
        s.samples.push_back(smp);
    }

    if (s.samples.empty()) throw MalformedRow(row ? row : 1, "no samples in sensor file");

    // Shift to session-relative seconds.
    const double origin = s.samples.front().t;
    for (auto& smp : s.samples) smp.t -= origin;
    const double last = s.samples.back().t;

    for (const auto& p : annotation.phases) {
        PhaseInterval rel{p.start - origin, p.end - origin, p.phase};
        const double clipped_start = std::max(rel.start, 0.0);
        const double clipped_end = std::min(rel.end, last);
        if (clipped_start != rel.start || clipped_end != rel.end) {
            if (warn)
                warn("session " + annotation.session_id + ": phase [" + format_g(rel.start, 9) +
                     ", " + format_g(rel.end, 9) + "] clipped to sampled range");
        }
        if (clipped_start < clipped_end)
            s.phases.push_back(PhaseInterval{clipped_start, clipped_end, rel.phase});
    }

    // Jitter beyond 10% of the nominal period warns but does not fail.
    if (warn && s.sample_rate > 0.0) {
        const double period = 1.0 / s.sample_rate;
        for (std::size_t i = 1; i < s.samples.size(); ++i) {
            const double dt = s.samples[i].t - s.samples[i - 1].t;
            if (std::abs(dt - period) > 0.1 * period) {
                warn("session " + annotation.session_id + ": sample interval jitter at row " +
                     std::to_string(i) + " exceeds 10% of nominal period");
                break;
            }
        }
    }
    return s;
}

Session load_session(const std::string& sensor_path, const AnnotationRecord& annotation,
                     const ColumnMapping& mapping, const WarningSink& warn) {
    return parse_session_csv(read_text_file(sensor_path), annotation, mapping, warn);
}

std::string write_sensor_csv(const Session& s, const ColumnMapping& mapping) {
    mapping.validate();
    const ColumnRef* refs[7] = {&mapping.t, &mapping.ax, &mapping.ay, &mapping.az,
                                &mapping.gx, &mapping.gy, &mapping.gz};
    // Writing needs concrete positions; named refs are laid out in channel
    // order after any indexed ones.
    std::array<std::size_t, 7> pos{};
    std::size_t n_cols = 0;
    {
        std::size_t next_free = 0;
        for (std::size_t c = 0; c < 7; ++c)
            if (std::holds_alternative<std::size_t>(*refs[c]))
                next_free = std::max(next_free, std::get<std::size_t>(*refs[c]) + 1);
        for (std::size_t c = 0; c < 7; ++c) {
            if (std::holds_alternative<std::size_t>(*refs[c]))
                pos[c] = std::get<std::size_t>(*refs[c]);
            else
                pos[c] = next_free++;
        }
        n_cols = *std::max_element(pos.begin(), pos.end()) + 1;
    }

    std::string out;
    if (mapping.header) {
        std::vector<std::string> head(n_cols);
        const char* fallback[7] = {"t", "ax", "ay", "az", "gx", "gy", "gz"};
        for (std::size_t c = 0; c < 7; ++c)
            head[pos[c]] = std::holds_alternative<std::string>(*refs[c])
                               ? std::get<std::string>(*refs[c])
                               : fallback[c];
        for (std::size_t i = 0; i < n_cols; ++i) {
            if (i) out += mapping.delimiter;
            out += head[i];
        }
        out += '\n';
    }
    for (const auto& smp : s.samples) {
        std::vector<std::string> cells(n_cols);
        cells[pos[0]] = format_g(smp.t / mapping.time_scale, 9);
        for (std::size_t a = 0; a < 3; ++a) cells[pos[1 + a]] = format_g(smp.accel[a], 9);
        for (std::size_t g = 0; g < 3; ++g) cells[pos[4 + g]] = format_g(smp.gyro[g], 9);
        for (std::size_t i = 0; i < n_cols; ++i) {
            if (i) out += mapping.delimiter;
            out += cells[i];
        }
        out += '\n';
    }
    return out;
}

Session trim_session(const Session& s, double margin) {
    if (margin < 0.0) throw InvalidConfig("margin must be >= 0");
    if (margin == 0.0 || s.samples.empty()) {
        if (s.samples.empty()) throw SessionTooShort("session has no samples");
        if (margin == 0.0) return s;
    }
    const double first = s.samples.front().t;
    const double last = s.samples.back().t;
    if (!(last - first > 2.0 * margin))
        throw SessionTooShort("session spans " + format_g(last - first, 9) +
                              " s; need more than " + format_g(2.0 * margin, 9) + " s");
    const double lo = first + margin;
    const double hi = last - margin;

    Session out;
    out.participant = s.participant;
    out.label = s.label;
    out.sample_rate = s.sample_rate;
    for (const auto& smp : s.samples)
        if (smp.t >= lo && smp.t <= hi) out.samples.push_back(smp);
    for (const auto& p : s.phases) {
        const double a = std::max(p.start, lo);
        const double b = std::min(p.end, hi);
        if (a < b) out.phases.push_back(PhaseInterval{a, b, p.phase});
    }
    if (out.samples.empty()) throw SessionTooShort("no samples remain after trimming");
    return out;
}

std::vector<TransitionSlice> extract_transitions(const Session& s) {
    std::vector<TransitionSlice> out;
    for (const auto& p : s.phases) {
        if (p.phase != Phase::Transition) continue;
        TransitionSlice slice;
        slice.label = s.label;
        slice.participant = s.participant;
        for (const auto& smp : s.samples)
            if (smp.t >= p.start && smp.t <= p.end) slice.samples.push_back(smp);
        out.push_back(std::move(slice));
    }
    return out;
}

}  // namespace facegate
