#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "facegate/types.hpp"

namespace facegate {

// Column selector: a 0-based index or a header name.
using ColumnRef = std::variant<std::size_t, std::string>;

// Adapter from a raw sensor CSV layout to the seven channels. Kept explicit
// because upstream datasets differ in naming and column order.
struct ColumnMapping {
    ColumnRef t{std::size_t{0}};
    ColumnRef ax{std::size_t{1}};
    ColumnRef ay{std::size_t{2}};
    ColumnRef az{std::size_t{3}};
    ColumnRef gx{std::size_t{4}};
    ColumnRef gy{std::size_t{5}};
    ColumnRef gz{std::size_t{6}};
    char delimiter = ',';
    bool header = true;
    double time_scale = 1.0;  // multiply raw time values to get seconds

    void validate() const;  // throws InvalidConfig when columns collide
};

// Key=value mapping file (keys t ax ay az gx gy gz delimiter header time_scale).
ColumnMapping parse_mapping(const std::string& text);
ColumnMapping load_mapping(const std::string& path);

// One annotated session as described by the annotation CSV: phase times are
// absolute (same timebase as the sensor file, in seconds).
struct AnnotationRecord {
    std::string session_id;
    std::string participant;
    ActivityLabel label;
    std::vector<PhaseInterval> phases;
};

// Fixed seven-column annotation CSV:
//   session_id,participant,activity,stance,phase,start,end
// Rows without a phase (stance-only sessions) leave phase/start/end empty.
std::vector<AnnotationRecord> parse_annotations(const std::string& text);
std::vector<AnnotationRecord> load_annotations(const std::string& path);

using WarningSink = std::function<void(const std::string&)>;

// Parse a sensor CSV and align the annotation to it. Samples come out sorted
// by session-relative t (first sample at t = 0); phase intervals are shifted
// to the same origin and clipped to the sampled range.
Session load_session(const std::string& sensor_path, const AnnotationRecord& annotation,
                     const ColumnMapping& mapping, const WarningSink& warn = {});

// Same, from in-memory CSV text (for tests and tooling).
Session parse_session_csv(const std::string& csv_text, const AnnotationRecord& annotation,
                          const ColumnMapping& mapping, const WarningSink& warn = {});

// Render samples back into CSV form under the same mapping (9 significant
// digits). Columns not covered by the mapping are left empty.
std::string write_sensor_csv(const Session& s, const ColumnMapping& mapping);

// Drop `margin` seconds from both ends; phase intervals are clipped to the
// retained range and dropped when emptied. Throws SessionTooShort when the
// session spans <= 2 * margin.
Session trim_session(const Session& s, double margin = 2.5);

struct TransitionSlice {
    std::vector<SensorSample> samples;
    ActivityLabel label;
    std::string participant;
};

// One slice per Transition interval (boundary samples inclusive); Contact
// phases are excluded. Sessions without Transition intervals yield {}.
std::vector<TransitionSlice> extract_transitions(const Session& s);

}  // namespace facegate
