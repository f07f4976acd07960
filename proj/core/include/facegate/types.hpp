#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace facegate {

// One timestamped 6-channel reading: tri-axial accelerometer + tri-axial
// gyroscope. t is seconds since session start.
struct SensorSample {
    double t = 0.0;
    std::array<double, 3> accel{0.0, 0.0, 0.0};  // x, y, z
    std::array<double, 3> gyro{0.0, 0.0, 0.0};   // yaw, roll, pitch

    double channel(std::size_t i) const { return i < 3 ? accel[i] : gyro[i - 3]; }
};

inline constexpr std::size_t kNumChannels = 6;

enum class Category : std::uint8_t { NoFaceTouch = 0, FaceTouch = 1 };

enum class Activity : std::uint8_t {
    TouchLeftEye,
    TouchRightEye,
    TouchNose,
    TouchMouth,
    ScratchHead,
    PickFromShelf,
    PickFromGround,
    Stance,
};

enum class Stance : std::uint8_t { Sitting, Standing, Walking };

// Face touching iff the activity is one of the four touch targets.
Category category_of(Activity a);

struct ActivityLabel {
    Category category = Category::NoFaceTouch;
    Activity activity = Activity::Stance;
    Stance stance = Stance::Sitting;

    static ActivityLabel make(Activity a, Stance s) {
        return ActivityLabel{category_of(a), a, s};
    }
};

bool label_coherent(const ActivityLabel& l);

enum class Phase : std::uint8_t { Transition, Contact };

// Annotated time span within a session, session-relative seconds.
struct PhaseInterval {
    double start = 0.0;
    double end = 0.0;
    Phase phase = Phase::Transition;
};

// An annotated recording for one (participant, activity, stance) session.
struct Session {
    std::string participant;
    ActivityLabel label;
    double sample_rate = 102.4;  // Hz
    std::vector<SensorSample> samples;
    std::vector<PhaseInterval> phases;
};

// Result of validating a Session against its invariants. Violations are
// hard errors; jitter beyond 10% of the nominal period only warns.
struct SessionCheck {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

// Pure predicate: same session in, same verdict out.
SessionCheck check_session(const Session& s);

// Euclidean norm of the three accelerometer axes.
double resultant_acceleration(const SensorSample& s);

// ---- enum <-> token maps used by every file format ----
std::string to_token(Activity a);
std::string to_token(Stance s);
std::string to_token(Phase p);
std::string to_token(Category c);
std::optional<Activity> activity_from_token(const std::string& tok);
std::optional<Stance> stance_from_token(const std::string& tok);
std::optional<Phase> phase_from_token(const std::string& tok);

}  // namespace facegate
