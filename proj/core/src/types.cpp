#include "facegate/types.hpp"

#include <cmath>

namespace facegate {

Category category_of(Activity a) {
    switch (a) {
        case Activity::TouchLeftEye:
        case Activity::TouchRightEye:
        case Activity::TouchNose:
        case Activity::TouchMouth:
            return Category::FaceTouch;
        default:
            return Category::NoFaceTouch;
    }
}

bool label_coherent(const ActivityLabel& l) {
    return l.category == category_of(l.activity);
}

SessionCheck check_session(const Session& s) {
    SessionCheck c;
    auto fail = [&](std::string msg) {
        c.ok = false;
        c.errors.push_back(std::move(msg));
    };

    if (s.sample_rate <= 0.0) fail("sample_rate must be positive");
    if (!label_coherent(s.label)) fail("activity/category mismatch");

    const double period = s.sample_rate > 0.0 ? 1.0 / s.sample_rate : 0.0;
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const auto& smp = s.samples[i];
        if (!(smp.t >= 0.0) || !std::isfinite(smp.t)) {
            fail("sample " + std::to_string(i) + ": t must be finite and >= 0");
            break;
        }
        for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
            if (!std::isfinite(smp.channel(ch))) {
                fail("sample " + std::to_string(i) + ": non-finite channel value");
                break;
            }
        }
        if (i > 0) {
            const double dt = smp.t - s.samples[i - 1].t;
            if (dt < 0.0) {
                fail("sample " + std::to_string(i) + ": timestamps must be non-decreasing");
                break;
            }
            if (period > 0.0 && std::abs(dt - period) > 0.1 * period) {
                if (c.warnings.empty())
                    c.warnings.push_back("sample " + std::to_string(i) +
                                         ": inter-sample jitter exceeds 10% of nominal period");
            }
        }
    }

    if (!s.samples.empty()) {
        const double first = s.samples.front().t;
        const double last = s.samples.back().t;
        for (std::size_t i = 0; i < s.phases.size(); ++i) {
            const auto& p = s.phases[i];
            if (!(p.start < p.end)) fail("phase " + std::to_string(i) + ": start must precede end");
            if (p.start < first || p.end > last)
                fail("phase " + std::to_string(i) + ": outside the sampled time range");
            for (std::size_t j = i + 1; j < s.phases.size(); ++j) {
                const auto& q = s.phases[j];
                if (p.start < q.end && q.start < p.end) {
                    fail("phases " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
                }
            }
        }
    } else if (!s.phases.empty()) {
        fail("phases present but session has no samples");
    }

    return c;
}

double resultant_acceleration(const SensorSample& s) {
    double a = s.accel[0] * s.accel[0];
    double b = s.accel[1] * s.accel[1];
    double c = s.accel[2] * s.accel[2];
    // Sum in magnitude order so the result is exactly permutation invariant.
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return std::sqrt((a + b) + c);
}

std::string to_token(Activity a) {
    switch (a) {
        case Activity::TouchLeftEye: return "touch_left_eye";
        case Activity::TouchRightEye: return "touch_right_eye";
        case Activity::TouchNose: return "touch_nose";
        case Activity::TouchMouth: return "touch_mouth";
        case Activity::ScratchHead: return "scratch_head";
        case Activity::PickFromShelf: return "pick_from_shelf";
        case Activity::PickFromGround: return "pick_from_ground";
        case Activity::Stance: return "stance";
    }
    return "stance";
}

std::string to_token(Stance s) {
    switch (s) {
        case Stance::Sitting: return "sitting";
        case Stance::Standing: return "standing";
        case Stance::Walking: return "walking";
    }
    return "sitting";
}

std::string to_token(Phase p) {
    return p == Phase::Transition ? "transition" : "contact";
}

std::string to_token(Category c) {
    return c == Category::FaceTouch ? "face" : "no_face";
}

std::optional<Activity> activity_from_token(const std::string& tok) {
    if (tok == "touch_left_eye") return Activity::TouchLeftEye;
    if (tok == "touch_right_eye") return Activity::TouchRightEye;
    if (tok == "touch_nose") return Activity::TouchNose;
    if (tok == "touch_mouth") return Activity::TouchMouth;
    if (tok == "scratch_head") return Activity::ScratchHead;
    if (tok == "pick_from_shelf") return Activity::PickFromShelf;
    if (tok == "pick_from_ground") return Activity::PickFromGround;
    if (tok == "stance") return Activity::Stance;
    return std::nullopt;
}

std::optional<Stance> stance_from_token(const std::string& tok) {
    if (tok == "sitting") return Stance::Sitting;
    if (tok == "standing") return Stance::Standing;
    if (tok == "walking") return Stance::Walking;
    return std::nullopt;
}

std::optional<Phase> phase_from_token(const std::string& tok) {
    if (tok == "transition") return Phase::Transition;
    if (tok == "contact") return Phase::Contact;
    return std::nullopt;
}

}  // namespace facegate
