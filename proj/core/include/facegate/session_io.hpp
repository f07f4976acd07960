#pragma once

#include <string>

#include "facegate/types.hpp"

namespace facegate {

// Self-describing per-session text format (.fgs): header key/value lines,
// a phases block, then one sample row per line. Times and channel values
// carry 9 significant digits.
std::string format_session(const Session& s, const std::string& id);
void save_session(const Session& s, const std::string& id, const std::string& path);

struct LoadedSession {
    std::string id;
    Session session;
};

LoadedSession parse_session(const std::string& text);  // throws IoError on format problems
LoadedSession load_session_file(const std::string& path);

}  // namespace facegate
