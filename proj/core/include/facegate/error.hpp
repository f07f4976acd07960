#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace facegate {

// Base for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- ingest ----
struct MalformedRow : Error {
    std::size_t row;
    MalformedRow(std::size_t row_, const std::string& what_)
        : Error("row " + std::to_string(row_) + ": " + what_), row(row_) {}
};

struct TimestampOrderViolation : Error {
    std::size_t row;
    TimestampOrderViolation(std::size_t row_, const std::string& what_)
        : Error("row " + std::to_string(row_) + ": " + what_), row(row_) {}
};

struct MissingColumn : Error {
    using Error::Error;
};

struct InvalidAnnotation : Error {
    using Error::Error;
};

struct SessionTooShort : Error {
    using Error::Error;
};

// ---- features ----
struct WindowTooShort : Error {
    using Error::Error;
};

struct NonFiniteFeature : Error {
    using Error::Error;
};

// ---- forest / eval ----
struct InsufficientData : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct SingleParticipant : Error {
    using Error::Error;
};

struct InvalidConfig : Error {
    using Error::Error;
};

// ---- model files ----
struct UnsupportedVersion : Error {
    using Error::Error;
};

struct CorruptModel : Error {
    using Error::Error;
};

// ---- pipeline ----
struct ModelDimensionMismatch : Error {
    using Error::Error;
};

// ---- filesystem / formats ----
struct IoError : Error {
    using Error::Error;
};

}  // namespace facegate
