#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace facegate {

// Row-major feature matrix with binary labels (0 = no-face, 1 = face) and
// optional per-row participant ids. The common currency between feature
// extraction, training and evaluation.
struct LabeledMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;            // n_rows * n_cols, row-major
    std::vector<std::uint8_t> labels;      // n_rows
    std::vector<std::string> participants; // n_rows or empty
    std::vector<std::string> feature_names;

    double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * n_cols, n_cols};
    }

    void push_row(std::span<const double> row, std::uint8_t label,
                  const std::string& participant = {});

    // New matrix keeping the given columns, in the given order.
    LabeledMatrix select_columns(const std::vector<std::size_t>& cols) const;

    // New matrix keeping the given rows, in the given order.
    LabeledMatrix select_rows(const std::vector<std::size_t>& rows) const;

    std::vector<std::size_t> class_counts() const;  // size 2
};

}  // namespace facegate
