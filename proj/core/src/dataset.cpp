#include "facegate/dataset.hpp"

#include "facegate/error.hpp"

namespace facegate {

void LabeledMatrix::push_row(std::span<const double> row, std::uint8_t label,
                             const std::string& participant) {
    if (n_rows == 0 && n_cols == 0) n_cols = row.size();
    if (row.size() != n_cols)
        throw DimensionMismatch("row has " + std::to_string(row.size()) + " values, matrix has " +
                                std::to_string(n_cols) + " columns");
    values.insert(values.end(), row.begin(), row.end());
    labels.push_back(label);
    if (!participant.empty() || !participants.empty()) {
        participants.resize(n_rows);
        participants.push_back(participant);
    }
    ++n_rows;
}

LabeledMatrix LabeledMatrix::select_columns(const std::vector<std::size_t>& cols) const {
    LabeledMatrix out;
    out.n_rows = n_rows;
    out.n_cols = cols.size();
    out.labels = labels;
    out.participants = participants;
    out.values.resize(n_rows * cols.size());
    for (std::size_t r = 0; r < n_rows; ++r) {
        const double* src = values.data() + r * n_cols;
        double* dst = out.values.data() + r * cols.size();
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] >= n_cols) throw DimensionMismatch("column index out of range");
            dst[j] = src[cols[j]];
        }
    }
    if (!feature_names.empty()) {
        out.feature_names.reserve(cols.size());
        for (std::size_t c : cols) out.feature_names.push_back(feature_names[c]);
    }
    return out;
}

LabeledMatrix LabeledMatrix::select_rows(const std::vector<std::size_t>& rows) const {
    LabeledMatrix out;
    out.n_cols = n_cols;
    out.feature_names = feature_names;
    out.n_rows = rows.size();
    out.values.resize(rows.size() * n_cols);
    out.labels.resize(rows.size());
    if (!participants.empty()) out.participants.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (r >= n_rows) throw DimensionMismatch("row index out of range");
        std::copy(values.begin() + r * n_cols, values.begin() + (r + 1) * n_cols,
                  out.values.begin() + i * n_cols);
        out.labels[i] = labels[r];
        if (!participants.empty()) out.participants[i] = participants[r];
    }
    return out;
}

std::vector<std::size_t> LabeledMatrix::class_counts() const {
    std::vector<std::size_t> counts(2, 0);
    for (auto l : labels) ++counts[l ? 1 : 0];
    return counts;
}

}  // namespace facegate
