#include "facegate/feature_io.hpp"

#include "facegate/error.hpp"
#include "facegate/textio.hpp"

namespace facegate {

std::string format_features_csv(const std::vector<FeatureRow>& rows,
                                const std::vector<std::string>& names) {
    std::string out = "participant,activity,stance,label";
    for (const auto& n : names) out += "," + n;
    out += '\n';
    for (const auto& row : rows) {
        if (row.values.size() != names.size())
            throw DimensionMismatch("feature row length does not match the name table");
        out += row.participant + "," + row.activity + "," + row.stance + "," +
               std::to_string(static_cast<int>(row.label));
        for (double v : row.values) out += "," + format_full(v);
        out += '\n';
    }
    return out;
}

void save_features_csv(const std::string& path, const std::vector<FeatureRow>& rows,
                       const std::vector<std::string>& names) {
    write_text_file(path, format_features_csv(rows, names));
}

FeatureTable parse_features_csv(const std::string& text) {
    FeatureTable table;
    std::size_t start = 0, row_no = 0;
    bool header_seen = false;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) pos = text.size();
        std::string line = text.substr(start, pos - start);
        start = pos + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row_no;
        if (line.empty()) continue;

        const auto cells = split(line, ',');
        if (!header_seen) {
            if (cells.size() < 5 || cells[0] != "participant")
                throw MalformedRow(row_no, "features csv header must start with "
                                           "participant,activity,stance,label");
            table.matrix.feature_names.assign(cells.begin() + 4, cells.end());
            table.matrix.n_cols = table.matrix.feature_names.size();
            header_seen = true;
            continue;
        }
        if (cells.size() != table.matrix.n_cols + 4)
            throw MalformedRow(row_no, "expected " + std::to_string(table.matrix.n_cols + 4) +
                                           " cells, got " + std::to_string(cells.size()));
        const auto label = parse_int(cells[3]);
        if (!label || (*label != 0 && *label != 1))
            throw MalformedRow(row_no, "label must be 0 or 1");

        std::vector<double> values(table.matrix.n_cols);
        for (std::size_t c = 0; c < table.matrix.n_cols; ++c) {
            const auto v = parse_double(cells[c + 4]);
            if (!v) throw MalformedRow(row_no, "non-numeric feature cell '" + cells[c + 4] + "'");
            values[c] = *v;
        }
        table.matrix.push_row(values, static_cast<std::uint8_t>(*label), cells[0]);
        table.activities.push_back(cells[1]);
        table.stances.push_back(cells[2]);
    }
    if (!header_seen) throw MalformedRow(1, "features csv is empty");
    return table;
}

FeatureTable load_features_csv(const std::string& path) {
    return parse_features_csv(read_text_file(path));
}

}  // namespace facegate
