#pragma once

#include <string>
#include <vector>

#include "facegate/dataset.hpp"
#include "facegate/features.hpp"

namespace facegate {

// One row per window: participant, activity, stance, label (0/1), then the
// named feature columns (17 significant digits, so values round-trip).

struct FeatureRow {
    std::string participant;
    std::string activity;
    std::string stance;
    std::uint8_t label = 0;
    std::vector<double> values;
};

std::string format_features_csv(const std::vector<FeatureRow>& rows,
                                const std::vector<std::string>& names);
void save_features_csv(const std::string& path, const std::vector<FeatureRow>& rows,
                       const std::vector<std::string>& names);

struct FeatureTable {
    LabeledMatrix matrix;                 // participants filled per row
    std::vector<std::string> activities;  // per row
    std::vector<std::string> stances;     // per row
};

FeatureTable parse_features_csv(const std::string& text);
FeatureTable load_features_csv(const std::string& path);

}  // namespace facegate
