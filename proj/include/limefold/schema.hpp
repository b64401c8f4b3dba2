#pragma once

#include <optional>
#include <string>
#include <vector>

namespace limefold {

enum class FeatureKind { categorical, numeric };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    std::vector<std::string> domain;  // categorical only, fixed value set
};

struct Schema {
    std::vector<FeatureSpec> features;
    std::string label_name;
    std::string positive_label;
    std::optional<std::string> id_column;

    // Throws DataError on duplicate names, empty/duplicated domains,
    // or a label/id column that collides with a feature name.
    void validate() const;
    int feature_index(const std::string& name) const;  // -1 if absent
};

Schema load_schema(const std::string& path);
Schema parse_schema_json(const std::string& text);

// One cell of a row. Missing cells keep neither a number nor a category.
struct Cell {
    enum class Kind { missing, number, category };
    Kind kind = Kind::missing;
    double number = 0.0;
    std::string category;

    static Cell missing() { return {}; }
    static Cell num(double v) { return {Kind::number, v, {}}; }
    static Cell cat(std::string v) { return {Kind::category, 0.0, std::move(v)}; }
    bool is_missing() const { return kind == Kind::missing; }
    bool operator==(const Cell&) const = default;
};

struct DataRow {
    std::string id;
    std::vector<Cell> values;  // aligned with Schema::features
    bool positive = false;     // label == positive_label
};

struct Dataset {
    Schema schema;
    std::vector<DataRow> rows;

    const DataRow* find_row(const std::string& id) const;
    std::size_t positive_count() const;
};

}  // namespace limefold
