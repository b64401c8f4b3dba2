#include "limefold/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "limefold/errors.hpp"

namespace limefold {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;  // saw content in the current record
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
        any = false;
    };
    while (i < n) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                field += c;
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any = true;
                ++i;
                break;
            case ',':
                end_field();
                any = true;
                ++i;
                break;
            case '\r':
                if (i + 1 < n && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                if (any || !field.empty() || !fields.empty()) end_record();
                ++i;
                break;
            default:
                field += c;
                any = true;
                ++i;
                break;
        }
    }
    if (quoted) throw DataError("csv: unterminated quoted field");
    if (any || !field.empty() || !fields.empty()) end_record();
    return records;
}

namespace {

bool parse_number(const std::string& s, double* out) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    *out = v;
    return true;
}

}  // namespace

Dataset parse_csv_dataset(const std::string& text, const Schema& schema) {
    schema.validate();
    const auto records = parse_csv(text);
    if (records.empty()) throw DataError("csv: missing header row");
    const auto& header = records[0];

    // Map every schema column to its position in the header.
    std::vector<int> feature_pos(schema.features.size(), -1);
    int label_pos = -1;
    int id_pos = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& name = header[c];
        if (name == schema.label_name) {
            if (label_pos >= 0) throw DataError("csv: duplicate column '" + name + "'");
            label_pos = static_cast<int>(c);
        } else if (schema.id_column && name == *schema.id_column) {
            if (id_pos >= 0) throw DataError("csv: duplicate column '" + name + "'");
            id_pos = static_cast<int>(c);
        } else {
            const int fi = schema.feature_index(name);
            if (fi < 0) throw DataError("csv: unknown column '" + name + "'");
            if (feature_pos[fi] >= 0) throw DataError("csv: duplicate column '" + name + "'");
            feature_pos[fi] = static_cast<int>(c);
        }
    }
    for (std::size_t f = 0; f < schema.features.size(); ++f)
        if (feature_pos[f] < 0)
            throw DataError("csv: missing column '" + schema.features[f].name + "'");
    if (label_pos < 0) throw DataError("csv: missing label column '" + schema.label_name + "'");
    if (schema.id_column && id_pos < 0)
        throw DataError("csv: missing id column '" + *schema.id_column + "'");

    Dataset ds;
    ds.schema = schema;
    std::set<std::string> seen_ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size())
            throw DataError("csv: row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                            " fields, expected " + std::to_string(header.size()));
        DataRow row;
        row.id = id_pos >= 0 ? rec[id_pos] : std::to_string(ds.rows.size());
        if (row.id.empty()) throw DataError("csv: row " + std::to_string(r) + " has an empty id");
        if (!seen_ids.insert(row.id).second)
            throw DataError("csv: duplicate id '" + row.id + "' at row " + std::to_string(r));

        row.values.reserve(schema.features.size());
        for (std::size_t f = 0; f < schema.features.size(); ++f) {
            const auto& spec = schema.features[f];
            const std::string& cell = rec[feature_pos[f]];
            const bool declared_cat =
                spec.kind == FeatureKind::categorical &&
                std::find(spec.domain.begin(), spec.domain.end(), cell) != spec.domain.end();
            if (cell.empty() || (cell == "?" && !declared_cat)) {
                row.values.push_back(Cell::missing());
                continue;
            }
            if (spec.kind == FeatureKind::numeric) {
                double v = 0;
                if (!parse_number(cell, &v))
                    throw DataError("csv: row " + std::to_string(r) + ", column '" + spec.name +
                                    "': cannot parse '" + cell + "' as a number");
                row.values.push_back(Cell::num(v));
            } else {
                if (!declared_cat)
                    throw DataError("csv: row " + std::to_string(r) + ", column '" + spec.name +
                                    "': value '" + cell + "' not in the declared domain");
                row.values.push_back(Cell::cat(cell));
            }
        }
        const std::string& label = rec[label_pos];
        if (label.empty())
            throw DataError("csv: row " + std::to_string(r) + ": empty label");
        row.positive = label == schema.positive_label;
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_dataset(buf.str(), schema);
}

}  // namespace limefold
