#include "limefold/binarize.hpp"

#include <cmath>
#include <limits>

#include "limefold/errors.hpp"

namespace limefold {

Binarizer::Binarizer(const Schema& schema) : schema_(schema) {
    schema_.validate();
    for (std::size_t f = 0; f < schema_.features.size(); ++f) {
        const auto& spec = schema_.features[f];
        if (spec.kind == FeatureKind::categorical) {
            for (const auto& v : spec.domain)
                cols_.push_back({static_cast<int>(f), v, spec.name + "_" + v});
        } else {
            cols_.push_back({static_cast<int>(f), std::nullopt, spec.name});
        }
    }
}

std::vector<double> Binarizer::encode(const DataRow& row) const {
    if (row.values.size() != schema_.features.size())
        throw DataError("row '" + row.id + "' arity does not match the schema");
    std::vector<double> out;
    out.reserve(cols_.size());
    for (const auto& col : cols_) {
        const Cell& cell = row.values[col.feature];
        if (col.value) {
            out.push_back(cell.kind == Cell::Kind::category && cell.category == *col.value ? 1.0
                                                                                           : 0.0);
        } else {
            out.push_back(cell.kind == Cell::Kind::number
                              ? cell.number
                              : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return out;
}

DataRow Binarizer::decode(const std::vector<double>& enc, const std::string& id) const {
    if (enc.size() != cols_.size()) throw DataError("encoded width does not match the layout");
    DataRow row;
    row.id = id;
    row.values.assign(schema_.features.size(), Cell::missing());
    for (std::size_t c = 0; c < cols_.size(); ++c) {
        const auto& col = cols_[c];
        if (col.value) {
            if (enc[c] != 0.0 && enc[c] != 1.0)
                throw DataError("indicator column '" + col.name + "' holds a non-binary value");
            if (enc[c] == 1.0) {
                Cell& cell = row.values[col.feature];
                if (cell.kind == Cell::Kind::category)
                    throw DataError("two indicators set for feature '" +
                                    schema_.features[col.feature].name + "'");
                cell = Cell::cat(*col.value);
            }
        } else if (!std::isnan(enc[c])) {
            row.values[col.feature] = Cell::num(enc[c]);
        }
    }
    return row;
}

BinarizedDataset binarize(const Dataset& data) {
    Binarizer mapping(data.schema);
    Dataset out;
    out.schema.label_name = data.schema.label_name;
    out.schema.positive_label = data.schema.positive_label;
    out.schema.id_column = data.schema.id_column;
    for (const auto& col : mapping.columns()) {
        FeatureSpec spec;
        spec.name = col.name;
        if (col.value) {
            spec.kind = FeatureKind::categorical;
            spec.domain = {"0", "1"};
        } else {
            spec.kind = FeatureKind::numeric;
        }
        out.schema.features.push_back(std::move(spec));
    }
    for (const auto& row : data.rows) {
        const auto enc = mapping.encode(row);
        DataRow r;
        r.id = row.id;
        r.positive = row.positive;
        for (std::size_t c = 0; c < enc.size(); ++c) {
            if (mapping.columns()[c].value)
                r.values.push_back(Cell::cat(enc[c] == 1.0 ? "1" : "0"));
            else if (std::isnan(enc[c]))
                r.values.push_back(Cell::missing());
            else
                r.values.push_back(Cell::num(enc[c]));
        }
        out.rows.push_back(std::move(r));
    }
    return {std::move(out), std::move(mapping)};
}

}  // namespace limefold
