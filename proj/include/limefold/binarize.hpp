#pragma once

#include <optional>
#include <string>
#include <vector>

#include "limefold/schema.hpp"

namespace limefold {

// Column layout of the binarized feature space: one indicator column per
// (categorical feature, domain value) in schema order, and one passthrough
// column per numeric feature. This is the space the booster and the local
// explainer operate in.
struct BinColumn {
    int feature = 0;                    // index into Schema::features
    std::optional<std::string> value;   // set for indicator columns
    std::string name;                   // "thal_7" or "age"
};

class Binarizer {
public:
    Binarizer() = default;
    explicit Binarizer(const Schema& schema);

    const std::vector<BinColumn>& columns() const { return cols_; }
    std::size_t width() const { return cols_.size(); }

    // Indicators are 0/1 (missing categorical: all zeros). Numeric columns
    // carry the raw value, NaN when missing.
    std::vector<double> encode(const DataRow& row) const;

    // Inverse of encode for round-trip checks. Indicator vectors that decode
    // ambiguously (two values set for one feature) throw DataError.
    DataRow decode(const std::vector<double>& enc, const std::string& id) const;

private:
    Schema schema_;
    std::vector<BinColumn> cols_;
};

// Dataset rewritten into the binarized space, plus the mapping back.
struct BinarizedDataset {
    Dataset data;      // schema has one categorical{0,1} feature per indicator
    Binarizer mapping;
};

BinarizedDataset binarize(const Dataset& data);

}  // namespace limefold
