#pragma once

#include <string>
#include <vector>

#include "limefold/schema.hpp"

namespace limefold {

// RFC 4180 flavored reader: quoted fields, embedded commas/quotes/newlines,
// CRLF line ends. Returns one vector of fields per record.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Loads a CSV against a schema. The header row must contain every feature
// name, the label column, and the declared id column if any; column order is
// free and extra columns are rejected. Empty cells and bare "?" are missing
// ("?" only where it is not a declared category). Errors name the offending
// row and column. Ids must be unique; without an id column, ids are the
// 0-based row index.
Dataset load_csv(const std::string& path, const Schema& schema);
Dataset parse_csv_dataset(const std::string& text, const Schema& schema);

}  // namespace limefold
