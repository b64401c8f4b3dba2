#include "limefold/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "limefold/errors.hpp"

namespace limefold {

void Schema::validate() const {
    std::set<std::string> names;
    for (const auto& f : features) {
        if (f.name.empty()) throw DataError("schema: empty feature name");
        if (!names.insert(f.name).second)
            throw DataError("schema: duplicate feature name '" + f.name + "'");
        if (f.kind == FeatureKind::categorical) {
            if (f.domain.empty())
                throw DataError("schema: categorical feature '" + f.name + "' has empty domain");
            std::set<std::string> vals(f.domain.begin(), f.domain.end());
            if (vals.size() != f.domain.size())
                throw DataError("schema: duplicate domain value in feature '" + f.name + "'");
        } else if (!f.domain.empty()) {
            throw DataError("schema: numeric feature '" + f.name + "' must not declare a domain");
        }
    }
    if (label_name.empty()) throw DataError("schema: missing label name");
    if (names.count(label_name))
        throw DataError("schema: label '" + label_name + "' collides with a feature");
    if (positive_label.empty()) throw DataError("schema: missing positive label");
    if (id_column && (names.count(*id_column) || *id_column == label_name))
        throw DataError("schema: id column '" + *id_column + "' collides with another column");
}

int Schema::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < features.size(); ++i)
        if (features[i].name == name) return static_cast<int>(i);
    return -1;
}

Schema parse_schema_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("schema: invalid JSON: ") + e.what());
    }
    Schema s;
    try {
        for (const auto& f : j.at("features")) {
            FeatureSpec spec;
            spec.name = f.at("name").get<std::string>();
            const std::string kind = f.at("kind").get<std::string>();
            if (kind == "categorical") {
                spec.kind = FeatureKind::categorical;
                for (const auto& v : f.at("domain")) spec.domain.push_back(v.get<std::string>());
            } else if (kind == "numeric") {
                spec.kind = FeatureKind::numeric;
            } else {
                throw DataError("schema: unknown feature kind '" + kind + "'");
            }
            s.features.push_back(std::move(spec));
        }
        s.label_name = j.at("label").get<std::string>();
        s.positive_label = j.at("positive_label").get<std::string>();
        if (j.contains("id_column") && !j["id_column"].is_null())
            s.id_column = j["id_column"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("schema: bad structure: ") + e.what());
    }
    s.validate();
    return s;
}

Schema load_schema(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open schema file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schema_json(buf.str());
}

const DataRow* Dataset::find_row(const std::string& id) const {
    for (const auto& r : rows)
        if (r.id == id) return &r;
    return nullptr;
}

std::size_t Dataset::positive_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.positive ? 1 : 0;
    return n;
}

}  // namespace limefold
