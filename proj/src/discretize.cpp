#include "limefold/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "limefold/errors.hpp"

namespace limefold {

namespace {

struct ClassCounts {
    long pos = 0;
    long neg = 0;
    long total() const { return pos + neg; }
    int classes() const { return (pos > 0 ? 1 : 0) + (neg > 0 ? 1 : 0); }
    double entropy() const {
        const double n = static_cast<double>(total());
        double e = 0;
        if (pos > 0) e -= (pos / n) * std::log2(pos / n);
        if (neg > 0) e -= (neg / n) * std::log2(neg / n);
        return e;
    }
};

using Sample = std::pair<double, bool>;

// Recursive split of samples[lo, hi), assumed sorted by value.
void split_range(const std::vector<Sample>& samples, std::size_t lo, std::size_t hi,
                 std::vector<double>* cuts) {
    const std::size_t n = hi - lo;
    if (n < 2) return;
    ClassCounts all;
    for (std::size_t i = lo; i < hi; ++i) (samples[i].second ? all.pos : all.neg)++;
    if (all.classes() < 2) return;
    const double ent_all = all.entropy();

    double best_gain = -1;
    double best_cut = 0;
    std::size_t best_split = 0;  // first index of the right part
    ClassCounts best_left, best_right;

    ClassCounts left;
    for (std::size_t i = lo; i + 1 < hi; ++i) {
        (samples[i].second ? left.pos : left.neg)++;
        if (samples[i].first == samples[i + 1].first) continue;
        ClassCounts right{all.pos - left.pos, all.neg - left.neg};
        const double nl = static_cast<double>(left.total());
        const double nr = static_cast<double>(right.total());
        const double gain =
            ent_all - (nl / n) * left.entropy() - (nr / n) * right.entropy();
        if (gain > best_gain) {
            best_gain = gain;
            best_cut = samples[i].first + (samples[i + 1].first - samples[i].first) / 2.0;
            best_split = i + 1;
            best_left = left;
            best_right = right;
        }
    }
    if (best_gain < 0) return;  // all values identical

    // MDL acceptance test for the best split.
    const double delta = std::log2(std::pow(3.0, all.classes()) - 2.0) -
                         (all.classes() * ent_all - best_left.classes() * best_left.entropy() -
                          best_right.classes() * best_right.entropy());
    const double threshold = std::log2(static_cast<double>(n) - 1.0) / n + delta / n;
    if (best_gain <= threshold) return;

    cuts->push_back(best_cut);
    split_range(samples, lo, best_split, cuts);
    split_range(samples, best_split, hi, cuts);
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<double> mdl_discretize(std::vector<Sample> samples) {
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.first < b.first; });
    std::vector<double> cuts;
    split_range(samples, 0, samples.size(), &cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

int DiscretizationMap::interval_index(const std::string& feature, double value) const {
    const auto it = cuts.find(feature);
    if (it == cuts.end()) throw DataError("no discretization for feature '" + feature + "'");
    const auto& c = it->second;
    return static_cast<int>(std::upper_bound(c.begin(), c.end(), value) - c.begin());
}

int DiscretizationMap::interval_count(const std::string& feature) const {
    const auto it = cuts.find(feature);
    if (it == cuts.end()) throw DataError("no discretization for feature '" + feature + "'");
    return static_cast<int>(it->second.size()) + 1;
}

std::string DiscretizationMap::interval_text(const std::string& feature, int index) const {
    const auto it = cuts.find(feature);
    if (it == cuts.end()) throw DataError("no discretization for feature '" + feature + "'");
    const auto& c = it->second;
    if (index < 0 || index > static_cast<int>(c.size()))
        throw DataError("interval index out of range for feature '" + feature + "'");
    const std::string lo = index == 0 ? "-inf" : format_value(c[index - 1]);
    const std::string hi = index == static_cast<int>(c.size()) ? "+inf" : format_value(c[index]);
    return (index == 0 ? "(" : "[") + lo + "," + hi + ")";
}

std::string DiscretizationMap::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, c] : cuts) j[name] = c;
    return j.dump(2);
}

DiscretizationMap DiscretizationMap::from_json(const std::string& text) {
    DiscretizationMap map;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        for (const auto& [name, c] : j.items()) {
            std::vector<double> v = c.get<std::vector<double>>();
            if (!std::is_sorted(v.begin(), v.end()))
                throw DataError("cuts for feature '" + name + "' are not sorted");
            map.cuts[name] = std::move(v);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("discretization map: invalid JSON: ") + e.what());
    }
    return map;
}

DiscretizationMap discretize_dataset(const Dataset& data) {
    DiscretizationMap map;
    for (std::size_t f = 0; f < data.schema.features.size(); ++f) {
        const auto& spec = data.schema.features[f];
        if (spec.kind != FeatureKind::numeric) continue;
        std::vector<Sample> samples;
        for (const auto& row : data.rows) {
            const Cell& cell = row.values[f];
            if (cell.kind == Cell::Kind::number) samples.emplace_back(cell.number, row.positive);
        }
        map.cuts[spec.name] = mdl_discretize(std::move(samples));
    }
    return map;
}

}  // namespace limefold
