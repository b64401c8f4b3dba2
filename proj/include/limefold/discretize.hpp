#pragma once

#include <map>
#include <string>
#include <vector>

#include "limefold/schema.hpp"

namespace limefold {

// Entropy-minimizing recursive binary splitting with the MDL stopping rule.
// Inputs are (value, positive?) pairs; missing values are the caller's
// problem. Returned cut points are strictly increasing midpoints between
// adjacent distinct values. Ties on entropy pick the smallest cut.
std::vector<double> mdl_discretize(std::vector<std::pair<double, bool>> samples);

// Cut points per numeric feature. Features with no cuts have one interval.
struct DiscretizationMap {
    std::map<std::string, std::vector<double>> cuts;

    // Interval of `value` for `feature`: number of cuts <= value, so a value
    // equal to a cut lands in the right interval. Intervals are
    // (-inf,c1), [c1,c2), ..., [ck,+inf), indexed from 0.
    int interval_index(const std::string& feature, double value) const;
    int interval_count(const std::string& feature) const;
    // Human-readable interval, e.g. "[97,120)".
    std::string interval_text(const std::string& feature, int index) const;

    std::string to_json() const;
    static DiscretizationMap from_json(const std::string& text);
};

// Runs mdl_discretize on every numeric feature of the dataset, using the
// row labels as the class signal. Missing cells are skipped.
DiscretizationMap discretize_dataset(const Dataset& data);

}  // namespace limefold
