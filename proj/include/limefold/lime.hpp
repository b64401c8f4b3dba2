#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "limefold/binarize.hpp"
#include "limefold/discretize.hpp"
#include "limefold/gbt.hpp"
#include "limefold/rng.hpp"
#include "limefold/schema.hpp"

namespace limefold {

struct LimeConfig {
    int num_samples = 5000;
    int top_k = 8;
    double p_perturb = 0.5;
    double kernel_width = 0;  // 0 means 0.75 * sqrt(#columns)
    double ridge = 1e-3;
    std::uint64_t seed = 0;   // base seed; each row derives its own stream
};

// Empirical draw tables for perturbation, computed once on the training
// split: indicator columns keep their frequency of 1, numeric columns keep
// per-interval frequencies and the observed value range inside each interval.
struct TrainingStats {
    struct Column {
        double freq_one = 0;                     // indicator columns
        std::vector<double> interval_prob;       // numeric columns
        std::vector<std::pair<double, double>> interval_range;
        bool has_values = false;
    };
    std::vector<Column> columns;

    static TrainingStats build(const Binarizer& bin, const DiscretizationMap& map,
                               const Dataset& train);
};

struct PerturbedSample {
    std::vector<double> values;  // binarized-space row, fed to the classifier
    std::vector<double> interp;  // 1 where the sample agrees with x, else 0
};

// Perturbs each column independently with probability p_perturb, replacing it
// with an empirical draw; kept columns copy x. Agreement for an indicator is
// value equality, for a numeric column same interval (missing matches only
// missing).
PerturbedSample sample_around(const std::vector<double>& x, const Binarizer& bin,
                              const DiscretizationMap& map, const TrainingStats& stats,
                              double p_perturb, Rng& rng);

// exp(-D^2 / width^2) with D the Euclidean distance in the interpretable
// space; for 0/1 agreement vectors D^2 is the number of disagreements.
double kernel_pi(const std::vector<double>& interp, double width);

struct Condition {
    std::string feature;
    bool categorical = false;
    std::string value;  // the domain value an indicator tests
    int expected = 1;   // indicator expectation, 0 or 1
    int interval = 0;   // the interval x falls in (numeric)
    std::string text;
};

struct ExplanationPair {
    Condition condition;
    double weight = 0;
};

struct Explanation {
    std::string id;
    bool positive = false;  // the model's verdict for the row
    std::vector<ExplanationPair> pairs;  // sorted by |weight| descending, <= top_k
};

using Classifier = std::function<double(const std::vector<double>&)>;

// Weighted ridge regression of the classifier's positive-class probability
// onto the agreement indicators; intercept unpenalized. A singular system
// retries with a tenfold larger penalty.
Explanation explain_row(const Classifier& classify, const DataRow& x, const Binarizer& bin,
                        const DiscretizationMap& map, const TrainingStats& stats,
                        const LimeConfig& config);

// One explanation per dataset row, each on its own RNG stream; rows are
// processed in parallel when jobs > 1 with identical results.
std::vector<Explanation> explain_dataset(const GbtModel& model, const Dataset& data,
                                         const Binarizer& bin, const DiscretizationMap& map,
                                         const TrainingStats& stats, const LimeConfig& config,
                                         int jobs = 1);

std::string explanation_to_json(const Explanation& e);
Explanation explanation_from_json(const std::string& line);

}  // namespace limefold
