#pragma once

#include <string>
#include <vector>

#include "limefold/binarize.hpp"
#include "limefold/discretize.hpp"
#include "limefold/fold.hpp"
#include "limefold/gbt.hpp"
#include "limefold/ilp.hpp"
#include "limefold/lime.hpp"
#include "limefold/schema.hpp"

namespace limefold {

struct PipelineConfig {
    GbtParams gbt;
    LimeConfig lime;
    FoldParams fold;
    std::string target;  // empty: derived from the schema's label name
    int jobs = 1;
};

// Label or feature name squeezed into a predicate identifier: lowercase,
// [a-z0-9_] only, never starting with a digit.
std::string predicate_name(const std::string& raw);

struct PipelineResult {
    DiscretizationMap map;
    Binarizer bin;
    GbtModel model;
    TrainingStats stats;
    std::vector<Explanation> explanations;
    IlpInstance instance;
    std::vector<ProvenanceEntry> provenance;
    Hypothesis pre_prune;
    Hypothesis hypothesis;
};

// The whole training-side chain: discretize, binarize, boost, explain every
// row, transform the explanations into an induction instance, induce with
// exceptions, prune. Deterministic given the config seeds.
PipelineResult lime_fold(const Dataset& train, const PipelineConfig& config);

// Instance whose facts are the rows' full encodings rather than explanation
// picks: a numeric value becomes its interval fact, a categorical value
// becomes its positive fact plus one classically negated fact per remaining
// domain value, missing cells contribute nothing. Examples carry the rows'
// ground-truth labels. This is how induced rules are checked against held-out
// rows, and the input FOIL runs on when used as a baseline.
IlpInstance full_encoding_instance(const Dataset& data, const DiscretizationMap& map,
                                   const std::string& target);

}  // namespace limefold
