#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limefold/fold.hpp"
#include "limefold/pipeline.hpp"
#include "limefold/schema.hpp"

namespace limefold {

struct Metrics {
    double precision = 0;
    double recall = 0;
    double accuracy = 0;
    double f1 = 0;
    double rules = 0;    // clause count; fractional in mean rows
    double seconds = 0;  // wall time, the only non-deterministic field
};

// Straight confusion-matrix arithmetic; empty denominators score 0.
Metrics compute_metrics(long tp, long fp, long fn, long tn);

// Predictions are covers() over the instance's example ids; the E+/E- split
// is the ground truth.
Metrics score(const Hypothesis& h, const IlpInstance& test);

// Fold index per row: each class is shuffled by the seed and dealt
// round-robin, so every fold sees both classes when counts allow.
std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed);

struct CvReport {
    std::string dataset;
    std::string variant;  // "lime-fold" or "foil"
    std::vector<Metrics> folds;
    Metrics mean;
};

// Per fold: discretize the training split, run the variant's induction, and
// score the result on the held-out split's full-encoding instance. Seeds are
// derived per fold, so reports are reproducible. When `programs` is given it
// receives one induced program text per fold.
CvReport cross_validate(const Dataset& data, const std::string& dataset_name,
                        const std::string& variant, int k, std::uint64_t seed,
                        const PipelineConfig& base,
                        std::vector<std::string>* programs = nullptr);

// dataset,variant,fold,precision,recall,accuracy,f1,rules[,seconds] rows plus
// one "mean" row per report. Dropping seconds makes the bytes reproducible.
std::string reports_to_csv(const std::vector<CvReport>& reports, bool include_seconds = true);

// Markdown table of per-report means; known corpora get reference columns
// next to the measured values.
std::string reports_to_markdown(const std::vector<CvReport>& reports);

}  // namespace limefold
