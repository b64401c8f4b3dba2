#pragma once

#include <map>
#include <string>
#include <vector>

namespace limefold {

struct GbtParams {
    int rounds = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    double reg_lambda = 1.0;        // L2 penalty on leaf weights
    double min_child_weight = 0.0;  // minimum hessian sum per child
};

struct TreeNode {
    int feature = -1;       // split column, -1 for a leaf
    double threshold = 0;   // value < threshold or NaN goes left
    int left = -1;
    int right = -1;
    double value = 0;       // leaf weight (unscaled)
    double gain = 0;        // split gain, feeds importance
    bool is_leaf() const { return feature < 0; }
};

// Second-order boosted trees on the logistic loss. Training is exact greedy
// over midpoint thresholds, deterministic, and invariant under row order:
// every reduction over a row set happens in value-sorted order.
struct GbtModel {
    double base_score = 0;  // prior log-odds of the positive class
    double learning_rate = 0.1;
    std::vector<std::string> feature_names;
    std::vector<std::vector<TreeNode>> trees;  // node 0 is each tree's root

    double predict_margin(const std::vector<double>& row) const;
    double predict_proba(const std::vector<double>& row) const;
    bool predict_positive(const std::vector<double>& row) const;  // proba >= 0.5

    // Total split gain per feature; unused features report 0.
    std::map<std::string, double> feature_importance() const;

    std::string to_json() const;
    static GbtModel from_json(const std::string& text);
    static GbtModel load(const std::string& path);
    void save(const std::string& path) const;
};

// rows: one encoded example per entry, all of feature_names' width.
// labels: 1 for the positive class, 0 otherwise.
GbtModel train_gbt(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                   const std::vector<std::string>& feature_names, const GbtParams& params);

double sigmoid(double x);

}  // namespace limefold
