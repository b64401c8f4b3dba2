#include "limefold/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "limefold/errors.hpp"

namespace limefold {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

// Order-independent reduction: sums the multiset in sorted order so that the
// result does not depend on how the caller happened to order the rows.
struct GradSum {
    double g = 0;
    double h = 0;
};

GradSum stable_sum(std::vector<std::pair<double, double>> gh) {
    std::sort(gh.begin(), gh.end());
    GradSum s;
    for (const auto& [g, h] : gh) {
        s.g += g;
        s.h += h;
    }
    return s;
}

struct Trainer {
    const std::vector<std::vector<double>>& rows;
    const GbtParams& params;
    std::vector<double> grad;
    std::vector<double> hess;
    std::vector<TreeNode> nodes;

    double leaf_value(const GradSum& s) const { return -s.g / (s.h + params.reg_lambda); }

    double score(const GradSum& s) const { return s.g * s.g / (s.h + params.reg_lambda); }

    GradSum sum_over(const std::vector<int>& idx) const {
        std::vector<std::pair<double, double>> gh;
        gh.reserve(idx.size());
        for (int i : idx) gh.emplace_back(grad[i], hess[i]);
        return stable_sum(std::move(gh));
    }

    int build(const std::vector<int>& idx, int depth) {
        const GradSum total = sum_over(idx);
        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_id].value = leaf_value(total);
        if (depth >= params.max_depth || idx.size() < 2) return node_id;

        const std::size_t n_features = rows[idx[0]].size();
        double best_gain = 0;
        int best_feature = -1;
        double best_threshold = 0;

        for (std::size_t j = 0; j < n_features; ++j) {
            std::vector<std::pair<double, int>> present;
            std::vector<std::pair<double, double>> missing_gh;
            present.reserve(idx.size());
            for (int i : idx) {
                const double v = rows[i][j];
                if (std::isnan(v))
                    missing_gh.emplace_back(grad[i], hess[i]);
                else
                    present.emplace_back(v, i);
            }
            if (present.size() < 2) continue;
            std::sort(present.begin(), present.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            GradSum left = stable_sum(std::move(missing_gh));  // NaN routes left
            std::size_t i = 0;
            while (i < present.size()) {
                std::size_t k = i;
                std::vector<std::pair<double, double>> group;
                while (k < present.size() && present[k].first == present[i].first) {
                    group.emplace_back(grad[present[k].second], hess[present[k].second]);
                    ++k;
                }
                const GradSum gs = stable_sum(std::move(group));
                left.g += gs.g;
                left.h += gs.h;
                if (k == present.size()) break;
                const GradSum right{total.g - left.g, total.h - left.h};
                if (left.h >= params.min_child_weight && right.h >= params.min_child_weight) {
                    const double gain = 0.5 * (score(left) + score(right) - score(total));
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(j);
                        best_threshold = present[i].first +
                                         (present[k].first - present[i].first) / 2.0;
                    }
                }
                i = k;
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<int> left_idx, right_idx;
        for (int i : idx) {
            const double v = rows[i][best_feature];
            if (std::isnan(v) || v < best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        nodes[node_id].gain = best_gain;
        nodes[node_id].left = build(left_idx, depth + 1);
        nodes[node_id].right = build(right_idx, depth + 1);
        return node_id;
    }
};

double tree_predict(const std::vector<TreeNode>& nodes, const std::vector<double>& row) {
    int at = 0;
    while (!nodes[at].is_leaf()) {
        const double v = row[nodes[at].feature];
        at = (std::isnan(v) || v < nodes[at].threshold) ? nodes[at].left : nodes[at].right;
    }
    return nodes[at].value;
}

}  // namespace

GbtModel train_gbt(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                   const std::vector<std::string>& feature_names, const GbtParams& params) {
    if (rows.empty()) throw DataError("gbt: cannot train on an empty dataset");
    if (rows.size() != labels.size()) throw DataError("gbt: rows and labels disagree in length");
    for (const auto& r : rows)
        if (r.size() != feature_names.size())
            throw DataError("gbt: row width does not match the feature list");
    if (params.rounds < 0 || params.max_depth < 0 || params.learning_rate <= 0 ||
        params.reg_lambda < 0)
        throw UsageError("gbt: invalid training parameters");

    GbtModel model;
    model.learning_rate = params.learning_rate;
    model.feature_names = feature_names;

    double p = 0;
    for (int y : labels) p += y;
    p /= static_cast<double>(labels.size());
    p = std::min(1.0 - 1e-12, std::max(1e-12, p));
    model.base_score = std::log(p / (1.0 - p));

    std::vector<double> margin(rows.size(), model.base_score);
    std::vector<int> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

    for (int round = 0; round < params.rounds; ++round) {
        Trainer tr{rows, params, {}, {}, {}};
        tr.grad.resize(rows.size());
        tr.hess.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double pi = sigmoid(margin[i]);
            tr.grad[i] = pi - labels[i];
            tr.hess[i] = pi * (1.0 - pi);
        }
        tr.build(all, 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            margin[i] += params.learning_rate * tree_predict(tr.nodes, rows[i]);
        model.trees.push_back(std::move(tr.nodes));
    }
    return model;
}

double GbtModel::predict_margin(const std::vector<double>& row) const {
    if (row.size() != feature_names.size())
        throw DataError("gbt: row width " + std::to_string(row.size()) +
                        " does not match the model's " + std::to_string(feature_names.size()));
    double m = base_score;
    for (const auto& t : trees) m += learning_rate * tree_predict(t, row);
    return m;
}

double GbtModel::predict_proba(const std::vector<double>& row) const {
    return sigmoid(predict_margin(row));
}

bool GbtModel::predict_positive(const std::vector<double>& row) const {
    return predict_proba(row) >= 0.5;
}

std::map<std::string, double> GbtModel::feature_importance() const {
    std::map<std::string, double> imp;
    for (const auto& name : feature_names) imp[name] = 0.0;
    for (const auto& t : trees)
        for (const auto& node : t)
            if (!node.is_leaf()) imp[feature_names[node.feature]] += node.gain;
    return imp;
}

std::string GbtModel::to_json() const {
    nlohmann::json j;
    j["base_score"] = base_score;
    j["learning_rate"] = learning_rate;
    j["feature_names"] = feature_names;
    nlohmann::json jt = nlohmann::json::array();
    for (const auto& t : trees) {
        nlohmann::json jn = nlohmann::json::array();
        for (const auto& n : t) {
            jn.push_back({{"feature", n.feature},
                          {"threshold", n.threshold},
                          {"left", n.left},
                          {"right", n.right},
                          {"value", n.value},
                          {"gain", n.gain}});
        }
        jt.push_back(std::move(jn));
    }
    j["trees"] = std::move(jt);
    return j.dump(2);
}

GbtModel GbtModel::from_json(const std::string& text) {
    GbtModel m;
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        m.base_score = j.at("base_score").get<double>();
        m.learning_rate = j.at("learning_rate").get<double>();
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        for (const auto& jt : j.at("trees")) {
            std::vector<TreeNode> t;
            for (const auto& jn : jt) {
                TreeNode n;
                n.feature = jn.at("feature").get<int>();
                n.threshold = jn.at("threshold").get<double>();
                n.left = jn.at("left").get<int>();
                n.right = jn.at("right").get<int>();
                n.value = jn.at("value").get<double>();
                n.gain = jn.at("gain").get<double>();
                t.push_back(n);
            }
            if (t.empty()) throw DataError("gbt: empty tree in model file");
            m.trees.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("gbt: invalid model JSON: ") + e.what());
    }
    return m;
}

GbtModel GbtModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void GbtModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out << to_json() << "\n";
}

}  // namespace limefold
