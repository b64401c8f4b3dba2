#include "limefold/lime.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "limefold/errors.hpp"

namespace limefold {

TrainingStats TrainingStats::build(const Binarizer& bin, const DiscretizationMap& map,
                                   const Dataset& train) {
    TrainingStats stats;
    stats.columns.resize(bin.width());
    std::vector<std::vector<double>> encoded;
    encoded.reserve(train.rows.size());
    for (const auto& row : train.rows) encoded.push_back(bin.encode(row));

    for (std::size_t c = 0; c < bin.width(); ++c) {
        const auto& col = bin.columns()[c];
        auto& out = stats.columns[c];
        if (col.value) {
            long ones = 0;
            for (const auto& e : encoded) ones += e[c] == 1.0 ? 1 : 0;
            out.freq_one = encoded.empty() ? 0.0 : static_cast<double>(ones) / encoded.size();
            out.has_values = !encoded.empty();
            continue;
        }
        const std::string& name = col.name;
        const int k = map.interval_count(name);
        out.interval_prob.assign(k, 0.0);
        out.interval_range.assign(k, {0.0, 0.0});
        std::vector<bool> seen(k, false);
        long total = 0;
        for (const auto& e : encoded) {
            if (std::isnan(e[c])) continue;
            const int idx = map.interval_index(name, e[c]);
            out.interval_prob[idx] += 1.0;
            auto& [lo, hi] = out.interval_range[idx];
            if (!seen[idx]) {
                lo = hi = e[c];
                seen[idx] = true;
            } else {
                lo = std::min(lo, e[c]);
                hi = std::max(hi, e[c]);
            }
            ++total;
        }
        if (total > 0) {
            for (auto& p : out.interval_prob) p /= static_cast<double>(total);
            out.has_values = true;
        }
    }
    return stats;
}

PerturbedSample sample_around(const std::vector<double>& x, const Binarizer& bin,
                              const DiscretizationMap& map, const TrainingStats& stats,
                              double p_perturb, Rng& rng) {
    if (x.size() != bin.width() || stats.columns.size() != bin.width())
        throw DataError("sample_around: width mismatch");
    PerturbedSample out;
    out.values.resize(x.size());
    out.interp.resize(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        const auto& col = bin.columns()[c];
        const auto& st = stats.columns[c];
        const bool perturb = st.has_values && rng.bernoulli(p_perturb);
        if (col.value) {
            const double z = perturb ? (rng.bernoulli(st.freq_one) ? 1.0 : 0.0) : x[c];
            out.values[c] = z;
            out.interp[c] = z == x[c] ? 1.0 : 0.0;
        } else {
            double z;
            if (perturb) {
                // One uniform draw picks the interval, a second places the
                // value inside the observed range of that interval.
                const double u = rng.uniform();
                double acc = 0;
                int idx = static_cast<int>(st.interval_prob.size()) - 1;
                for (std::size_t i = 0; i < st.interval_prob.size(); ++i) {
                    acc += st.interval_prob[i];
                    if (u < acc) {
                        idx = static_cast<int>(i);
                        break;
                    }
                }
                const auto& [lo, hi] = st.interval_range[idx];
                z = rng.uniform(lo, hi);
            } else {
                z = x[c];
            }
            out.values[c] = z;
            const bool x_missing = std::isnan(x[c]);
            const bool z_missing = std::isnan(z);
            if (x_missing || z_missing) {
                out.interp[c] = x_missing && z_missing ? 1.0 : 0.0;
            } else {
                out.interp[c] = map.interval_index(col.name, z) == map.interval_index(col.name, x[c])
                                    ? 1.0
                                    : 0.0;
            }
        }
    }
    return out;
}

double kernel_pi(const std::vector<double>& interp, double width) {
    if (width <= 0) throw UsageError("kernel width must be positive");
    double d2 = 0;
    for (double v : interp) {
        const double diff = 1.0 - v;
        d2 += diff * diff;
    }
    return std::exp(-d2 / (width * width));
}

Explanation explain_row(const Classifier& classify, const DataRow& x, const Binarizer& bin,
                        const DiscretizationMap& map, const TrainingStats& stats,
                        const LimeConfig& config) {
    if (config.num_samples < 1) throw UsageError("lime: num_samples must be >= 1");
    if (config.top_k < 1) throw UsageError("lime: top_k must be >= 1");
    const std::size_t d = bin.width();
    const double width =
        config.kernel_width > 0 ? config.kernel_width : 0.75 * std::sqrt(static_cast<double>(d));
    const std::vector<double> x_enc = bin.encode(x);

    Rng rng(stream_seed(config.seed, "lime:" + x.id));

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d + 1, d + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
    Eigen::VectorXd xi(d + 1);
    for (int s = 0; s < config.num_samples; ++s) {
        const PerturbedSample z = sample_around(x_enc, bin, map, stats, config.p_perturb, rng);
        const double y = classify(z.values);
        const double w = kernel_pi(z.interp, width);
        xi(0) = 1.0;
        for (std::size_t c = 0; c < d; ++c) xi(c + 1) = z.interp[c];
        a.selfadjointView<Eigen::Lower>().rankUpdate(xi, w);
        b += w * y * xi;
    }
    a = a.selfadjointView<Eigen::Lower>();

    Eigen::VectorXd beta;
    double penalty = config.ridge;
    for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::MatrixXd reg = a;
        for (std::size_t c = 1; c <= d; ++c) reg(c, c) += penalty;
        beta = reg.ldlt().solve(b);
        if (beta.allFinite()) break;
        penalty *= 10.0;
    }
    if (!beta.allFinite()) throw DataError("lime: regression failed for row '" + x.id + "'");

    // Rank interpretable dimensions by |coefficient|; larger first, lower
    // column index breaks ties.
    std::vector<std::size_t> order(d);
    for (std::size_t c = 0; c < d; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const double al = std::fabs(beta(l + 1));
        const double ar = std::fabs(beta(r + 1));
        if (al != ar) return al > ar;
        return l < r;
    });

    Explanation out;
    out.id = x.id;
    out.positive = classify(x_enc) >= 0.5;
    for (std::size_t c : order) {
        if (static_cast<int>(out.pairs.size()) >= config.top_k) break;
        const auto& col = bin.columns()[c];
        Condition cond;
        cond.feature = bin.columns()[c].name;
        if (col.value) {
            cond.categorical = true;
            cond.feature = cond.feature.substr(0, cond.feature.size() - col.value->size() - 1);
            cond.value = *col.value;
            cond.expected = x_enc[c] == 1.0 ? 1 : 0;
            cond.text = col.name + " = " + std::to_string(cond.expected);
        } else {
            if (std::isnan(x_enc[c])) continue;  // no interval to phrase
            cond.categorical = false;
            cond.interval = map.interval_index(col.name, x_enc[c]);
            cond.text = col.name + " in " + map.interval_text(col.name, cond.interval);
        }
        out.pairs.push_back({std::move(cond), beta(c + 1)});
    }
    return out;
}

std::vector<Explanation> explain_dataset(const GbtModel& model, const Dataset& data,
                                         const Binarizer& bin, const DiscretizationMap& map,
                                         const TrainingStats& stats, const LimeConfig& config,
                                         int jobs) {
    const Classifier classify = [&model](const std::vector<double>& row) {
        return model.predict_proba(row);
    };
    std::vector<Explanation> out(data.rows.size());
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(data.rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < data.rows.size(); ++i)
            out[i] = explain_row(classify, data.rows[i], bin, map, stats, config);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < data.rows.size(); i += workers)
                out[i] = explain_row(classify, data.rows[i], bin, map, stats, config);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

std::string explanation_to_json(const Explanation& e) {
    nlohmann::json j;
    j["id"] = e.id;
    j["label"] = e.positive ? "+" : "-";
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : e.pairs) {
        nlohmann::json jc;
        jc["feature"] = p.condition.feature;
        jc["kind"] = p.condition.categorical ? "categorical" : "interval";
        if (p.condition.categorical) {
            jc["value"] = p.condition.value;
            jc["expected"] = p.condition.expected;
        } else {
            jc["interval"] = p.condition.interval;
        }
        jc["text"] = p.condition.text;
        jc["weight"] = p.weight;
        pairs.push_back(std::move(jc));
    }
    j["pairs"] = std::move(pairs);
    return j.dump();
}

Explanation explanation_from_json(const std::string& line) {
    Explanation e;
    try {
        const nlohmann::json j = nlohmann::json::parse(line);
        e.id = j.at("id").get<std::string>();
        e.positive = j.at("label").get<std::string>() == "+";
        for (const auto& jc : j.at("pairs")) {
            ExplanationPair p;
            p.condition.feature = jc.at("feature").get<std::string>();
            p.condition.categorical = jc.at("kind").get<std::string>() == "categorical";
            if (p.condition.categorical) {
                p.condition.value = jc.at("value").get<std::string>();
                p.condition.expected = jc.at("expected").get<int>();
            } else {
                p.condition.interval = jc.at("interval").get<int>();
            }
            p.condition.text = jc.value("text", "");
            p.weight = jc.at("weight").get<double>();
            e.pairs.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("explanation: invalid JSON line: ") + ex.what());
    }
    return e;
}

}  // namespace limefold
