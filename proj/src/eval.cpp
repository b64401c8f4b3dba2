#include "limefold/eval.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "limefold/errors.hpp"
#include "limefold/rng.hpp"

namespace limefold {

Metrics compute_metrics(long tp, long fp, long fn, long tn) {
    Metrics m;
    const long total = tp + fp + fn + tn;
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / (tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / (tp + fn);
    if (total > 0) m.accuracy = static_cast<double>(tp + tn) / total;
    if (m.precision + m.recall > 0)
        m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

Metrics score(const Hypothesis& h, const IlpInstance& test) {
    const FactStore store(test);
    long tp = 0, fp = 0;
    for (const auto& id : test.e_plus) tp += h.covers(id, store) ? 1 : 0;
    for (const auto& id : test.e_minus) fp += h.covers(id, store) ? 1 : 0;
    const long fn = static_cast<long>(test.e_plus.size()) - tp;
    const long tn = static_cast<long>(test.e_minus.size()) - fp;
    Metrics m = compute_metrics(tp, fp, fn, tn);
    m.rules = h.count_rules();
    return m;
}

std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw UsageError("cross-validation needs at least 2 folds");
    Rng rng(stream_seed(seed, "cv"));
    std::vector<int> out(data.rows.size(), 0);
    for (const bool positive : {true, false}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.rows.size(); ++i)
            if (data.rows[i].positive == positive) idx.push_back(i);
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.index(static_cast<int>(i))]);
        for (std::size_t j = 0; j < idx.size(); ++j)
            out[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
    return out;
}

CvReport cross_validate(const Dataset& data, const std::string& dataset_name,
                        const std::string& variant, int k, std::uint64_t seed,
                        const PipelineConfig& base, std::vector<std::string>* programs) {
    if (variant != "lime-fold" && variant != "foil")
        throw UsageError("unknown variant '" + variant + "' (expected lime-fold or foil)");
    const std::vector<int> fold_of = stratified_folds(data, k, seed);
    CvReport rep;
    rep.dataset = dataset_name;
    rep.variant = variant;
    const std::string target =
        base.target.empty() ? predicate_name(data.schema.label_name) : base.target;
    for (int f = 0; f < k; ++f) {
        Dataset train{data.schema, {}};
        Dataset test{data.schema, {}};
        for (std::size_t i = 0; i < data.rows.size(); ++i)
            (fold_of[i] == f ? test : train).rows.push_back(data.rows[i]);
        if (train.rows.empty() || test.rows.empty())
            throw DataError("cross-validation fold " + std::to_string(f) + " is empty");
        const auto t0 = std::chrono::steady_clock::now();
        Metrics m;
        std::string program;
        if (variant == "lime-fold") {
            PipelineConfig cfg = base;
            cfg.lime.seed = stream_seed(seed, "fold:" + std::to_string(f));
            const PipelineResult res = lime_fold(train, cfg);
            const IlpInstance test_inst = full_encoding_instance(test, res.map, res.instance.target);
            m = score(res.hypothesis, test_inst);
            program = res.hypothesis.to_text();
        } else {
            const DiscretizationMap map = discretize_dataset(train);
            const IlpInstance train_inst = full_encoding_instance(train, map, target);
            const Hypothesis h = foil(train_inst, base.fold);
            const IlpInstance test_inst = full_encoding_instance(test, map, target);
            m = score(h, test_inst);
            program = h.to_text();
        }
        m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.folds.push_back(m);
        if (programs) programs->push_back(std::move(program));
    }
    for (const auto& m : rep.folds) {
        rep.mean.precision += m.precision;
        rep.mean.recall += m.recall;
        rep.mean.accuracy += m.accuracy;
        rep.mean.f1 += m.f1;
        rep.mean.rules += m.rules;
        rep.mean.seconds += m.seconds;
    }
    const double n = static_cast<double>(rep.folds.size());
    rep.mean.precision /= n;
    rep.mean.recall /= n;
    rep.mean.accuracy /= n;
    rep.mean.f1 /= n;
    rep.mean.rules /= n;
    rep.mean.seconds /= n;
    return rep;
}

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Reference {
    double precision, recall, accuracy, f1;
};

// Reference figures the bundled corpora are tuned to approximate.
const std::map<std::string, Reference>& references() {
    static const std::map<std::string, Reference> refs = {
        {"heart", {0.82, 0.74, 0.82, 0.78}},
        {"breast-w", {0.94, 0.92, 0.95, 0.92}},
        {"voting", {0.98, 0.96, 0.97, 0.97}},
    };
    return refs;
}

}  // namespace

std::string reports_to_csv(const std::vector<CvReport>& reports, bool include_seconds) {
    std::ostringstream out;
    out << "dataset,variant,fold,precision,recall,accuracy,f1,rules";
    if (include_seconds) out << ",seconds";
    out << '\n';
    auto row = [&](const CvReport& r, const std::string& fold, const Metrics& m) {
        out << r.dataset << ',' << r.variant << ',' << fold << ',' << fixed6(m.precision) << ','
            << fixed6(m.recall) << ',' << fixed6(m.accuracy) << ',' << fixed6(m.f1) << ','
            << compact(m.rules);
        if (include_seconds) out << ',' << fixed6(m.seconds);
        out << '\n';
    };
    for (const auto& r : reports) {
        for (std::size_t f = 0; f < r.folds.size(); ++f)
            row(r, std::to_string(f), r.folds[f]);
        row(r, "mean", r.mean);
    }
    return out.str();
}

std::string reports_to_markdown(const std::vector<CvReport>& reports) {
    std::ostringstream out;
    out << "# Cross-validation summary\n\n";
    out << "Mean metrics over stratified folds. The reference columns give the\n";
    out << "figures the bundled corpora are tuned to approximate; the bundled\n";
    out << "files are synthetic stand-ins, so a rough match is the expectation.\n\n";
    out << "| dataset | variant | precision | recall | accuracy | f1 | rules | ref. precision | ref. recall | ref. accuracy | ref. f1 |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    auto cell = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    for (const auto& r : reports) {
        out << "| " << r.dataset << " | " << r.variant << " | " << cell(r.mean.precision) << " | "
            << cell(r.mean.recall) << " | " << cell(r.mean.accuracy) << " | " << cell(r.mean.f1)
            << " | " << compact(r.mean.rules) << " | ";
        const auto it = references().find(r.dataset);
        if (it != references().end() && r.variant == "lime-fold") {
            out << cell(it->second.precision) << " | " << cell(it->second.recall) << " | "
                << cell(it->second.accuracy) << " | " << cell(it->second.f1) << " |\n";
        } else {
            out << "- | - | - | - |\n";
        }
    }
    return out.str();
}

}  // namespace limefold
