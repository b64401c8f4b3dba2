#include "limefold/pipeline.hpp"

#include <cctype>

#include "limefold/errors.hpp"

namespace limefold {

std::string predicate_name(const std::string& raw) {
    std::string out;
    for (const char ch : raw) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c))
            out.push_back(static_cast<char>(std::tolower(c)));
        else
            out.push_back('_');
    }
    if (out.empty()) out = "p";
    if (std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), 'p');
    return out;
}

PipelineResult lime_fold(const Dataset& train, const PipelineConfig& config) {
    if (train.rows.empty()) throw DataError("pipeline: empty training set");
    PipelineResult r;
    r.map = discretize_dataset(train);
    r.bin = Binarizer(train.schema);

    std::vector<std::vector<double>> matrix;
    std::vector<int> labels;
    matrix.reserve(train.rows.size());
    labels.reserve(train.rows.size());
    for (const auto& row : train.rows) {
        matrix.push_back(r.bin.encode(row));
        labels.push_back(row.positive ? 1 : 0);
    }
    std::vector<std::string> names;
    for (const auto& col : r.bin.columns()) names.push_back(col.name);
    r.model = train_gbt(matrix, labels, names, config.gbt);

    r.stats = TrainingStats::build(r.bin, r.map, train);
    r.explanations =
        explain_dataset(r.model, train, r.bin, r.map, r.stats, config.lime, config.jobs);

    const std::string target =
        config.target.empty() ? predicate_name(train.schema.label_name) : config.target;
    TransformResult tr = transform(train, r.explanations, target);
    r.instance = std::move(tr.instance);
    r.provenance = std::move(tr.provenance);

    r.pre_prune = fold_induce(r.instance, config.fold);
    r.hypothesis = prune_hypothesis(r.pre_prune, r.instance, 0);
    return r;
}

IlpInstance full_encoding_instance(const Dataset& data, const DiscretizationMap& map,
                                   const std::string& target) {
    IlpInstance inst;
    inst.target = target;
    for (const auto& row : data.rows) {
        (row.positive ? inst.e_plus : inst.e_minus).push_back(row.id);
        for (std::size_t fi = 0; fi < data.schema.features.size(); ++fi) {
            const FeatureSpec& spec = data.schema.features[fi];
            const Cell& cell = row.values[fi];
            if (cell.is_missing()) continue;
            if (spec.kind == FeatureKind::numeric) {
                Atom a;
                a.pred = spec.name;
                a.args = {row.id, std::to_string(map.interval_index(spec.name, cell.number))};
                inst.atoms.push_back(std::move(a));
            } else {
                for (const auto& v : spec.domain) {
                    Atom a;
                    a.pred = spec.name;
                    a.args = {row.id, v};
                    a.negated = v != cell.category;
                    inst.atoms.push_back(std::move(a));
                }
            }
        }
    }
    inst.validate();
    return inst;
}

}  // namespace limefold
