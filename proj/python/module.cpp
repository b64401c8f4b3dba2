#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "limefold/csv.hpp"
#include "limefold/discretize.hpp"
#include "limefold/eval.hpp"
#include "limefold/fold.hpp"
#include "limefold/ilp.hpp"
#include "limefold/pipeline.hpp"
#include "limefold/schema.hpp"

namespace py = pybind11;
using namespace limefold;

namespace {

FoldParams fold_params(int max_rule_length, int max_exception_depth) {
    FoldParams p;
    p.max_rule_length = max_rule_length;
    p.max_exception_depth = max_exception_depth;
    return p;
}

std::string induce_instance(const IlpInstance& inst, bool use_foil, bool prune,
                            int max_rule_length, int max_exception_depth) {
    const FoldParams p = fold_params(max_rule_length, max_exception_depth);
    Hypothesis h = use_foil ? foil(inst, p) : fold_induce(inst, p);
    if (prune) h = prune_hypothesis(h, inst, 0);
    return h.to_text();
}

PipelineConfig make_config(std::uint64_t seed, int samples, int top_k, int jobs) {
    PipelineConfig cfg;
    cfg.lime.seed = seed;
    cfg.lime.num_samples = samples;
    cfg.lime.top_k = top_k;
    cfg.jobs = jobs;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(limefold, m) {
    m.doc() = "Boosted-tree classification, local surrogate explanations, and induction of "
              "default-theory logic programs";

    m.def("information_gain", &information_gain, py::arg("p0"), py::arg("n0"), py::arg("p1"),
          py::arg("n1"), py::arg("t"),
          "Weighted purity improvement of a candidate literal; -inf when p1 is 0.");

    m.def(
        "mdl_cuts",
        [](std::vector<double> values, const std::vector<bool>& positives) {
            if (values.size() != positives.size())
                throw py::value_error("values and positives must have equal length");
            std::vector<std::pair<double, bool>> samples;
            for (std::size_t i = 0; i < values.size(); ++i)
                samples.emplace_back(values[i], positives[i]);
            return mdl_discretize(std::move(samples));
        },
        py::arg("values"), py::arg("positives"),
        "Entropy-minimizing cut points with the MDL stopping rule.");

    m.def(
        "induce_file",
        [](const std::string& path, bool use_foil, bool prune, int max_rule_length,
           int max_exception_depth) {
            return induce_instance(load_program(path), use_foil, prune, max_rule_length,
                                   max_exception_depth);
        },
        py::arg("path"), py::arg("use_foil") = false, py::arg("prune") = true,
        py::arg("max_rule_length") = 7, py::arg("max_exception_depth") = 3,
        "Induce a program from an instance file (B:/E+:/E-: sections).");

    m.def(
        "induce_text",
        [](const std::string& text, bool use_foil, bool prune, int max_rule_length,
           int max_exception_depth) {
            return induce_instance(parse_program(text), use_foil, prune, max_rule_length,
                                   max_exception_depth);
        },
        py::arg("text"), py::arg("use_foil") = false, py::arg("prune") = true,
        py::arg("max_rule_length") = 7, py::arg("max_exception_depth") = 3,
        "Induce a program from instance text.");

    m.def(
        "lime_fold",
        [](const std::string& csv_path, const std::string& schema_path, std::uint64_t seed,
           int samples, int top_k, int jobs) {
            const Dataset data = load_csv(csv_path, load_schema(schema_path));
            const PipelineConfig cfg = make_config(seed, samples, top_k, jobs);
            PipelineResult res;
            {
                py::gil_scoped_release release;
                res = ::limefold::lime_fold(data, cfg);
            }
            py::dict out;
            out["target"] = res.instance.target;
            out["program"] = res.hypothesis.to_text();
            out["rules"] = res.hypothesis.count_rules();
            out["facts"] = res.hypothesis.facts.size();
            out["explanations"] = res.explanations.size();
            return out;
        },
        py::arg("csv_path"), py::arg("schema_path"), py::arg("seed") = 0,
        py::arg("samples") = 5000, py::arg("top_k") = 8, py::arg("jobs") = 1,
        "Run the whole training-side pipeline and return the induced program.");

    m.def(
        "cross_validate",
        [](const std::string& csv_path, const std::string& schema_path, const std::string& name,
           const std::string& variant, int folds, std::uint64_t seed, int samples, int jobs) {
            const Dataset data = load_csv(csv_path, load_schema(schema_path));
            const PipelineConfig cfg = make_config(seed, samples, 8, jobs);
            CvReport rep;
            {
                py::gil_scoped_release release;
                rep = cross_validate(data, name, variant, folds, seed, cfg);
            }
            return reports_to_csv({rep}, true);
        },
        py::arg("csv_path"), py::arg("schema_path"), py::arg("name"),
        py::arg("variant") = "lime-fold", py::arg("folds") = 5, py::arg("seed") = 0,
        py::arg("samples") = 5000, py::arg("jobs") = 1,
        "Stratified cross-validation; returns the report as CSV text.");
}
