#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "limefold/csv.hpp"
#include "limefold/discretize.hpp"
#include "limefold/errors.hpp"
#include "limefold/eval.hpp"
#include "limefold/fold.hpp"
#include "limefold/gbt.hpp"
#include "limefold/ilp.hpp"
#include "limefold/lime.hpp"
#include "limefold/pipeline.hpp"
#include "limefold/rng.hpp"
#include "limefold/schema.hpp"

namespace {

using namespace limefold;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path + "'");
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

struct IoOpts {
    std::string csv;
    std::string schema;

    void attach(CLI::App* cmd) {
        cmd->add_option("--csv", csv, "CSV data file")->required();
        cmd->add_option("--schema", schema, "JSON schema file")->required();
    }
    Dataset load() const { return load_csv(csv, load_schema(schema)); }
};

struct GbtOpts {
    GbtParams params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rounds", params.rounds, "Boosting rounds");
        cmd->add_option("--max-depth", params.max_depth, "Tree depth limit");
        cmd->add_option("--learning-rate", params.learning_rate, "Shrinkage per round");
        cmd->add_option("--lambda", params.reg_lambda, "L2 penalty on leaf weights");
        cmd->add_option("--min-child-weight", params.min_child_weight,
                        "Minimum hessian sum per child");
    }
};

struct LimeOpts {
    LimeConfig config;

    void attach(CLI::App* cmd, bool with_seed) {
        cmd->add_option("--samples", config.num_samples, "Perturbed samples per row");
        cmd->add_option("--top-k", config.top_k, "Explanation length");
        cmd->add_option("--p-perturb", config.p_perturb, "Per-column perturbation probability");
        cmd->add_option("--kernel-width", config.kernel_width,
                        "Similarity kernel width (0: 0.75*sqrt(columns))");
        cmd->add_option("--ridge", config.ridge, "Ridge penalty of the local fit");
        if (with_seed) cmd->add_option("--seed", config.seed, "Random seed");
    }
};

struct FoldOpts {
    FoldParams params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-rule-length", params.max_rule_length, "Body literal limit");
        cmd->add_option("--max-exception-depth", params.max_exception_depth,
                        "Nesting limit for exceptions");
        cmd->add_option("--literal-cost", params.literal_cost,
                        "Description cost of one body literal");
        cmd->add_option("--fact-cost", params.fact_cost,
                        "Description cost of one enumerated fact");
    }
};

std::vector<Explanation> load_explanations(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<Explanation> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(explanation_from_json(line));
    }
    return out;
}

const std::vector<std::string>& bundled_names() {
    static const std::vector<std::string> names = {"breast-w", "heart", "voting"};
    return names;
}

int cmd_discretize(const IoOpts& io, const std::string& out_path) {
    const Dataset data = io.load();
    emit(out_path, discretize_dataset(data).to_json() + "\n");
    return 0;
}

int cmd_train(const IoOpts& io, const GbtOpts& gbt, const std::string& out_path,
              const std::string& importance_path) {
    const Dataset data = io.load();
    const Binarizer bin(data.schema);
    std::vector<std::vector<double>> matrix;
    std::vector<int> labels;
    for (const auto& row : data.rows) {
        matrix.push_back(bin.encode(row));
        labels.push_back(row.positive ? 1 : 0);
    }
    std::vector<std::string> names;
    for (const auto& col : bin.columns()) names.push_back(col.name);
    const GbtModel model = train_gbt(matrix, labels, names, gbt.params);
    write_file(out_path, model.to_json() + "\n");
    if (!importance_path.empty()) {
        std::ostringstream imp;
        imp << "feature,gain\n";
        for (const auto& [name, gain] : model.feature_importance()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", gain);
            imp << name << ',' << buf << '\n';
        }
        write_file(importance_path, imp.str());
    }
    long correct = 0;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        correct += (model.predict_positive(matrix[i]) ? 1 : 0) == labels[i] ? 1 : 0;
    std::cout << "trained " << model.trees.size() << " trees on " << matrix.size()
              << " rows; training accuracy "
              << static_cast<double>(correct) / static_cast<double>(matrix.size()) << "\n";
    return 0;
}

int cmd_explain(const IoOpts& io, const LimeOpts& lime, const std::string& model_path,
                const std::string& map_path, const std::string& out_path, int jobs) {
    const Dataset data = io.load();
    const GbtModel model = GbtModel::load(model_path);
    const DiscretizationMap map = map_path.empty()
                                      ? discretize_dataset(data)
                                      : DiscretizationMap::from_json(read_file(map_path));
    const Binarizer bin(data.schema);
    const TrainingStats stats = TrainingStats::build(bin, map, data);
    const auto explanations =
        explain_dataset(model, data, bin, map, stats, lime.config, resolve_jobs(jobs));
    std::ostringstream out;
    for (const auto& e : explanations) out << explanation_to_json(e) << '\n';
    emit(out_path, out.str());
    return 0;
}

int cmd_transform(const IoOpts& io, const std::string& explanations_path, std::string target,
                  const std::string& out_path, const std::string& provenance_path) {
    const Dataset data = io.load();
    if (target.empty()) target = predicate_name(data.schema.label_name);
    const TransformResult tr = transform(data, load_explanations(explanations_path), target);
    emit(out_path, emit_program(tr.instance));
    if (!provenance_path.empty()) write_file(provenance_path, provenance_to_json(tr.provenance));
    return 0;
}

int cmd_induce(const std::string& instance_path, bool use_foil, bool no_prune,
               const FoldOpts& fold_opts, bool as_json, const std::string& out_path) {
    const IlpInstance inst = load_program(instance_path);
    Hypothesis h = use_foil ? foil(inst, fold_opts.params) : fold_induce(inst, fold_opts.params);
    if (!no_prune) h = prune_hypothesis(h, inst, 0);
    if (as_json) {
        const FactStore store(inst);
        emit(out_path, h.to_json(&store, &inst.e_plus, &inst.e_minus) + "\n");
    } else {
        emit(out_path, h.to_text());
    }
    return 0;
}

int cmd_evaluate(const IoOpts& io, std::string name, const std::string& variant, int folds,
                 std::uint64_t seed, const PipelineConfig& base, const std::string& out_path,
                 const std::string& markdown_path) {
    const Dataset data = io.load();
    if (name.empty()) name = std::filesystem::path(io.csv).stem().string();
    std::vector<CvReport> reports;
    if (variant == "both" || variant == "lime-fold")
        reports.push_back(cross_validate(data, name, "lime-fold", folds, seed, base));
    if (variant == "both" || variant == "foil")
        reports.push_back(cross_validate(data, name, "foil", folds, seed, base));
    if (reports.empty())
        throw UsageError("unknown variant '" + variant + "' (expected lime-fold, foil, or both)");
    emit(out_path, reports_to_csv(reports, true));
    if (!markdown_path.empty()) write_file(markdown_path, reports_to_markdown(reports));
    return 0;
}

int cmd_reproduce(const std::string& name, std::uint64_t seed, std::string out_dir,
                  const std::string& data_dir, const PipelineConfig& base) {
    bool known = false;
    for (const auto& n : bundled_names()) known = known || n == name;
    if (!known) {
        std::string list;
        for (const auto& n : bundled_names()) list += (list.empty() ? "" : ", ") + n;
        throw UsageError("unknown dataset '" + name + "'; bundled datasets: " + list);
    }
    const Dataset data =
        load_csv(data_dir + "/" + name + ".csv", load_schema(data_dir + "/" + name + ".schema.json"));
    if (out_dir.empty()) out_dir = "runs/" + name;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> fold_programs;
    std::vector<CvReport> reports;
    reports.push_back(cross_validate(data, name, "lime-fold", 5, seed, base, &fold_programs));
    reports.push_back(cross_validate(data, name, "foil", 5, seed, base));

    PipelineConfig whole_cfg = base;
    whole_cfg.lime.seed = stream_seed(seed, "whole");
    const PipelineResult whole = lime_fold(data, whole_cfg);

    write_file(out_dir + "/report.csv", reports_to_csv(reports, false));
    write_file(out_dir + "/timings.csv", reports_to_csv(reports, true));
    write_file(out_dir + "/report.md", reports_to_markdown(reports));
    for (std::size_t f = 0; f < fold_programs.size(); ++f)
        write_file(out_dir + "/fold-" + std::to_string(f) + ".pl", fold_programs[f]);
    write_file(out_dir + "/whole.pl", whole.hypothesis.to_text());
    {
        const FactStore store(whole.instance);
        write_file(out_dir + "/whole.json",
                   whole.hypothesis.to_json(&store, &whole.instance.e_plus,
                                            &whole.instance.e_minus) +
                       "\n");
    }
    write_file(out_dir + "/instance.pl", emit_program(whole.instance));
    {
        std::ostringstream expl;
        for (const auto& e : whole.explanations) expl << explanation_to_json(e) << '\n';
        write_file(out_dir + "/explanations.jsonl", expl.str());
    }
    write_file(out_dir + "/model.json", whole.model.to_json() + "\n");
    write_file(out_dir + "/discretization.json", whole.map.to_json() + "\n");
    write_file(out_dir + "/provenance.json", provenance_to_json(whole.provenance));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const auto& r : reports) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s %s: mean F1 %.3f, mean rules %.1f", r.dataset.c_str(),
                      r.variant.c_str(), r.mean.f1, r.mean.rules);
        std::cout << buf << "\n";
    }
    std::cout << "whole-dataset program: " << whole.hypothesis.count_rules() << " clauses, "
              << whole.hypothesis.facts.size() << " enumerated facts\n";
    std::cout << "artifacts in " << out_dir << " (" << elapsed << " s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boosted-tree classification, local surrogate explanations, and induction of "
                 "default-theory logic programs from tabular data"};
    app.require_subcommand(1);

    IoOpts disc_io;
    std::string disc_out;
    auto* disc = app.add_subcommand("discretize", "Compute MDL cut points per numeric feature");
    disc_io.attach(disc);
    disc->add_option("--out", disc_out, "Output JSON path (default: stdout)");

    IoOpts train_io;
    GbtOpts train_gbt_opts;
    std::string train_out, train_importance;
    auto* train = app.add_subcommand("train", "Train the boosted-tree classifier");
    train_io.attach(train);
    train_gbt_opts.attach(train);
    train->add_option("--out", train_out, "Model JSON path")->required();
    train->add_option("--importance", train_importance, "Also write gain importance CSV here");

    IoOpts explain_io;
    LimeOpts explain_lime;
    std::string explain_model, explain_map, explain_out;
    int explain_jobs = 0;
    auto* explain = app.add_subcommand("explain", "Explain every row of a dataset");
    explain_io.attach(explain);
    explain_lime.attach(explain, true);
    explain->add_option("--model", explain_model, "Trained model JSON")->required();
    explain->add_option("--map", explain_map, "Discretization JSON (default: recompute)");
    explain->add_option("--out", explain_out, "Output JSONL path (default: stdout)");
    explain->add_option("--jobs", explain_jobs, "Worker threads (0: all cores)");

    IoOpts tr_io;
    std::string tr_explanations, tr_target, tr_out, tr_provenance;
    auto* tr = app.add_subcommand("transform", "Turn explanations into an induction instance");
    tr_io.attach(tr);
    tr->add_option("--explanations", tr_explanations, "Explanations JSONL")->required();
    tr->add_option("--target", tr_target, "Target predicate (default: label name)");
    tr->add_option("--out", tr_out, "Output program path (default: stdout)");
    tr->add_option("--provenance", tr_provenance, "Fact provenance JSON path");

    std::string induce_instance, induce_out;
    bool induce_foil = false, induce_no_prune = false, induce_json = false;
    FoldOpts induce_fold;
    auto* induce = app.add_subcommand("induce", "Induce a program from an instance file");
    induce->add_option("--instance", induce_instance, "Program file with B:/E+:/E-: sections")
        ->required();
    induce->add_flag("--foil", induce_foil, "Plain Horn-clause induction, no exceptions");
    induce->add_flag("--no-prune", induce_no_prune, "Skip post-induction pruning");
    induce->add_flag("--json", induce_json, "JSON output with coverage statistics");
    induce_fold.attach(induce);
    induce->add_option("--out", induce_out, "Output path (default: stdout)");

    IoOpts eval_io;
    GbtOpts eval_gbt;
    LimeOpts eval_lime;
    FoldOpts eval_fold;
    std::string eval_name, eval_variant = "both", eval_out, eval_markdown;
    int eval_folds = 5, eval_jobs = 0;
    std::uint64_t eval_seed = 0;
    auto* eval = app.add_subcommand("evaluate", "Cross-validate induction quality");
    eval_io.attach(eval);
    eval_gbt.attach(eval);
    eval_lime.attach(eval, false);
    eval_fold.attach(eval);
    eval->add_option("--seed", eval_seed, "Random seed")->required();
    eval->add_option("--name", eval_name, "Dataset name in the report (default: CSV stem)");
    eval->add_option("--variant", eval_variant, "lime-fold, foil, or both");
    eval->add_option("--folds", eval_folds, "Fold count");
    eval->add_option("--out", eval_out, "Report CSV path (default: stdout)");
    eval->add_option("--markdown", eval_markdown, "Also write a Markdown summary here");
    eval->add_option("--jobs", eval_jobs, "Worker threads (0: all cores)");

    std::string rep_name, rep_out, rep_data = "data";
    GbtOpts rep_gbt;
    LimeOpts rep_lime;
    FoldOpts rep_fold;
    std::uint64_t rep_seed = 0;
    int rep_jobs = 0;
    auto* rep = app.add_subcommand("reproduce", "Full pipeline over a bundled dataset");
    rep->add_option("name", rep_name, "Bundled dataset name")->required();
    rep->add_option("--seed", rep_seed, "Random seed")->required();
    rep->add_option("--out", rep_out, "Artifact directory (default: runs/<name>)");
    rep->add_option("--data-dir", rep_data, "Directory with bundled datasets");
    rep->add_option("--jobs", rep_jobs, "Worker threads (0: all cores)");
    rep_gbt.attach(rep);
    rep_lime.attach(rep, false);
    rep_fold.attach(rep);

    try {
        app.parse(argc, argv);
        if (disc->parsed()) return cmd_discretize(disc_io, disc_out);
        if (train->parsed())
            return cmd_train(train_io, train_gbt_opts, train_out, train_importance);
        if (explain->parsed())
            return cmd_explain(explain_io, explain_lime, explain_model, explain_map, explain_out,
                               explain_jobs);
        if (tr->parsed()) return cmd_transform(tr_io, tr_explanations, tr_target, tr_out,
                                               tr_provenance);
        if (induce->parsed())
            return cmd_induce(induce_instance, induce_foil, induce_no_prune, induce_fold,
                              induce_json, induce_out);
        if (eval->parsed()) {
            PipelineConfig base{eval_gbt.params, eval_lime.config, eval_fold.params, "",
                                resolve_jobs(eval_jobs)};
            return cmd_evaluate(eval_io, eval_name, eval_variant, eval_folds, eval_seed, base,
                                eval_out, eval_markdown);
        }
        if (rep->parsed()) {
            PipelineConfig base{rep_gbt.params, rep_lime.config, rep_fold.params, "",
                                resolve_jobs(rep_jobs)};
            return cmd_reproduce(rep_name, rep_seed, rep_out, rep_data, base);
        }
        throw limefold::UsageError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const limefold::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const limefold::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
