#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "limefold/errors.hpp"
#include "limefold/eval.hpp"
#include "limefold/pipeline.hpp"
#include "limefold/schema.hpp"

using namespace limefold;

namespace {

Dataset toy_dataset() {
    Dataset d;
    FeatureSpec x;
    x.name = "x";
    x.kind = FeatureKind::numeric;
    FeatureSpec c;
    c.name = "c";
    c.kind = FeatureKind::categorical;
    c.domain = {"p", "q"};
    d.schema.features = {x, c};
    d.schema.label_name = "class";
    d.schema.positive_label = "yes";
    for (int i = 0; i < 40; ++i) {
        DataRow r;
        r.id = "r" + std::to_string(i);
        r.positive = i < 21;
        const double v = r.positive ? 10.0 + i % 10 : i % 5;
        r.values = {Cell::num(v), Cell::cat(i % 2 ? "p" : "q")};
        d.rows.push_back(r);
    }
    return d;
}

}  // namespace

TEST_CASE("confusion-matrix metrics") {
    const Metrics m = compute_metrics(4, 1, 2, 3);
    CHECK(m.precision == doctest::Approx(0.8));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.accuracy == doctest::Approx(0.7));
    CHECK(m.f1 == doctest::Approx(2 * 0.8 * (2.0 / 3.0) / (0.8 + 2.0 / 3.0)));
    CHECK(m.rules == 0);
    CHECK(m.seconds == 0);
}

TEST_CASE("empty denominators score zero instead of dividing") {
    const Metrics all_zero = compute_metrics(0, 0, 0, 0);
    CHECK(all_zero.precision == 0);
    CHECK(all_zero.recall == 0);
    CHECK(all_zero.accuracy == 0);
    CHECK(all_zero.f1 == 0);

    const Metrics no_predicted_pos = compute_metrics(0, 0, 2, 3);
    CHECK(no_predicted_pos.precision == 0);
    CHECK(no_predicted_pos.recall == 0);
    CHECK(no_predicted_pos.accuracy == doctest::Approx(0.6));
    CHECK(no_predicted_pos.f1 == 0);
}

TEST_CASE("scoring a hypothesis against a held-out instance") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a", "b", "c"};
    inst.e_minus = {"d", "e"};
    inst.atoms = {{"u", {"a"}}, {"u", {"b"}}, {"u", {"d"}}};

    Hypothesis h;
    h.target = "t";
    Clause c;
    c.body.push_back({"u", std::nullopt, false, false, -1});
    h.defaults.push_back(c);

    const Metrics m = score(h, inst);
    // tp=2 (a,b), fp=1 (d), fn=1 (c), tn=1 (e)
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.accuracy == doctest::Approx(0.6));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
    CHECK(m.rules == 1.0);
}

TEST_CASE("stratified folds balance both classes") {
    const Dataset d = toy_dataset();  // 21 positive, 19 negative
    const std::vector<int> fold_of = stratified_folds(d, 5, 42);
    REQUIRE(fold_of.size() == d.rows.size());

    long pos_in[5] = {0}, neg_in[5] = {0};
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        REQUIRE(fold_of[i] >= 0);
        REQUIRE(fold_of[i] < 5);
        (d.rows[i].positive ? pos_in : neg_in)[fold_of[i]]++;
    }
    for (int f = 0; f < 5; ++f) {
        CHECK(pos_in[f] >= 4);
        CHECK(pos_in[f] <= 5);
        CHECK(neg_in[f] >= 3);
        CHECK(neg_in[f] <= 4);
    }

    CHECK(stratified_folds(d, 5, 42) == fold_of);
    CHECK(stratified_folds(d, 5, 43) != fold_of);
    CHECK_THROWS_AS(stratified_folds(d, 1, 42), UsageError);
}

TEST_CASE("cross-validation runs both variants on a separable toy set") {
    const Dataset d = toy_dataset();
    PipelineConfig cfg;
    cfg.gbt.rounds = 15;
    cfg.gbt.max_depth = 2;
    cfg.lime.num_samples = 200;
    cfg.lime.top_k = 4;

    std::vector<std::string> programs;
    const CvReport rep = cross_validate(d, "toy", "lime-fold", 5, 7, cfg, &programs);
    CHECK(rep.dataset == "toy");
    CHECK(rep.variant == "lime-fold");
    REQUIRE(rep.folds.size() == 5);
    REQUIRE(programs.size() == 5);
    for (const auto& p : programs) CHECK(!p.empty());

    Metrics sum;
    for (const auto& m : rep.folds) {
        sum.precision += m.precision;
        sum.recall += m.recall;
        sum.f1 += m.f1;
        sum.rules += m.rules;
    }
    CHECK(rep.mean.precision == doctest::Approx(sum.precision / 5).epsilon(1e-12));
    CHECK(rep.mean.recall == doctest::Approx(sum.recall / 5).epsilon(1e-12));
    CHECK(rep.mean.f1 == doctest::Approx(sum.f1 / 5).epsilon(1e-12));
    CHECK(rep.mean.rules == doctest::Approx(sum.rules / 5).epsilon(1e-12));
    CHECK(rep.mean.f1 > 0.6);  // the classes are cleanly separable on x

    const CvReport foil_rep = cross_validate(d, "toy", "foil", 5, 7, cfg);
    REQUIRE(foil_rep.folds.size() == 5);
    CHECK(foil_rep.mean.f1 > 0.6);

    // Without the seconds column the report bytes are reproducible.
    const CvReport again = cross_validate(d, "toy", "lime-fold", 5, 7, cfg);
    CHECK(reports_to_csv({rep}, false) == reports_to_csv({again}, false));

    CHECK_THROWS_AS(cross_validate(d, "toy", "ripper", 5, 7, cfg), UsageError);
}

TEST_CASE("a fold left empty by tiny data is a data error") {
    Dataset d = toy_dataset();
    d.rows.resize(4);  // 4 positives, far fewer than k
    d.rows[2].positive = false;
    d.rows[3].positive = false;
    PipelineConfig cfg;
    CHECK_THROWS_AS(cross_validate(d, "toy", "foil", 5, 7, cfg), DataError);
}

TEST_CASE("csv report layout") {
    CvReport rep;
    rep.dataset = "toy";
    rep.variant = "lime-fold";
    Metrics m1 = compute_metrics(4, 1, 2, 3);
    m1.rules = 3;
    m1.seconds = 1.25;
    Metrics m2 = compute_metrics(1, 0, 0, 1);
    m2.rules = 2;
    m2.seconds = 0.5;
    rep.folds = {m1, m2};
    rep.mean.precision = (m1.precision + m2.precision) / 2;
    rep.mean.recall = (m1.recall + m2.recall) / 2;
    rep.mean.accuracy = (m1.accuracy + m2.accuracy) / 2;
    rep.mean.f1 = (m1.f1 + m2.f1) / 2;
    rep.mean.rules = 2.5;
    rep.mean.seconds = 0.875;

    const std::string with_seconds =
        "dataset,variant,fold,precision,recall,accuracy,f1,rules,seconds\n"
        "toy,lime-fold,0,0.800000,0.666667,0.700000,0.727273,3,1.250000\n"
        "toy,lime-fold,1,1.000000,1.000000,1.000000,1.000000,2,0.500000\n"
        "toy,lime-fold,mean,0.900000,0.833333,0.850000,0.863636,2.5,0.875000\n";
    CHECK(reports_to_csv({rep}, true) == with_seconds);

    const std::string without_seconds =
        "dataset,variant,fold,precision,recall,accuracy,f1,rules\n"
        "toy,lime-fold,0,0.800000,0.666667,0.700000,0.727273,3\n"
        "toy,lime-fold,1,1.000000,1.000000,1.000000,1.000000,2\n"
        "toy,lime-fold,mean,0.900000,0.833333,0.850000,0.863636,2.5\n";
    CHECK(reports_to_csv({rep}, false) == without_seconds);
}

TEST_CASE("markdown report pairs known corpora with reference figures") {
    CvReport heart;
    heart.dataset = "heart";
    heart.variant = "lime-fold";
    heart.mean.precision = 0.81;
    heart.mean.recall = 0.72;
    heart.mean.accuracy = 0.8;
    heart.mean.f1 = 0.76;
    heart.mean.rules = 7.8;

    CvReport heart_foil = heart;
    heart_foil.variant = "foil";

    CvReport toy = heart;
    toy.dataset = "toy";

    const std::string md = reports_to_markdown({heart, heart_foil, toy});
    CHECK(md.find("| dataset | variant | precision |") != std::string::npos);
    CHECK(md.find("| heart | lime-fold | 0.810 | 0.720 | 0.800 | 0.760 | 7.8 | "
                   "0.820 | 0.740 | 0.820 | 0.780 |") != std::string::npos);
    CHECK(md.find("| heart | foil | 0.810 | 0.720 | 0.800 | 0.760 | 7.8 | "
                   "- | - | - | - |") != std::string::npos);
    CHECK(md.find("| toy | lime-fold | 0.810 | 0.720 | 0.800 | 0.760 | 7.8 | "
                   "- | - | - | - |") != std::string::npos);
}
