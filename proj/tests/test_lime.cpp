#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "limefold/binarize.hpp"
#include "limefold/csv.hpp"
#include "limefold/discretize.hpp"
#include "limefold/errors.hpp"
#include "limefold/gbt.hpp"
#include "limefold/lime.hpp"
#include "limefold/schema.hpp"

using namespace limefold;

namespace {

struct Fixture {
    Schema schema;
    Dataset data;
    Binarizer bin;
    DiscretizationMap map;
    TrainingStats stats;
};

// One numeric feature with a clean gap (cut at 8), one three-valued categorical.
Fixture make_fixture() {
    Fixture f;
    f.schema.features = {{"x", FeatureKind::numeric, {}},
                         {"c", FeatureKind::categorical, {"a", "b", "z"}}};
    f.schema.label_name = "y";
    f.schema.positive_label = "1";
    std::string csv = "x,c,y\n";
    for (int i = 0; i < 10; ++i) {
        const double x = i < 5 ? 1.0 + i : 6.0 + i;  // 1..5 and 11..15
        csv += std::to_string(x) + "," + (i % 2 ? "a" : "b") + "," + (i < 5 ? "0" : "1") + "\n";
    }
    f.data = parse_csv_dataset(csv, f.schema);
    f.bin = Binarizer(f.schema);
    f.map = discretize_dataset(f.data);
    f.stats = TrainingStats::build(f.bin, f.map, f.data);
    return f;
}

int column_of(const Binarizer& bin, const std::string& name) {
    for (std::size_t c = 0; c < bin.width(); ++c)
        if (bin.columns()[c].name == name) return static_cast<int>(c);
    return -1;
}

}  // namespace

TEST_CASE("training stats capture indicator frequencies and interval tables") {
    const Fixture f = make_fixture();
    const int col_a = column_of(f.bin, "c_a");
    const int col_z = column_of(f.bin, "c_z");
    const int col_x = column_of(f.bin, "x");
    REQUIRE(col_a >= 0);
    REQUIRE(col_z >= 0);
    REQUIRE(col_x >= 0);
    CHECK(f.stats.columns[col_a].freq_one == doctest::Approx(0.5));
    CHECK(f.stats.columns[col_z].freq_one == doctest::Approx(0.0));
    REQUIRE(f.map.cuts.at("x").size() == 1);
    const auto& xs = f.stats.columns[col_x];
    REQUIRE(xs.interval_prob.size() == 2);
    CHECK(xs.interval_prob[0] == doctest::Approx(0.5));
    CHECK(xs.interval_prob[1] == doctest::Approx(0.5));
    CHECK(xs.interval_range[0].first == doctest::Approx(1.0));
    CHECK(xs.interval_range[0].second == doctest::Approx(5.0));
    CHECK(xs.interval_range[1].first == doctest::Approx(11.0));
    CHECK(xs.interval_range[1].second == doctest::Approx(15.0));
    CHECK(xs.has_values);
}

TEST_CASE("stats ignore missing cells") {
    Fixture f = make_fixture();
    for (auto& row : f.data.rows) row.values[0] = Cell::missing();
    const auto stats = TrainingStats::build(f.bin, f.map, f.data);
    CHECK_FALSE(stats.columns[column_of(f.bin, "x")].has_values);
}

TEST_CASE("p_perturb zero reproduces the row exactly") {
    const Fixture f = make_fixture();
    const auto x = f.bin.encode(f.data.rows[3]);
    Rng rng(99);
    const PerturbedSample s = sample_around(x, f.bin, f.map, f.stats, 0.0, rng);
    CHECK(s.values == x);
    for (double v : s.interp) CHECK(v == 1.0);
}

TEST_CASE("perturbed numeric draws stay inside observed interval ranges") {
    const Fixture f = make_fixture();
    const auto x = f.bin.encode(f.data.rows[0]);
    const int col_x = column_of(f.bin, "x");
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const PerturbedSample s = sample_around(x, f.bin, f.map, f.stats, 1.0, rng);
        const double v = s.values[col_x];
        const bool low = v >= 1.0 && v <= 5.0;
        const bool high = v >= 11.0 && v <= 15.0;
        CHECK((low || high));
        CHECK(s.interp[col_x] == (low ? 1.0 : 0.0));  // x sits in the low interval
    }
}

TEST_CASE("kernel weight follows the disagreement count") {
    const double w = 2.0;
    CHECK(kernel_pi({1, 1, 1}, w) == doctest::Approx(1.0));
    CHECK(kernel_pi({0, 1, 1}, w) == doctest::Approx(std::exp(-1.0 / 4.0)));
    CHECK(kernel_pi({0, 0, 1}, w) == doctest::Approx(std::exp(-2.0 / 4.0)));
    CHECK_THROWS_AS(kernel_pi({1}, 0.0), UsageError);
}

TEST_CASE("explanations are deterministic and honor top_k") {
    const Fixture f = make_fixture();
    const Classifier clf = [&](const std::vector<double>& v) {
        return v[column_of(f.bin, "x")] > 8.0 ? 0.9 : 0.1;
    };
    LimeConfig config;
    config.num_samples = 400;
    config.top_k = 2;
    config.seed = 31;
    const Explanation a = explain_row(clf, f.data.rows[7], f.bin, f.map, f.stats, config);
    const Explanation b = explain_row(clf, f.data.rows[7], f.bin, f.map, f.stats, config);
    REQUIRE(a.pairs.size() <= 2);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        CHECK(a.pairs[i].condition.text == b.pairs[i].condition.text);
        CHECK(a.pairs[i].weight == b.pairs[i].weight);
    }
    CHECK(a.positive);
}

TEST_CASE("the feature the classifier uses gets the dominant weight") {
    const Fixture f = make_fixture();
    const int col_x = column_of(f.bin, "x");
    const Classifier clf = [&](const std::vector<double>& v) {
        return v[col_x] > 8.0 ? 0.9 : 0.1;
    };
    LimeConfig config;
    config.num_samples = 800;
    config.top_k = 8;
    config.seed = 3;
    const Explanation e = explain_row(clf, f.data.rows[8], f.bin, f.map, f.stats, config);
    REQUIRE(!e.pairs.empty());
    CHECK(e.pairs[0].condition.feature == "x");
    CHECK_FALSE(e.pairs[0].condition.categorical);
    CHECK(e.pairs[0].condition.interval == 1);
    CHECK(e.pairs[0].weight > 0.5);  // agreeing with the high interval adds ~0.8
    for (std::size_t i = 1; i < e.pairs.size(); ++i)
        CHECK(std::fabs(e.pairs[i].weight) <= std::fabs(e.pairs[0].weight));
}

TEST_CASE("a constant classifier yields near-zero weights") {
    const Fixture f = make_fixture();
    const Classifier clf = [](const std::vector<double>&) { return 0.4; };
    LimeConfig config;
    config.num_samples = 500;
    config.seed = 8;
    const Explanation e = explain_row(clf, f.data.rows[2], f.bin, f.map, f.stats, config);
    for (const auto& p : e.pairs) CHECK(std::fabs(p.weight) < 1e-6);
    CHECK_FALSE(e.positive);
}

TEST_CASE("rows with a missing numeric cell skip that condition") {
    Fixture f = make_fixture();
    DataRow row{"holey", {Cell::missing(), Cell::cat("a")}, false};
    const Classifier clf = [](const std::vector<double>&) { return 0.2; };
    LimeConfig config;
    config.num_samples = 200;
    config.top_k = 8;
    config.seed = 12;
    const Explanation e = explain_row(clf, row, f.bin, f.map, f.stats, config);
    for (const auto& p : e.pairs) CHECK(p.condition.feature != "x");
}

TEST_CASE("parallel explanation equals serial") {
    const Fixture f = make_fixture();
    GbtParams gp;
    gp.rounds = 5;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> names;
    for (const auto& c : f.bin.columns()) names.push_back(c.name);
    for (const auto& r : f.data.rows) {
        rows.push_back(f.bin.encode(r));
        labels.push_back(r.positive ? 1 : 0);
    }
    const GbtModel model = train_gbt(rows, labels, names, gp);
    LimeConfig config;
    config.num_samples = 200;
    config.seed = 21;
    const auto serial = explain_dataset(model, f.data, f.bin, f.map, f.stats, config, 1);
    const auto parallel = explain_dataset(model, f.data, f.bin, f.map, f.stats, config, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(explanation_to_json(serial[i]) == explanation_to_json(parallel[i]));
}

TEST_CASE("explanation json round trip") {
    Explanation e;
    e.id = "r9";
    e.positive = true;
    Condition cat;
    cat.feature = "c";
    cat.categorical = true;
    cat.value = "b";
    cat.expected = 0;
    cat.text = "c_b = 0";
    Condition num;
    num.feature = "x";
    num.categorical = false;
    num.interval = 1;
    num.text = "x in [5,+inf)";
    e.pairs = {{cat, -0.25}, {num, 0.125}};
    const Explanation back = explanation_from_json(explanation_to_json(e));
    CHECK(back.id == e.id);
    CHECK(back.positive == e.positive);
    REQUIRE(back.pairs.size() == 2);
    CHECK(back.pairs[0].condition.categorical);
    CHECK(back.pairs[0].condition.value == "b");
    CHECK(back.pairs[0].condition.expected == 0);
    CHECK(back.pairs[0].weight == e.pairs[0].weight);
    CHECK(back.pairs[1].condition.interval == 1);
    CHECK_THROWS_AS(explanation_from_json("{"), DataError);
}

TEST_CASE("config validation") {
    const Fixture f = make_fixture();
    const Classifier clf = [](const std::vector<double>&) { return 0.5; };
    LimeConfig bad;
    bad.num_samples = 0;
    CHECK_THROWS_AS(explain_row(clf, f.data.rows[0], f.bin, f.map, f.stats, bad), UsageError);
    bad.num_samples = 10;
    bad.top_k = 0;
    CHECK_THROWS_AS(explain_row(clf, f.data.rows[0], f.bin, f.map, f.stats, bad), UsageError);
}
