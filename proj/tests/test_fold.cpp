#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "limefold/errors.hpp"
#include "limefold/fold.hpp"
#include "limefold/ilp.hpp"
#include "limefold/rng.hpp"
#include "oracles.hpp"

using namespace limefold;

namespace {

std::string data_path(const std::string& name) {
    return std::string(LIMEFOLD_DATA_DIR) + "/" + name;
}

IlpInstance tweety() { return load_program(data_path("tweety.pl")); }

Atom fact(const std::string& pred, const std::string& id) { return {pred, {id}, false, false}; }

Atom fact2(const std::string& pred, const std::string& id, const std::string& c,
           bool negative_weight = false) {
    Atom a{pred, {id, c}, false, false};
    a.negative_weight = negative_weight;
    return a;
}

std::set<std::string> covered_set(const Hypothesis& h, const std::vector<std::string>& ids,
                                  const FactStore& store) {
    const auto v = h.covered(ids, store);
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("information gain matches the reference formula") {
    CHECK(information_gain(5, 5, 4, 1, 4) ==
          doctest::Approx(4 * (std::log2(4.0 / 5.0) - std::log2(5.0 / 10.0))).epsilon(1e-12));
    CHECK(information_gain(5, 5, 4, 1, 4) == doctest::Approx(2.712288).epsilon(1e-5));
    CHECK(std::isinf(information_gain(3, 3, 0, 2, 0)));
    CHECK(information_gain(3, 3, 0, 2, 0) < 0);
    CHECK(information_gain(4, 4, 4, 4, 4) == doctest::Approx(0.0));
    CHECK_THROWS_AS(information_gain(-1, 0, 1, 0, 1), UsageError);
    CHECK_THROWS_AS(information_gain(0, 0, 1, 0, 1), UsageError);

    Rng rng(404);
    for (int i = 0; i < 500; ++i) {
        const long p1 = rng.index(40);
        const long n1 = rng.index(40);
        const long p0 = p1 + 1 + rng.index(20);
        const long n0 = n1 + rng.index(20);
        const long t = rng.index(static_cast<int>(p1) + 1);
        const double got = information_gain(p0, n0, p1, n1, t);
        const long double want = oracle::info_gain(p0, n0, p1, n1, t);
        if (p1 == 0) {
            CHECK(std::isinf(got));
        } else {
            CHECK(std::fabs(got - static_cast<double>(want)) < 1e-12);
        }
    }
}

TEST_CASE("refine proposes unary predicates and constants from covered positives") {
    const IlpInstance inst = tweety();
    const FactStore store(inst);
    const auto cands = refine({}, inst.e_plus, store, false);
    REQUIRE(cands.size() == 3);
    CHECK(cands[0].pred == "bird");
    CHECK(cands[1].pred == "cat");
    CHECK(cands[2].pred == "penguin");
    for (const auto& c : cands) {
        CHECK_FALSE(c.constant.has_value());
        CHECK_FALSE(c.classical_neg);
    }
    CHECK(refine({}, {}, store, false).empty());
}

TEST_CASE("refine skips literals already in the body and gated weights") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a"};
    inst.e_minus = {"b"};
    inst.atoms = {fact2("p", "a", "1"), fact2("q", "a", "2", true), fact2("p", "b", "3")};
    const FactStore store(inst);

    const auto closed = refine({}, {"a"}, store, false);
    REQUIRE(closed.size() == 1);  // q(a,2) carries negative weight, p(b,3) is not a positive's fact
    CHECK(closed[0].pred == "p");
    CHECK(closed[0].constant == "1");

    const auto open = refine({}, {"a"}, store, true);
    CHECK(open.size() == 2);  // the negative-weight fact joins in exception mode

    Clause c;
    c.body.push_back({"p", std::string("1"), false, false, -1});
    CHECK(refine(c, {"a"}, store, false).empty());  // already used
}

TEST_CASE("best literal prefers gain, then coverage, then name, constant, polarity") {
    const IlpInstance inst = tweety();
    const FactStore store(inst);
    const auto best = add_best_literal({}, inst.e_plus, inst.e_minus, store, false);
    REQUIRE(best.found);
    CHECK(best.literal.pred == "bird");
    CHECK(best.gain == doctest::Approx(2.0 * (std::log2(2.0 / 3.0) - std::log2(2.0 / 4.0))));
    CHECK(best.cover_pos.size() == 2);
    CHECK(best.cover_neg == std::vector<std::string>{"polly"});

    IlpInstance ties;
    ties.target = "t";
    ties.e_plus = {"a"};
    ties.e_minus = {"b"};
    ties.atoms = {fact2("m", "a", "2"), fact2("m", "a", "1"), fact2("k", "a", "1")};
    const FactStore tstore(ties);
    const auto tie = add_best_literal({}, ties.e_plus, ties.e_minus, tstore, false);
    REQUIRE(tie.found);
    CHECK(tie.literal.pred == "k");  // equal gain and coverage: lexicographic predicate
    const auto noneg = add_best_literal({}, {"b"}, {"a"}, tstore, false);
    CHECK_FALSE(noneg.found);  // b has no facts, so no candidate covers it
}

TEST_CASE("fold learns the flying-birds default with a penguin exception") {
    const Hypothesis h = fold_induce(tweety());
    CHECK(h.to_text() == "fly(A) :- bird(A), not ab0(A).\nab0(A) :- penguin(A).\n");
    REQUIRE(h.defaults.size() == 1);
    REQUIRE(h.abnormals.size() == 1);
    CHECK(h.abnormals[0].first == 0);
    CHECK(h.facts.empty());
    CHECK(h.count_rules() == 2);

    const FactStore store(tweety());
    CHECK(h.covers("tweety", store));
    CHECK(h.covers("et", store));
    CHECK_FALSE(h.covers("polly", store));
    CHECK_FALSE(h.covers("kitty", store));
}

TEST_CASE("foil on the same instance can only enumerate the flyers") {
    const Hypothesis h = foil(tweety());
    CHECK(h.defaults.empty());
    CHECK(h.abnormals.empty());
    // Enumeration preserves the instance's example order; to_text sorts.
    CHECK(h.facts == std::vector<std::string>{"tweety", "et"});
    CHECK(h.to_text() == "fly(et).\nfly(tweety).\n");
    const FactStore store(tweety());
    CHECK(covered_set(h, {"tweety", "et", "kitty", "polly"}, store) ==
          std::set<std::string>{"et", "tweety"});
}

TEST_CASE("foil builds a pure clause when one exists") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a", "b"};
    inst.e_minus = {"c"};
    inst.atoms = {fact2("f", "a", "1"), fact2("f", "b", "1"), fact2("f", "c", "2")};
    const Hypothesis h = foil(inst);
    REQUIRE(h.defaults.size() == 1);
    REQUIRE(h.defaults[0].body.size() == 1);
    CHECK(h.defaults[0].body[0].pred == "f");
    CHECK(h.defaults[0].body[0].constant == "1");
    CHECK(h.facts.empty());
}

TEST_CASE("no negatives yields one open clause") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a", "b"};
    inst.atoms = {fact("u", "a")};
    const Hypothesis h = fold_induce(inst);
    CHECK(h.to_text() == "t(A).\n");
    REQUIRE(h.defaults.size() == 1);
    CHECK(h.defaults[0].body.empty());
    CHECK(h.facts.empty());
}

TEST_CASE("empty positive set yields an empty hypothesis") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_minus = {"a"};
    const Hypothesis h = fold_induce(inst);
    CHECK(h.count_rules() == 0);
    CHECK(h.facts.empty());
    CHECK(h.target == "t");
}

TEST_CASE("exceptions nest when the exception itself has an exception") {
    IlpInstance inst;
    inst.target = "fly";
    inst.e_plus = {"b1", "b2", "b3", "b4", "sp"};
    inst.e_minus = {"p1", "p2"};
    for (const auto& id : {"b1", "b2", "b3", "b4", "sp", "p1", "p2"})
        inst.atoms.push_back(fact("bird", id));
    inst.atoms.push_back(fact2("kind", "p1", "peng"));
    inst.atoms.push_back(fact2("kind", "p2", "peng"));
    inst.atoms.push_back(fact2("kind", "sp", "peng"));
    inst.atoms.push_back(fact2("boost", "sp", "yes", true));  // exception-only evidence

    const Hypothesis h = fold_induce(inst);
    REQUIRE(h.defaults.size() == 1);
    REQUIRE(h.abnormals.size() == 2);
    // The inner exception is allocated first, so the default guards on ab1.
    CHECK(h.to_text() ==
          "fly(A) :- not ab1(A).\n"
          "ab0(A) :- boost(A,yes).\n"
          "ab1(A) :- kind(A,peng), not ab0(A).\n");

    const FactStore store(inst);
    CHECK(covered_set(h, {"b1", "b2", "b3", "b4", "sp", "p1", "p2"}, store) ==
          std::set<std::string>{"b1", "b2", "b3", "b4", "sp"});

    // Pruning renumbers the surviving abnormality chain by first use.
    const Hypothesis p = prune_hypothesis(h, inst);
    CHECK(p.to_text() ==
          "fly(A) :- not ab0(A).\n"
          "ab0(A) :- kind(A,peng), not ab1(A).\n"
          "ab1(A) :- boost(A,yes).\n");
    CHECK(covered_set(p, {"b1", "b2", "b3", "b4", "sp", "p1", "p2"}, store) ==
          std::set<std::string>{"b1", "b2", "b3", "b4", "sp"});
}

TEST_CASE("the description-length guard trades clauses for enumerated facts") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"e1"};
    inst.e_minus = {"e2", "e3"};
    inst.atoms = {fact2("f", "e1", "1"), fact2("f", "e2", "2"), fact2("f", "e3", "2")};

    const Hypothesis cheap = fold_induce(inst);
    REQUIRE(cheap.defaults.size() == 1);  // one literal for one fact is a wash, clause wins

    FoldParams pricey;
    pricey.literal_cost = 2.0;
    const Hypothesis dear = fold_induce(inst, pricey);
    CHECK(dear.defaults.empty());
    CHECK(dear.facts == std::vector<std::string>{"e1"});
}

TEST_CASE("the guard also applies at the exception site") {
    FoldParams pricey;
    pricey.literal_cost = 2.0;
    const Hypothesis h = fold_induce(tweety(), pricey);
    CHECK(h.defaults.empty());
    CHECK(h.abnormals.empty());
    CHECK(h.facts == std::vector<std::string>{"tweety", "et"});
}

TEST_CASE("stuck induction enumerates the remaining positives") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a", "b"};
    inst.e_minus = {"c"};
    // Identical facts everywhere: nothing separates the classes.
    for (const auto& id : {"a", "b", "c"}) inst.atoms.push_back(fact("u", id));
    const Hypothesis h = fold_induce(inst);
    CHECK(h.defaults.empty());
    CHECK(h.facts == std::vector<std::string>{"a", "b"});
    const FactStore store(inst);
    CHECK(covered_set(h, {"a", "b", "c"}, store) == std::set<std::string>{"a", "b"});
}

TEST_CASE("pruning drops redundant literals and clauses") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a", "b"};
    inst.e_minus = {"c"};
    inst.atoms = {fact2("f", "a", "1"), fact2("g", "a", "1"), fact2("f", "b", "1"),
                  fact2("g", "b", "1"), fact2("f", "c", "2")};

    Hypothesis h;
    h.target = "t";
    Clause fat;
    fat.body.push_back({"f", std::string("1"), false, false, -1});
    fat.body.push_back({"g", std::string("1"), false, false, -1});  // redundant
    Clause dup;
    dup.body.push_back({"g", std::string("1"), false, false, -1});  // fully covered by the first
    h.defaults = {fat, dup};
    h.facts = {"a"};  // already covered by a default

    const Hypothesis p = prune_hypothesis(h, inst);
    REQUIRE(p.defaults.size() == 1);
    CHECK(p.defaults[0].body.size() == 1);
    CHECK(p.facts.empty());
    const FactStore store(inst);
    CHECK(covered_set(p, {"a", "b", "c"}, store) == std::set<std::string>{"a", "b"});
}

TEST_CASE("pruning respects the negative-coverage tolerance") {
    IlpInstance inst;
    inst.target = "t";
    inst.e_plus = {"a"};
    inst.e_minus = {"c"};
    inst.atoms = {fact2("f", "a", "1"), fact("u", "a"), fact("u", "c")};

    Hypothesis h;
    h.target = "t";
    Clause c;
    c.body.push_back({"u", std::nullopt, false, false, -1});
    c.body.push_back({"f", std::string("1"), false, false, -1});
    h.defaults = {c};

    const Hypothesis strict = prune_hypothesis(h, inst, 0);
    REQUIRE(strict.defaults.size() == 1);
    CHECK(strict.defaults[0].body.size() == 1);  // u alone would admit c, f(,1) must stay
    CHECK(strict.defaults[0].body[0].pred == "f");

    const Hypothesis loose = prune_hypothesis(h, inst, 1);
    REQUIRE(loose.defaults.size() == 1);
    CHECK(loose.defaults[0].body.empty());  // one extra negative is tolerated, both literals go
}

TEST_CASE("hypothesis validation rejects NAF cycles and malformed literals") {
    Hypothesis h;
    h.target = "t";
    Clause c0, c1;
    c0.body.push_back({"ab1", std::nullopt, false, true, 1});
    c1.body.push_back({"ab0", std::nullopt, false, true, 0});
    h.abnormals = {{0, c0}, {1, c1}};
    CHECK_THROWS_AS(h.validate(), DataError);

    Hypothesis undef;
    undef.target = "t";
    Clause d;
    d.body.push_back({"ab9", std::nullopt, false, true, 9});
    undef.defaults = {d};
    CHECK_NOTHROW(undef.validate());  // undefined abnormality is legal (never true)

    Hypothesis bad;
    bad.target = "t";
    Clause b;
    b.body.push_back({"ab0", std::nullopt, false, false, 0});  // ab without NAF
    bad.defaults = {b};
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("hypothesis json carries per-clause coverage when given the instance") {
    const IlpInstance inst = tweety();
    const FactStore store(inst);
    const Hypothesis h = fold_induce(inst);
    const std::string j = h.to_json(&store, &inst.e_plus, &inst.e_minus);
    CHECK(j.find("\"rules\": 2") != std::string::npos);
    CHECK(j.find("\"covered_pos\": 2") != std::string::npos);
    CHECK(j.find("\"covered_neg\": 0") != std::string::npos);
}

TEST_CASE("induced hypotheses cover all positives and no negatives") {
    Rng rng(900);
    for (int trial = 0; trial < 60; ++trial) {
        const IlpInstance inst = oracle::random_instance(rng, 16);
        const FactStore store(inst);
        for (const Hypothesis& h : {fold_induce(inst), foil(inst)}) {
            h.validate();
            CHECK(covered_set(h, inst.e_plus, store).size() == inst.e_plus.size());
            CHECK(covered_set(h, inst.e_minus, store).empty());
        }
        const Hypothesis pruned = prune_hypothesis(fold_induce(inst), inst);
        pruned.validate();
        CHECK(covered_set(pruned, inst.e_plus, store).size() == inst.e_plus.size());
        CHECK(covered_set(pruned, inst.e_minus, store).empty());
    }
}

TEST_CASE("coverage agrees with ground stratified evaluation") {
    Rng rng(901);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const oracle::RandomCase rc = oracle::random_case(rng);
        rc.hyp.validate();
        const FactStore store(rc.inst);
        std::vector<std::string> ids = rc.inst.e_plus;
        ids.insert(ids.end(), rc.inst.e_minus.begin(), rc.inst.e_minus.end());
        const oracle::GroundEval ref(rc.hyp, rc.inst);
        for (const auto& id : ids) {
            CHECK(rc.hyp.covers(id, store) == ref.covers(id));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("induced coverage agrees with ground evaluation on tweety") {
    const IlpInstance inst = tweety();
    const Hypothesis h = fold_induce(inst);
    const FactStore store(inst);
    for (const auto& id : {"tweety", "et", "kitty", "polly"})
        CHECK(h.covers(id, store) == oracle::covers(h, inst, id));
}
