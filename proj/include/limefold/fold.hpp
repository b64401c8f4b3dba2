#pragma once

#include <optional>
#include <string>
#include <vector>

#include "limefold/ilp.hpp"

namespace limefold {

// One body literal of an induced clause. Exactly one of these shapes:
//   pred(X[,c])        positive background literal
//   -pred(X,c)         classically negated background literal
//   not pred(X[,c])    NAF over a background predicate
//   not abK(X)         NAF over an invented abnormality predicate (ab >= 0)
struct BodyLiteral {
    std::string pred;
    std::optional<std::string> constant;
    bool classical_neg = false;
    bool naf = false;
    int ab = -1;

    std::string text(const std::string& var) const;
    bool operator==(const BodyLiteral&) const = default;
};

// Head constant set means a ground clause (an enumerated abnormality fact).
struct Clause {
    std::optional<std::string> head_const;
    std::vector<BodyLiteral> body;

    bool operator==(const Clause&) const = default;
};

struct Hypothesis {
    std::string target;
    std::vector<Clause> defaults;
    std::vector<std::pair<int, Clause>> abnormals;  // (ab index, clause)
    std::vector<std::string> facts;                 // enumerated positive ids

    // Clauses only; enumerated ground facts do not count.
    int count_rules() const {
        return static_cast<int>(defaults.size() + abnormals.size());
    }

    // Stratification: the NAF dependency graph over abnormality predicates
    // must be acyclic, and every referenced index must have a definition or
    // evaluate as never-true. Throws DataError on a cycle.
    void validate() const;

    bool covers(const std::string& id, const FactStore& store) const;
    std::vector<std::string> covered(const std::vector<std::string>& ids,
                                     const FactStore& store) const;

    std::string to_text() const;
    std::string to_json(const FactStore* store, const std::vector<std::string>* e_plus,
                        const std::vector<std::string>* e_minus) const;
};

struct FoldParams {
    int max_rule_length = 7;
    int max_exception_depth = 3;
    double literal_cost = 1.0;  // description cost of one body literal
    double fact_cost = 1.0;     // description cost of one enumerated ground fact
};

// t * (log2(p1/(p1+n1)) - log2(p0/(p0+n0))); -inf when the refinement covers
// no positives. p0 must be positive whenever p1 is.
double information_gain(long p0, long n0, long p1, long n1, long t);

struct CandidateLiteral {
    std::string pred;
    std::optional<std::string> constant;
    bool classical_neg = false;
};

// Candidate literals for extending `clause`: every unary background
// predicate, plus (pred, constant) pairs drawn from the facts of the
// currently covered positives; classically negated candidates come from
// classically negated facts. Facts carrying negative explanation weight are
// only admitted when allow_negative_weight is set (exception learning).
// An empty positive set yields no candidates.
std::vector<CandidateLiteral> refine(const Clause& clause, const std::vector<std::string>& pos,
                                     const FactStore& store, bool allow_negative_weight);

struct BestLiteral {
    bool found = false;
    BodyLiteral literal;
    double gain = 0;
    std::vector<std::string> cover_pos;
    std::vector<std::string> cover_neg;
};

// Scores every candidate by information gain over the current coverage sets;
// ties prefer more positives covered, then the smaller predicate name, then
// the smaller constant, then the positive polarity.
BestLiteral add_best_literal(const Clause& clause, const std::vector<std::string>& pos,
                             const std::vector<std::string>& neg, const FactStore& store,
                             bool allow_negative_weight);

// Sequential covering with Horn clauses (classical negation allowed, no NAF,
// no exceptions). Clauses that end impure or stuck are abandoned and their
// covered positives enumerated as ground facts, so the result always covers
// all of E+ and none of E-.
Hypothesis foil(const IlpInstance& inst, const FoldParams& params = {});

// Sequential covering with exceptions: specialization adds the best positive
// literal while the gain is positive; once it stalls with negatives still
// covered, exception learning swaps the example sets and recurses, guarding
// the result with a fresh "not abK(X)" literal; if that fails, the remaining
// covered positives are enumerated as ground facts. A description-length
// guard trades a clause for plain enumeration when the clause costs more
// than the facts it would save.
Hypothesis fold_induce(const IlpInstance& inst, const FoldParams& params = {});

// Two passes: drop body literals whose removal does not raise the covered
// negative count beyond the tolerance, then drop whole clauses (ascending
// positive coverage) that the rest of the hypothesis makes redundant.
// Orphaned abnormality clauses go too, surviving abnormality predicates are
// renumbered densely, and enumerated facts already covered by a default are
// removed. Positive coverage never shrinks, negative coverage never grows.
Hypothesis prune_hypothesis(const Hypothesis& h, const IlpInstance& inst, long tolerance = 0);

}  // namespace limefold
