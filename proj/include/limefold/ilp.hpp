#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "limefold/lime.hpp"
#include "limefold/schema.hpp"

namespace limefold {

// Numeric-aware constant ordering: numbers by value, everything else by
// bytes. Shared by emitters and the literal tie-break.
bool constant_less(const std::string& a, const std::string& b);

// Ground background atom. The first argument is always an example id;
// a second argument, when present, is an interval index or category value.
struct Atom {
    std::string pred;
    std::vector<std::string> args;
    bool negated = false;          // classical negation, printed as -pred(...)
    bool negative_weight = false;  // source explanation weight < 0

    std::string text() const;  // "-thal(135,7)" without the trailing dot
    bool operator==(const Atom& o) const {
        return pred == o.pred && args == o.args && negated == o.negated;
    }
};

// Hand-written instances may carry simple one-variable rules in the
// background section, e.g. "bird(X) :- penguin(X).". They are grounded over
// the example ids when the instance is indexed.
struct BkRule {
    struct Part {
        std::string pred;
        std::vector<std::string> args;  // "X" for the variable, else a constant
        bool negated = false;
    };
    Part head;
    std::vector<Part> body;
};

struct IlpInstance {
    std::string target;
    std::vector<Atom> atoms;
    std::vector<BkRule> rules;
    std::vector<std::string> e_plus;
    std::vector<std::string> e_minus;

    // Checks: examples disjoint and non-overlapping, every atom's first
    // argument is a known example id, no atom coexists with its classical
    // negation.
    void validate() const;
    bool operator==(const IlpInstance& o) const {
        return target == o.target && atoms == o.atoms && e_plus == o.e_plus &&
               e_minus == o.e_minus && rules.size() == o.rules.size();
    }
};

// Indexed deductive closure of an instance: source atoms plus everything a
// background rule derives. Lookup structure for coverage tests and literal
// candidate generation.
class FactStore {
public:
    struct Fact {
        std::string pred;
        std::optional<std::string> constant;
        bool negated = false;
        bool negative_weight = false;
    };

    FactStore() = default;
    explicit FactStore(const IlpInstance& inst);

    bool contains(const std::string& pred, const std::string& id,
                  const std::optional<std::string>& constant, bool negated) const;
    const std::vector<Fact>& facts_of(const std::string& id) const;
    // Predicates that appear with no second argument (positively / negated).
    const std::set<std::string>& unary_preds() const { return unary_; }
    const std::set<std::string>& negated_unary_preds() const { return neg_unary_; }

private:
    std::set<std::string> keys_;
    std::map<std::string, std::vector<Fact>> by_id_;
    std::set<std::string> unary_;
    std::set<std::string> neg_unary_;
    std::vector<Fact> empty_;
};

struct ProvenanceEntry {
    std::string fact;       // atom text
    std::string row;
    std::string condition;  // condition text it came from
    double weight = 0;
};

struct TransformResult {
    IlpInstance instance;
    std::vector<ProvenanceEntry> provenance;
};

// Builds the induction instance from per-row explanations: rows land in E+
// exactly when the model called them positive, every explanation pair becomes
// one background fact (an indicator expected 0 becomes a classically negated
// atom), and the signed weight is kept as fact metadata.
TransformResult transform(const Dataset& data, const std::vector<Explanation>& explanations,
                          const std::string& target);

// Sectioned Prolog-like text: background under "B:", examples under "E+:" and
// "E-:". Facts of negative weight carry a trailing "% w<0" marker that the
// parser folds back into metadata. Output is sorted, so a fixed instance
// always emits the same bytes.
std::string emit_program(const IlpInstance& inst);
IlpInstance parse_program(const std::string& text);
IlpInstance load_program(const std::string& path);

std::string provenance_to_json(const std::vector<ProvenanceEntry>& entries);

}  // namespace limefold
