#include "limefold/fold.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "limefold/errors.hpp"

namespace limefold {

namespace {

constexpr const char* kVar = "A";

struct Evaluator {
    const Hypothesis& h;
    const FactStore& store;
    mutable std::map<std::pair<int, std::string>, bool> memo;

    bool literal_true(const BodyLiteral& l, const std::string& id) const {
        if (l.ab >= 0) return !ab_true(l.ab, id);
        if (l.naf) return !store.contains(l.pred, id, l.constant, false);
        return store.contains(l.pred, id, l.constant, l.classical_neg);
    }

    bool body_true(const Clause& c, const std::string& id) const {
        if (c.head_const && *c.head_const != id) return false;
        for (const auto& l : c.body)
            if (!literal_true(l, id)) return false;
        return true;
    }

    bool ab_true(int k, const std::string& id) const {
        const auto key = std::make_pair(k, id);
        const auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool v = false;
        for (const auto& [idx, c] : h.abnormals) {
            if (idx == k && body_true(c, id)) {
                v = true;
                break;
            }
        }
        memo.emplace(key, v);
        return v;
    }

    bool covers(const std::string& id) const {
        for (const auto& c : h.defaults)
            if (body_true(c, id)) return true;
        return std::find(h.facts.begin(), h.facts.end(), id) != h.facts.end();
    }
};

std::vector<std::string> set_minus(const std::vector<std::string>& from,
                                   const std::vector<std::string>& remove) {
    std::set<std::string> rm(remove.begin(), remove.end());
    std::vector<std::string> out;
    for (const auto& id : from)
        if (!rm.count(id)) out.push_back(id);
    return out;
}

}  // namespace

std::string BodyLiteral::text(const std::string& var) const {
    std::string args = "(" + var + (constant ? "," + *constant : "") + ")";
    if (naf) return "not " + pred + args;
    return (classical_neg ? "-" : "") + pred + args;
}

void Hypothesis::validate() const {
    if (target.empty()) throw DataError("hypothesis: empty target");
    auto check_literal = [](const BodyLiteral& l) {
        if (l.ab >= 0 && !l.naf)
            throw DataError("hypothesis: abnormality literal without NAF");
        if (l.naf && l.classical_neg)
            throw DataError("hypothesis: literal cannot be NAF and classically negated");
        if (l.pred.empty()) throw DataError("hypothesis: empty predicate in body");
    };
    for (const auto& c : defaults)
        for (const auto& l : c.body) check_literal(l);
    std::map<int, std::vector<int>> edges;
    for (const auto& [k, c] : abnormals) {
        edges[k];
        for (const auto& l : c.body) {
            check_literal(l);
            if (l.ab >= 0) edges[k].push_back(l.ab);
        }
    }
    // The NAF dependency graph between abnormality predicates must be acyclic.
    std::map<int, int> color;
    std::vector<std::pair<int, int>> stack;  // (node, next edge position)
    for (const auto& [start, _] : edges) {
        if (color[start]) continue;
        stack.push_back({start, 0});
        color[start] = 1;
        while (!stack.empty()) {
            auto& [node, pos] = stack.back();
            const auto& adj = edges[node];
            if (pos >= static_cast<int>(adj.size())) {
                color[node] = 2;
                stack.pop_back();
                continue;
            }
            const int next = adj[pos++];
            if (!edges.count(next)) continue;  // undefined: never true, no cycle possible
            if (color[next] == 1)
                throw DataError("hypothesis: abnormality predicates form a NAF cycle");
            if (color[next] == 0) {
                color[next] = 1;
                stack.push_back({next, 0});
            }
        }
    }
    for (const auto& id : facts)
        if (id.empty()) throw DataError("hypothesis: empty fact id");
}

bool Hypothesis::covers(const std::string& id, const FactStore& store) const {
    return Evaluator{*this, store, {}}.covers(id);
}

std::vector<std::string> Hypothesis::covered(const std::vector<std::string>& ids,
                                             const FactStore& store) const {
    Evaluator ev{*this, store, {}};
    std::vector<std::string> out;
    for (const auto& id : ids)
        if (ev.covers(id)) out.push_back(id);
    return out;
}

namespace {

std::string clause_text(const std::string& head, const Clause& c) {
    std::ostringstream out;
    out << head << '(' << (c.head_const ? *c.head_const : kVar) << ')';
    if (!c.body.empty()) {
        out << " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) out << ", ";
            out << c.body[i].text(kVar);
        }
    }
    out << '.';
    return out.str();
}

}  // namespace

std::string Hypothesis::to_text() const {
    std::ostringstream out;
    for (const auto& c : defaults) out << clause_text(target, c) << '\n';
    std::vector<std::string> sorted_facts = facts;
    std::sort(sorted_facts.begin(), sorted_facts.end(), constant_less);
    for (const auto& id : sorted_facts) out << target << '(' << id << ").\n";
    for (const auto& [k, c] : abnormals) out << clause_text("ab" + std::to_string(k), c) << '\n';
    return out.str();
}

std::string Hypothesis::to_json(const FactStore* store, const std::vector<std::string>* e_plus,
                                const std::vector<std::string>* e_minus) const {
    nlohmann::json j;
    j["target"] = target;
    j["rules"] = count_rules();
    const bool stats = store && e_plus && e_minus;
    static const FactStore empty_store;
    Evaluator ev{*this, store ? *store : empty_store, {}};
    auto clause_json = [&](const std::string& head, const Clause& c) {
        nlohmann::json jc;
        jc["text"] = clause_text(head, c);
        if (stats) {
            long cp = 0, cn = 0;
            for (const auto& id : *e_plus) cp += ev.body_true(c, id) ? 1 : 0;
            for (const auto& id : *e_minus) cn += ev.body_true(c, id) ? 1 : 0;
            jc["pos_covered"] = cp;
            jc["neg_covered"] = cn;
        }
        return jc;
    };
    j["defaults"] = nlohmann::json::array();
    for (const auto& c : defaults) j["defaults"].push_back(clause_json(target, c));
    j["abnormals"] = nlohmann::json::array();
    for (const auto& [k, c] : abnormals) {
        auto jc = clause_json("ab" + std::to_string(k), c);
        jc["ab"] = k;
        j["abnormals"].push_back(std::move(jc));
    }
    j["facts"] = facts;
    if (stats) {
        j["covered_pos"] = covered(*e_plus, *store).size();
        j["covered_neg"] = covered(*e_minus, *store).size();
    }
    return j.dump(2);
}

double information_gain(long p0, long n0, long p1, long n1, long t) {
    if (p0 < 0 || n0 < 0 || p1 < 0 || n1 < 0 || t < 0)
        throw UsageError("information_gain: negative count");
    if (p0 + n0 <= 0) throw UsageError("information_gain: empty base coverage");
    if (p1 == 0) return -std::numeric_limits<double>::infinity();
    if (p0 == 0) throw UsageError("information_gain: refinement covers more than the base");
    const double after = std::log2(static_cast<double>(p1) / (static_cast<double>(p1) + n1));
    const double before = std::log2(static_cast<double>(p0) / (static_cast<double>(p0) + n0));
    return static_cast<double>(t) * (after - before);
}

std::vector<CandidateLiteral> refine(const Clause& clause, const std::vector<std::string>& pos,
                                     const FactStore& store, bool allow_negative_weight) {
    if (pos.empty()) return {};
    auto in_body = [&](const std::string& pred, const std::optional<std::string>& constant,
                       bool neg) {
        for (const auto& l : clause.body)
            if (!l.naf && l.pred == pred && l.constant == constant && l.classical_neg == neg)
                return true;
        return false;
    };
    std::set<std::tuple<std::string, std::string, bool>> seen;
    std::vector<CandidateLiteral> out;
    auto add = [&](const std::string& pred, const std::optional<std::string>& constant,
                   bool neg) {
        if (in_body(pred, constant, neg)) return;
        if (!seen.emplace(pred, constant.value_or(""), neg).second) return;
        out.push_back({pred, constant, neg});
    };
    for (const auto& pred : store.unary_preds()) add(pred, std::nullopt, false);
    for (const auto& pred : store.negated_unary_preds()) add(pred, std::nullopt, true);
    for (const auto& id : pos) {
        for (const auto& f : store.facts_of(id)) {
            if (!f.constant) continue;
            if (f.negative_weight && !allow_negative_weight) continue;
            add(f.pred, f.constant, f.negated);
        }
    }
    std::sort(out.begin(), out.end(), [](const CandidateLiteral& l, const CandidateLiteral& r) {
        if (l.pred != r.pred) return l.pred < r.pred;
        const std::string lc = l.constant.value_or("");
        const std::string rc = r.constant.value_or("");
        if (lc != rc) return constant_less(lc, rc);
        return !l.classical_neg && r.classical_neg;
    });
    return out;
}

BestLiteral add_best_literal(const Clause& clause, const std::vector<std::string>& pos,
                             const std::vector<std::string>& neg, const FactStore& store,
                             bool allow_negative_weight) {
    const auto candidates = refine(clause, pos, store, allow_negative_weight);
    BestLiteral best;
    const long p0 = static_cast<long>(pos.size());
    const long n0 = static_cast<long>(neg.size());
    for (const auto& cand : candidates) {
        std::vector<std::string> sp, sn;
        for (const auto& id : pos)
            if (store.contains(cand.pred, id, cand.constant, cand.classical_neg)) sp.push_back(id);
        if (sp.empty()) continue;  // gain would be -inf, never the best
        for (const auto& id : neg)
            if (store.contains(cand.pred, id, cand.constant, cand.classical_neg)) sn.push_back(id);
        const long p1 = static_cast<long>(sp.size());
        const long n1 = static_cast<long>(sn.size());
        const double gain = information_gain(p0, n0, p1, n1, p1);
#ifndef NDEBUG
        {
            // Cross-check the incremental filter against a from-scratch
            // evaluation of the whole extended body.
            long cp = 0;
            for (const auto& id : pos) {
                bool ok = store.contains(cand.pred, id, cand.constant, cand.classical_neg);
                for (const auto& l : clause.body)
                    if (l.ab < 0 && !l.naf)
                        ok = ok && store.contains(l.pred, id, l.constant, l.classical_neg);
                cp += ok ? 1 : 0;
            }
            assert(cp == p1);
        }
#endif
        bool better = false;
        if (!best.found) {
            better = true;
        } else if (gain != best.gain) {
            better = gain > best.gain;
        } else if (p1 != static_cast<long>(best.cover_pos.size())) {
            better = p1 > static_cast<long>(best.cover_pos.size());
        } else if (cand.pred != best.literal.pred) {
            better = cand.pred < best.literal.pred;
        } else if (cand.constant.value_or("") != best.literal.constant.value_or("")) {
            better = constant_less(cand.constant.value_or(""), best.literal.constant.value_or(""));
        } else {
            better = !cand.classical_neg && best.literal.classical_neg;
        }
        if (better) {
            best.found = true;
            best.literal = {cand.pred, cand.constant, cand.classical_neg, false, -1};
            best.gain = gain;
            best.cover_pos = std::move(sp);
            best.cover_neg = std::move(sn);
        }
    }
    return best;
}

Hypothesis foil(const IlpInstance& inst, const FoldParams& params) {
    inst.validate();
    const FactStore store(inst);
    Hypothesis h;
    h.target = inst.target;
    std::vector<std::string> remaining = inst.e_plus;
    while (!remaining.empty()) {
        Clause c;
        std::vector<std::string> pos = remaining;
        std::vector<std::string> neg = inst.e_minus;
        while (!neg.empty() && static_cast<int>(c.body.size()) < params.max_rule_length) {
            const BestLiteral best = add_best_literal(c, pos, neg, store, true);
            if (!best.found) break;
            c.body.push_back(best.literal);
            pos = best.cover_pos;
            neg = best.cover_neg;
        }
        if (neg.empty()) {
            h.defaults.push_back(c);
        } else {
            // Stuck or over-length while impure: keep the training guarantee
            // by enumerating this clause's positives instead.
            h.facts.insert(h.facts.end(), pos.begin(), pos.end());
        }
        remaining = set_minus(remaining, pos);
    }
    h.validate();
    return h;
}

namespace {

struct FoldContext {
    const FactStore& store;
    const std::string& target;
    const FoldParams& params;
    int next_ab = 0;
    std::vector<std::pair<int, Clause>> ab_out;
};

struct SpecResult {
    bool is_facts = false;
    Clause clause;
    std::vector<std::string> facts;
};

struct FoldOutput {
    std::vector<Clause> clauses;
    std::vector<std::string> facts;
};

std::vector<std::string> clause_covered(const FoldContext& ctx, const Clause& c,
                                        const std::vector<std::string>& ids) {
    Hypothesis tmp;
    tmp.target = ctx.target;
    tmp.defaults = {c};
    tmp.abnormals = ctx.ab_out;
    Evaluator ev{tmp, ctx.store, {}};
    std::vector<std::string> out;
    for (const auto& id : ids)
        if (ev.body_true(c, id)) out.push_back(id);
    return out;
}

FoldOutput fold_loop(FoldContext& ctx, std::vector<std::string> e_plus,
                     const std::vector<std::string>& e_minus, int depth);

struct ExceptionParts {
    bool ok = false;
    std::vector<Clause> clauses;
    std::vector<std::string> ground;
};

// Swaps the example sets and recurses; the caller turns the learned bodies
// into abnormality clauses. The initial gain probe keeps hopeless swaps from
// recursing at all.
ExceptionParts try_exception(FoldContext& ctx, const Clause& c,
                             const std::vector<std::string>& covered_neg,
                             const std::vector<std::string>& covered_pos, int depth) {
    const BestLiteral probe = add_best_literal(c, covered_neg, covered_pos, ctx.store, true);
    if (!probe.found || probe.gain <= 0) return {};
    const FoldOutput sub = fold_loop(ctx, covered_neg, covered_pos, depth + 1);
    return {true, sub.clauses, sub.facts};
}

SpecResult enumerate_result(std::vector<std::string> pos) {
    SpecResult r;
    r.is_facts = true;
    r.facts = std::move(pos);
    return r;
}

SpecResult specialize(FoldContext& ctx, const std::vector<std::string>& e_plus,
                      const std::vector<std::string>& e_minus, int depth) {
    Clause c;
    std::vector<std::string> pos = e_plus;
    std::vector<std::string> neg = e_minus;
    while (true) {
        if (neg.empty()) return {false, c, {}};
        const int len = static_cast<int>(c.body.size());
        bool may_extend = len < ctx.params.max_rule_length;
        if (may_extend) {
            const BestLiteral best = add_best_literal(c, pos, neg, ctx.store, depth > 0);
            if (best.found && best.gain > 0) {
                // A clause that costs more to write down than the facts it
                // explains is abandoned for plain enumeration.
                if (ctx.params.literal_cost * (len + 1) >
                    ctx.params.fact_cost * static_cast<double>(best.cover_pos.size()))
                    return enumerate_result(std::move(pos));
                c.body.push_back(best.literal);
                pos = best.cover_pos;
                neg = best.cover_neg;
                continue;
            }
        }
        // Gain stalled (or the clause is full): exceptions, then enumeration.
        if (depth < ctx.params.max_exception_depth &&
            len + 1 <= ctx.params.max_rule_length) {
            const std::size_t ab_mark = ctx.ab_out.size();
            const int num_mark = ctx.next_ab;
            const ExceptionParts exc = try_exception(ctx, c, neg, pos, depth);
            if (exc.ok) {
                if (ctx.params.literal_cost * (len + 1) >
                    ctx.params.fact_cost * static_cast<double>(pos.size())) {
                    ctx.ab_out.resize(ab_mark);
                    ctx.next_ab = num_mark;
                    return enumerate_result(std::move(pos));
                }
                const int k = ctx.next_ab++;
                for (const auto& cl : exc.clauses)
                    ctx.ab_out.push_back({k, Clause{std::nullopt, cl.body}});
                for (const auto& id : exc.ground) ctx.ab_out.push_back({k, Clause{id, {}}});
                BodyLiteral guard;
                guard.pred = "ab" + std::to_string(k);
                guard.naf = true;
                guard.ab = k;
                c.body.push_back(guard);
                neg = clause_covered(ctx, c, neg);
                assert(neg.empty());
                continue;
            }
            ctx.ab_out.resize(ab_mark);
            ctx.next_ab = num_mark;
        }
        return enumerate_result(std::move(pos));
    }
}

FoldOutput fold_loop(FoldContext& ctx, std::vector<std::string> e_plus,
                     const std::vector<std::string>& e_minus, int depth) {
    FoldOutput out;
    while (!e_plus.empty()) {
        SpecResult res = specialize(ctx, e_plus, e_minus, depth);
        if (res.is_facts) {
            assert(!res.facts.empty());
            out.facts.insert(out.facts.end(), res.facts.begin(), res.facts.end());
            e_plus = set_minus(e_plus, res.facts);
        } else {
            const auto covered = clause_covered(ctx, res.clause, e_plus);
            assert(!covered.empty());
            out.clauses.push_back(std::move(res.clause));
            e_plus = set_minus(e_plus, covered);
        }
    }
    return out;
}

}  // namespace

Hypothesis fold_induce(const IlpInstance& inst, const FoldParams& params) {
    inst.validate();
    const FactStore store(inst);
    FoldContext ctx{store, inst.target, params, 0, {}};
    FoldOutput out = fold_loop(ctx, inst.e_plus, inst.e_minus, 0);
    Hypothesis h;
    h.target = inst.target;
    h.defaults = std::move(out.clauses);
    h.abnormals = std::move(ctx.ab_out);
    h.facts = std::move(out.facts);
    h.validate();
    return h;
}

namespace {

// First-appearance renumbering of abnormality indices, walking defaults in
// order and following references through abnormality bodies.
void renumber_abnormals(Hypothesis* h) {
    std::map<int, int> remap;
    std::vector<int> queue;
    auto visit = [&](const Clause& c) {
        for (const auto& l : c.body)
            if (l.ab >= 0 && !remap.count(l.ab)) {
                remap[l.ab] = static_cast<int>(remap.size());
                queue.push_back(l.ab);
            }
    };
    for (const auto& c : h->defaults) visit(c);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (const auto& [k, c] : h->abnormals)
            if (k == queue[qi]) visit(c);
    }
    std::vector<std::pair<int, Clause>> kept;
    for (const auto& [k, c] : h->abnormals)
        if (remap.count(k)) kept.push_back({remap[k], c});
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    auto rewrite = [&](Clause& c) {
        for (auto& l : c.body)
            if (l.ab >= 0) {
                l.ab = remap.at(l.ab);
                l.pred = "ab" + std::to_string(l.ab);
            }
    };
    for (auto& c : h->defaults) rewrite(c);
    for (auto& [k, c] : kept) rewrite(c);
    h->abnormals = std::move(kept);
}

}  // namespace

Hypothesis prune_hypothesis(const Hypothesis& h, const IlpInstance& inst, long tolerance) {
    inst.validate();
    h.validate();
    const FactStore store(inst);
    Hypothesis cur = h;

    auto neg_covered = [&](const Hypothesis& x) {
        return static_cast<long>(x.covered(inst.e_minus, store).size());
    };
    auto pos_covered = [&](const Hypothesis& x) {
        return static_cast<long>(x.covered(inst.e_plus, store).size());
    };

    // Pass 1: literal drops on the defaults. Dropping only widens coverage,
    // so positives are safe; negatives gate the drop.
    long cur_neg = neg_covered(cur);
    for (std::size_t ci = 0; ci < cur.defaults.size(); ++ci) {
        std::size_t li = 0;
        while (li < cur.defaults[ci].body.size()) {
            Hypothesis cand = cur;
            cand.defaults[ci].body.erase(cand.defaults[ci].body.begin() + li);
            const long cand_neg = neg_covered(cand);
            if (cand_neg <= cur_neg + tolerance) {
                cur = std::move(cand);
                cur_neg = cand_neg;
            } else {
                ++li;
            }
        }
    }

    // Pass 2: clause removals, cheapest contribution first.
    bool removed = true;
    while (removed) {
        removed = false;
        const long total_pos = pos_covered(cur);
        Evaluator ev{cur, store, {}};
        std::vector<std::pair<long, std::size_t>> order;
        for (std::size_t ci = 0; ci < cur.defaults.size(); ++ci) {
            long cp = 0;
            for (const auto& id : inst.e_plus) cp += ev.body_true(cur.defaults[ci], id) ? 1 : 0;
            order.push_back({cp, ci});
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& l, const auto& r) { return l.first < r.first; });
        for (const auto& [cp, ci] : order) {
            Hypothesis cand = cur;
            cand.defaults.erase(cand.defaults.begin() + ci);
            if (pos_covered(cand) == total_pos && neg_covered(cand) <= cur_neg + tolerance) {
                cur = std::move(cand);
                cur_neg = neg_covered(cur);
                removed = true;
                break;
            }
        }
    }

    // Enumerated facts a default now covers are redundant.
    if (!cur.facts.empty()) {
        Evaluator ev{cur, store, {}};
        std::vector<std::string> kept;
        for (const auto& id : cur.facts) {
            bool by_clause = false;
            for (const auto& c : cur.defaults)
                if (ev.body_true(c, id)) {
                    by_clause = true;
                    break;
                }
            if (!by_clause) kept.push_back(id);
        }
        cur.facts = std::move(kept);
    }

    renumber_abnormals(&cur);
    cur.validate();
    return cur;
}

}  // namespace limefold
