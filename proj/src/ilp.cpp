#include "limefold/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "limefold/errors.hpp"

namespace limefold {

namespace {

bool is_number(const std::string& s, double* out) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    *out = v;
    return true;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fact_key(const std::string& pred, const std::vector<std::string>& args, bool negated) {
    std::string key = negated ? "-" : "+";
    key += pred;
    for (const auto& a : args) {
        key += '|';
        key += a;
    }
    return key;
}

}  // namespace

// Orders constants numerically when both sides parse as numbers, otherwise
// by byte comparison. Used everywhere constants need a stable order.
bool constant_less(const std::string& a, const std::string& b) {
    double x = 0, y = 0;
    if (is_number(a, &x) && is_number(b, &y)) {
        if (x != y) return x < y;
        return a < b;
    }
    return a < b;
}

std::string Atom::text() const {
    std::string s = negated ? "-" : "";
    s += pred;
    s += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ',';
        s += args[i];
    }
    s += ')';
    return s;
}

void IlpInstance::validate() const {
    if (target.empty()) throw DataError("instance: empty target predicate");
    std::set<std::string> pos(e_plus.begin(), e_plus.end());
    std::set<std::string> neg(e_minus.begin(), e_minus.end());
    if (pos.size() != e_plus.size() || neg.size() != e_minus.size())
        throw DataError("instance: duplicated example id");
    for (const auto& id : pos)
        if (neg.count(id))
            throw DataError("instance: example '" + id + "' is both positive and negative");
    std::set<std::string> keys;
    for (const auto& a : atoms) {
        if (a.args.empty()) throw DataError("instance: atom '" + a.pred + "' has no arguments");
        if (a.args.size() > 2)
            throw DataError("instance: atom '" + a.text() + "' has more than two arguments");
        if (!pos.count(a.args[0]) && !neg.count(a.args[0]))
            throw DataError("instance: atom '" + a.text() + "' references unknown example '" +
                            a.args[0] + "'");
        keys.insert(fact_key(a.pred, a.args, a.negated));
    }
    for (const auto& a : atoms)
        if (keys.count(fact_key(a.pred, a.args, !a.negated)))
            throw DataError("instance: '" + a.text() + "' coexists with its classical negation");
}

FactStore::FactStore(const IlpInstance& inst) {
    inst.validate();
    std::vector<std::string> ids = inst.e_plus;
    ids.insert(ids.end(), inst.e_minus.begin(), inst.e_minus.end());
    for (const auto& id : ids) by_id_[id];  // every example gets a (possibly empty) slot

    auto add = [&](const Atom& a) -> bool {
        const std::string key = fact_key(a.pred, a.args, a.negated);
        if (keys_.count(key)) return false;
        if (keys_.count(fact_key(a.pred, a.args, !a.negated)))
            throw DataError("instance: derived '" + a.text() +
                            "' contradicts an existing fact");
        keys_.insert(key);
        Fact f;
        f.pred = a.pred;
        if (a.args.size() > 1) f.constant = a.args[1];
        f.negated = a.negated;
        f.negative_weight = a.negative_weight;
        by_id_[a.args[0]].push_back(std::move(f));
        if (a.args.size() == 1) (a.negated ? neg_unary_ : unary_).insert(a.pred);
        return true;
    };
    for (const auto& a : inst.atoms) add(a);

    // Ground the background rules over the example ids to a fixpoint.
    bool changed = !inst.rules.empty();
    while (changed) {
        changed = false;
        for (const auto& rule : inst.rules) {
            for (const auto& id : ids) {
                auto bind = [&](const BkRule::Part& p) {
                    Atom a;
                    a.pred = p.pred;
                    a.negated = p.negated;
                    for (const auto& arg : p.args) a.args.push_back(arg == "X" ? id : arg);
                    return a;
                };
                bool ok = true;
                for (const auto& part : rule.body) {
                    const Atom a = bind(part);
                    if (!keys_.count(fact_key(a.pred, a.args, a.negated))) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                const Atom head = bind(rule.head);
                if (!by_id_.count(head.args[0]))
                    throw DataError("instance: rule derives atom for unknown example '" +
                                    head.args[0] + "'");
                if (add(head)) changed = true;
            }
        }
    }
}

bool FactStore::contains(const std::string& pred, const std::string& id,
                         const std::optional<std::string>& constant, bool negated) const {
    std::vector<std::string> args{id};
    if (constant) args.push_back(*constant);
    return keys_.count(fact_key(pred, args, negated)) > 0;
}

const std::vector<FactStore::Fact>& FactStore::facts_of(const std::string& id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? empty_ : it->second;
}

TransformResult transform(const Dataset& data, const std::vector<Explanation>& explanations,
                          const std::string& target) {
    std::map<std::string, const Explanation*> by_id;
    for (const auto& e : explanations) {
        if (!by_id.emplace(e.id, &e).second)
            throw DataError("transform: duplicate explanation for row '" + e.id + "'");
    }
    TransformResult out;
    out.instance.target = target;
    for (const auto& row : data.rows) {
        const auto it = by_id.find(row.id);
        if (it == by_id.end()) throw DataError("transform: no explanation for row '" + row.id + "'");
        const Explanation& expl = *it->second;
        (expl.positive ? out.instance.e_plus : out.instance.e_minus).push_back(row.id);

        std::set<std::string> seen;
        for (const auto& pair : expl.pairs) {
            Atom a;
            a.pred = pair.condition.feature;
            a.negative_weight = pair.weight < 0;
            if (pair.condition.categorical) {
                a.args = {row.id, pair.condition.value};
                a.negated = pair.condition.expected == 0;
            } else {
                a.args = {row.id, std::to_string(pair.condition.interval)};
            }
            if (!seen.insert(fact_key(a.pred, a.args, a.negated)).second) continue;
            out.provenance.push_back({a.text(), row.id, pair.condition.text, pair.weight});
            out.instance.atoms.push_back(std::move(a));
        }
    }
    out.instance.validate();
    return out;
}

namespace {

std::string part_text(const BkRule::Part& p) {
    Atom a;
    a.pred = p.pred;
    a.args = p.args;
    a.negated = p.negated;
    return a.text();
}

}  // namespace

std::string emit_program(const IlpInstance& inst) {
    std::ostringstream out;
    out << "B:\n";
    for (const auto& rule : inst.rules) {
        out << part_text(rule.head) << " :- ";
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            if (i) out << ", ";
            out << part_text(rule.body[i]);
        }
        out << ".\n";
    }
    std::vector<const Atom*> atoms;
    for (const auto& a : inst.atoms) atoms.push_back(&a);
    std::sort(atoms.begin(), atoms.end(), [](const Atom* l, const Atom* r) {
        if (l->pred != r->pred) return l->pred < r->pred;
        const std::size_t n = std::min(l->args.size(), r->args.size());
        for (std::size_t i = 0; i < n; ++i)
            if (l->args[i] != r->args[i]) return constant_less(l->args[i], r->args[i]);
        if (l->args.size() != r->args.size()) return l->args.size() < r->args.size();
        return !l->negated && r->negated;
    });
    for (const Atom* a : atoms) {
        out << a->text() << '.';
        if (a->negative_weight) out << " % w<0";
        out << '\n';
    }
    auto section = [&](const char* name, std::vector<std::string> ids) {
        out << name << '\n';
        std::sort(ids.begin(), ids.end(), constant_less);
        for (const auto& id : ids) out << inst.target << '(' << id << ").\n";
    };
    section("E+:", inst.e_plus);
    section("E-:", inst.e_minus);
    return out.str();
}

namespace {

struct TermParser {
    std::string text;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError("instance file, line " + std::to_string(line) + ": " + msg + " in '" +
                        text + "'");
    }

    // Splits "a(x), b(y,z)" at top-level commas.
    std::vector<std::string> split_parts(const std::string& s) const {
        std::vector<std::string> parts;
        int depth = 0;
        std::string cur;
        for (char c : s) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) parts.push_back(trim(cur));
        return parts;
    }

    BkRule::Part parse_part(std::string s) const {
        BkRule::Part p;
        s = trim(s);
        if (!s.empty() && s[0] == '-') {
            p.negated = true;
            s = trim(s.substr(1));
        }
        const auto open = s.find('(');
        if (open == std::string::npos || s.back() != ')') fail("malformed atom");
        p.pred = trim(s.substr(0, open));
        if (p.pred.empty()) fail("missing predicate name");
        for (char c : p.pred)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                fail("bad predicate name '" + p.pred + "'");
        const std::string inner = s.substr(open + 1, s.size() - open - 2);
        for (auto& arg : split_parts(inner)) {
            if (arg.empty()) fail("empty argument");
            p.args.push_back(std::move(arg));
        }
        if (p.args.empty()) fail("atom needs at least one argument");
        return p;
    }
};

bool is_variable(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

}  // namespace

IlpInstance parse_program(const std::string& text) {
    IlpInstance inst;
    std::vector<std::pair<Atom, int>> pos_atoms, neg_atoms;  // E+ / E- with line numbers

    enum class Section { none, bk, pos, neg };
    Section section = Section::none;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string pending;  // term accumulated across lines
    int pending_line = 0;

    auto finish_term = [&](const std::string& term, bool neg_weight, int line) {
        TermParser tp{term, line};
        if (section == Section::none) tp.fail("content before the first section header");
        const auto sep = term.find(":-");
        if (sep != std::string::npos) {
            if (section != Section::bk) tp.fail("rules are only allowed in the B: section");
            BkRule rule;
            rule.head = tp.parse_part(term.substr(0, sep));
            for (const auto& part : tp.split_parts(trim(term.substr(sep + 2))))
                rule.body.push_back(tp.parse_part(part));
            if (rule.body.empty()) tp.fail("rule has an empty body");
            int vars = 0;
            for (const auto& a : rule.head.args) vars += is_variable(a) ? 1 : 0;
            for (const auto& p : rule.body)
                for (const auto& a : p.args) vars += is_variable(a) ? 1 : 0;
            for (const auto& p : rule.body)
                for (const auto& a : p.args)
                    if (is_variable(a) && a != "X") tp.fail("only the variable X is supported");
            for (const auto& a : rule.head.args)
                if (is_variable(a) && a != "X") tp.fail("only the variable X is supported");
            if (vars == 0) tp.fail("rule without variables; write facts instead");
            inst.rules.push_back(std::move(rule));
            return;
        }
        const BkRule::Part part = tp.parse_part(term);
        for (const auto& a : part.args)
            if (is_variable(a)) tp.fail("variables are only allowed in rules");
        Atom atom;
        atom.pred = part.pred;
        atom.args = part.args;
        atom.negated = part.negated;
        atom.negative_weight = neg_weight;
        switch (section) {
            case Section::bk:
                inst.atoms.push_back(std::move(atom));
                break;
            case Section::pos:
            case Section::neg: {
                if (atom.negated) tp.fail("examples cannot be classically negated");
                if (atom.args.size() != 1) tp.fail("examples must have exactly one argument");
                (section == Section::pos ? pos_atoms : neg_atoms).emplace_back(std::move(atom),
                                                                               line);
                break;
            }
            default:
                tp.fail("unexpected term");
        }
    };

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        bool neg_weight = false;
        const auto cmt = raw.find('%');
        if (cmt != std::string::npos) {
            const std::string comment = trim(raw.substr(cmt + 1));
            if (comment == "w<0") neg_weight = true;
            raw = raw.substr(0, cmt);
        }
        std::string body = trim(raw);
        if (body.empty()) continue;
        if (body == "B:" || body == "E+:" || body == "E-:") {
            if (!trim(pending).empty())
                throw DataError("instance file, line " + std::to_string(line_no) +
                                ": unterminated term before section header");
            section = body == "B:" ? Section::bk : body == "E+:" ? Section::pos : Section::neg;
            continue;
        }
        if (pending.empty()) pending_line = line_no;
        pending += body;
        pending += ' ';
        // Terms end at '.' followed by whitespace or end of line.
        std::string buf;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const char c = pending[i];
            if (c == '.' &&
                (i + 1 >= pending.size() ||
                 std::isspace(static_cast<unsigned char>(pending[i + 1])))) {
                if (!trim(buf).empty()) finish_term(trim(buf), neg_weight, pending_line);
                buf.clear();
            } else {
                buf += c;
            }
        }
        pending = trim(buf);
        if (!pending.empty()) pending += ' ';
    }
    if (!trim(pending).empty())
        throw DataError("instance file, line " + std::to_string(line_no) +
                        ": unterminated term '" + trim(pending) + "' (missing '.')");

    if (pos_atoms.empty() && neg_atoms.empty())
        throw DataError("instance file: no examples; cannot infer the target predicate");
    inst.target = (pos_atoms.empty() ? neg_atoms : pos_atoms)[0].first.pred;
    for (const auto& [atom, line] : pos_atoms) {
        if (atom.pred != inst.target)
            throw DataError("instance file, line " + std::to_string(line) +
                            ": example predicate '" + atom.pred + "' does not match target '" +
                            inst.target + "'");
        inst.e_plus.push_back(atom.args[0]);
    }
    for (const auto& [atom, line] : neg_atoms) {
        if (atom.pred != inst.target)
            throw DataError("instance file, line " + std::to_string(line) +
                            ": example predicate '" + atom.pred + "' does not match target '" +
                            inst.target + "'");
        inst.e_minus.push_back(atom.args[0]);
    }
    inst.validate();
    return inst;
}

IlpInstance load_program(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_program(buf.str());
}

std::string provenance_to_json(const std::vector<ProvenanceEntry>& entries) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : entries)
        j.push_back({{"fact", e.fact},
                     {"row", e.row},
                     {"condition", e.condition},
                     {"weight", e.weight}});
    return j.dump(2);
}

}  // namespace limefold
