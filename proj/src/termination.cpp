#include "csr/termination.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csr/engine.hpp"

namespace csr {

namespace {

/// Shared node and wall-clock budget for the searches below.
class Budget {
public:
    explicit Budget(const SearchBudget& b)
        : start_(std::chrono::steady_clock::now()), limit_(b) {}

    /// Counts one unit of work; false once the budget is spent.
    bool tick() {
        if (++nodes_ > limit_.max_nodes) return false;
        if ((nodes_ & 1023) == 0) {
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start_)
                                     .count();
            if (elapsed > limit_.time_limit_ms) return false;
        }
        return true;
    }

private:
    std::chrono::steady_clock::time_point start_;
    SearchBudget limit_;
    long long nodes_ = 0;
};

Polynomial rule_margin(const Rule& r, const Interpretation& interp) {
    const auto idx = variable_indexing(r.lhs);
    return interpret(r.lhs, interp, idx) - interpret(r.rhs, interp, idx) -
           Polynomial::constant(1);
}

}  // namespace

CertCheck check_certificate(const Trs& R, const ReplacementMap& mu,
                            const Interpretation& interp) {
    const Signature& sig = R.signature();
    for (const auto& [name, poly] : interp.polys) {
        if (!sig.has_symbol(name))
            return {false, "certificate interprets unknown symbol " + name};
    }
    for (const Symbol& sym : sig.symbols()) {
        const auto it = interp.polys.find(sym.name);
        if (it == interp.polys.end())
            return {false, "no polynomial for " + sym.name};
        const Polynomial& p = it->second;
        if (p.max_variable() > sym.arity())
            return {false, "polynomial for " + sym.name + " uses a formal beyond x" +
                               std::to_string(sym.arity())};
        if (!p.nonnegative())
            return {false, "polynomial for " + sym.name + " has a negative coefficient"};
        for (const int i : mu.at(sym.name)) {
            bool strict = false;
            for (const auto& [mono, coeff] : p.terms()) {
                if (mono.size() == 1 && mono.begin()->first == i && coeff >= 1) {
                    strict = true;
                    break;
                }
            }
            if (!strict)
                return {false, "polynomial for " + sym.name +
                                   " is not strict in open argument " + std::to_string(i)};
        }
    }
    for (const Rule& r : R.rules()) {
        const Polynomial margin = rule_margin(r, interp);
        if (!margin.nonnegative())
            return {false, "rule " + r.label + " is not oriented: [lhs] - [rhs] - 1 = " +
                               margin.to_string()};
    }
    return {true, ""};
}

namespace {

/// One coefficient slot of a polynomial template.
struct Slot {
    Monomial mono;
    long long lo = 0;
    long long hi = 3;
};

std::vector<Slot> template_slots(const Symbol& sym, const ReplacementMap& mu,
                                 bool products) {
    std::vector<Slot> slots;
    slots.push_back({Monomial{}, 0, 3});
    for (int i = 1; i <= sym.arity(); ++i) {
        const long long lo = mu.at(sym.name).count(i) ? 1 : 0;
        slots.push_back({Monomial{{i, 1}}, lo, 3});
    }
    if (products) {
        for (int i = 1; i <= sym.arity(); ++i) {
            for (int j = i; j <= sym.arity(); ++j) {
                if (sym.arity() > 2 && i != j) continue;
                Monomial m;
                m[i] += 1;
                m[j] += 1;
                slots.push_back({m, 0, 3});
            }
        }
    }
    return slots;
}

Polynomial build_from_slots(const std::vector<Slot>& slots,
                            const std::vector<long long>& coeffs) {
    Polynomial p;
    for (size_t k = 0; k < slots.size(); ++k) {
        if (coeffs[k] == 0) continue;
        Polynomial mono = Polynomial::constant(coeffs[k]);
        for (const auto& [var, exp] : slots[k].mono)
            for (int e = 0; e < exp; ++e) mono = mono * Polynomial::variable(var);
        p = p + mono;
    }
    return p;
}

class CertSearch {
public:
    CertSearch(const Trs& R, const ReplacementMap& mu, const SearchBudget& budget)
        : R_(R), mu_(mu), budget_(budget) {
        std::map<std::string, size_t> seen;
        const std::function<void(const TermPtr&)> scan = [&](const TermPtr& t) {
            if (t->is_var()) return;
            if (!seen.count(t->name())) {
                seen[t->name()] = order_.size();
                order_.push_back(R.signature().symbol_or_throw(t->name()));
            }
            for (const auto& a : t->args()) scan(a);
        };
        for (const Rule& r : R.rules()) {
            scan(r.lhs);
            scan(r.rhs);
        }
        buckets_.resize(order_.size());
        for (const Rule& r : R.rules()) {
            size_t ready = 0;
            const std::function<void(const TermPtr&)> depth = [&](const TermPtr& t) {
                if (!t->is_var()) ready = std::max(ready, seen.at(t->name()));
                for (const auto& a : t->args()) depth(a);
            };
            depth(r.lhs);
            depth(r.rhs);
            buckets_[ready].push_back(&r);
        }
        // Symbols absent from every rule are unconstrained; the sum of their
        // open formals satisfies strictness.
        for (const Symbol& sym : R.signature().symbols()) {
            if (seen.count(sym.name)) continue;
            Polynomial p;
            for (const int i : mu.at(sym.name)) p = p + Polynomial::variable(i);
            interp_.polys[sym.name] = p;
        }
    }

    std::optional<Interpretation> run() {
        for (const bool products : {false, true}) {
            products_ = products;
            if (dfs(0)) {
                const CertCheck final = check_certificate(R_, mu_, interp_);
                if (final.ok) return interp_;
                return std::nullopt;
            }
            if (spent_) return std::nullopt;
        }
        return std::nullopt;
    }

private:
    bool dfs(size_t s) {
        if (s == order_.size()) return true;
        const Symbol& sym = order_[s];
        const std::vector<Slot> slots = template_slots(sym, mu_, products_);
        std::vector<long long> coeffs(slots.size());
        for (size_t k = 0; k < slots.size(); ++k) coeffs[k] = slots[k].lo;
        for (;;) {
            if (!budget_.tick()) {
                spent_ = true;
                return false;
            }
            interp_.polys[sym.name] = build_from_slots(slots, coeffs);
            bool oriented = true;
            for (const Rule* r : buckets_[s]) {
                if (!rule_margin(*r, interp_).nonnegative()) {
                    oriented = false;
                    break;
                }
            }
            if (oriented && dfs(s + 1)) return true;
            if (spent_) return false;
            // Odometer step, last slot fastest.
            size_t k = slots.size();
            while (k > 0) {
                --k;
                if (coeffs[k] < slots[k].hi) {
                    ++coeffs[k];
                    break;
                }
                coeffs[k] = slots[k].lo;
                if (k == 0) {
                    interp_.polys.erase(sym.name);
                    return false;
                }
            }
        }
    }

    const Trs& R_;
    const ReplacementMap& mu_;
    Budget budget_;
    std::vector<Symbol> order_;
    std::vector<std::vector<const Rule*>> buckets_;
    Interpretation interp_;
    bool products_ = false;
    bool spent_ = false;
};

}  // namespace

std::optional<Interpretation> find_certificate(const Trs& R, const ReplacementMap& mu,
                                               const SearchBudget& budget) {
    return CertSearch(R, mu, budget).run();
}

namespace {

struct LoopNode {
    TermPtr term;
    int parent = -1;
    Position pos;
    std::string label;
    int depth = 0;
};

/// Node indices from the start term to `i`, inclusive.
std::vector<int> chain_to(const std::vector<LoopNode>& nodes, int i) {
    std::vector<int> path;
    for (int a = i; a >= 0; a = nodes[a].parent) path.push_back(a);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::optional<LoopWitness> find_loop(const Trs& R, const ReplacementMap& mu, int max_depth,
                                     const SearchBudget& budget) {
    constexpr int kMaxTermSize = 2000;
    Budget clock(budget);
    for (const Rule& start : R.rules()) {
        std::vector<LoopNode> nodes{{start.lhs, -1, Position::root(), "", 0}};
        std::set<std::string> seen{start.lhs->to_string()};
        std::deque<int> queue{0};
        while (!queue.empty()) {
            const int i = queue.front();
            queue.pop_front();
            if (nodes[i].depth == max_depth) continue;
            for (const RedexOccurrence& red : mu_redexes(nodes[i].term, R, mu)) {
                if (!clock.tick()) return std::nullopt;
                const TermPtr child = apply_redex(nodes[i].term, red);
                if (child->size() > kMaxTermSize) continue;
                const std::vector<int> path = chain_to(nodes, i);
                for (const Position& p : replacing_positions(child, mu)) {
                    const TermPtr sub = subterm_at(child, p);
                    for (size_t a = 0; a < path.size(); ++a) {
                        if (!match(nodes[path[a]].term, sub)) continue;
                        LoopWitness w;
                        w.rule_label = start.label;
                        for (size_t k = 1; k < path.size(); ++k)
                            w.steps.emplace_back(nodes[path[k]].pos, nodes[path[k]].label);
                        w.steps.emplace_back(red.pos, red.rule->label);
                        w.prefix_len = a;
                        w.reentry = p;
                        return w;
                    }
                }
                if (seen.insert(child->to_string()).second) {
                    nodes.push_back({child, i, red.pos, red.rule->label, nodes[i].depth + 1});
                    queue.push_back(static_cast<int>(nodes.size()) - 1);
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

bool fail(std::string* why, const std::string& message) {
    if (why) *why = message;
    return false;
}

}  // namespace

bool replay_loop(const Trs& R, const ReplacementMap& mu, const LoopWitness& w,
                 std::string* why) {
    const Rule* start = R.rule_by_label(w.rule_label);
    if (!start) return fail(why, "no rule labelled " + w.rule_label);
    if (w.prefix_len >= w.steps.size())
        return fail(why, "the loop part of the derivation is empty");
    TermPtr t = start->lhs;
    TermPtr anchor = w.prefix_len == 0 ? t : nullptr;
    size_t applied = 0;
    for (const auto& [pos, label] : w.steps) {
        const std::string at = "step " + std::to_string(applied + 1);
        if (!valid_position(t, pos) || !is_replacing(t, mu, pos))
            return fail(why, at + ": position " + pos.to_string() + " is not open in " +
                                 t->to_string());
        const Rule* rule = R.rule_by_label(label);
        if (!rule) return fail(why, at + ": no rule labelled " + label);
        const auto m = match(rule->lhs, subterm_at(t, pos));
        if (!m)
            return fail(why, at + ": rule " + label + " does not match at " + pos.to_string());
        t = replace_at(t, pos, m->apply(rule->rhs));
        ++applied;
        if (applied == w.prefix_len) anchor = t;
    }
    if (!valid_position(t, w.reentry) || !is_replacing(t, mu, w.reentry))
        return fail(why, "re-entry position " + w.reentry.to_string() + " is not open in " +
                             t->to_string());
    if (!match(anchor, subterm_at(t, w.reentry)))
        return fail(why, "the term after " + std::to_string(w.prefix_len) +
                             " steps does not match the re-entry subterm " +
                             subterm_at(t, w.reentry)->to_string());
    return true;
}

TerminationResult prove_termination(const Trs& R, const ReplacementMap& mu,
                                    const SearchBudget& budget) {
    TerminationResult out;
    const SearchBudget quick{50000, std::min(budget.time_limit_ms, 1000)};
    if (auto w = find_loop(R, mu, 8, quick)) {
        out.status = TerminationStatus::Disproved;
        out.loop = std::move(w);
        out.note = "loop found within 8 steps";
        return out;
    }
    if (auto cert = find_certificate(R, mu, budget)) {
        out.status = TerminationStatus::Proved;
        out.certificate = std::move(cert);
        return out;
    }
    const SearchBudget deep{500000, std::min(budget.time_limit_ms, 5000)};
    if (auto w = find_loop(R, mu, 25, deep)) {
        out.status = TerminationStatus::Disproved;
        out.loop = std::move(w);
        out.note = "loop found within 25 steps";
        return out;
    }
    out.status = TerminationStatus::Unknown;
    out.note = "no certificate in the searched template family and no loop within 25 steps";
    return out;
}

}  // namespace csr
