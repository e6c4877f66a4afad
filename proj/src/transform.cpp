#include "csr/transform.hpp"

#include <algorithm>

#include "csr/analysis.hpp"

namespace csr {

namespace {

struct PendingRule {
    std::vector<TermPtr> lhs_args;
    TermPtr rhs;
    // Index of the originating rule; output rules are ordered by it so a flat
    // input is reproduced verbatim and split blocks stay where they started.
    int origin_index;
};

std::optional<std::set<int>> flat_index_set(const std::vector<TermPtr>& args) {
    std::set<int> I;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i]->is_var()) continue;
        for (const auto& sub : args[i]->args()) {
            if (!sub->is_var()) return std::nullopt;
        }
        I.insert(static_cast<int>(i) + 1);
    }
    return I;
}

class Shallower {
public:
    explicit Shallower(const Trs& R) : R_(R), sig_(R.signature()) {}

    ShallowingResult run() {
        if (!is_constructor_system(R_) || !is_inductively_sequential(R_)) {
            throw Error("flattening requires a constructor system with definitional trees");
        }
        std::vector<std::string> order;
        std::map<std::string, std::vector<PendingRule>> groups;
        int index = 0;
        for (const auto& r : R_.rules()) {
            const std::string& f = r.lhs->name();
            if (!groups.count(f)) order.push_back(f);
            groups[f].push_back({r.lhs->args(), r.rhs, index++});
        }
        for (const auto& f : order) {
            process(sig_.symbol_or_throw(f), f, {}, groups[f], 0);
        }
        std::stable_sort(emitted_.begin(), emitted_.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Rule> rules;
        rules.reserve(emitted_.size());
        for (auto& [anchor, r] : emitted_) rules.push_back(std::move(r));
        ShallowingResult out;
        out.output = Trs::make(sig_, std::move(rules));
        out.symbol_map = std::move(symbol_map_);
        out.log = std::move(log_);
        return out;
    }

private:
    // Symbols are taken by value: introducing a fresh symbol can reallocate the
    // signature's storage and would invalidate references into it.
    void process(const Symbol sym, const std::string& origin,
                 const std::vector<std::string>& path, const std::vector<PendingRule>& rules,
                 int depth) {
        if (depth > 64) {
            throw Error("pattern depth limit exceeded while flattening " + sym.name);
        }
        std::optional<std::set<int>> shared;
        bool flat = true;
        for (const auto& r : rules) {
            auto I = flat_index_set(r.lhs_args);
            if (!I || (shared && *shared != *I)) {
                flat = false;
                break;
            }
            shared = I;
        }
        if (flat) {
            for (const auto& r : rules) {
                emitted_.emplace_back(
                    r.origin_index,
                    Rule{"", Term::app_raw(sym.name, sym.result_sort, r.lhs_args), r.rhs});
            }
            return;
        }

        const int i = dispatch_index(sym, rules);
        log_.push_back("split " + sym.name + " on argument " + std::to_string(i + 1));

        std::vector<std::string> ctor_order;
        std::map<std::string, std::vector<PendingRule>> by_ctor;
        for (const auto& r : rules) {
            const std::string& c = r.lhs_args[i]->name();
            if (!by_ctor.count(c)) ctor_order.push_back(c);
            by_ctor[c].push_back(r);
        }
        for (const auto& cname : ctor_order) {
            const Symbol c = sig_.symbol_or_throw(cname);
            auto new_path = path;
            new_path.push_back(cname);
            const Symbol fresh = introduce(sym, origin, new_path, c, i);
            emit_dispatcher(sym, fresh, c, i, by_ctor[cname].front().origin_index);
            std::vector<PendingRule> sub;
            for (const auto& r : by_ctor[cname]) {
                std::vector<TermPtr> args(r.lhs_args.begin(), r.lhs_args.begin() + i);
                const auto& hoisted = r.lhs_args[i]->args();
                args.insert(args.end(), hoisted.begin(), hoisted.end());
                args.insert(args.end(), r.lhs_args.begin() + i + 1, r.lhs_args.end());
                sub.push_back({std::move(args), r.rhs, r.origin_index});
            }
            process(fresh, origin, new_path, sub, depth + 1);
        }
    }

    int dispatch_index(const Symbol& sym, const std::vector<PendingRule>& rules) const {
        for (size_t i = 0; i < sym.arg_sorts.size(); ++i) {
            const bool ok = std::all_of(rules.begin(), rules.end(), [&](const PendingRule& r) {
                const TermPtr& a = r.lhs_args[i];
                return !a->is_var() && !R_.is_defined(a->name());
            });
            if (ok) return static_cast<int>(i);
        }
        throw Error("cannot flatten " + sym.name +
                    ": no argument is constructor-rooted in every rule");
    }

    Symbol introduce(const Symbol& sym, const std::string& origin,
                            const std::vector<std::string>& path, const Symbol& c, int i) {
        std::string base = origin + "_";
        for (const auto& p : path) base += p;
        std::string name = base;
        for (int k = 2; sig_.has_symbol(name); ++k) {
            name = base + "#" + std::to_string(k);
        }
        std::vector<std::string> arg_sorts(sym.arg_sorts.begin(), sym.arg_sorts.begin() + i);
        arg_sorts.insert(arg_sorts.end(), c.arg_sorts.begin(), c.arg_sorts.end());
        arg_sorts.insert(arg_sorts.end(), sym.arg_sorts.begin() + i + 1, sym.arg_sorts.end());
        sig_.add_symbol({name, std::move(arg_sorts), sym.result_sort, SymbolKind::Defined});
        symbol_map_.emplace(name, std::make_pair(origin, path));
        return sig_.symbol_or_throw(name);
    }

    void emit_dispatcher(const Symbol& sym, const Symbol& fresh, const Symbol& c, int i,
                         int anchor) {
        std::vector<TermPtr> outer;
        std::vector<TermPtr> inner;
        for (size_t j = 0; j < sym.arg_sorts.size(); ++j) {
            if (static_cast<int>(j) == i) {
                std::vector<TermPtr> ys;
                for (size_t m = 0; m < c.arg_sorts.size(); ++m) {
                    ys.push_back(Term::var("y" + std::to_string(m + 1), c.arg_sorts[m]));
                }
                inner.insert(inner.end(), ys.begin(), ys.end());
                outer.push_back(Term::app_raw(c.name, c.result_sort, std::move(ys)));
            } else {
                auto v = Term::var("x" + std::to_string(j + 1), sym.arg_sorts[j]);
                inner.push_back(v);
                outer.push_back(v);
            }
        }
        emitted_.emplace_back(
            anchor, Rule{"", Term::app_raw(sym.name, sym.result_sort, std::move(outer)),
                         Term::app_raw(fresh.name, fresh.result_sort, std::move(inner))});
    }

    const Trs& R_;
    Signature sig_;
    std::vector<std::pair<int, Rule>> emitted_;
    std::map<std::string, std::pair<std::string, std::vector<std::string>>> symbol_map_;
    std::vector<std::string> log_;
};

}  // namespace

ShallowingResult shallow_transform(const Trs& R) { return Shallower(R).run(); }

}  // namespace csr
