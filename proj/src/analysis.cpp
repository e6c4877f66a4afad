#include "csr/analysis.hpp"

#include <algorithm>
#include <optional>

namespace csr {

namespace {

bool constructor_term(const Trs& R, const TermPtr& t) {
    if (t->is_var()) return true;
    if (R.is_defined(t->name())) return false;
    for (const auto& a : t->args()) {
        if (!constructor_term(R, a)) return false;
    }
    return true;
}

// Flat argument check shared by shallowness and properness: each lhs argument
// is a variable or a constructor applied to variables. Returns the index set,
// or a reason string on the first violation.
std::optional<std::set<int>> flat_indices(const Trs& R, const Rule& r, std::string& reason) {
    std::set<int> I;
    const auto& args = r.lhs->args();
    for (size_t i = 0; i < args.size(); ++i) {
        const TermPtr& a = args[i];
        if (a->is_var()) continue;
        if (R.is_defined(a->name())) {
            reason = "rule " + r.label + " has defined symbol " + a->name() + " below the root";
            return std::nullopt;
        }
        for (const auto& sub : a->args()) {
            if (!sub->is_var()) {
                reason = "rule " + r.label + " has nested pattern " + a->to_string();
                return std::nullopt;
            }
        }
        I.insert(static_cast<int>(i) + 1);
    }
    return I;
}

bool variants(const TermPtr& a, const TermPtr& b) {
    return match(a, b).has_value() && match(b, a).has_value();
}

}  // namespace

bool is_left_linear(const Trs& R) {
    return std::all_of(R.rules().begin(), R.rules().end(),
                       [](const Rule& r) { return is_linear(r.lhs); });
}

bool is_constructor_system(const Trs& R) {
    for (const auto& r : R.rules()) {
        for (const auto& a : r.lhs->args()) {
            if (!constructor_term(R, a)) return false;
        }
    }
    return true;
}

bool is_collapsing_free(const Trs& R) {
    return std::none_of(R.rules().begin(), R.rules().end(),
                        [](const Rule& r) { return r.rhs->is_var(); });
}

bool is_orthogonal(const Trs& R) { return is_left_linear(R) && critical_pairs(R).empty(); }

// ==== exhaustiveness ====

namespace {

/**
 * Pattern-matrix coverage by constructor splitting. A column where every row
 * has a variable is discarded; otherwise the column's sort is split on each of
 * its constructors, specializing matching rows and keeping variable rows. An
 * empty matrix with columns remaining denotes an uncovered prefix.
 */
class CoverageChecker {
public:
    explicit CoverageChecker(const Trs& R) : R_(R), sig_(R.signature()) {}

    std::optional<std::vector<TermPtr>> uncovered(const std::vector<std::string>& cols,
                                                  const std::vector<std::vector<TermPtr>>& rows) {
        if (cols.empty()) {
            if (rows.empty()) return std::vector<TermPtr>{};
            return std::nullopt;
        }
        const std::string& sort = cols.front();
        const std::vector<std::string> rest_cols(cols.begin() + 1, cols.end());

        const auto ctors = sig_.constructors_of(sort);
        if (ctors.empty()) {
            // No inhabitants for this column, so no argument tuple exists.
            warn_uninhabited(sort);
            return std::nullopt;
        }

        const bool all_vars = std::all_of(rows.begin(), rows.end(), [](const auto& row) {
            return row.front()->is_var();
        });
        if (all_vars) {
            std::vector<std::vector<TermPtr>> rest_rows;
            rest_rows.reserve(rows.size());
            for (const auto& row : rows) {
                rest_rows.emplace_back(row.begin() + 1, row.end());
            }
            auto sub = uncovered(rest_cols, rest_rows);
            if (!sub) return std::nullopt;
            sub->insert(sub->begin(), fresh_var(sort));
            return sub;
        }

        for (const Symbol* c : ordered_split(rows, ctors)) {
            std::vector<std::vector<TermPtr>> spec_rows;
            for (const auto& row : rows) {
                const TermPtr& p = row.front();
                std::vector<TermPtr> next;
                if (p->is_var()) {
                    for (const auto& as : c->arg_sorts) next.push_back(fresh_var(as));
                } else if (p->name() == c->name) {
                    next = p->args();
                } else {
                    continue;
                }
                next.insert(next.end(), row.begin() + 1, row.end());
                spec_rows.push_back(std::move(next));
            }
            std::vector<std::string> spec_cols = c->arg_sorts;
            spec_cols.insert(spec_cols.end(), rest_cols.begin(), rest_cols.end());
            auto sub = uncovered(spec_cols, spec_rows);
            if (sub) {
                std::vector<TermPtr> head(sub->begin(), sub->begin() + c->arity());
                std::vector<TermPtr> out{Term::app_raw(c->name, c->result_sort, std::move(head))};
                out.insert(out.end(), sub->begin() + c->arity(), sub->end());
                return out;
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

private:
    // Constructors rooting some row first (in row order), then the remaining
    // ones in declaration order, so witnesses are deterministic.
    std::vector<const Symbol*> ordered_split(const std::vector<std::vector<TermPtr>>& rows,
                                             const std::vector<const Symbol*>& ctors) {
        std::vector<const Symbol*> out;
        auto add = [&](const std::string& name) {
            for (const Symbol* c : ctors) {
                if (c->name == name && std::find(out.begin(), out.end(), c) == out.end()) {
                    out.push_back(c);
                }
            }
        };
        for (const auto& row : rows) {
            if (!row.front()->is_var()) add(row.front()->name());
        }
        for (const Symbol* c : ctors) {
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
        return out;
    }

    void warn_uninhabited(const std::string& sort) {
        if (!warned_.insert(sort).second) return;
        warnings_.push_back("sort " + sort +
                            " has no constructors; its argument positions are vacuously covered");
    }

    TermPtr fresh_var(const std::string& sort) {
        return Term::var("_w" + std::to_string(fresh_++), sort);
    }

    const Trs& R_;
    const Signature& sig_;
    std::set<std::string> warned_;
    std::vector<std::string> warnings_;
    int fresh_ = 0;
};

TermPtr renumber_witness_vars(const TermPtr& t, std::map<std::string, TermPtr>& taken, int& next) {
    if (t->is_var()) {
        auto it = taken.find(t->name());
        if (it != taken.end()) return it->second;
        TermPtr v = Term::var("x" + std::to_string(++next), t->sort());
        taken.emplace(t->name(), v);
        return v;
    }
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(renumber_witness_vars(a, taken, next));
    return Term::app_raw(t->name(), t->sort(), std::move(args));
}

}  // namespace

ExhaustivenessResult exhaustiveness(const Trs& R) {
    ExhaustivenessResult out;
    if (!is_constructor_system(R)) {
        out.status = TriBool::Unknown;
        out.reason = "coverage is only decided for constructor systems";
        return out;
    }
    CoverageChecker checker(R);
    TermPtr witness;
    for (const auto& sym : R.signature().symbols()) {
        if (sym.kind != SymbolKind::Defined) continue;
        std::vector<std::vector<TermPtr>> rows;
        for (const Rule* r : R.rules_of(sym.name)) rows.push_back(r->lhs->args());
        auto gap = checker.uncovered(sym.arg_sorts, rows);
        if (gap) {
            witness = Term::app_raw(sym.name, sym.result_sort, std::move(*gap));
            break;
        }
    }
    out.warnings = checker.warnings();
    if (witness) {
        std::map<std::string, TermPtr> taken;
        int next = 0;
        out.status = TriBool::No;
        out.witness = renumber_witness_vars(witness, taken, next);
        return out;
    }
    if (!is_left_linear(R)) {
        // Splitting reads repeated variables as wildcards, which can only
        // overstate coverage; a clean sweep is therefore not conclusive.
        out.status = TriBool::Unknown;
        out.reason = "coverage with repeated pattern variables is not decided";
        return out;
    }
    out.status = TriBool::Yes;
    return out;
}

// ==== shallowness and properness ====

ShallownessResult shallowness(const Trs& R) {
    ShallownessResult out;
    std::map<std::string, std::set<int>> sets;
    for (const auto& r : R.rules()) {
        auto I = flat_indices(R, r, out.reason);
        if (!I) return out;
        auto [it, inserted] = sets.emplace(r.lhs->name(), *I);
        if (!inserted && it->second != *I) {
            out.reason = "rules for " + r.lhs->name() + " disagree on constructor positions";
            return out;
        }
    }
    out.shallow = true;
    out.index_sets = std::move(sets);
    return out;
}

bool is_proper(const Trs& R) {
    std::string reason;
    return std::all_of(R.rules().begin(), R.rules().end(), [&](const Rule& r) {
        return flat_indices(R, r, reason).has_value();
    });
}

// ==== compatibility ====

CompatibilityClass compatibility_class(const Trs& R) {
    std::vector<TermPtr> lhss;
    for (const auto& r : R.rules()) lhss.push_back(r.lhs);
    if (compatibility(lhss, canonical_map(R)) == Compatibility::StronglyCompatible) {
        return CompatibilityClass::StronglyCompatible;
    }
    for (const auto& r : R.rules()) {
        const auto own = minimum_compatible_map(R.signature(), r.lhs);
        if (compatibility(r.lhs, own) != Compatibility::StronglyCompatible) {
            return CompatibilityClass::Neither;
        }
    }
    return CompatibilityClass::WeaklyCompatible;
}

// ==== inductive sequentiality ====

namespace {

class DtBuilder {
public:
    explicit DtBuilder(const Trs& R) : R_(R) {}

    bool admits_tree(const TermPtr& pattern, const std::vector<const Rule*>& rules) {
        if (rules.size() == 1 && variants(pattern, rules.front()->lhs)) return true;
        for (const Position& p : positions_var(pattern)) {
            bool all_ctor = !rules.empty();
            for (const Rule* r : rules) {
                const TermPtr sub = subterm_at(r->lhs, p);
                if (sub->is_var() || !R_.is_constructor(sub->name())) {
                    all_ctor = false;
                    break;
                }
            }
            if (!all_ctor) continue;
            return split_at(pattern, rules, p);  // smallest candidate position decides
        }
        return false;
    }

private:
    bool split_at(const TermPtr& pattern, const std::vector<const Rule*>& rules,
                  const Position& p) {
        std::vector<std::string> order;
        std::map<std::string, std::vector<const Rule*>> groups;
        for (const Rule* r : rules) {
            const std::string root = subterm_at(r->lhs, p)->name();
            if (!groups.count(root)) order.push_back(root);
            groups[root].push_back(r);
        }
        for (const auto& root : order) {
            const Symbol& c = R_.signature().symbol_or_throw(root);
            std::vector<TermPtr> args;
            for (const auto& as : c.arg_sorts) {
                args.push_back(Term::var("_d" + std::to_string(fresh_++), as));
            }
            const TermPtr refined =
                replace_at(pattern, p, Term::app_raw(c.name, c.result_sort, std::move(args)));
            if (!admits_tree(refined, groups[root])) return false;
        }
        return true;
    }

    const Trs& R_;
    int fresh_ = 0;
};

}  // namespace

bool is_inductively_sequential(const Trs& R) {
    if (!is_constructor_system(R)) return false;
    DtBuilder builder(R);
    for (const auto& sym : R.signature().symbols()) {
        if (sym.kind != SymbolKind::Defined) continue;
        std::vector<TermPtr> args;
        for (size_t i = 0; i < sym.arg_sorts.size(); ++i) {
            args.push_back(Term::var("_r" + std::to_string(i), sym.arg_sorts[i]));
        }
        const TermPtr pattern = Term::app_raw(sym.name, sym.result_sort, std::move(args));
        if (!builder.admits_tree(pattern, R.rules_of(sym.name))) return false;
    }
    return true;
}

AnalysisReport analyze(const Trs& R) {
    AnalysisReport out;
    out.sorted = R.signature().sorts_declared();
    out.left_linear = is_left_linear(R);
    out.constructor_system = is_constructor_system(R);
    out.collapsing_free = is_collapsing_free(R);
    out.orthogonal = out.left_linear && critical_pairs(R).empty();
    out.exhaustive = exhaustiveness(R);
    out.shallowness = shallowness(R);
    out.proper = is_proper(R);
    out.compat = compatibility_class(R);
    out.inductively_sequential = is_inductively_sequential(R);
    out.tree_specification = out.sorted && out.orthogonal &&
                             out.exhaustive.status == TriBool::Yes && out.constructor_system;
    return out;
}

}  // namespace csr
