#include "csr/term.hpp"

#include <algorithm>
#include <sstream>

namespace csr {

// ==== Signature ====

Signature Signature::unsorted() {
    Signature sig;
    sig.add_sort(Sort{kUnsortedSort, SortKind::Data});
    sig.sorts_declared_ = false;
    return sig;
}

void Signature::add_sort(Sort s) {
    if (sort_index_.count(s.name)) {
        throw TermError("duplicate sort: " + s.name);
    }
    sort_index_[s.name] = static_cast<int>(sorts_.size());
    sorts_.push_back(std::move(s));
}

void Signature::add_symbol(Symbol s) {
    if (symbol_index_.count(s.name)) {
        throw TermError("duplicate symbol: " + s.name);
    }
    if (!sort_index_.count(s.result_sort)) {
        throw TermError("symbol " + s.name + " has unknown result sort " + s.result_sort);
    }
    for (const auto& as : s.arg_sorts) {
        if (!sort_index_.count(as)) {
            throw TermError("symbol " + s.name + " has unknown argument sort " + as);
        }
    }
    symbol_index_[s.name] = static_cast<int>(symbols_.size());
    symbols_.push_back(std::move(s));
}

const Sort* Signature::find_sort(const std::string& name) const {
    auto it = sort_index_.find(name);
    return it == sort_index_.end() ? nullptr : &sorts_[it->second];
}

const Symbol* Signature::find_symbol(const std::string& name) const {
    auto it = symbol_index_.find(name);
    return it == symbol_index_.end() ? nullptr : &symbols_[it->second];
}

const Symbol& Signature::symbol_or_throw(const std::string& name) const {
    const Symbol* s = find_symbol(name);
    if (!s) throw TermError("unknown symbol: " + name);
    return *s;
}

std::vector<const Symbol*> Signature::constructors_of(const std::string& sort) const {
    std::vector<const Symbol*> out;
    for (const auto& s : symbols_) {
        if (s.kind == SymbolKind::Constructor && s.result_sort == sort) out.push_back(&s);
    }
    return out;
}

void Signature::classify(const std::set<std::string>& defined) {
    for (auto& s : symbols_) {
        s.kind = defined.count(s.name) ? SymbolKind::Defined : SymbolKind::Constructor;
    }
}

bool Signature::operator==(const Signature& other) const {
    if (sorts_declared_ != other.sorts_declared_) return false;
    if (sorts_.size() != other.sorts_.size() || symbols_.size() != other.symbols_.size()) return false;
    for (size_t i = 0; i < sorts_.size(); ++i) {
        if (sorts_[i].name != other.sorts_[i].name || sorts_[i].kind != other.sorts_[i].kind) return false;
    }
    for (size_t i = 0; i < symbols_.size(); ++i) {
        const auto& a = symbols_[i];
        const auto& b = other.symbols_[i];
        if (a.name != b.name || a.arg_sorts != b.arg_sorts || a.result_sort != b.result_sort ||
            a.kind != b.kind) {
            return false;
        }
    }
    return true;
}

// ==== Term ====

TermPtr Term::var(std::string name, std::string sort) {
    auto t = std::shared_ptr<Term>(new Term());
    t->is_var_ = true;
    t->name_ = std::move(name);
    t->sort_ = std::move(sort);
    return t;
}

TermPtr Term::app(const Signature& sig, const std::string& symbol, std::vector<TermPtr> args) {
    const Symbol& sym = sig.symbol_or_throw(symbol);
    if (static_cast<int>(args.size()) != sym.arity()) {
        throw TermError("symbol " + symbol + " expects " + std::to_string(sym.arity()) +
                        " arguments, got " + std::to_string(args.size()));
    }
    for (size_t i = 0; i < args.size(); ++i) {
        if (!args[i]) throw TermError("null argument for " + symbol);
        if (args[i]->sort() != sym.arg_sorts[i]) {
            throw TermError("argument " + std::to_string(i + 1) + " of " + symbol + " has sort " +
                            args[i]->sort() + ", expected " + sym.arg_sorts[i]);
        }
    }
    return app_raw(symbol, sym.result_sort, std::move(args));
}

TermPtr Term::app_raw(std::string symbol, std::string sort, std::vector<TermPtr> args) {
    auto t = std::shared_ptr<Term>(new Term());
    t->is_var_ = false;
    t->name_ = std::move(symbol);
    t->sort_ = std::move(sort);
    t->args_ = std::move(args);
    int size = 1;
    int depth = 0;
    for (const auto& a : t->args_) {
        size += a->size();
        depth = std::max(depth, a->depth());
    }
    t->size_ = size;
    t->depth_ = depth + 1;
    return t;
}

std::string Term::to_string() const {
    if (is_var_ || args_.empty()) return name_;
    std::string out = name_;
    out += '(';
    for (size_t i = 0; i < args_.size(); ++i) {
        if (i) out += ',';
        out += args_[i]->to_string();
    }
    out += ')';
    return out;
}

bool equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->is_var() != b->is_var() || a->name() != b->name() || a->sort() != b->sort()) return false;
    if (a->args().size() != b->args().size()) return false;
    for (size_t i = 0; i < a->args().size(); ++i) {
        if (!equal(a->args()[i], b->args()[i])) return false;
    }
    return true;
}

namespace {

void collect_vars(const TermPtr& t, std::map<std::string, std::string>& out) {
    if (t->is_var()) {
        out.emplace(t->name(), t->sort());
        return;
    }
    for (const auto& a : t->args()) collect_vars(a, out);
}

bool linear_walk(const TermPtr& t, std::set<std::string>& seen) {
    if (t->is_var()) return seen.insert(t->name()).second;
    for (const auto& a : t->args()) {
        if (!linear_walk(a, seen)) return false;
    }
    return true;
}

}  // namespace

std::map<std::string, std::string> variables_of(const TermPtr& t) {
    std::map<std::string, std::string> out;
    collect_vars(t, out);
    return out;
}

bool is_linear(const TermPtr& t) {
    std::set<std::string> seen;
    return linear_walk(t, seen);
}

bool is_ground(const TermPtr& t) {
    if (t->is_var()) return false;
    for (const auto& a : t->args()) {
        if (!is_ground(a)) return false;
    }
    return true;
}

TermPtr rename_vars(const TermPtr& t, const std::string& suffix) {
    if (t->is_var()) return Term::var(t->name() + suffix, t->sort());
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(rename_vars(a, suffix));
    return Term::app_raw(t->name(), t->sort(), std::move(args));
}

// ==== Position ====

Position Position::child(int i) const {
    std::vector<int> p = path_;
    p.push_back(i);
    return Position{std::move(p)};
}

Position Position::concat(const Position& q) const {
    std::vector<int> p = path_;
    p.insert(p.end(), q.path_.begin(), q.path_.end());
    return Position{std::move(p)};
}

bool Position::is_prefix_of(const Position& q) const {
    if (path_.size() > q.path_.size()) return false;
    return std::equal(path_.begin(), path_.end(), q.path_.begin());
}

std::string Position::to_string() const {
    if (path_.empty()) return "e";
    std::string out;
    for (size_t i = 0; i < path_.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(path_[i]);
    }
    return out;
}

std::optional<Position> Position::parse(const std::string& text) {
    if (text == "e") return Position::root();
    std::vector<int> path;
    size_t i = 0;
    while (i < text.size()) {
        size_t j = i;
        while (j < text.size() && text[j] != '.') ++j;
        const std::string piece = text.substr(i, j - i);
        if (piece.empty()) return std::nullopt;
        int v = 0;
        for (char c : piece) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + (c - '0');
        }
        if (v < 1) return std::nullopt;
        path.push_back(v);
        i = j + 1;
        if (j == text.size()) break;
        if (j + 1 == text.size()) return std::nullopt;  // trailing dot
    }
    if (path.empty()) return std::nullopt;
    return Position{std::move(path)};
}

bool preorder_less(const Position& a, const Position& b) { return a.path() < b.path(); }

bool postorder_less(const Position& a, const Position& b) {
    // Extensions of a position come before it; siblings stay left-to-right.
    if (a == b) return false;
    if (a.is_prefix_of(b)) return false;
    if (b.is_prefix_of(a)) return true;
    return a.path() < b.path();
}

namespace {

void walk_positions(const TermPtr& t, Position here, std::vector<Position>& out) {
    out.push_back(here);
    for (size_t i = 0; i < t->args().size(); ++i) {
        walk_positions(t->args()[i], here.child(static_cast<int>(i) + 1), out);
    }
}

template <typename Pred>
void walk_filtered(const TermPtr& t, Position here, std::vector<Position>& out, Pred pred) {
    if (pred(t)) out.push_back(here);
    for (size_t i = 0; i < t->args().size(); ++i) {
        walk_filtered(t->args()[i], here.child(static_cast<int>(i) + 1), out, pred);
    }
}

}  // namespace

std::vector<Position> positions(const TermPtr& t) {
    std::vector<Position> out;
    walk_positions(t, Position::root(), out);
    return out;
}

std::vector<Position> positions_nonvar(const TermPtr& t) {
    std::vector<Position> out;
    walk_filtered(t, Position::root(), out, [](const TermPtr& s) { return !s->is_var(); });
    return out;
}

std::vector<Position> positions_var(const TermPtr& t) {
    std::vector<Position> out;
    walk_filtered(t, Position::root(), out, [](const TermPtr& s) { return s->is_var(); });
    return out;
}

bool valid_position(const TermPtr& t, const Position& p) {
    TermPtr cur = t;
    for (int i : p.path()) {
        if (i < 1 || i > static_cast<int>(cur->args().size())) return false;
        cur = cur->args()[i - 1];
    }
    return true;
}

TermPtr subterm_at(const TermPtr& t, const Position& p) {
    TermPtr cur = t;
    for (int i : p.path()) {
        if (i < 1 || i > static_cast<int>(cur->args().size())) {
            throw TermError("invalid position " + p.to_string() + " in " + t->to_string());
        }
        cur = cur->args()[i - 1];
    }
    return cur;
}

namespace {

TermPtr replace_walk(const TermPtr& t, const std::vector<int>& path, size_t at, const TermPtr& s) {
    if (at == path.size()) {
        if (t->sort() != s->sort()) {
            throw TermError("replacement changes sort " + t->sort() + " to " + s->sort());
        }
        return s;
    }
    const int i = path[at];
    if (i < 1 || i > static_cast<int>(t->args().size())) {
        throw TermError("invalid position in replace_at");
    }
    std::vector<TermPtr> args = t->args();
    args[i - 1] = replace_walk(args[i - 1], path, at + 1, s);
    return Term::app_raw(t->name(), t->sort(), std::move(args));
}

}  // namespace

TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& s) {
    return replace_walk(t, p.path(), 0, s);
}

// ==== Substitution ====

bool Substitution::bind(const std::string& var, const std::string& var_sort, const TermPtr& value) {
    if (value->sort() != var_sort) {
        throw TermError("binding for " + var + " has sort " + value->sort() + ", expected " + var_sort);
    }
    auto it = map_.find(var);
    if (it != map_.end()) return equal(it->second, value);
    map_.emplace(var, value);
    return true;
}

const TermPtr* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

TermPtr Substitution::apply(const TermPtr& t) const {
    if (t->is_var()) {
        if (const TermPtr* v = lookup(t->name())) return *v;
        return t;
    }
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(apply(a));
    return Term::app_raw(t->name(), t->sort(), std::move(args));
}

namespace {

bool match_walk(const TermPtr& pattern, const TermPtr& subject, Substitution& sub) {
    if (pattern->is_var()) {
        if (pattern->sort() != subject->sort()) return false;
        return sub.bind(pattern->name(), pattern->sort(), subject);
    }
    if (subject->is_var()) return false;
    if (pattern->name() != subject->name()) return false;
    if (pattern->args().size() != subject->args().size()) return false;
    for (size_t i = 0; i < pattern->args().size(); ++i) {
        if (!match_walk(pattern->args()[i], subject->args()[i], sub)) return false;
    }
    return true;
}

bool occurs(const std::string& var, const TermPtr& t) {
    if (t->is_var()) return t->name() == var;
    for (const auto& a : t->args()) {
        if (occurs(var, a)) return true;
    }
    return false;
}

// Robinson unification on an explicit equation stack, building an idempotent result.
bool unify_walk(std::vector<std::pair<TermPtr, TermPtr>>& eqs, std::map<std::string, TermPtr>& out) {
    auto subst_one = [](const TermPtr& t, const std::string& var, const TermPtr& val) {
        Substitution s;
        s.bind(var, val->sort(), val);
        return s.apply(t);
    };
    while (!eqs.empty()) {
        auto [a, b] = eqs.back();
        eqs.pop_back();
        if (equal(a, b)) continue;
        if (a->is_var()) {
            if (a->sort() != b->sort()) return false;
            if (occurs(a->name(), b)) return false;
            for (auto& [l, r] : eqs) {
                l = subst_one(l, a->name(), b);
                r = subst_one(r, a->name(), b);
            }
            for (auto& [v, t] : out) t = subst_one(t, a->name(), b);
            out[a->name()] = b;
            continue;
        }
        if (b->is_var()) {
            eqs.emplace_back(b, a);
            continue;
        }
        if (a->name() != b->name() || a->args().size() != b->args().size()) return false;
        for (size_t i = 0; i < a->args().size(); ++i) {
            eqs.emplace_back(a->args()[i], b->args()[i]);
        }
    }
    return true;
}

}  // namespace

std::optional<Substitution> match(const TermPtr& pattern, const TermPtr& subject) {
    Substitution sub;
    if (!match_walk(pattern, subject, sub)) return std::nullopt;
    return sub;
}

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b) {
    std::vector<std::pair<TermPtr, TermPtr>> eqs{{a, b}};
    std::map<std::string, TermPtr> raw;
    if (!unify_walk(eqs, raw)) return std::nullopt;
    Substitution sub;
    // Sorts were checked during solving; variable sorts come from the originals.
    std::map<std::string, std::string> sorts = variables_of(a);
    sorts.merge(variables_of(b));
    for (const auto& [v, t] : raw) {
        auto it = sorts.find(v);
        const std::string sort = it != sorts.end() ? it->second : t->sort();
        sub.bind(v, sort, t);
    }
    return sub;
}

// ==== Trs ====

Trs Trs::make(Signature sig, std::vector<Rule> rules) {
    std::set<std::string> defined;
    int n = 0;
    for (auto& r : rules) {
        ++n;
        if (r.label.empty()) r.label = "r" + std::to_string(n);
        if (!r.lhs || !r.rhs) throw TermError("rule " + r.label + " has a null side");
        if (r.lhs->is_var()) {
            throw TermError("rule " + r.label + " has a variable left-hand side");
        }
        if (r.lhs->sort() != r.rhs->sort()) {
            throw TermError("rule " + r.label + " relates sorts " + r.lhs->sort() + " and " +
                            r.rhs->sort());
        }
        const auto lv = variables_of(r.lhs);
        for (const auto& [v, s] : variables_of(r.rhs)) {
            auto it = lv.find(v);
            if (it == lv.end()) {
                throw TermError("rule " + r.label + " introduces variable " + v +
                                " on the right-hand side");
            }
            if (it->second != s) {
                throw TermError("rule " + r.label + " uses variable " + v + " at two sorts");
            }
        }
        defined.insert(r.lhs->name());
    }
    std::set<std::string> labels;
    for (const auto& r : rules) {
        if (!labels.insert(r.label).second) throw TermError("duplicate rule label " + r.label);
    }
    sig.classify(defined);
    Trs R;
    R.sig_ = std::move(sig);
    R.rules_ = std::move(rules);
    return R;
}

bool Trs::is_defined(const std::string& symbol) const {
    const Symbol* s = sig_.find_symbol(symbol);
    return s && s->kind == SymbolKind::Defined;
}

bool Trs::is_constructor(const std::string& symbol) const {
    const Symbol* s = sig_.find_symbol(symbol);
    return s && s->kind == SymbolKind::Constructor;
}

const Rule* Trs::rule_by_label(const std::string& label) const {
    for (const auto& r : rules_) {
        if (r.label == label) return &r;
    }
    return nullptr;
}

std::vector<const Rule*> Trs::rules_of(const std::string& symbol) const {
    std::vector<const Rule*> out;
    for (const auto& r : rules_) {
        if (r.lhs->name() == symbol) out.push_back(&r);
    }
    return out;
}

bool trs_equal(const Trs& a, const Trs& b) {
    if (!(a.signature() == b.signature())) return false;
    if (a.rules().size() != b.rules().size()) return false;
    for (size_t i = 0; i < a.rules().size(); ++i) {
        if (a.rules()[i].label != b.rules()[i].label) return false;
        if (!equal(a.rules()[i].lhs, b.rules()[i].lhs)) return false;
        if (!equal(a.rules()[i].rhs, b.rules()[i].rhs)) return false;
    }
    return true;
}

namespace {

bool alpha_walk(const TermPtr& a, const TermPtr& b, std::map<std::string, std::string>& fwd,
                std::map<std::string, std::string>& bwd) {
    if (a->is_var() != b->is_var()) return false;
    if (a->sort() != b->sort()) return false;
    if (a->is_var()) {
        auto f = fwd.find(a->name());
        auto g = bwd.find(b->name());
        if (f == fwd.end() && g == bwd.end()) {
            fwd[a->name()] = b->name();
            bwd[b->name()] = a->name();
            return true;
        }
        return f != fwd.end() && g != bwd.end() && f->second == b->name() && g->second == a->name();
    }
    if (a->name() != b->name() || a->args().size() != b->args().size()) return false;
    for (size_t i = 0; i < a->args().size(); ++i) {
        if (!alpha_walk(a->args()[i], b->args()[i], fwd, bwd)) return false;
    }
    return true;
}

}  // namespace

bool alpha_equal_rule(const Rule& a, const Rule& b) {
    std::map<std::string, std::string> fwd, bwd;
    return alpha_walk(a.lhs, b.lhs, fwd, bwd) && alpha_walk(a.rhs, b.rhs, fwd, bwd);
}

std::vector<CriticalPair> critical_pairs(const Trs& R) {
    std::vector<CriticalPair> out;
    const auto& rules = R.rules();
    for (size_t i = 0; i < rules.size(); ++i) {
        // Outer rule keeps its variables; the inner rule is renamed apart.
        const Rule& outer = rules[i];
        for (size_t j = 0; j < rules.size(); ++j) {
            const Rule inner{rules[j].label, rename_vars(rules[j].lhs, "$1"),
                             rename_vars(rules[j].rhs, "$1")};
            for (const Position& p : positions_nonvar(outer.lhs)) {
                if (i == j && p.is_root()) continue;  // a rule trivially overlaps itself at the root
                const TermPtr sub = subterm_at(outer.lhs, p);
                auto mgu = unify(sub, inner.lhs);
                if (!mgu) continue;
                const TermPtr peak = mgu->apply(outer.lhs);
                const TermPtr left = replace_at(peak, p, mgu->apply(inner.rhs));
                const TermPtr right = mgu->apply(outer.rhs);
                out.push_back(CriticalPair{left, right, outer.label, inner.label, p});
            }
        }
    }
    return out;
}

}  // namespace csr
