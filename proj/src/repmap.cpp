#include "csr/repmap.hpp"

#include <algorithm>
#include <cctype>

namespace csr {

ReplacementMap ReplacementMap::bottom(const Signature& sig) {
    ReplacementMap mu;
    for (const auto& s : sig.symbols()) mu.map_[s.name] = {};
    return mu;
}

ReplacementMap ReplacementMap::top(const Signature& sig) {
    ReplacementMap mu;
    for (const auto& s : sig.symbols()) {
        std::set<int>& e = mu.map_[s.name];
        for (int i = 1; i <= s.arity(); ++i) e.insert(i);
    }
    return mu;
}

const std::set<int>& ReplacementMap::at(const std::string& symbol) const {
    auto it = map_.find(symbol);
    if (it == map_.end()) throw RepMapError("replacement map has no entry for " + symbol);
    return it->second;
}

void ReplacementMap::set(const Signature& sig, const std::string& symbol, std::set<int> positions) {
    const Symbol& sym = sig.symbol_or_throw(symbol);
    for (int i : positions) {
        if (i < 1 || i > sym.arity()) {
            throw RepMapError("index " + std::to_string(i) + " out of range for " + symbol + "/" +
                              std::to_string(sym.arity()));
        }
    }
    map_[symbol] = std::move(positions);
}

bool ReplacementMap::same_domain(const ReplacementMap& other) const {
    if (map_.size() != other.map_.size()) return false;
    for (const auto& [k, v] : map_) {
        if (!other.map_.count(k)) return false;
    }
    return true;
}

void ReplacementMap::merge(const ReplacementMap& other) {
    if (!same_domain(other)) throw RepMapError("join of maps over different signatures");
    for (const auto& [f, ps] : other.map_) {
        map_[f].insert(ps.begin(), ps.end());
    }
}

ReplacementMap join(const ReplacementMap& a, const ReplacementMap& b) {
    ReplacementMap out = a;
    out.merge(b);
    return out;
}

bool leq(const ReplacementMap& a, const ReplacementMap& b) {
    if (!a.same_domain(b)) throw RepMapError("comparison of maps over different signatures");
    for (const auto& [f, ps] : a.entries()) {
        const std::set<int>& bs = b.at(f);
        for (int i : ps) {
            if (!bs.count(i)) return false;
        }
    }
    return true;
}

bool is_replacing(const TermPtr& t, const ReplacementMap& mu, const Position& p) {
    TermPtr cur = t;
    for (int i : p.path()) {
        if (cur->is_var()) return false;
        if (i < 1 || i > static_cast<int>(cur->args().size())) return false;
        if (!mu.at(cur->name()).count(i)) return false;
        cur = cur->args()[i - 1];
    }
    return true;
}

namespace {

void replacing_walk(const TermPtr& t, const ReplacementMap& mu, Position here,
                    std::vector<Position>& out) {
    out.push_back(here);
    if (t->is_var()) return;
    for (int i : mu.at(t->name())) {
        replacing_walk(t->args()[static_cast<size_t>(i) - 1], mu, here.child(i), out);
    }
}

void min_map_walk(const TermPtr& t, const Signature& sig, ReplacementMap& mu) {
    if (t->is_var()) return;
    std::set<int> open = mu.at(t->name());
    for (size_t i = 0; i < t->args().size(); ++i) {
        if (!t->args()[i]->is_var()) open.insert(static_cast<int>(i) + 1);
        min_map_walk(t->args()[i], sig, mu);
    }
    mu.set(sig, t->name(), std::move(open));
}

}  // namespace

std::vector<Position> replacing_positions(const TermPtr& t, const ReplacementMap& mu) {
    std::vector<Position> out;
    replacing_walk(t, mu, Position::root(), out);
    std::sort(out.begin(), out.end(), preorder_less);
    return out;
}

ReplacementMap minimum_compatible_map(const Signature& sig, const TermPtr& t) {
    ReplacementMap mu = ReplacementMap::bottom(sig);
    min_map_walk(t, sig, mu);
    return mu;
}

ReplacementMap canonical_map(const Trs& R) {
    ReplacementMap mu = ReplacementMap::bottom(R.signature());
    for (const auto& r : R.rules()) {
        mu = join(mu, minimum_compatible_map(R.signature(), r.lhs));
    }
    return mu;
}

ReplacementMap canonical_map_direct(const Trs& R) {
    ReplacementMap mu = ReplacementMap::bottom(R.signature());
    for (const auto& r : R.rules()) {
        for (const Position& p : positions_nonvar(r.lhs)) {
            const TermPtr sub = subterm_at(r.lhs, p);
            std::set<int> open = mu.at(sub->name());
            for (size_t i = 0; i < sub->args().size(); ++i) {
                if (!sub->args()[i]->is_var()) open.insert(static_cast<int>(i) + 1);
            }
            mu.set(R.signature(), sub->name(), std::move(open));
        }
    }
    return mu;
}

bool is_canonical_for(const ReplacementMap& mu, const Trs& R) {
    return leq(canonical_map(R), mu);
}

ReplacementMap mu_delta(const Signature& sig) {
    if (!sig.sorts_declared()) {
        throw RepMapError("sort-driven map requires declared sorts");
    }
    ReplacementMap mu = ReplacementMap::bottom(sig);
    for (const auto& sym : sig.symbols()) {
        if (sym.kind != SymbolKind::Constructor) continue;
        const Sort* rs = sig.find_sort(sym.result_sort);
        if (!rs || rs->kind != SortKind::Data) continue;
        std::set<int> open;
        for (int i = 0; i < sym.arity(); ++i) {
            const Sort* as = sig.find_sort(sym.arg_sorts[static_cast<size_t>(i)]);
            if (as && as->kind == SortKind::Data) open.insert(i + 1);
        }
        mu.set(sig, sym.name, std::move(open));
    }
    return mu;
}

Compatibility compatibility(const TermPtr& t, const ReplacementMap& mu) {
    std::set<std::vector<int>> open;
    for (const auto& p : replacing_positions(t, mu)) open.insert(p.path());
    std::set<std::vector<int>> nonvar;
    for (const auto& p : positions_nonvar(t)) nonvar.insert(p.path());
    for (const auto& p : nonvar) {
        if (!open.count(p)) return Compatibility::Incompatible;
    }
    return open == nonvar ? Compatibility::StronglyCompatible : Compatibility::Compatible;
}

Compatibility compatibility(const std::vector<TermPtr>& ts, const ReplacementMap& mu) {
    Compatibility worst = Compatibility::StronglyCompatible;
    for (const auto& t : ts) {
        const Compatibility c = compatibility(t, mu);
        if (c == Compatibility::Incompatible) return c;
        if (c == Compatibility::Compatible) worst = c;
    }
    return worst;
}

std::string map_to_text(const ReplacementMap& mu, const Signature& sig) {
    std::string out;
    for (const auto& sym : sig.symbols()) {
        const std::set<int>& ps = mu.at(sym.name);
        if (ps.empty()) continue;
        if (!out.empty()) out += ' ';
        out += '(';
        out += sym.name;
        for (int i : ps) {
            out += ' ';
            out += std::to_string(i);
        }
        out += ')';
    }
    return out;
}

ReplacementMap parse_replacement_map(const std::string& text, const Signature& sig) {
    ReplacementMap mu = ReplacementMap::bottom(sig);
    std::set<std::string> seen;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != '(') throw RepMapError("expected '(' in replacement map text");
        ++i;
        skip_ws();
        size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
               text[j] != ')' && text[j] != '(') {
            ++j;
        }
        const std::string name = text.substr(i, j - i);
        if (name.empty()) throw RepMapError("missing symbol name in replacement map entry");
        if (!seen.insert(name).second) {
            throw RepMapError("duplicate replacement map entry for " + name);
        }
        i = j;
        std::set<int> ps;
        for (;;) {
            skip_ws();
            if (i >= text.size()) throw RepMapError("unterminated replacement map entry");
            if (text[i] == ')') {
                ++i;
                break;
            }
            size_t k = i;
            while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
            if (k == i) throw RepMapError("expected argument index in entry for " + name);
            ps.insert(std::stoi(text.substr(i, k - i)));
            i = k;
        }
        mu.set(sig, name, std::move(ps));
        skip_ws();
    }
    return mu;
}

}  // namespace csr
