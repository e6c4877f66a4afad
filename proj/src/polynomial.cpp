#include "csr/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace csr {

void Polynomial::add(const Monomial& m, long long c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else if ((it->second += c) == 0) {
        terms_.erase(it);
    }
}

Polynomial Polynomial::constant(long long c) {
    Polynomial p;
    p.add({}, c);
    return p;
}

Polynomial Polynomial::variable(int index) {
    Polynomial p;
    p.add({{index, 1}}, 1);
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add(m, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial out;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m = m1;
            for (const auto& [v, e] : m2) m[v] += e;
            out.add(m, c1 * c2);
        }
    }
    return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& args) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        Polynomial prod = Polynomial::constant(c);
        for (const auto& [v, e] : m) {
            if (v < 1 || static_cast<size_t>(v) > args.size()) {
                throw Error("polynomial uses variable x" + std::to_string(v) +
                            " beyond the argument count " + std::to_string(args.size()));
            }
            for (int k = 0; k < e; ++k) prod = prod * args[v - 1];
        }
        out = out + prod;
    }
    return out;
}

long long Polynomial::eval(const std::vector<long long>& assignment) const {
    std::vector<Polynomial> points;
    points.reserve(assignment.size());
    for (long long v : assignment) points.push_back(Polynomial::constant(v));
    return substitute(points).coefficient({});
}

bool Polynomial::nonnegative() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& e) { return e.second >= 0; });
}

long long Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

int Polynomial::max_variable() const {
    int out = 0;
    for (const auto& [m, c] : terms_) {
        if (!m.empty()) out = std::max(out, m.rbegin()->first);
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Monomial, long long>> sorted(terms_.begin(), terms_.end());
    auto degree = [](const Monomial& m) {
        int d = 0;
        for (const auto& [v, e] : m) d += e;
        return d;
    };
    std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        return degree(a.first) > degree(b.first);
    });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        const long long mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) out += "-";
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
        }
        std::vector<std::string> factors;
        if (mag != 1 || m.empty()) factors.push_back(std::to_string(mag));
        for (const auto& [v, e] : m) {
            for (int k = 0; k < e; ++k) factors.push_back("x" + std::to_string(v));
        }
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) out += "*";
            out += factors[i];
        }
    }
    return out;
}

std::map<std::string, int> variable_indexing(const TermPtr& t) {
    std::map<std::string, int> out;
    int next = 0;
    for (const auto& [name, sort] : variables_of(t)) out.emplace(name, ++next);
    return out;
}

Polynomial interpret(const TermPtr& t, const Interpretation& interp,
                     const std::map<std::string, int>& var_index) {
    if (t->is_var()) {
        auto it = var_index.find(t->name());
        if (it == var_index.end()) throw Error("variable " + t->name() + " has no index");
        return Polynomial::variable(it->second);
    }
    auto it = interp.polys.find(t->name());
    if (it == interp.polys.end()) throw Error("no polynomial for symbol " + t->name());
    std::vector<Polynomial> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(interpret(a, interp, var_index));
    return it->second.substitute(args);
}

// ==== certificate file syntax ====

namespace {

class CertParser {
public:
    CertParser(const std::string& text, const Signature& sig) : in_(text), sig_(sig) {}

    Interpretation run() {
        Interpretation out;
        std::string line;
        int lineno = 0;
        while (std::getline(in_, line)) {
            ++lineno;
            if (const auto sc = line.find(';'); sc != std::string::npos) line.erase(sc);
            pos_ = 0;
            line_ = line;
            lineno_ = lineno;
            skip_space();
            if (pos_ == line_.size()) continue;
            parse_entry(out);
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw Error("certificate line " + std::to_string(lineno_) + ": " + message);
    }

    void skip_space() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < line_.size() && line_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string next_atom() {
        skip_space();
        const size_t start = pos_;
        while (pos_ < line_.size()) {
            const char c = line_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
                c == ',' || c == '=' || c == '+' || c == '*') {
                break;
            }
            ++pos_;
        }
        return line_.substr(start, pos_ - start);
    }

    // Symbol names may contain '+' and '*', so they stop only at structure.
    std::string next_name() {
        skip_space();
        const size_t start = pos_;
        while (pos_ < line_.size()) {
            const char c = line_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
                c == ',' || c == '=') {
                break;
            }
            ++pos_;
        }
        return line_.substr(start, pos_ - start);
    }

    void parse_entry(Interpretation& out) {
        const std::string name = next_name();
        if (name.empty()) fail("expected a symbol name");
        if (!sig_.has_symbol(name)) fail("unknown symbol " + name);
        const Symbol& sym = sig_.symbol_or_throw(name);
        if (eat('(')) {
            for (int i = 1; i <= sym.arity(); ++i) {
                if (i > 1 && !eat(',')) fail("expected ',' in the formal list of " + name);
                const std::string formal = next_atom();
                const std::string want = "x" + std::to_string(i);
                if (formal != want) {
                    fail("formal " + std::to_string(i) + " of " + name + " must be " + want);
                }
            }
            if (!eat(')')) fail("expected ')' after the formals of " + name);
        } else if (sym.arity() != 0) {
            fail(name + " takes " + std::to_string(sym.arity()) + " formals");
        }
        if (!eat('=')) fail("expected '=' after " + name);
        const Polynomial p = parse_poly(sym);
        skip_space();
        if (pos_ != line_.size()) fail("trailing input after the polynomial for " + name);
        if (!out.polys.emplace(name, p).second) fail("duplicate entry for " + name);
    }

    Polynomial parse_poly(const Symbol& sym) {
        Polynomial sum = parse_product(sym);
        while (eat('+')) sum = sum + parse_product(sym);
        return sum;
    }

    Polynomial parse_product(const Symbol& sym) {
        Polynomial prod = parse_factor(sym);
        while (eat('*')) prod = prod * parse_factor(sym);
        return prod;
    }

    Polynomial parse_factor(const Symbol& sym) {
        skip_space();
        const std::string atom = next_atom();
        if (atom.empty()) fail("expected a factor");
        if (std::isdigit(static_cast<unsigned char>(atom[0]))) {
            try {
                size_t used = 0;
                const long long v = std::stoll(atom, &used);
                if (used != atom.size()) fail("malformed number " + atom);
                return Polynomial::constant(v);
            } catch (const std::out_of_range&) {
                fail("number out of range: " + atom);
            }
        }
        if (atom.size() >= 2 && atom[0] == 'x') {
            const std::string digits = atom.substr(1);
            if (std::all_of(digits.begin(), digits.end(),
                            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
                const int idx = std::stoi(digits);
                if (idx < 1 || idx > sym.arity()) {
                    fail("formal " + atom + " is out of range for " + sym.name);
                }
                return Polynomial::variable(idx);
            }
        }
        fail("unexpected factor " + atom);
    }

    std::istringstream in_;
    const Signature& sig_;
    std::string line_;
    size_t pos_ = 0;
    int lineno_ = 0;
};

}  // namespace

Interpretation parse_certificate(const std::string& text, const Signature& sig) {
    return CertParser(text, sig).run();
}

std::string print_certificate(const Interpretation& interp, const Signature& sig) {
    std::string out;
    for (const auto& sym : sig.symbols()) {
        auto it = interp.polys.find(sym.name);
        if (it == interp.polys.end()) continue;
        out += sym.name;
        if (sym.arity() > 0) {
            out += "(";
            for (int i = 1; i <= sym.arity(); ++i) {
                if (i > 1) out += ",";
                out += "x" + std::to_string(i);
            }
            out += ")";
        }
        out += " = " + it->second.to_string() + "\n";
    }
    return out;
}

}  // namespace csr
