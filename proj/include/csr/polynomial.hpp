#pragma once

#include <map>
#include <string>
#include <vector>

#include "csr/term.hpp"

namespace csr {

/// Exponent map, argument index (1-based) to power. Entries are positive.
using Monomial = std::map<int, int>;

/// Integer polynomial in variables x1, x2, ... with sparse representation.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(long long c);
    static Polynomial variable(int index);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    bool operator==(const Polynomial& o) const = default;

    /// Replaces variable i by args[i-1]. Every used index must be covered.
    [[nodiscard]] Polynomial substitute(const std::vector<Polynomial>& args) const;
    /// Value at the point assignment[i-1] for variable i.
    [[nodiscard]] long long eval(const std::vector<long long>& assignment) const;

    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    /// True if every coefficient is nonnegative, so the polynomial is
    /// pointwise nonnegative over natural arguments.
    [[nodiscard]] bool nonnegative() const;
    [[nodiscard]] long long coefficient(const Monomial& m) const;
    [[nodiscard]] int max_variable() const;
    [[nodiscard]] const std::map<Monomial, long long>& terms() const { return terms_; }
    /// Renders monomials by descending degree, e.g. "2*x1*x2 + x1 + 1".
    [[nodiscard]] std::string to_string() const;

private:
    void add(const Monomial& m, long long c);

    std::map<Monomial, long long> terms_;
};

/// Assignment of a polynomial over x1..xarity to each interpreted symbol.
struct Interpretation {
    std::map<std::string, Polynomial> polys;

    bool operator==(const Interpretation& o) const = default;
};

/// Name-ordered 1-based numbering of the variables of t.
[[nodiscard]] std::map<std::string, int> variable_indexing(const TermPtr& t);

/// Composes symbol polynomials over the term structure; term variables are
/// numbered by var_index. Throws Error on a symbol without a polynomial.
[[nodiscard]] Polynomial interpret(const TermPtr& t, const Interpretation& interp,
                                   const std::map<std::string, int>& var_index);

/**
 * Parses an interpretation file: one "f(x1,...,xk) = polynomial" line per
 * symbol (nullary symbols omit the parentheses), ';' starts a comment, and a
 * polynomial is a sum of products of nonnegative integers and formals.
 */
[[nodiscard]] Interpretation parse_certificate(const std::string& text, const Signature& sig);

/// Renders interpreted symbols in signature declaration order.
[[nodiscard]] std::string print_certificate(const Interpretation& interp, const Signature& sig);

}  // namespace csr
