#pragma once

#include <set>
#include <string>

#include "csr/term.hpp"

namespace csr {

class RepMapError : public Error {
public:
    explicit RepMapError(const std::string& what) : Error(what) {}
};

/**
 * @brief Replacement map: assigns each symbol the argument positions open to
 * rewriting. Total over one signature's symbols; entries are subsets of
 * {1..arity}. Maps over the same signature form a lattice under pointwise
 * inclusion with bottom (all empty) and top (all full).
 */
class ReplacementMap {
public:
    ReplacementMap() = default;

    static ReplacementMap bottom(const Signature& sig);
    static ReplacementMap top(const Signature& sig);

    /// Entry for `symbol`; throws RepMapError if the symbol is not covered.
    [[nodiscard]] const std::set<int>& at(const std::string& symbol) const;

    /// Overwrites one entry, validating the symbol and index range against `sig`.
    void set(const Signature& sig, const std::string& symbol, std::set<int> positions);

    /// Pointwise union with `other` in place; domains must agree.
    void merge(const ReplacementMap& other);

    [[nodiscard]] const std::map<std::string, std::set<int>>& entries() const { return map_; }
    [[nodiscard]] bool same_domain(const ReplacementMap& other) const;

    [[nodiscard]] bool operator==(const ReplacementMap& other) const { return map_ == other.map_; }

private:
    std::map<std::string, std::set<int>> map_;
};

/// Pointwise union; domains must agree.
[[nodiscard]] ReplacementMap join(const ReplacementMap& a, const ReplacementMap& b);

/// Pointwise inclusion; domains must agree.
[[nodiscard]] bool leq(const ReplacementMap& a, const ReplacementMap& b);

/// True when p is reachable from the root through open argument positions.
[[nodiscard]] bool is_replacing(const TermPtr& t, const ReplacementMap& mu, const Position& p);

/// All open positions of t, in preorder. The root is always open.
[[nodiscard]] std::vector<Position> replacing_positions(const TermPtr& t, const ReplacementMap& mu);

/**
 * @brief Least map under which every symbol occurrence in t sits at an open
 * position. Bottom for variables; otherwise each symbol occurrence contributes
 * its non-variable argument slots.
 */
[[nodiscard]] ReplacementMap minimum_compatible_map(const Signature& sig, const TermPtr& t);

/// Join of the minimum compatible maps of all left-hand sides.
[[nodiscard]] ReplacementMap canonical_map(const Trs& R);

/**
 * @brief Same map computed without forming each per-term minimum: position i of
 * f is open iff some left-hand side has an occurrence of f whose i-th argument
 * is not a variable.
 */
[[nodiscard]] ReplacementMap canonical_map_direct(const Trs& R);

/// True when mu lies above the canonical map of R.
[[nodiscard]] bool is_canonical_for(const ReplacementMap& mu, const Trs& R);

/**
 * @brief Map opening, for each constructor of a data sort, exactly its
 * data-sorted argument positions; every other symbol gets the empty set.
 * Requires a signature with declared sorts.
 */
[[nodiscard]] ReplacementMap mu_delta(const Signature& sig);

enum class Compatibility { Incompatible, Compatible, StronglyCompatible };

/**
 * @brief How mu relates to the symbol occurrences of t: Compatible when every
 * non-variable position is open, StronglyCompatible when additionally no
 * variable sits at an open non-root position. A variable is compatible but
 * never strongly so.
 */
[[nodiscard]] Compatibility compatibility(const TermPtr& t, const ReplacementMap& mu);

/// Weakest compatibility over the set (Incompatible if any member is).
[[nodiscard]] Compatibility compatibility(const std::vector<TermPtr>& ts, const ReplacementMap& mu);

/// Textual form "(f 1 2) (g 1)"; symbols with empty entries are omitted.
[[nodiscard]] std::string map_to_text(const ReplacementMap& mu, const Signature& sig);

/**
 * @brief Parses the textual form over sig. Entries not mentioned default to
 * empty; "(f)" is an accepted explicit empty entry. Throws RepMapError on
 * unknown symbols, out-of-range indices, duplicate entries, or syntax errors.
 */
[[nodiscard]] ReplacementMap parse_replacement_map(const std::string& text, const Signature& sig);

}  // namespace csr
