#pragma once

#include "csr/repmap.hpp"
#include "csr/term.hpp"

namespace csr {

enum class TriBool { Yes, No, Unknown };

struct ExhaustivenessResult {
    TriBool status = TriBool::Unknown;
    /// For No: an uncovered argument tuple f(d1,...,dk) of constructor
    /// prefixes; any constructor instantiation of it is irreducible at the root.
    TermPtr witness;
    /// For Unknown: why the check does not apply.
    std::string reason;
    std::vector<std::string> warnings;
};

struct ShallownessResult {
    bool shallow = false;
    /// Per defined symbol: the argument positions carrying flat constructor
    /// patterns, consistent across its rules. Populated only when shallow.
    std::map<std::string, std::set<int>> index_sets;
    std::string reason;
};

enum class CompatibilityClass { StronglyCompatible, WeaklyCompatible, Neither };

struct AnalysisReport {
    bool sorted = false;
    bool left_linear = false;
    bool constructor_system = false;
    bool collapsing_free = false;
    bool orthogonal = false;
    ExhaustivenessResult exhaustive;
    ShallownessResult shallowness;
    bool proper = false;
    CompatibilityClass compat = CompatibilityClass::Neither;
    bool inductively_sequential = false;
    bool tree_specification = false;
};

/// No left-hand side repeats a variable.
[[nodiscard]] bool is_left_linear(const Trs& R);

/// Every proper subterm of every left-hand side is a constructor term.
[[nodiscard]] bool is_constructor_system(const Trs& R);

/// No right-hand side is a bare variable.
[[nodiscard]] bool is_collapsing_free(const Trs& R);

/// Left-linear with no critical pairs.
[[nodiscard]] bool is_orthogonal(const Trs& R);

/**
 * @brief Decides whether every defined symbol's rules cover all constructor
 * argument tuples, by recursive constructor splitting of the pattern matrix.
 * Splitting inspects only finite prefixes, so coverage extends to infinite
 * constructor terms. Sorts without constructors are uninhabited: their columns
 * are vacuously covered and a warning is attached. Requires a constructor
 * system (Unknown otherwise).
 */
[[nodiscard]] ExhaustivenessResult exhaustiveness(const Trs& R);

/**
 * @brief A system is shallow when each defined symbol f has a single index set
 * I_f with every rule carrying flat constructor patterns (constructor root,
 * variable arguments) exactly at I_f and variables elsewhere.
 */
[[nodiscard]] ShallownessResult shallowness(const Trs& R);

/// Per-rule flatness alone: each lhs argument is a variable or a flat
/// constructor pattern, with no cross-rule consistency required.
[[nodiscard]] bool is_proper(const Trs& R);

/**
 * @brief StronglyCompatible when the canonical map is strongly compatible with
 * every left-hand side; WeaklyCompatible when each left-hand side is strongly
 * compatible with its own minimum map; Neither otherwise.
 */
[[nodiscard]] CompatibilityClass compatibility_class(const Trs& R);

/**
 * @brief True when every defined symbol's rules admit a definitional tree:
 * either a single all-variable-argument rule, or a split on some argument
 * position where every rule has a constructor root, recursively. Ties between
 * candidate positions go to the smallest position.
 */
[[nodiscard]] bool is_inductively_sequential(const Trs& R);

/// Runs every classification; tree_specification is the conjunction
/// sorted and orthogonal and exhaustive and constructor system.
[[nodiscard]] AnalysisReport analyze(const Trs& R);

}  // namespace csr
