#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csr/polynomial.hpp"
#include "csr/repmap.hpp"
#include "csr/term.hpp"

namespace csr {

/// Outcome of validating an interpretation as a termination certificate.
struct CertCheck {
    bool ok = false;
    std::string reason;
};

/**
 * A certificate is accepted when every symbol has a polynomial with
 * nonnegative coefficients over its own formals, the polynomial has a pure
 * power of x_i with positive coefficient for every open argument position i,
 * and for every rule the coefficients of [lhs] - [rhs] - 1 are nonnegative.
 * Together these make rewrite steps at open positions strictly decrease a
 * well-founded measure.
 */
[[nodiscard]] CertCheck check_certificate(const Trs& R, const ReplacementMap& mu,
                                          const Interpretation& interp);

/// Caps for certificate and loop searches.
struct SearchBudget {
    long long max_nodes = 2000000;
    int time_limit_ms = 10000;
};

/**
 * Deterministic search over small polynomial templates: a linear pass, then a
 * pass that adds argument products. Coefficients range over 0..3. Returns the
 * first interpretation accepted by check_certificate, if the budget allows.
 */
[[nodiscard]] std::optional<Interpretation> find_certificate(const Trs& R,
                                                             const ReplacementMap& mu,
                                                             const SearchBudget& budget = {});

/**
 * A derivation lhs ->* t whose subterm at an open position matches an earlier
 * term of the derivation, witnessing an infinite reduction. Steps carry the
 * redex position and rule label; the matched earlier term is the one reached
 * after prefix_len steps.
 */
struct LoopWitness {
    std::string rule_label;
    std::vector<std::pair<Position, std::string>> steps;
    size_t prefix_len = 0;
    Position reentry;
};

/// Breadth-first search for a loop, at most max_depth steps per start rule.
[[nodiscard]] std::optional<LoopWitness> find_loop(const Trs& R, const ReplacementMap& mu,
                                                   int max_depth,
                                                   const SearchBudget& budget = {});

/// Re-runs a witness from its rule; explains any mismatch through why.
[[nodiscard]] bool replay_loop(const Trs& R, const ReplacementMap& mu, const LoopWitness& w,
                               std::string* why = nullptr);

enum class TerminationStatus { Proved, Disproved, Unknown };

struct TerminationResult {
    TerminationStatus status = TerminationStatus::Unknown;
    std::optional<Interpretation> certificate;
    std::optional<LoopWitness> loop;
    std::string note;
};

/// Shallow loop search, then certificate search, then a deeper loop search.
[[nodiscard]] TerminationResult prove_termination(const Trs& R, const ReplacementMap& mu,
                                                  const SearchBudget& budget = {});

}  // namespace csr
