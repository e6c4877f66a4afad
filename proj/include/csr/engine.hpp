#pragma once

#include "csr/repmap.hpp"
#include "csr/term.hpp"

namespace csr {

/// A rule match at an open position: applying `rule` at `pos` is one step.
struct RedexOccurrence {
    Position pos;
    const Rule* rule = nullptr;
    Substitution matcher;
};

enum class RedexChoice { LeftmostInnermost, LeftmostOutermost };

struct StepRecord {
    Position pos;
    std::string label;
    TermPtr after;
};

enum class StopReason { NormalForm, FuelExhausted, SizeLimit };

struct Trace {
    TermPtr initial;
    std::vector<StepRecord> steps;
    StopReason reason = StopReason::NormalForm;
    RedexChoice choice = RedexChoice::LeftmostInnermost;

    [[nodiscard]] TermPtr result() const { return steps.empty() ? initial : steps.back().after; }

    /// First line is the initial term, then "<pos> <label> <term-after>" per step.
    [[nodiscard]] std::string to_text() const;
};

/**
 * @brief All redexes of t at open positions, innermost-leftmost first
 * (positions in postorder; rule order breaks ties at one position).
 */
[[nodiscard]] std::vector<RedexOccurrence> mu_redexes(const TermPtr& t, const Trs& R,
                                                      const ReplacementMap& mu);

[[nodiscard]] bool is_mu_normal_form(const TermPtr& t, const Trs& R, const ReplacementMap& mu);

/// One step under the strategy, or nullopt at a normal form.
[[nodiscard]] std::optional<StepRecord> step(const TermPtr& t, const Trs& R,
                                             const ReplacementMap& mu,
                                             RedexChoice choice = RedexChoice::LeftmostInnermost);

/// Applies `redex` to t.
[[nodiscard]] TermPtr apply_redex(const TermPtr& t, const RedexOccurrence& redex);

struct NormalizeOptions {
    long fuel = 10000;          // maximum number of steps
    int max_term_size = 100000;  // stop once a result exceeds this many nodes
    RedexChoice choice = RedexChoice::LeftmostInnermost;
};

/**
 * @brief Repeatedly steps t until no open redex remains or a budget trips.
 * The full step sequence is recorded.
 */
[[nodiscard]] Trace normalize(const TermPtr& t, const Trs& R, const ReplacementMap& mu,
                              const NormalizeOptions& opts = {});

}  // namespace csr
