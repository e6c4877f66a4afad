#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csr/analysis.hpp"
#include "csr/repmap.hpp"
#include "csr/term.hpp"
#include "csr/termination.hpp"

namespace csr {

enum class Question { ConstructorNormalizing, Productive };
enum class Answer { Yes, No, Unknown };

/**
 * One link of a verdict's justification: a named fact, a human-readable
 * instantiation, and whether the fact was established on this input.
 * Inclusion steps carry both maps in the detail as "SMALL <= LARGE" so the
 * claim can be re-checked from the step alone.
 */
struct JustificationStep {
    std::string tag;
    std::string detail;
    bool holds = true;
};

namespace steps {
inline constexpr const char* kSorted = "sorted-signature";
inline constexpr const char* kExhaustive = "exhaustive";
inline constexpr const char* kLeftLinear = "left-linear";
inline constexpr const char* kOrthogonal = "orthogonal";
inline constexpr const char* kStronglyCompatible = "strongly-compatible";
inline constexpr const char* kConstructorsClosed = "constructors-closed";
inline constexpr const char* kRhsRootsClosed = "rhs-constructor-roots-closed";
inline constexpr const char* kShallow = "shallow";
inline constexpr const char* kTreeSpecification = "tree-specification";
inline constexpr const char* kCanonicalInclusion = "canonical-map-inclusion";
inline constexpr const char* kProductivityInclusion = "productivity-map-inclusion";
inline constexpr const char* kTerminating = "mu-terminating";
inline constexpr const char* kNonterminating = "mu-nonterminating";
inline constexpr const char* kTerminationOpen = "mu-termination-open";
inline constexpr const char* kGroundWitness = "uncovered-ground-term";
inline constexpr const char* kFlattening = "flattening";
inline constexpr const char* kFlatteningUnresolved = "flattening-unresolved";
inline constexpr const char* kInapplicable = "characterization-inapplicable";
inline constexpr const char* kNormalizationFromTermination = "normalization-from-termination";
inline constexpr const char* kProductivityFromTermination = "productivity-from-termination";
inline constexpr const char* kMissingPatternRefutes = "missing-pattern-refutes-normalization";
inline constexpr const char* kCanonicalLoopRefutes = "canonical-loop-refutes-normalization";
inline constexpr const char* kShallowCharacterization = "shallow-termination-characterization";
inline constexpr const char* kCompatibleCharacterization =
    "compatible-termination-characterization";
}  // namespace steps

/**
 * Outcome of one pipeline question. The chain lists every premise that was
 * checked, in order, ending with the fact that settles a definite answer.
 * When the answer was reached on the flattened system, via_flattening is set,
 * flattened stores that system, and the steps after the "flattening" link
 * speak about it; used_map and termination then belong to it as well.
 */
struct Verdict {
    Question question = Question::ConstructorNormalizing;
    Answer answer = Answer::Unknown;
    std::vector<JustificationStep> chain;
    std::optional<ReplacementMap> used_map;
    std::optional<TerminationResult> termination;
    bool via_flattening = false;
    std::optional<Trs> flattened;
};

struct VerdictOptions {
    SearchBudget budget{};
    /// Permits the default-map productivity route to retry on the flattened
    /// system. Never applies when a map was supplied explicitly.
    bool allow_flattening = true;
};

/// Pointwise union of the canonical map with the data-constructor map.
[[nodiscard]] ReplacementMap productivity_default_map(const Trs& R);

/**
 * Defined symbols fully open, constructors open exactly at data-sorted
 * argument positions. Sound for normalization only on proper systems.
 * Requires declared sorts; throws RepMapError otherwise.
 */
[[nodiscard]] ReplacementMap saturated_map(const Trs& R);

/// Sorts that have a finite ground constructor term, as a least fixpoint.
[[nodiscard]] std::set<std::string> finitely_inhabited_sorts(const Signature& sig);

/**
 * Replaces every variable of t by a minimal ground constructor term of its
 * sort. Empty when some variable's sort has no finite constructor term.
 */
[[nodiscard]] std::optional<TermPtr> ground_instance(const Signature& sig, const TermPtr& t);

/**
 * Tries to certify that every finite ground term reaches a constructor
 * normal form. Yes needs exhaustiveness, left-linearity, the canonical map
 * below the working map, and a termination certificate. A missing pattern
 * with a finite ground instance refutes the property; a canonical loop
 * refutes it when the converse premises hold. Defaults to the canonical map.
 */
[[nodiscard]] Verdict prove_constructor_normalizing(
    const Trs& R, const std::optional<ReplacementMap>& mu = std::nullopt,
    const VerdictOptions& opts = {});

/**
 * Tries to certify productivity: evaluation of every finite ground term
 * keeps producing constructor layers. Yes needs exhaustiveness,
 * left-linearity, the default productivity map below the working map, and a
 * termination certificate. Never answers No; termination is sufficient, not
 * necessary. The default-map route may retry on the flattened system.
 */
[[nodiscard]] Verdict prove_productive(const Trs& R,
                                       const std::optional<ReplacementMap>& mu = std::nullopt,
                                       const VerdictOptions& opts = {});

/**
 * Refutation route: under orthogonality, strong compatibility, and closed
 * constructor entries in the canonical map, a canonical loop shows some
 * ground term has no constructor normal form.
 */
[[nodiscard]] Verdict disprove_constructor_normalizing(const Trs& R,
                                                       const VerdictOptions& opts = {});

/**
 * On shallow tree specifications (or strongly compatible, collapsing-free
 * ones with closed right-hand side constructor roots) constructor
 * normalization is equivalent to canonical termination, so a certificate
 * answers Yes and a loop answers No. Other inputs fall back to the prove and
 * disprove routes, with the fallback recorded in the chain.
 */
[[nodiscard]] Verdict shallow_characterization(const Trs& R, const VerdictOptions& opts = {});

/**
 * Replays a verdict against R: recomputes every premise in the chain,
 * re-validates the embedded certificate or loop for the system the answer
 * was reached on, and checks that the recorded answer is still supported.
 */
[[nodiscard]] bool verify_verdict(const Trs& R, const Verdict& v, std::string* why = nullptr);

}  // namespace csr
