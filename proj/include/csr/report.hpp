#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "csr/analysis.hpp"
#include "csr/engine.hpp"
#include "csr/productivity.hpp"
#include "csr/repmap.hpp"
#include "csr/term.hpp"
#include "csr/termination.hpp"

namespace csr {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a over the raw input bytes, as 16 lowercase hex digits.
[[nodiscard]] std::string input_digest(const std::string& text);

/**
 * Machine-readable run summary. Every populated section embeds its own
 * evidence (certificate text, loop steps, witness terms, justification
 * chains), so the answer can be re-checked offline from the report alone.
 */
struct Report {
    std::string tool_version = kToolVersion;
    std::string digest;
    std::optional<AnalysisReport> analysis;
    std::optional<ReplacementMap> canonical;
    std::optional<ReplacementMap> delta;
    std::optional<ReplacementMap> used;
    std::optional<TerminationResult> termination;
    std::optional<Verdict> verdict;
    std::optional<Trace> trace;
    /// Command-specific additions merged into the top level as-is.
    nlohmann::json extra = nlohmann::json::object();
    std::map<std::string, long long> timings_ms;
};

[[nodiscard]] nlohmann::json map_to_json(const ReplacementMap& mu, const Signature& sig);
[[nodiscard]] nlohmann::json analysis_to_json(const AnalysisReport& a);
[[nodiscard]] nlohmann::json termination_to_json(const TerminationResult& t,
                                                 const Signature& sig);
[[nodiscard]] nlohmann::json verdict_to_json(const Verdict& v, const Signature& sig);
[[nodiscard]] nlohmann::json trace_to_json(const Trace& tr);

/// Assembles the full report; sig renders maps and certificates.
[[nodiscard]] nlohmann::json report_to_json(const Report& r, const Signature& sig);

}  // namespace csr
