#include "csr/report.hpp"

#include <cstdint>

#include "csr/parser.hpp"
#include "csr/polynomial.hpp"

namespace csr {

namespace {

const char* tristate(TriBool b) {
    switch (b) {
        case TriBool::Yes: return "yes";
        case TriBool::No: return "no";
        case TriBool::Unknown: return "unknown";
    }
    return "unknown";
}

}  // namespace

std::string input_digest(const std::string& text) {
    uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

nlohmann::json map_to_json(const ReplacementMap& mu, const Signature& sig) {
    nlohmann::json out = nlohmann::json::object();
    for (const Symbol& s : sig.symbols()) {
        out[s.name] = mu.at(s.name);
    }
    return out;
}

nlohmann::json analysis_to_json(const AnalysisReport& a) {
    nlohmann::json ex = {{"status", tristate(a.exhaustive.status)}};
    if (a.exhaustive.witness) ex["witness"] = a.exhaustive.witness->to_string();
    if (!a.exhaustive.reason.empty()) ex["reason"] = a.exhaustive.reason;
    if (!a.exhaustive.warnings.empty()) ex["warnings"] = a.exhaustive.warnings;

    nlohmann::json sh = {{"shallow", a.shallowness.shallow}};
    if (a.shallowness.shallow) {
        nlohmann::json sets = nlohmann::json::object();
        for (const auto& [f, idx] : a.shallowness.index_sets) sets[f] = idx;
        sh["indexSets"] = sets;
    } else if (!a.shallowness.reason.empty()) {
        sh["reason"] = a.shallowness.reason;
    }

    return {{"sorted", a.sorted},
            {"leftLinear", a.left_linear},
            {"constructorSystem", a.constructor_system},
            {"collapsingFree", a.collapsing_free},
            {"orthogonal", a.orthogonal},
            {"exhaustive", ex},
            {"shallowness", sh},
            {"proper", a.proper},
            {"strongCompat", a.compat == CompatibilityClass::StronglyCompatible},
            {"weakCompat", a.compat != CompatibilityClass::Neither},
            {"inductivelySequential", a.inductively_sequential},
            {"treeSpecification", a.tree_specification}};
}

nlohmann::json termination_to_json(const TerminationResult& t, const Signature& sig) {
    nlohmann::json out;
    switch (t.status) {
        case TerminationStatus::Proved: out["status"] = "proved"; break;
        case TerminationStatus::Disproved: out["status"] = "disproved"; break;
        case TerminationStatus::Unknown: out["status"] = "unknown"; break;
    }
    if (!t.note.empty()) out["note"] = t.note;
    if (t.certificate) out["certificate"] = print_certificate(*t.certificate, sig);
    if (t.loop) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& [pos, label] : t.loop->steps) {
            steps.push_back({{"pos", pos.to_string()}, {"rule", label}});
        }
        out["loop"] = {{"rule", t.loop->rule_label},
                       {"steps", steps},
                       {"prefixLen", t.loop->prefix_len},
                       {"reentry", t.loop->reentry.to_string()}};
    }
    return out;
}

nlohmann::json verdict_to_json(const Verdict& v, const Signature& sig) {
    const Signature& vsig = v.via_flattening ? v.flattened->signature() : sig;
    nlohmann::json out;
    out["question"] = v.question == Question::ConstructorNormalizing ? "constructor-normalizing"
                                                                    : "productive";
    switch (v.answer) {
        case Answer::Yes: out["answer"] = "yes"; break;
        case Answer::No: out["answer"] = "no"; break;
        case Answer::Unknown: out["answer"] = "unknown"; break;
    }
    nlohmann::json chain = nlohmann::json::array();
    for (const JustificationStep& s : v.chain) {
        chain.push_back({{"tag", s.tag}, {"detail", s.detail}, {"holds", s.holds}});
    }
    out["chain"] = chain;
    if (v.used_map) out["usedMap"] = map_to_json(*v.used_map, vsig);
    if (v.termination) out["termination"] = termination_to_json(*v.termination, vsig);
    out["viaFlattening"] = v.via_flattening;
    if (v.flattened) out["flattened"] = print_file(*v.flattened);
    return out;
}

nlohmann::json trace_to_json(const Trace& tr) {
    nlohmann::json steps = nlohmann::json::array();
    for (const StepRecord& s : tr.steps) {
        steps.push_back(
            {{"pos", s.pos.to_string()}, {"rule", s.label}, {"after", s.after->to_string()}});
    }
    const char* reason = "normal-form";
    if (tr.reason == StopReason::FuelExhausted) reason = "fuel-exhausted";
    if (tr.reason == StopReason::SizeLimit) reason = "size-limit";
    return {{"initial", tr.initial->to_string()},
            {"steps", steps},
            {"result", tr.result()->to_string()},
            {"stop", reason}};
}

nlohmann::json report_to_json(const Report& r, const Signature& sig) {
    nlohmann::json out;
    out["toolVersion"] = r.tool_version;
    out["inputDigest"] = r.digest;
    if (r.analysis) out["analysis"] = analysis_to_json(*r.analysis);
    nlohmann::json maps = nlohmann::json::object();
    if (r.canonical) maps["canonical"] = map_to_json(*r.canonical, sig);
    if (r.delta) maps["delta"] = map_to_json(*r.delta, sig);
    if (r.used) maps["used"] = map_to_json(*r.used, sig);
    if (!maps.empty()) out["maps"] = maps;
    if (r.termination) out["termination"] = termination_to_json(*r.termination, sig);
    if (r.verdict) out["verdict"] = verdict_to_json(*r.verdict, sig);
    if (r.trace) out["trace"] = trace_to_json(*r.trace);
    for (const auto& [key, value] : r.extra.items()) out[key] = value;
    out["timingsMs"] = r.timings_ms;
    return out;
}

}  // namespace csr
