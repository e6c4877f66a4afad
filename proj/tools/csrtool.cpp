// Command-line front end: analysis, rewriting, termination proofs, and
// productivity verdicts over .trs files, with JSON reports that embed
// enough evidence to re-check every answer offline.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csr/analysis.hpp"
#include "csr/engine.hpp"
#include "csr/parser.hpp"
#include "csr/polynomial.hpp"
#include "csr/productivity.hpp"
#include "csr/report.hpp"
#include "csr/repmap.hpp"
#include "csr/term.hpp"
#include "csr/termination.hpp"
#include "csr/transform.hpp"

namespace {

using namespace csr;

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Selects the command's replacement map. Named forms resolve against the
/// input; "(f 1)" style text is parsed directly; empty falls back.
ReplacementMap resolve_map(const std::string& spec, const Trs& R, const ReplacementMap& fallback) {
    if (spec.empty()) return fallback;
    if (spec == "canonical") return canonical_map(R);
    if (spec == "delta") return mu_delta(R.signature());
    if (spec == "canonical+delta") return productivity_default_map(R);
    if (spec == "top") return ReplacementMap::top(R.signature());
    if (spec.rfind("file:", 0) == 0)
        return parse_replacement_map(slurp(spec.substr(5)), R.signature());
    if (spec.front() == '(') return parse_replacement_map(spec, R.signature());
    throw Error("unrecognized map '" + spec +
                "'; expected canonical, delta, canonical+delta, top, file:PATH, or inline text "
                "like \"(f 1 2)\"");
}

const char* tri_text(TriBool t) {
    switch (t) {
        case TriBool::Yes: return "yes";
        case TriBool::No: return "no";
        default: return "unknown";
    }
}

const char* yn(bool b) { return b ? "yes" : "no"; }

const char* answer_text(Answer a) {
    switch (a) {
        case Answer::Yes: return "Yes";
        case Answer::No: return "No";
        default: return "Unknown";
    }
}

int exit_for(Answer a) {
    switch (a) {
        case Answer::Yes: return 0;
        case Answer::No: return 1;
        default: return 2;
    }
}

int exit_for(TerminationStatus s) {
    switch (s) {
        case TerminationStatus::Proved: return 0;
        case TerminationStatus::Disproved: return 1;
        default: return 2;
    }
}

std::string loop_text(const LoopWitness& w) {
    std::ostringstream out;
    out << "loop from " << w.rule_label << ": " << w.steps.size() << " step(s), re-entry at "
        << w.reentry.to_string() << " into the term after " << w.prefix_len << " step(s)\n";
    for (const auto& [pos, label] : w.steps) out << "  " << pos.to_string() << " " << label << "\n";
    return out.str();
}

std::string termination_text(const TerminationResult& t, const Signature& sig) {
    std::ostringstream out;
    switch (t.status) {
        case TerminationStatus::Proved:
            out << "status: proved\ncertificate:\n" << print_certificate(*t.certificate, sig);
            break;
        case TerminationStatus::Disproved:
            out << "status: disproved\n" << loop_text(*t.loop);
            break;
        default: out << "status: unknown\n";
    }
    if (!t.note.empty()) out << "note: " << t.note << "\n";
    return out.str();
}

std::string chain_text(const Verdict& v, const Signature& sig) {
    std::ostringstream out;
    out << (v.question == Question::Productive ? "productive: " : "constructor-normalizing: ")
        << answer_text(v.answer) << "\n";
    for (const auto& s : v.chain) {
        out << "  [" << (s.holds ? "ok" : "no") << "] " << s.tag;
        if (!s.detail.empty()) out << ": " << s.detail;
        out << "\n";
    }
    if (v.used_map) out << "used map: " << map_to_text(*v.used_map, sig) << "\n";
    if (v.via_flattening) out << "via flattening: yes\n";
    return out.str();
}

struct Output {
    bool json_stdout = false;
    std::string json_file;
};

/// JSON on stdout replaces the human summary; --json-file adds a copy.
void emit(const Report& rep, const Signature& sig, const Output& out, const std::string& human) {
    if (out.json_stdout) {
        std::cout << report_to_json(rep, sig).dump(2) << "\n";
    } else {
        std::cout << human;
    }
    if (!out.json_file.empty()) {
        std::ofstream f(out.json_file, std::ios::binary);
        if (!f) throw Error("cannot write " + out.json_file);
        f << report_to_json(rep, sig).dump(2) << "\n";
    }
}

struct Options {
    std::string file;
    std::string map_spec;
    std::string term_text;
    std::string cert_path;
    std::string mode = "default";
    int fuel = 10000;
    long long budget_ms = 10000;
    Output out;
};

SearchBudget budget_of(const Options& o) {
    SearchBudget b;
    b.time_limit_ms = static_cast<int>(o.budget_ms);
    return b;
}

int cmd_analyze(const Options& o, Report& rep, const ParsedFile& pf) {
    const Trs& R = pf.trs;
    const auto t0 = Clock::now();
    const AnalysisReport a = analyze(R);
    rep.analysis = a;
    rep.canonical = canonical_map(R);
    if (R.signature().sorts_declared()) rep.delta = mu_delta(R.signature());
    rep.timings_ms["analyze"] = ms_since(t0);

    std::ostringstream h;
    h << "sorted: " << yn(a.sorted) << "\n";
    h << "left-linear: " << yn(a.left_linear) << "\n";
    h << "constructor system: " << yn(a.constructor_system) << "\n";
    h << "collapsing-free: " << yn(a.collapsing_free) << "\n";
    h << "orthogonal: " << yn(a.orthogonal) << "\n";
    h << "exhaustive: " << tri_text(a.exhaustive.status);
    if (a.exhaustive.witness) h << " (missing pattern " << a.exhaustive.witness->to_string() << ")";
    if (!a.exhaustive.reason.empty()) h << " (" << a.exhaustive.reason << ")";
    h << "\n";
    for (const std::string& w : a.exhaustive.warnings) h << "  warning: " << w << "\n";
    h << "shallow: " << yn(a.shallowness.shallow);
    if (!a.shallowness.shallow && !a.shallowness.reason.empty())
        h << " (" << a.shallowness.reason << ")";
    h << "\n";
    h << "proper: " << yn(a.proper) << "\n";
    h << "compatibility: "
      << (a.compat == CompatibilityClass::StronglyCompatible ? "strong"
          : a.compat == CompatibilityClass::WeaklyCompatible ? "weak"
                                                             : "incompatible")
      << "\n";
    h << "inductively sequential: " << yn(a.inductively_sequential) << "\n";
    h << "tree specification: " << yn(a.tree_specification) << "\n";
    h << "canonical map: " << map_to_text(*rep.canonical, R.signature()) << "\n";
    if (rep.delta) h << "delta map: " << map_to_text(*rep.delta, R.signature()) << "\n";

    emit(rep, R.signature(), o.out, h.str());
    return 0;
}

int cmd_canonical(const Options& o, Report& rep, const ParsedFile& pf) {
    const Trs& R = pf.trs;
    const auto t0 = Clock::now();
    rep.canonical = canonical_map(R);
    rep.timings_ms["analyze"] = ms_since(t0);
    emit(rep, R.signature(), o.out,
         "canonical map: " + map_to_text(*rep.canonical, R.signature()) + "\n");
    return 0;
}

int cmd_normalize(const Options& o, Report& rep, const ParsedFile& pf) {
    const Trs& R = pf.trs;
    const ReplacementMap fallback =
        pf.strategy ? *pf.strategy : ReplacementMap::top(R.signature());
    const ReplacementMap mu = resolve_map(o.map_spec, R, fallback);
    const TermPtr t = parse_term(o.term_text, R.signature(), pf.vars);

    const auto t0 = Clock::now();
    NormalizeOptions nopts;
    nopts.fuel = o.fuel;
    const Trace tr = normalize(t, R, mu, nopts);
    rep.timings_ms["rewrite"] = ms_since(t0);
    rep.used = mu;
    rep.trace = tr;

    std::ostringstream h;
    h << tr.to_text();
    if (h.str().back() != '\n') h << "\n";
    h << "stop: "
      << (tr.reason == StopReason::NormalForm       ? "normal-form"
          : tr.reason == StopReason::FuelExhausted ? "fuel-exhausted"
                                                   : "size-limit")
      << "\n";
    h << "result: " << tr.result()->to_string() << "\n";
    emit(rep, R.signature(), o.out, h.str());
    return 0;
}

int cmd_prove_termination(const Options& o, Report& rep, const ParsedFile& pf) {
    const Trs& R = pf.trs;
    const ReplacementMap fallback = pf.strategy ? *pf.strategy : canonical_map(R);
    const ReplacementMap mu = resolve_map(o.map_spec, R, fallback);
    rep.analysis = analyze(R);
    rep.canonical = canonical_map(R);
    rep.used = mu;

    const auto t0 = Clock::now();
    const TerminationResult res = prove_termination(R, mu, budget_of(o));
    rep.timings_ms["search"] = ms_since(t0);
    rep.termination = res;

    std::ostringstream h;
    h << "map: " << map_to_text(mu, R.signature()) << "\n" << termination_text(res, R.signature());
    emit(rep, R.signature(), o.out, h.str());
    return exit_for(res.status);
}

int cmd_check_cert(const Options& o, Report& rep, const ParsedFile& pf) {
    const Trs& R = pf.trs;
    const ReplacementMap fallback = pf.strategy ? *pf.strategy : canonical_map(R);
    const ReplacementMap mu = resolve_map(o.map_spec, R, fallback);
    const Interpretation interp = parse_certificate(slurp(o.cert_path), R.signature());
    rep.used = mu;

    const auto t0 = Clock::now();
    const CertCheck res = check_certificate(R, mu, interp);
    rep.timings_ms["check"] = ms_since(t0);
    TerminationResult tr;
    tr.status = res.ok ? TerminationStatus::Proved : TerminationStatus::Unknown;
    tr.certificate = interp;
    tr.note = res.ok ? "certificate accepted" : res.reason;
    rep.termination = tr;

    std::ostringstream h;
    h << "map: " << map_to_text(mu, R.signature()) << "\n";
    h << (res.ok ? "certificate accepted\n" : "certificate rejected: " + res.reason + "\n");
    emit(rep, R.signature(), o.out, h.str());
    return res.ok ? 0 : 1;
}

int cmd_prove_productivity(const Options& o, Report& rep, const ParsedFile& pf) {
    const Trs& R = pf.trs;
    if (o.mode != "default" && !o.map_spec.empty())
        throw Error("--map conflicts with --mode " + o.mode + "; pick one");

    std::optional<ReplacementMap> mu;
    if (!o.map_spec.empty()) {
        mu = resolve_map(o.map_spec, R, ReplacementMap::top(R.signature()));
    } else if (o.mode == "zr10") {
        if (!R.signature().sorts_declared()) {
            std::cout << "sorts are not declared; the zr10 map needs data/codata sorts\n";
            return 2;
        }
        mu = saturated_map(R);
    }

    rep.analysis = analyze(R);
    rep.canonical = canonical_map(R);
    if (R.signature().sorts_declared()) rep.delta = mu_delta(R.signature());

    const auto t0 = Clock::now();
    VerdictOptions vopts;
    vopts.budget = budget_of(o);
    const Verdict v = prove_productive(R, mu, vopts);
    rep.timings_ms["search"] = ms_since(t0);
    rep.verdict = v;
    rep.used = v.used_map;
    rep.termination = v.termination;

    emit(rep, R.signature(), o.out, chain_text(v, R.signature()));
    return exit_for(v.answer);
}

int cmd_transform_shallow(const Options& o, Report& rep, const ParsedFile& pf) {
    const auto t0 = Clock::now();
    const ShallowingResult sr = shallow_transform(pf.trs);
    rep.timings_ms["transform"] = ms_since(t0);
    const std::string text = print_file(sr.output);

    nlohmann::json symbols = nlohmann::json::object();
    for (const auto& [fresh, origin] : sr.symbol_map)
        symbols[fresh] = {{"origin", origin.first}, {"path", origin.second}};
    rep.extra["flattened"] = text;
    rep.extra["symbolMap"] = symbols;
    rep.extra["log"] = sr.log;

    std::ostringstream h;
    h << text;
    for (const auto& [fresh, origin] : sr.symbol_map) {
        h << "; fresh " << fresh << " from " << origin.first;
        for (const std::string& c : origin.second) h << " under " << c;
        h << "\n";
    }
    emit(rep, sr.output.signature(), o.out, h.str());
    return 0;
}

int dispatch(const std::string& name, const Options& o) {
    Report rep;
    const std::string text = slurp(o.file);
    rep.digest = input_digest(text);
    const auto t0 = Clock::now();
    const ParsedFile pf = parse_file(text);
    rep.timings_ms["parse"] = ms_since(t0);

    if (name == "analyze") return cmd_analyze(o, rep, pf);
    if (name == "canonical") return cmd_canonical(o, rep, pf);
    if (name == "normalize") return cmd_normalize(o, rep, pf);
    if (name == "prove-termination") return cmd_prove_termination(o, rep, pf);
    if (name == "prove-productivity") return cmd_prove_productivity(o, rep, pf);
    if (name == "transform-shallow") return cmd_transform_shallow(o, rep, pf);
    if (name == "check-cert") return cmd_check_cert(o, rep, pf);
    throw Error("unknown command " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-sensitive rewriting: analysis, proving, and transformation"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", o.file, "input .trs file")->required();
        sub->add_flag("--json", o.out.json_stdout, "print the JSON report on stdout");
        sub->add_option("--json-file", o.out.json_file, "write the JSON report to PATH");
        return sub;
    };
    const auto add_map = [&](CLI::App* sub) {
        sub->add_option("--map", o.map_spec,
                        "replacement map: canonical, delta, canonical+delta, top, file:PATH, or "
                        "inline \"(f 1 2)\" text");
    };
    const auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget-ms", o.budget_ms, "search time budget in milliseconds");
    };

    add_common(app.add_subcommand("analyze", "classify the system and print its maps"));
    add_common(app.add_subcommand("canonical", "print the canonical replacement map"));
    {
        CLI::App* sub = add_common(
            app.add_subcommand("normalize", "rewrite a term to a map-restricted normal form"));
        sub->add_option("--term", o.term_text, "term to rewrite")->required();
        sub->add_option("--fuel", o.fuel, "maximum number of steps");
        add_map(sub);
    }
    {
        CLI::App* sub = add_common(app.add_subcommand(
            "prove-termination", "search for a certificate or a loop under a map"));
        add_map(sub);
        add_budget(sub);
    }
    {
        CLI::App* sub = add_common(app.add_subcommand(
            "prove-productivity", "run the productivity pipeline and print the verdict"));
        sub->add_option("--mode", o.mode, "default: canonical+delta map; zr10: saturated map")
            ->check(CLI::IsMember({"default", "zr10"}));
        add_map(sub);
        add_budget(sub);
    }
    add_common(app.add_subcommand("transform-shallow",
                                  "flatten nested patterns into an equivalent shallow system"));
    {
        CLI::App* sub = add_common(
            app.add_subcommand("check-cert", "validate an interpretation against a map"));
        sub->add_option("--cert", o.cert_path, "certificate file")->required();
        add_map(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), o);
    } catch (const csr::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const csr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
