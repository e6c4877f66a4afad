#include "csr/productivity.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "csr/parser.hpp"
#include "csr/transform.hpp"

namespace csr {

namespace {

void push(std::vector<JustificationStep>& chain, const char* tag, std::string detail, bool holds) {
    chain.push_back({tag, std::move(detail), holds});
}

std::string loop_summary(const LoopWitness& w) {
    std::ostringstream os;
    os << "rule " << w.rule_label << " loops after " << w.steps.size()
       << " steps; re-entry at " << w.reentry.to_string();
    return os.str();
}

std::string inclusion_detail(const ReplacementMap& small, const ReplacementMap& big,
                             const Signature& sig) {
    return map_to_text(small, sig) + " <= " + map_to_text(big, sig);
}

/// Entry of the canonical map is empty for every constructor.
bool constructors_closed(const Trs& R, const ReplacementMap& mucan) {
    return std::ranges::all_of(R.signature().symbols(), [&](const Symbol& s) {
        return s.kind != SymbolKind::Constructor || mucan.at(s.name).empty();
    });
}

/// No collapsing rules, and constructor roots of right-hand sides are closed.
bool rhs_roots_closed(const Trs& R, const ReplacementMap& mucan) {
    if (!is_collapsing_free(R)) return false;
    return std::ranges::all_of(R.rules(), [&](const Rule& r) {
        if (r.rhs->is_var()) return false;
        const Symbol& s = R.signature().symbol_or_throw(r.rhs->name());
        return s.kind != SymbolKind::Constructor || mucan.at(s.name).empty();
    });
}

bool sorted_premise(const AnalysisReport& a, Verdict& v) {
    push(v.chain, steps::kSorted,
         a.sorted ? "sorts and constructors are declared"
                  : "no sort declarations; the question needs them",
         a.sorted);
    if (!a.sorted && a.exhaustive.status == TriBool::No && a.exhaustive.witness) {
        push(v.chain, steps::kExhaustive,
             "missing pattern: " + a.exhaustive.witness->to_string(), false);
    }
    return a.sorted;
}

/// Pushes the exhaustiveness premise; on a groundable missing pattern turns
/// the verdict into a refutation and reports that through `refuted`.
bool exhaustive_premise(const Trs& R, const AnalysisReport& a, Verdict& v, bool may_refute,
                        bool* refuted) {
    *refuted = false;
    const ExhaustivenessResult& ex = a.exhaustive;
    if (ex.status == TriBool::Yes) {
        std::string detail = "every constructor argument tuple is covered";
        if (!ex.warnings.empty()) detail += "; " + ex.warnings.front();
        push(v.chain, steps::kExhaustive, detail, true);
        return true;
    }
    if (ex.status == TriBool::No && ex.witness) {
        push(v.chain, steps::kExhaustive, "missing pattern: " + ex.witness->to_string(), false);
        if (may_refute) {
            auto g = ground_instance(R.signature(), ex.witness);
            if (g) {
                push(v.chain, steps::kGroundWitness,
                     (*g)->to_string() + " is ground and irreducible but not a constructor term",
                     true);
                push(v.chain, steps::kMissingPatternRefutes,
                     "a ground normal form that is not a constructor term refutes the property",
                     true);
                v.answer = Answer::No;
                *refuted = true;
            } else {
                push(v.chain, steps::kGroundWitness,
                     "the missing pattern has no finite ground instance", false);
            }
        }
        return false;
    }
    push(v.chain, steps::kExhaustive, ex.reason.empty() ? "coverage undecided" : ex.reason,
         false);
    return false;
}

bool left_linear_premise(const AnalysisReport& a, Verdict& v) {
    push(v.chain, steps::kLeftLinear,
         a.left_linear ? "no left-hand side repeats a variable"
                       : "some left-hand side repeats a variable",
         a.left_linear);
    return a.left_linear;
}

void record_termination(Verdict& v, const TerminationResult& t) {
    switch (t.status) {
        case TerminationStatus::Proved:
            push(v.chain, steps::kTerminating,
                 "certificate orients every rule strictly at open positions", true);
            break;
        case TerminationStatus::Disproved:
            push(v.chain, steps::kNonterminating, loop_summary(*t.loop), true);
            break;
        case TerminationStatus::Unknown:
            push(v.chain, steps::kTerminationOpen, t.note, false);
            break;
    }
}

}  // namespace

ReplacementMap productivity_default_map(const Trs& R) {
    return join(canonical_map(R), mu_delta(R.signature()));
}

ReplacementMap saturated_map(const Trs& R) {
    const Signature& sig = R.signature();
    if (!sig.sorts_declared()) throw RepMapError("saturated map needs declared sorts");
    ReplacementMap mu = ReplacementMap::bottom(sig);
    for (const Symbol& s : sig.symbols()) {
        std::set<int> open;
        for (int i = 1; i <= s.arity(); ++i) {
            if (s.kind == SymbolKind::Defined) {
                open.insert(i);
                continue;
            }
            const Sort* sort = sig.find_sort(s.arg_sorts[static_cast<size_t>(i - 1)]);
            if (sort != nullptr && sort->kind == SortKind::Data) open.insert(i);
        }
        mu.set(sig, s.name, std::move(open));
    }
    return mu;
}

std::set<std::string> finitely_inhabited_sorts(const Signature& sig) {
    std::set<std::string> inhabited;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Symbol& s : sig.symbols()) {
            if (s.kind != SymbolKind::Constructor) continue;
            if (inhabited.contains(s.result_sort)) continue;
            bool ok = std::ranges::all_of(
                s.arg_sorts, [&](const std::string& a) { return inhabited.contains(a); });
            if (ok) {
                inhabited.insert(s.result_sort);
                changed = true;
            }
        }
    }
    return inhabited;
}

namespace {

/// Minimal-depth ground constructor term per finitely inhabited sort.
std::map<std::string, TermPtr> minimal_terms(const Signature& sig) {
    std::map<std::string, TermPtr> minimal;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Symbol& s : sig.symbols()) {
            if (s.kind != SymbolKind::Constructor) continue;
            if (minimal.contains(s.result_sort)) continue;
            std::vector<TermPtr> args;
            for (const std::string& a : s.arg_sorts) {
                auto it = minimal.find(a);
                if (it == minimal.end()) break;
                args.push_back(it->second);
            }
            if (args.size() == s.arg_sorts.size()) {
                minimal.emplace(s.result_sort, Term::app_raw(s.name, s.result_sort, std::move(args)));
                changed = true;
            }
        }
    }
    return minimal;
}

TermPtr instantiate(const TermPtr& t, const std::map<std::string, TermPtr>& minimal, bool* ok) {
    if (t->is_var()) {
        auto it = minimal.find(t->sort());
        if (it == minimal.end()) {
            *ok = false;
            return t;
        }
        return it->second;
    }
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const TermPtr& a : t->args()) args.push_back(instantiate(a, minimal, ok));
    return Term::app_raw(t->name(), t->sort(), std::move(args));
}

}  // namespace

std::optional<TermPtr> ground_instance(const Signature& sig, const TermPtr& t) {
    bool ok = true;
    TermPtr g = instantiate(t, minimal_terms(sig), &ok);
    if (!ok) return std::nullopt;
    return g;
}

Verdict prove_constructor_normalizing(const Trs& R, const std::optional<ReplacementMap>& mu,
                                      const VerdictOptions& opts) {
    Verdict v;
    v.question = Question::ConstructorNormalizing;
    const AnalysisReport a = analyze(R);
    if (!sorted_premise(a, v)) return v;

    const ReplacementMap mucan = canonical_map(R);
    const ReplacementMap mu_eff = mu ? *mu : mucan;
    v.used_map = mu_eff;

    bool refuted = false;
    if (!exhaustive_premise(R, a, v, /*may_refute=*/true, &refuted)) return v;
    if (!left_linear_premise(a, v)) return v;

    const bool incl = leq(mucan, mu_eff);
    push(v.chain, steps::kCanonicalInclusion, inclusion_detail(mucan, mu_eff, R.signature()),
         incl);
    if (!incl) return v;

    const TerminationResult t = prove_termination(R, mu_eff, opts.budget);
    v.termination = t;
    if (t.status == TerminationStatus::Proved) {
        record_termination(v, t);
        push(v.chain, steps::kNormalizationFromTermination,
             "termination of open-position rewriting forces every ground term into a "
             "constructor normal form",
             true);
        v.answer = Answer::Yes;
        return v;
    }
    if (t.status == TerminationStatus::Disproved) {
        Verdict d = disprove_constructor_normalizing(R, opts);
        if (d.answer == Answer::No) return d;
        record_termination(v, t);
        return v;
    }
    record_termination(v, t);
    return v;
}

Verdict disprove_constructor_normalizing(const Trs& R, const VerdictOptions& opts) {
    Verdict v;
    v.question = Question::ConstructorNormalizing;
    const AnalysisReport a = analyze(R);
    if (!sorted_premise(a, v)) return v;

    const ReplacementMap mucan = canonical_map(R);
    v.used_map = mucan;

    push(v.chain, steps::kOrthogonal,
         a.orthogonal ? "left-linear with no critical pairs"
                      : "overlapping or non-left-linear rules",
         a.orthogonal);
    const bool strong = a.compat == CompatibilityClass::StronglyCompatible;
    push(v.chain, steps::kStronglyCompatible,
         strong ? "the canonical map is strongly compatible with every left-hand side"
                : "some left-hand side breaks strong compatibility with the canonical map",
         strong);

    const bool cond1 = constructors_closed(R, mucan);
    const bool cond2 = rhs_roots_closed(R, mucan);
    if (cond1) {
        push(v.chain, steps::kConstructorsClosed,
             "the canonical map closes every constructor argument", true);
    } else if (cond2) {
        push(v.chain, steps::kRhsRootsClosed,
             "no collapsing rules and constructor roots of right-hand sides are closed", true);
    } else {
        push(v.chain, steps::kConstructorsClosed,
             "the canonical map leaves a constructor argument open", false);
        push(v.chain, steps::kRhsRootsClosed,
             "a collapsing rule or an open constructor root blocks the refutation", false);
    }
    if (!a.orthogonal || !strong || (!cond1 && !cond2)) return v;

    const TerminationResult t = prove_termination(R, mucan, opts.budget);
    v.termination = t;
    record_termination(v, t);
    if (t.status == TerminationStatus::Disproved) {
        push(v.chain, steps::kCanonicalLoopRefutes,
             "the property would force canonical open-position termination, contradicted by "
             "the loop",
             true);
        v.answer = Answer::No;
    }
    return v;
}

Verdict prove_productive(const Trs& R, const std::optional<ReplacementMap>& mu,
                         const VerdictOptions& opts) {
    Verdict v;
    v.question = Question::Productive;
    const AnalysisReport a = analyze(R);
    if (!sorted_premise(a, v)) return v;

    const ReplacementMap defmap = productivity_default_map(R);
    const ReplacementMap mu_eff = mu ? *mu : defmap;
    v.used_map = mu_eff;

    const bool incl = leq(defmap, mu_eff);
    push(v.chain, steps::kProductivityInclusion, inclusion_detail(defmap, mu_eff, R.signature()),
         incl);
    if (!incl) return v;

    bool refuted = false;
    if (!exhaustive_premise(R, a, v, /*may_refute=*/false, &refuted)) return v;
    if (!left_linear_premise(a, v)) return v;

    const TerminationResult t = prove_termination(R, mu_eff, opts.budget);
    v.termination = t;
    if (t.status == TerminationStatus::Proved) {
        record_termination(v, t);
        push(v.chain, steps::kProductivityFromTermination,
             "termination of open-position rewriting yields a constructor layer at every open "
             "position",
             true);
        v.answer = Answer::Yes;
        return v;
    }
    record_termination(v, t);

    const bool retry = opts.allow_flattening && !mu && !a.shallowness.shallow &&
                       a.constructor_system && a.inductively_sequential;
    if (retry) {
        try {
            ShallowingResult sr = shallow_transform(R);
            VerdictOptions sub_opts = opts;
            sub_opts.allow_flattening = false;
            Verdict sub = prove_productive(sr.output, std::nullopt, sub_opts);
            if (sub.answer == Answer::Yes) {
                Verdict out;
                out.question = Question::Productive;
                out.answer = Answer::Yes;
                out.chain = v.chain;
                push(out.chain, steps::kFlattening,
                     "retrying on the flattened system with " +
                         std::to_string(sr.symbol_map.size()) + " auxiliary symbols",
                     true);
                out.chain.insert(out.chain.end(), sub.chain.begin(), sub.chain.end());
                out.used_map = sub.used_map;
                out.termination = sub.termination;
                out.via_flattening = true;
                out.flattened = sr.output;
                return out;
            }
            std::string blocked = sub.chain.empty() ? "" : ": " + sub.chain.back().detail;
            push(v.chain, steps::kFlatteningUnresolved,
                 "the flattened system is also unresolved" + blocked, false);
        } catch (const Error& e) {
            push(v.chain, steps::kFlatteningUnresolved,
                 std::string("flattening failed: ") + e.what(), false);
        }
    }
    return v;
}

Verdict shallow_characterization(const Trs& R, const VerdictOptions& opts) {
    Verdict v;
    v.question = Question::ConstructorNormalizing;
    const AnalysisReport a = analyze(R);
    if (!sorted_premise(a, v)) return v;

    const ReplacementMap mucan = canonical_map(R);
    v.used_map = mucan;

    const bool route_a = a.shallowness.shallow && a.tree_specification;
    const bool strong = a.compat == CompatibilityClass::StronglyCompatible;
    const bool route_b = !route_a && a.tree_specification && strong && rhs_roots_closed(R, mucan);
    if (route_a) {
        push(v.chain, steps::kShallow,
             "every defined symbol matches flat constructor patterns at one index set", true);
        push(v.chain, steps::kTreeSpecification,
             "sorted, orthogonal, exhaustive constructor system", true);
    } else if (route_b) {
        push(v.chain, steps::kTreeSpecification,
             "sorted, orthogonal, exhaustive constructor system", true);
        push(v.chain, steps::kStronglyCompatible,
             "the canonical map is strongly compatible with every left-hand side", true);
        push(v.chain, steps::kRhsRootsClosed,
             "no collapsing rules and constructor roots of right-hand sides are closed", true);
    } else {
        Verdict fb = prove_constructor_normalizing(R, std::nullopt, opts);
        if (fb.answer == Answer::Unknown) {
            Verdict d = disprove_constructor_normalizing(R, opts);
            if (d.answer == Answer::No) fb = std::move(d);
        }
        fb.chain.insert(
            fb.chain.begin(),
            JustificationStep{steps::kInapplicable,
                              "not a shallow tree specification; falling back to the direct routes",
                              false});
        return fb;
    }

    const TerminationResult t = prove_termination(R, mucan, opts.budget);
    v.termination = t;
    record_termination(v, t);
    const char* tag = route_a ? steps::kShallowCharacterization
                              : steps::kCompatibleCharacterization;
    const char* detail =
        route_a ? "on shallow tree specifications the property is equivalent to canonical "
                  "termination"
                : "under strong compatibility with closed constructor roots the property is "
                  "equivalent to canonical termination";
    if (t.status == TerminationStatus::Proved) {
        push(v.chain, tag, detail, true);
        v.answer = Answer::Yes;
    } else if (t.status == TerminationStatus::Disproved) {
        push(v.chain, tag, detail, true);
        v.answer = Answer::No;
    }
    return v;
}

namespace {

bool fail(std::string* why, const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
}

bool check_inclusion_step(const JustificationStep& s, const Signature& sig, std::string* why) {
    const size_t pos = s.detail.find(" <= ");
    if (pos == std::string::npos) return fail(why, "inclusion step lacks its maps: " + s.detail);
    try {
        const ReplacementMap small = parse_replacement_map(s.detail.substr(0, pos), sig);
        const ReplacementMap big = parse_replacement_map(s.detail.substr(pos + 4), sig);
        if (leq(small, big) != s.holds)
            return fail(why, "inclusion step does not re-check: " + s.detail);
    } catch (const Error& e) {
        return fail(why, std::string("inclusion step does not parse: ") + e.what());
    }
    return true;
}

}  // namespace

bool verify_verdict(const Trs& R, const Verdict& v, std::string* why) {
    try {
        const Trs* sys = &R;
        if (v.via_flattening) {
            if (!v.flattened) return fail(why, "flattening claimed but no system stored");
            const ShallowingResult sr = shallow_transform(R);
            if (print_file(sr.output) != print_file(*v.flattened))
                return fail(why, "stored flattened system differs from the transform");
        }
        if (v.answer != Answer::Unknown && !v.used_map)
            return fail(why, "definite answer without a map");
        if (v.question == Question::Productive && v.answer == Answer::No)
            return fail(why, "the productivity route never refutes");

        const Trs* concluded = v.via_flattening ? &*v.flattened : &R;
        AnalysisReport a = analyze(*sys);
        bool switched = !v.via_flattening;
        const ReplacementMap mucan_orig = canonical_map(R);
        ReplacementMap mucan_cur = mucan_orig;

        for (const JustificationStep& s : v.chain) {
            if (s.tag == steps::kFlattening) {
                if (!v.via_flattening) return fail(why, "flattening step without a flattened system");
                sys = concluded;
                a = analyze(*sys);
                mucan_cur = canonical_map(*sys);
                switched = true;
                continue;
            }
            bool recomputed = true;
            bool premise = true;
            if (s.tag == steps::kSorted) {
                recomputed = a.sorted;
            } else if (s.tag == steps::kExhaustive) {
                recomputed = a.exhaustive.status == TriBool::Yes;
            } else if (s.tag == steps::kLeftLinear) {
                recomputed = a.left_linear;
            } else if (s.tag == steps::kOrthogonal) {
                recomputed = a.orthogonal;
            } else if (s.tag == steps::kStronglyCompatible) {
                recomputed = a.compat == CompatibilityClass::StronglyCompatible;
            } else if (s.tag == steps::kConstructorsClosed) {
                recomputed = constructors_closed(*sys, mucan_cur);
            } else if (s.tag == steps::kRhsRootsClosed) {
                recomputed = rhs_roots_closed(*sys, mucan_cur);
            } else if (s.tag == steps::kShallow) {
                recomputed = a.shallowness.shallow;
            } else if (s.tag == steps::kTreeSpecification) {
                recomputed = a.tree_specification;
            } else if (s.tag == steps::kGroundWitness) {
                recomputed = a.exhaustive.status == TriBool::No && a.exhaustive.witness &&
                             ground_instance(sys->signature(), a.exhaustive.witness).has_value();
            } else if (s.tag == steps::kCanonicalInclusion ||
                       s.tag == steps::kProductivityInclusion) {
                if (!check_inclusion_step(s, sys->signature(), why)) return false;
                premise = false;
            } else if (s.tag == steps::kTerminating) {
                if (!switched) {
                    premise = false;
                } else {
                    if (!v.termination || v.termination->status != TerminationStatus::Proved ||
                        !v.termination->certificate)
                        return fail(why, "terminating step without a certificate");
                    const CertCheck cc =
                        check_certificate(*sys, *v.used_map, *v.termination->certificate);
                    if (!cc.ok) return fail(why, "certificate re-check failed: " + cc.reason);
                    premise = false;
                }
            } else if (s.tag == steps::kNonterminating) {
                if (!switched) {
                    premise = false;
                } else {
                    if (!v.termination || v.termination->status != TerminationStatus::Disproved ||
                        !v.termination->loop)
                        return fail(why, "nonterminating step without a loop");
                    std::string rwhy;
                    if (!replay_loop(*sys, *v.used_map, *v.termination->loop, &rwhy))
                        return fail(why, "loop replay failed: " + rwhy);
                    premise = false;
                }
            } else {
                premise = false;
            }
            if (premise && recomputed != s.holds)
                return fail(why, "step '" + s.tag + "' does not re-check");
        }

        if (v.answer == Answer::Unknown) return true;
        if (v.chain.empty()) return fail(why, "definite answer with an empty chain");
        const JustificationStep& last = v.chain.back();
        if (!last.holds) return fail(why, "definite answer concluded by a failed step");
        const std::string& tag = last.tag;
        const bool by_termination = tag == steps::kNormalizationFromTermination ||
                                    tag == steps::kProductivityFromTermination;
        const bool by_character = tag == steps::kShallowCharacterization ||
                                  tag == steps::kCompatibleCharacterization;
        if (v.answer == Answer::Yes) {
            if (!by_termination && !by_character)
                return fail(why, "yes-answer concluded by '" + tag + "'");
            if (!v.termination || v.termination->status != TerminationStatus::Proved)
                return fail(why, "yes-answer without a proved termination result");
            return true;
        }
        if (tag == steps::kMissingPatternRefutes) {
            const AnalysisReport ar = analyze(*concluded);
            if (ar.exhaustive.status != TriBool::No || !ar.exhaustive.witness ||
                !ground_instance(concluded->signature(), ar.exhaustive.witness))
                return fail(why, "missing-pattern refutation does not re-check");
            return true;
        }
        if (tag == steps::kCanonicalLoopRefutes || by_character) {
            if (!v.termination || v.termination->status != TerminationStatus::Disproved)
                return fail(why, "no-answer without a disproved termination result");
            return true;
        }
        return fail(why, "no-answer concluded by '" + tag + "'");
    } catch (const Error& e) {
        return fail(why, std::string("verdict replay threw: ") + e.what());
    }
}

}  // namespace csr
