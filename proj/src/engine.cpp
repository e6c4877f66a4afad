#include "csr/engine.hpp"

#include <algorithm>

namespace csr {

std::string Trace::to_text() const {
    std::string out = initial->to_string();
    for (const auto& s : steps) {
        out += '\n';
        out += s.pos.to_string();
        out += ' ';
        out += s.label;
        out += ' ';
        out += s.after->to_string();
    }
    return out;
}

std::vector<RedexOccurrence> mu_redexes(const TermPtr& t, const Trs& R, const ReplacementMap& mu) {
    std::vector<Position> open = replacing_positions(t, mu);
    std::sort(open.begin(), open.end(), postorder_less);
    std::vector<RedexOccurrence> out;
    for (const Position& p : open) {
        const TermPtr sub = subterm_at(t, p);
        if (sub->is_var()) continue;
        for (const Rule& r : R.rules()) {
            if (auto m = match(r.lhs, sub)) {
                out.push_back(RedexOccurrence{p, &r, std::move(*m)});
            }
        }
    }
    return out;
}

bool is_mu_normal_form(const TermPtr& t, const Trs& R, const ReplacementMap& mu) {
    return mu_redexes(t, R, mu).empty();
}

TermPtr apply_redex(const TermPtr& t, const RedexOccurrence& redex) {
    return replace_at(t, redex.pos, redex.matcher.apply(redex.rule->rhs));
}

std::optional<StepRecord> step(const TermPtr& t, const Trs& R, const ReplacementMap& mu,
                               RedexChoice choice) {
    std::vector<RedexOccurrence> redexes = mu_redexes(t, R, mu);
    if (redexes.empty()) return std::nullopt;
    const RedexOccurrence* chosen = &redexes.front();
    if (choice == RedexChoice::LeftmostOutermost) {
        for (const auto& r : redexes) {
            if (preorder_less(r.pos, chosen->pos)) chosen = &r;
        }
    }
    return StepRecord{chosen->pos, chosen->rule->label, apply_redex(t, *chosen)};
}

Trace normalize(const TermPtr& t, const Trs& R, const ReplacementMap& mu,
                const NormalizeOptions& opts) {
    Trace trace;
    trace.initial = t;
    trace.choice = opts.choice;
    TermPtr cur = t;
    for (;;) {
        if (static_cast<long>(trace.steps.size()) >= opts.fuel) {
            trace.reason = is_mu_normal_form(cur, R, mu) ? StopReason::NormalForm
                                                         : StopReason::FuelExhausted;
            return trace;
        }
        auto s = step(cur, R, mu, opts.choice);
        if (!s) {
            trace.reason = StopReason::NormalForm;
            return trace;
        }
        cur = s->after;
        trace.steps.push_back(std::move(*s));
        if (cur->size() > opts.max_term_size) {
            trace.reason = StopReason::SizeLimit;
            return trace;
        }
    }
}

}  // namespace csr
