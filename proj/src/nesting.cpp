#include "omegalab/nesting.hpp"

#include <algorithm>
#include <set>

#include "omegalab/digits.hpp"

namespace omegalab {

NestingTrace run_nesting(const Enumeration& seq, const OpenInterval& base,
                         std::uint64_t budget, ScanMode mode) {
    if (budget == 0) throw std::domain_error("run_nesting: budget must be positive");
    NestingTrace trace{seq.id(), base, mode, budget, 0, {}, Termination::BudgetExhausted, {}, {}};
    const auto seq_size = seq.size();

    OpenInterval cur = base;
    std::uint64_t resume = 1;  // Frontier mode: first unexamined position

    while (true) {
        std::uint64_t i = (mode == ScanMode::Frontier) ? resume : 1;
        std::optional<std::pair<Rational, std::uint64_t>> first, second;
        bool exhausted_sequence = false;

        for (;; ++i) {
            if (seq_size && i > *seq_size) {
                exhausted_sequence = true;
                break;
            }
            if (trace.budget_used >= budget) break;  // out of budget mid-pass
            ++trace.budget_used;
            Rational v = seq.nth(i);
            if (!cur.contains(v)) continue;
            if (!first) {
                first = {std::move(v), i};
            } else {
                second = {std::move(v), i};
                ++i;
                break;
            }
        }

        if (second) {
            const auto& [v1, i1] = *first;
            const auto& [v2, i2] = *second;
            NestStep step;
            if (v1 < v2) step = {v1, v2, i1, i2};
            else step = {v2, v1, i2, i1};
            cur = OpenInterval(step.a, step.b);
            trace.steps.push_back(std::move(step));
            resume = i;  // past the second hit; earlier elements cannot re-enter
            continue;
        }

        if (exhausted_sequence) {
            trace.termination = Termination::SequenceExhausted;
            if (first) trace.remaining = {first->second, first->first};
            Rational eta = cur.midpoint();
            if (trace.remaining && eta == trace.remaining->second)
                eta = midpoint(cur.lo(), eta);  // midpoint of the left half
            trace.eta = std::move(eta);
        } else {
            trace.termination = Termination::BudgetExhausted;
        }
        return trace;
    }
}

std::vector<IndexViolation> check_defining_index(const NestingTrace& trace) {
    std::vector<IndexViolation> out;
    for (std::size_t n = 1; n <= trace.steps.size(); ++n) {
        const NestStep& s = trace.steps[n - 1];
        if (s.idx_a < n) out.push_back({n, 'a', s.idx_a});
        if (s.idx_b < n) out.push_back({n, 'b', s.idx_b});
    }
    return out;
}

std::vector<ExclusionViolation> check_exclusion(const NestingTrace& trace, const Enumeration& seq,
                                                std::uint64_t prefix) {
    std::vector<ExclusionViolation> out;
    std::uint64_t limit = std::min<std::uint64_t>(prefix, trace.steps.size());
    if (auto n = seq.size()) limit = std::min<std::uint64_t>(limit, *n);
    for (std::uint64_t v = 1; v <= limit; ++v) {
        Rational elem = seq.nth(v);
        for (std::uint64_t j = v; j <= trace.steps.size(); ++j) {
            const NestStep& s = trace.steps[j - 1];
            if (s.a < elem && elem < s.b) out.push_back({v, j});
        }
    }
    return out;
}

namespace {

// First value lo < n/d < hi with d <= bound that is not in `banned`; scans
// denominators ascending, numerators ascending, skipping non-reduced pairs
// (those equal a value already visited at a smaller denominator).
std::optional<Rational> gap_candidate(const Rational& lo, const Rational& hi,
                                      std::uint64_t bound, const std::set<std::string>& banned) {
    for (std::uint64_t d = 1; d <= bound; ++d) {
        Integer dz(static_cast<unsigned long>(d));
        // smallest n with n/d > lo:   n = floor(lo * d) + 1
        Integer n_lo;
        {
            Integer t = lo.num() * dz;
            mpz_fdiv_q(n_lo.get_mpz_t(), t.get_mpz_t(), lo.den().get_mpz_t());
            n_lo += 1;
        }
        for (Integer n = n_lo;; n += 1) {
            Rational cand(n, dz);
            if (!(cand < hi)) break;
            if (!(lo < cand)) continue;
            if (cand.den() != dz) continue;  // non-reduced; seen at smaller d
            if (!banned.contains(cand.str())) return cand;
        }
    }
    return std::nullopt;
}

}  // namespace

GapReport gap_occupancy(const NestingTrace& trace, const Enumeration& seq,
                        std::uint64_t prefix, std::uint64_t denominator_bound) {
    GapReport report;
    const auto& steps = trace.steps;
    if (steps.size() < 2) {
        report.note = "need at least two steps to form interior gaps";
        return report;
    }
    report.enough_steps = true;

    // Endpoint set: base endpoints and every recorded a_i, b_i.
    std::set<std::string> endpoints{trace.base.lo().str(), trace.base.hi().str()};
    for (const auto& s : steps) {
        endpoints.insert(s.a.str());
        endpoints.insert(s.b.str());
    }

    std::uint64_t limit = prefix;
    if (auto n = seq.size()) limit = std::min<std::uint64_t>(limit, *n);
    std::vector<std::pair<std::uint64_t, Rational>> prefix_vals;
    std::set<std::string> prefix_set;
    for (std::uint64_t v = 1; v <= limit; ++v) {
        Rational elem = seq.nth(v);
        prefix_set.insert(elem.str());
        prefix_vals.emplace_back(v, std::move(elem));
    }

    auto add_gap = [&](std::string side, std::uint64_t ordinal, const Rational& lo, const Rational& hi) {
        if (!(lo < hi)) return;  // degenerate gap (repeated endpoint)
        GapInfo g{std::move(side), ordinal, lo, hi, {}, {}};
        for (const auto& [v, elem] : prefix_vals)
            if (lo < elem && elem < hi && !endpoints.contains(elem.str()))
                g.occupants.emplace_back(v, elem);
        g.eta_candidate = gap_candidate(lo, hi, denominator_bound, prefix_set);
        report.gaps.push_back(std::move(g));
    };

    add_gap("left", 0, trace.base.lo(), steps[0].a);
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        add_gap("left", i + 1, steps[i].a, steps[i + 1].a);
    add_gap("right", 0, steps[0].b, trace.base.hi());
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        add_gap("right", i + 1, steps[i + 1].b, steps[i].b);
    return report;
}

EpilogResult epilog_scan(const Enumeration& seq, const OpenInterval& base, std::uint64_t prefix) {
    EpilogResult res{base.hi(), base.midpoint(), {}, 0};
    std::uint64_t limit = prefix;
    if (auto n = seq.size()) limit = std::min<std::uint64_t>(limit, *n);
    for (std::uint64_t i = 1; i <= limit; ++i) {
        ++res.scanned;
        Rational v = seq.nth(i);
        if (base.lo() < v && v < res.x) {
            res.x = v;
            res.updates.emplace_back(i, std::move(v));
        }
    }
    res.eta = midpoint(base.lo(), res.x);
    return res;
}

const char* probe_status_name(ProbeStatus s) {
    switch (s) {
        case ProbeStatus::Falsified: return "falsified";
        case ProbeStatus::NotFalsifiedAtBudget: return "not-falsified-at-budget";
        case ProbeStatus::Undecidable: return "undecidable-from-finite-data";
    }
    return "?";
}

namespace {

// Indicative only: decimal shape of an endpoint, as preperiod/period lengths.
std::string period_shape(const Rational& r) {
    if (r.sign() < 0) return "negative";
    DecimalExpansion e = decimal_expansion(r);
    return "int=" + e.int_part.get_str() + " pre_len=" + std::to_string(e.preperiod.size()) +
           " per_len=" + std::to_string(e.period.size());
}

}  // namespace

std::vector<ConditionReport> condition_probe(const Enumeration& seq, const OpenInterval& base,
                                             std::uint64_t budget, std::uint64_t denominator_bound) {
    NestingTrace trace = run_nesting(seq, base, budget, ScanMode::Restart);
    std::vector<ConditionReport> out;

    {
        ConditionReport r;
        r.condition = 1;
        if (trace.termination == Termination::SequenceExhausted) {
            r.status = ProbeStatus::Falsified;
            r.note = "refinement stalled: the sequence ran out with at most one element inside";
            r.evidence.emplace_back("steps", std::to_string(trace.steps.size()));
            r.evidence.emplace_back("last_interval", trace.last_interval().str());
            if (trace.eta) r.evidence.emplace_back("witness", trace.eta->str());
            if (trace.remaining) {
                r.evidence.emplace_back("remaining_index", std::to_string(trace.remaining->first));
                r.evidence.emplace_back("remaining_value", trace.remaining->second.str());
            }
        } else {
            r.status = ProbeStatus::NotFalsifiedAtBudget;
            r.note = "every pass within budget found two fresh elements";
            r.evidence.emplace_back("steps", std::to_string(trace.steps.size()));
            r.evidence.emplace_back("budget_used", std::to_string(trace.budget_used));
        }
        out.push_back(std::move(r));
    }

    const OpenInterval last = trace.last_interval();
    for (int cond : {2, 3}) {
        ConditionReport r;
        r.condition = cond;
        r.status = ProbeStatus::Undecidable;
        r.note = cond == 2 ? "width convergence cannot be settled by a finite scan"
                           : "singleton intersection cannot be settled by a finite scan";
        r.evidence.emplace_back("bracket", last.str());
        r.evidence.emplace_back("width", last.width().str());
        r.evidence.emplace_back("steps", std::to_string(trace.steps.size()));
        r.evidence.emplace_back("heuristic_lo", period_shape(last.lo()));
        r.evidence.emplace_back("heuristic_hi", period_shape(last.hi()));
        out.push_back(std::move(r));
    }

    {
        ConditionReport r;
        r.condition = 4;
        // Occupancy relative to the scanned prefix; a clean report never rules
        // out later occupation, so the verdict stays prefix-relative.
        GapReport gaps = gap_occupancy(trace, seq, std::min<std::uint64_t>(budget, 4096),
                                       denominator_bound);
        std::size_t occupied = 0;
        for (const auto& g : gaps.gaps) {
            if (g.occupants.empty()) continue;
            ++occupied;
            if (r.evidence.size() < 8) {
                r.evidence.emplace_back("gap[" + g.side + ":" + std::to_string(g.ordinal) + "]",
                                        "(" + g.lo.str() + ", " + g.hi.str() + ") occupant " +
                                            g.occupants.front().second.str() + " at index " +
                                            std::to_string(g.occupants.front().first));
            }
        }
        if (!gaps.enough_steps) {
            r.status = ProbeStatus::Undecidable;
            r.note = gaps.note;
        } else if (occupied > 0) {
            r.status = ProbeStatus::Falsified;
            r.note = "gap occupied by a non-endpoint prefix element (prefix-relative verdict)";
        } else {
            r.status = ProbeStatus::NotFalsifiedAtBudget;
            r.note = "no scanned prefix element strayed into a gap (prefix-relative verdict)";
        }
        r.evidence.emplace_back("gaps_examined", std::to_string(gaps.gaps.size()));
        r.evidence.emplace_back("occupied", std::to_string(occupied));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace omegalab
