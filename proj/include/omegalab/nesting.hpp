#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/enumeration.hpp"
#include "omegalab/interval.hpp"
#include "omegalab/rational.hpp"

namespace omegalab {

// One refinement step: the next interval (a, b) plus the positions in the
// enumeration at which its endpoints were found.
struct NestStep {
    Rational a, b;
    std::uint64_t idx_a = 0, idx_b = 0;
};

enum class ScanMode {
    Restart,   // every pass rescans the sequence from position 1
    Frontier,  // passes resume after the latest hit; provably the same trace
};

enum class Termination {
    BudgetExhausted,    // ran out of scan budget mid-pass
    SequenceExhausted,  // a finite sequence ended with < 2 elements inside
};

struct NestingTrace {
    std::string enum_id;
    OpenInterval base;
    ScanMode mode = ScanMode::Restart;
    std::uint64_t budget = 0;
    std::uint64_t budget_used = 0;  // elements examined across all passes
    std::vector<NestStep> steps;
    Termination termination = Termination::BudgetExhausted;

    // Populated on SequenceExhausted: the interval that could not be refined,
    // the at-most-one sequence element inside it, and a witness value in the
    // interval that differs from every element of the sequence.
    std::optional<std::pair<std::uint64_t, Rational>> remaining;
    std::optional<Rational> eta;

    OpenInterval last_interval() const {
        return steps.empty() ? base : OpenInterval(steps.back().a, steps.back().b);
    }
};

// Repeatedly scans the sequence for the first two elements strictly inside the
// current interval and shrinks to the open interval they span.  The budget
// bounds the total number of elements examined.
NestingTrace run_nesting(const Enumeration& seq, const OpenInterval& base,
                         std::uint64_t budget, ScanMode mode = ScanMode::Restart);

struct IndexViolation {
    std::uint64_t step = 0;      // 1-based step number n
    char endpoint = 'a';         // which endpoint broke the bound
    std::uint64_t index = 0;     // offending enumeration position
};

// Defining property of the construction: the endpoints of step n were found at
// positions >= n.  Returns all violations (empty on honest traces).
std::vector<IndexViolation> check_defining_index(const NestingTrace& trace);

struct ExclusionViolation {
    std::uint64_t element = 0;  // v: position in the enumeration
    std::uint64_t step = 0;     // j >= v: step whose interval still contains it
};

// For every v <= prefix, element v must lie outside every interval from step v
// onward.  Returns all violations (empty on honest traces).
std::vector<ExclusionViolation> check_exclusion(const NestingTrace& trace, const Enumeration& seq,
                                                std::uint64_t prefix);

struct GapInfo {
    std::string side;         // "left" or "right"
    std::uint64_t ordinal;    // 0 = outermost gap on that side
    Rational lo, hi;
    // Prefix elements strictly inside the gap that are not endpoints of any step.
    std::vector<std::pair<std::uint64_t, Rational>> occupants;
    // A value in the gap, of denominator <= the requested bound, that is not
    // among the scanned prefix (if one exists).
    std::optional<Rational> eta_candidate;
};

struct GapReport {
    bool enough_steps = false;  // needs >= 2 steps to have interior gaps
    std::string note;
    std::vector<GapInfo> gaps;
};

// Examines the gaps (a, a1), (a_i, a_{i+1}) on the left and (b_{i+1}, b_i),
// (b_1, b) on the right against the first `prefix` elements of the sequence.
GapReport gap_occupancy(const NestingTrace& trace, const Enumeration& seq,
                        std::uint64_t prefix, std::uint64_t denominator_bound);

struct EpilogResult {
    Rational x;    // running minimum after the scan (starts at b)
    Rational eta;  // (a + x) / 2
    std::vector<std::pair<std::uint64_t, Rational>> updates;  // positions where x dropped
    std::uint64_t scanned = 0;
};

// Single monotone pass: x starts at b and drops to every prefix element found
// inside (a, x).  The midpoint of (a, x) then differs from all scanned
// elements inside the interval.
EpilogResult epilog_scan(const Enumeration& seq, const OpenInterval& base, std::uint64_t prefix);

enum class ProbeStatus {
    Falsified,             // a finite counterexample was exhibited
    NotFalsifiedAtBudget,  // consistent with the data up to the budget
    Undecidable,           // cannot be settled by any finite scan
};

struct ConditionReport {
    int condition = 0;  // 1..4, see below
    ProbeStatus status = ProbeStatus::Undecidable;
    std::string note;
    std::vector<std::pair<std::string, std::string>> evidence;  // key, value
};

const char* probe_status_name(ProbeStatus s);

// Probes four conditions against a bounded run on (a, b):
//   1. the refinement never stalls (two fresh elements always appear);
//   2. the interval widths shrink to zero;
//   3. the nested intersection is a single point;
//   4. every gap beside the limit point is eventually occupied.
// 1 is falsifiable by exhaustion; 2 and 3 are undecidable from finite data
// (reported with the bracket reached and an indicative period probe); 4 is
// checked relative to the scanned prefix only.
std::vector<ConditionReport> condition_probe(const Enumeration& seq, const OpenInterval& base,
                                             std::uint64_t budget,
                                             std::uint64_t denominator_bound = 64);

}  // namespace omegalab
