#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/digits.hpp"
#include "omegalab/enumeration.hpp"

namespace omegalab {

// Recipe for the interleaved digit table: odd rows 2n-1 take the n-th element
// of a rational enumeration restricted to (0, 1); even rows 2n take the n-th
// member of a non-periodic stream family.
struct TableSpec {
    std::string g_spec = "calkin-wilf";  // enumeration spec (window applied automatically)
    std::string h_family = "seeded:1";   // "sqrt" | "champernowne" | "seeded:<seed>"

    StreamPtr h_member(std::uint64_t m) const;  // m >= 1
};

enum class PermuteMode { StrictWindow, Synthesis };

struct TieBreak {
    enum class Kind { First, Seeded };
    Kind kind = Kind::First;
    std::uint64_t seed = 0;

    static TieBreak first() { return {Kind::First, 0}; }
    static TieBreak seeded(std::uint64_t seed) { return {Kind::Seeded, seed}; }
};

// A row synthesized at pass position i: 0.00...0 d 1^ones (then zeros), with
// d = i mod 10 at digit i.  Encodes exactly how to rebuild the stream.
struct SynthRecord {
    std::uint64_t position = 0;  // i
    std::uint64_t ones = 0;      // length of the trailing 1-run
};

struct SwapRecord {
    std::uint64_t i = 0;               // pass position needing repair
    std::optional<std::uint64_t> j;    // window partner (strictly > i)
    std::optional<SynthRecord> synth;  // synthesized replacement
};

struct EscapeRecord {
    std::uint64_t i = 0;  // position whose occupant left the window
    std::string row_id;   // identity of the escaped row
};

struct PermutationTrace {
    PermuteMode mode = PermuteMode::StrictWindow;
    TieBreak tie;
    std::uint64_t window = 0;
    std::vector<SwapRecord> swaps;
    std::vector<std::uint64_t> failures;  // strict mode: unmatched positions
    std::vector<EscapeRecord> escapes;    // synthesis mode: displaced rows
};

class DigitTable;
struct PermuteResult;

// One left-to-right pass making row i i-modular for every i: prefer a partner
// below in the window (tie break as configured); in synthesis mode a missing
// partner is replaced by a synthesized row and the occupant escapes.
PermuteResult permute_dmodular(const DigitTable& table, PermuteMode mode,
                               TieBreak tie = TieBreak::first());

// Applies a recorded trace to a table; must reproduce the permuted window
// exactly (internal_error otherwise).
DigitTable replay_trace(const DigitTable& table, const PermutationTrace& trace);

// A finite window of rows of the interleaved table.  Rows are shared,
// immutable digit streams; duplicates are rejected at build time via a
// 64-digit probe.
class DigitTable {
  public:
    static DigitTable build(const TableSpec& spec, std::uint64_t window);
    static DigitTable from_rows(std::vector<StreamPtr> rows);  // for hand-built tables

    std::uint64_t window() const { return rows_.size(); }
    const StreamPtr& row(std::uint64_t i) const;  // 1-based
    const std::vector<StreamPtr>& rows() const { return rows_; }

    std::string dump(std::uint64_t digit_count = 64) const;

  private:
    explicit DigitTable(std::vector<StreamPtr> rows) : rows_(std::move(rows)) {}
    // Engine outputs are distinct by construction and skip the probe (deep
    // synthesized rows intentionally share long zero prefixes).
    friend PermuteResult permute_dmodular(const DigitTable&, PermuteMode, TieBreak);
    friend DigitTable replay_trace(const DigitTable&, const PermutationTrace&);

    std::vector<StreamPtr> rows_;
};

struct PermuteResult {
    DigitTable table;
    PermutationTrace trace;
};

// First n diagonal digits: digit k of row k.
std::string diagonal(const DigitTable& table, std::uint64_t n);

// Digit remap for antidiagonals.  Sound rules move every digit and never
// produce 9, so no all-nines tail can arise.
struct AntidiagonalRule {
    std::array<int, 10> map;

    static AntidiagonalRule standard();  // d -> 5 except 5 -> 4
    void validate() const;
};

std::string antidiagonal(const DigitTable& table, std::uint64_t n,
                         const AntidiagonalRule& rule = AntidiagonalRule::standard());

// True iff digit n of the stream equals n mod 10.
bool is_n_modular(const DigitStream& s, std::uint64_t n);

// Terminating values prefix + 1, prefix + 11, ...: k members with 1-runs of
// length 1..k appended to the digit prefix.
std::vector<Rational> modular_family(const std::string& prefix_digits, std::uint64_t k);

// n-th member of the displaced-value family: preperiod 0123456789 repeated n
// times, period 45.
Rational antidiagonal_family(std::uint64_t n);
StreamPtr antidiagonal_family_stream(std::uint64_t n);

// Number of length-L digit blocks, as periods, that avoid a fixed digit: 9^L.
// L is capped at 18 so the count fits in 64 bits.
std::uint64_t count_avoiding_periods(unsigned length);

struct DisplacementEntry {
    std::uint64_t window = 0;
    std::optional<std::uint64_t> initial;  // row position before the pass
    std::optional<std::uint64_t> final;    // row position after; nullopt = escaped
    bool absent = false;                   // never entered the window
};

// Tracks where a target rational sits before and after the synthesis pass for
// each window size.
std::vector<DisplacementEntry> displacement_track(const Rational& target, const TableSpec& spec,
                                                  const std::vector<std::uint64_t>& windows);

}  // namespace omegalab
