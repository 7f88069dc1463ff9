#include "omegalab/table.hpp"

#include <algorithm>
#include <unordered_map>

namespace omegalab {
namespace {

constexpr std::uint64_t kProbeDigits = 64;

// Terminating row synthesized by the permutation pass: zeros except digit
// `pos` = pos mod 10 and a run of `ones` ones right after it.  Closed-form
// digits keep deep positions cheap; the exact value exists via from_period.
class SynthStream final : public DigitStream {
  public:
    SynthStream(std::uint64_t pos, std::uint64_t ones) : pos_(pos), ones_(ones) {}

    int digit_at(std::uint64_t n) const override {
        if (n == 0) throw std::domain_error("digit_at: positions are 1-based");
        if (n == pos_) return static_cast<int>(pos_ % 10);
        if (n > pos_ && n <= pos_ + ones_) return 1;
        return 0;
    }
    Kind kind() const override { return Kind::EventuallyPeriodic; }
    std::string id() const override {
        return "synthetic:pos=" + std::to_string(pos_) + ",ones=" + std::to_string(ones_);
    }

    std::uint64_t pos() const { return pos_; }
    std::uint64_t ones() const { return ones_; }

  private:
    std::uint64_t pos_, ones_;
};

// True when a and b agree on digits 1..limit; early exit on the first
// difference makes typical calls O(1).
bool agree_upto(const DigitStream& a, const DigitStream& b, std::uint64_t limit) {
    for (std::uint64_t n = 1; n <= limit; ++n)
        if (a.digit_at(n) != b.digit_at(n)) return false;
    return true;
}

// Digits that certify a synthesized candidate (preperiod length pre_len,
// terminating) differs from `other`: exact for eventually periodic rows, a
// generous probe beyond the preperiod otherwise.
std::uint64_t distinctness_horizon(std::uint64_t pre_len, const DigitStream& other) {
    if (other.kind() == DigitStream::Kind::EventuallyPeriodic) {
        if (auto p = dynamic_cast<const PeriodicStream*>(&other))
            return std::max<std::uint64_t>(pre_len, p->preperiod().size()) + p->period().size();
        if (auto s = dynamic_cast<const SynthStream*>(&other))
            return std::max<std::uint64_t>(pre_len, s->pos() + s->ones()) + 1;
    }
    return std::max<std::uint64_t>(kProbeDigits, pre_len + kProbeDigits);
}

}  // namespace

StreamPtr TableSpec::h_member(std::uint64_t m) const {
    if (m == 0) throw std::domain_error("table: family members are 1-based");
    if (h_family == "sqrt") return std::make_shared<SqrtStream>(nth_nonsquare(m));
    if (h_family == "champernowne") return std::make_shared<ChampernowneStream>(m);
    if (h_family.rfind("seeded:", 0) == 0) {
        std::uint64_t base = std::stoull(h_family.substr(7));
        return std::make_shared<SeededStream>(splitmix64(base ^ (m * 0x9E3779B97F4A7C15ull)));
    }
    throw std::domain_error("table: unknown stream family '" + h_family + "'");
}

DigitTable DigitTable::build(const TableSpec& spec, std::uint64_t window) {
    if (window == 0) throw std::domain_error("table: window must be positive");
    auto g = std::make_shared<WindowAdapter>(parse_enumeration(spec.g_spec),
                                             OpenInterval(Rational(0), Rational(1)));
    std::vector<StreamPtr> rows;
    rows.reserve(window);
    for (std::uint64_t i = 1; i <= window; ++i) {
        std::uint64_t m = (i + 1) / 2;
        if (i % 2 == 1) rows.push_back(to_digit_stream(g->nth(m)));
        else rows.push_back(spec.h_member(m));
    }
    DigitTable t(std::move(rows));
    // Reject windows that collide on the probe prefix: such a table has no
    // observable row distinction at probe fidelity.
    std::unordered_map<std::string, std::uint64_t> seen;
    for (std::uint64_t i = 1; i <= t.window(); ++i) {
        auto [it, fresh] = seen.emplace(t.row(i)->digits_prefix(kProbeDigits), i);
        if (!fresh)
            throw std::domain_error("table: rows " + std::to_string(it->second) + " and " +
                                    std::to_string(i) + " collide on a 64-digit probe");
    }
    return t;
}

DigitTable DigitTable::from_rows(std::vector<StreamPtr> rows) {
    for (const auto& r : rows)
        if (!r) throw std::domain_error("table: null row");
    std::unordered_map<std::string, std::uint64_t> seen;
    for (std::uint64_t i = 0; i < rows.size(); ++i) {
        auto [it, fresh] = seen.emplace(rows[i]->digits_prefix(kProbeDigits), i + 1);
        if (!fresh)
            throw std::domain_error("table: rows " + std::to_string(it->second) + " and " +
                                    std::to_string(i + 1) + " collide on a 64-digit probe");
    }
    return DigitTable(std::move(rows));
}

const StreamPtr& DigitTable::row(std::uint64_t i) const {
    if (i == 0 || i > rows_.size())
        throw out_of_domain("table: row " + std::to_string(i) + " outside window of " +
                                std::to_string(rows_.size()));
    return rows_[i - 1];
}

std::string DigitTable::dump(std::uint64_t digit_count) const {
    std::string out;
    for (std::uint64_t i = 1; i <= window(); ++i) {
        const auto& r = row(i);
        out += std::to_string(i);
        out += ' ';
        out += kind_name(r->kind());
        out += ' ';
        out += r->digits_prefix(digit_count);
        out += ' ';
        out += r->id();
        out += '\n';
    }
    return out;
}

std::string diagonal(const DigitTable& table, std::uint64_t n) {
    if (n > table.window())
        throw out_of_domain("diagonal: length exceeds the table window");
    std::string out;
    out.reserve(n);
    for (std::uint64_t k = 1; k <= n; ++k)
        out.push_back(static_cast<char>('0' + table.row(k)->digit_at(k)));
    return out;
}

AntidiagonalRule AntidiagonalRule::standard() {
    AntidiagonalRule r;
    r.map.fill(5);
    r.map[5] = 4;
    return r;
}

void AntidiagonalRule::validate() const {
    for (int d = 0; d < 10; ++d) {
        if (map[d] < 0 || map[d] > 9)
            throw std::domain_error("antidiagonal: rule image must be a digit");
        if (map[d] == d)
            throw std::domain_error("antidiagonal: rule fixes digit " + std::to_string(d));
        if (map[d] == 9)
            throw std::domain_error("antidiagonal: rule may not produce 9 (nine-tail hazard)");
    }
}

std::string antidiagonal(const DigitTable& table, std::uint64_t n, const AntidiagonalRule& rule) {
    rule.validate();
    std::string diag = diagonal(table, n);
    for (char& c : diag) c = static_cast<char>('0' + rule.map[c - '0']);
    return diag;
}

bool is_n_modular(const DigitStream& s, std::uint64_t n) {
    if (n == 0) throw std::domain_error("is_n_modular: positions are 1-based");
    return s.digit_at(n) == static_cast<int>(n % 10);
}

std::vector<Rational> modular_family(const std::string& prefix_digits, std::uint64_t k) {
    if (prefix_digits.empty())
        throw std::domain_error("modular_family: empty digit prefix");
    if (!std::all_of(prefix_digits.begin(), prefix_digits.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
        throw std::domain_error("modular_family: non-digit character in prefix");
    if (k == 0) throw std::domain_error("modular_family: need at least one member");
    std::vector<Rational> out;
    out.reserve(k);
    std::string pre = prefix_digits;
    for (std::uint64_t i = 1; i <= k; ++i) {
        pre.push_back('1');
        out.push_back(from_period(pre, "0"));
    }
    return out;
}

namespace {

StreamPtr synthesize_row(const std::vector<StreamPtr>& rows, std::uint64_t i) {
    // Smallest 1-run making the candidate provably distinct from every row
    // currently in the window.
    for (std::uint64_t ones = 1;; ++ones) {
        auto cand = std::make_shared<SynthStream>(i, ones);
        bool clash = false;
        for (const auto& r : rows) {
            if (agree_upto(*cand, *r, distinctness_horizon(i + ones, *r))) {
                clash = true;
                break;
            }
        }
        if (!clash) return cand;
    }
}

}  // namespace

PermuteResult permute_dmodular(const DigitTable& table, PermuteMode mode, TieBreak tie) {
    std::vector<StreamPtr> rows = table.rows();
    const std::uint64_t n = rows.size();
    PermutationTrace trace{mode, tie, n, {}, {}, {}};

    for (std::uint64_t i = 1; i <= n; ++i) {
        const int want = static_cast<int>(i % 10);
        if (rows[i - 1]->digit_at(i) == want) continue;

        std::optional<std::uint64_t> partner;
        if (tie.kind == TieBreak::Kind::First) {
            for (std::uint64_t j = i + 1; j <= n; ++j)
                if (rows[j - 1]->digit_at(i) == want) { partner = j; break; }
        } else {
            // Deterministic choice among the first 16 matches below i.
            std::vector<std::uint64_t> hits;
            for (std::uint64_t j = i + 1; j <= n && hits.size() < 16; ++j)
                if (rows[j - 1]->digit_at(i) == want) hits.push_back(j);
            if (!hits.empty())
                partner = hits[splitmix64(tie.seed ^ (i * 0xD1B54A32D192ED03ull)) % hits.size()];
        }

        if (partner) {
            std::swap(rows[i - 1], rows[*partner - 1]);
            trace.swaps.push_back({i, partner, std::nullopt});
            continue;
        }
        if (mode == PermuteMode::StrictWindow) {
            trace.failures.push_back(i);
            continue;
        }
        StreamPtr synth = synthesize_row(rows, i);
        const auto* s = static_cast<const SynthStream*>(synth.get());
        trace.escapes.push_back({i, rows[i - 1]->id()});
        trace.swaps.push_back({i, std::nullopt, SynthRecord{s->pos(), s->ones()}});
        rows[i - 1] = std::move(synth);
    }

    // Engine invariant: in synthesis mode the pass leaves every row modular.
    if (mode == PermuteMode::Synthesis)
        for (std::uint64_t i = 1; i <= n; ++i)
            if (!is_n_modular(*rows[i - 1], i))
                throw internal_error("permute: row " + std::to_string(i) + " not modular after pass");

    return PermuteResult{DigitTable(std::move(rows)), std::move(trace)};
}

DigitTable replay_trace(const DigitTable& table, const PermutationTrace& trace) {
    if (trace.window != table.window())
        throw std::domain_error("replay: trace window does not match table");
    std::vector<StreamPtr> rows = table.rows();
    for (const auto& sw : trace.swaps) {
        if (sw.i == 0 || sw.i > rows.size())
            throw std::domain_error("replay: swap position outside window");
        if (sw.j) {
            if (*sw.j <= sw.i || *sw.j > rows.size())
                throw std::domain_error("replay: partner must lie strictly below in the window");
            std::swap(rows[sw.i - 1], rows[*sw.j - 1]);
        } else if (sw.synth) {
            rows[sw.i - 1] = std::make_shared<SynthStream>(sw.synth->position, sw.synth->ones);
        } else {
            throw std::domain_error("replay: swap record carries neither partner nor synthesis");
        }
    }
    return DigitTable(std::move(rows));
}

StreamPtr antidiagonal_family_stream(std::uint64_t n) {
    if (n == 0) throw std::domain_error("antidiagonal_family: members are 1-based");
    std::string pre;
    pre.reserve(10 * n);
    for (std::uint64_t k = 0; k < n; ++k) pre += "0123456789";
    return std::make_shared<PeriodicStream>(0, std::move(pre), "45");
}

Rational antidiagonal_family(std::uint64_t n) {
    if (n == 0) throw std::domain_error("antidiagonal_family: members are 1-based");
    std::string pre;
    pre.reserve(10 * n);
    for (std::uint64_t k = 0; k < n; ++k) pre += "0123456789";
    return from_period(pre, "45");
}

std::uint64_t count_avoiding_periods(unsigned length) {
    if (length < 1 || length > 18)
        throw std::domain_error("count_avoiding_periods: length must lie in 1..18");
    std::uint64_t c = 1;
    for (unsigned i = 0; i < length; ++i) c *= 9;
    return c;
}

std::vector<DisplacementEntry> displacement_track(const Rational& target, const TableSpec& spec,
                                                  const std::vector<std::uint64_t>& windows) {
    std::vector<DisplacementEntry> out;
    const std::string target_id = target.str();
    for (std::uint64_t w : windows) {
        DisplacementEntry entry;
        entry.window = w;
        DigitTable table = DigitTable::build(spec, w);
        StreamPtr occupant;
        for (std::uint64_t i = 1; i <= w && !occupant; i += 2)  // rationals sit at odd rows
            if (table.row(i)->id() == target_id) {
                entry.initial = i;
                occupant = table.row(i);
            }
        if (!occupant) {
            entry.absent = true;
            out.push_back(std::move(entry));
            continue;
        }
        PermuteResult res = permute_dmodular(table, PermuteMode::Synthesis, TieBreak::first());
        for (std::uint64_t i = 1; i <= w; ++i)
            if (res.table.row(i).get() == occupant.get()) {
                entry.final = i;
                break;
            }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace omegalab
