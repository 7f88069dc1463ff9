#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "omegalab/rational.hpp"

namespace omegalab {

// An infinite decimal digit stream 0.d1 d2 d3 ... (plus an explicit integer
// part, so values like 1 = 1.(0) are representable).  Streams are immutable
// and shareable; digit_at is 1-based and addresses fractional digits only.
//
// Canonical form everywhere: no stream ever ends in an all-nines tail.
class DigitStream {
  public:
    enum class Kind { EventuallyPeriodic, RuleBased, Seeded };

    virtual ~DigitStream() = default;

    // n >= 1.  Returns the n-th fractional digit, in [0, 9].
    virtual int digit_at(std::uint64_t n) const = 0;
    virtual Kind kind() const = 0;

    // Stable textual identity: exact fraction for periodic streams, generator
    // descriptor otherwise.  Equal ids imply equal streams.
    virtual std::string id() const = 0;

    virtual Integer integer_part() const { return 0; }

    std::string digits_prefix(std::uint64_t count) const;
};

using StreamPtr = std::shared_ptr<const DigitStream>;

const char* kind_name(DigitStream::Kind k);

// Exact decimal shape of a non-negative rational: int_part.preperiod(period),
// with the period minimal and never all nines ("0" for terminating values).
struct DecimalExpansion {
    Integer int_part;
    std::string preperiod;
    std::string period;

    std::string str() const;  // e.g. "0.5(0)", "0.(21)", "2.1(6)"
};

// Long division with remainder-cycle detection.  r must be >= 0.
DecimalExpansion decimal_expansion(const Rational& r);

class PeriodicStream final : public DigitStream {
  public:
    // Validates digit content and rejects all-nines periods.
    PeriodicStream(Integer int_part, std::string preperiod, std::string period);

    int digit_at(std::uint64_t n) const override;
    Kind kind() const override { return Kind::EventuallyPeriodic; }
    std::string id() const override;
    Integer integer_part() const override { return int_part_; }

    const std::string& preperiod() const { return pre_; }
    const std::string& period() const { return per_; }

    // The exact rational value int_part + 0.pre(per).
    Rational value() const;

    std::string form() const { return expansion_.str(); }

  private:
    Integer int_part_;
    std::string pre_, per_;
    DecimalExpansion expansion_;
};

// Fractional digits of sqrt(k) for a non-square k >= 2 (a rule-based stream;
// digits are derived on demand from integer square roots and cached).
class SqrtStream final : public DigitStream {
  public:
    explicit SqrtStream(unsigned long k);

    int digit_at(std::uint64_t n) const override;
    Kind kind() const override { return Kind::RuleBased; }
    std::string id() const override { return "sqrt:" + std::to_string(k_); }

  private:
    unsigned long k_;
    mutable std::mutex mu_;
    mutable std::string cache_;
};

// Champernowne word 123456789101112... read from a 1-based offset.
class ChampernowneStream final : public DigitStream {
  public:
    explicit ChampernowneStream(std::uint64_t offset) : offset_(offset) {}

    int digit_at(std::uint64_t n) const override;
    Kind kind() const override { return Kind::RuleBased; }
    std::string id() const override { return "champernowne:" + std::to_string(offset_); }

  private:
    std::uint64_t offset_;
};

// Deterministic pseudorandom digits keyed by (seed, position).  Every 32nd
// position is forced below 9 so no tail can be all nines.
class SeededStream final : public DigitStream {
  public:
    explicit SeededStream(std::uint64_t seed) : seed_(seed) {}

    int digit_at(std::uint64_t n) const override;
    Kind kind() const override { return Kind::Seeded; }
    std::string id() const override { return "seeded:" + std::to_string(seed_); }

  private:
    std::uint64_t seed_;
};

// Decimal expansion of q as a stream; requires 0 < q <= 1.
std::shared_ptr<const PeriodicStream> to_digit_stream(const Rational& q);

// Inverse direction: exact value of int_part.preperiod(period).  Rejects
// empty or all-nines periods, non-digits, and a zero total value.
Rational from_period(const std::string& preperiod, const std::string& period,
                     const Integer& int_part = 0);

// Convenience wrapper with the n >= 1 precondition made explicit.
int digit_at(const DigitStream& s, std::uint64_t n);

// m-th positive non-square (m >= 1): 2, 3, 5, 6, 7, 8, 10, ...
unsigned long nth_nonsquare(std::uint64_t m);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace omegalab
