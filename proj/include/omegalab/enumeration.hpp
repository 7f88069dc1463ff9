#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/interval.hpp"
#include "omegalab/rational.hpp"

namespace omegalab {

// An injective sequence of rationals with 1-based positions.  Implementations
// memoize internally where needed and are safe to share across threads.
class Enumeration {
  public:
    virtual ~Enumeration() = default;

    // Requires 1 <= i <= size() when the sequence is finite.
    virtual Rational nth(std::uint64_t i) const = 0;

    // Count of elements, or nullopt when infinite.
    virtual std::optional<std::uint64_t> size() const { return std::nullopt; }

    // Position of q, searching at most `budget` elements.  Enumerations with a
    // closed-form inverse may answer beyond the budget.
    virtual std::optional<std::uint64_t> index_of(const Rational& q, std::uint64_t budget) const;

    virtual std::string id() const = 0;
};

using EnumPtr = std::shared_ptr<const Enumeration>;

// Calkin-Wilf order: 1/1, 1/2, 2/1, 1/3, 3/2, 2/3, 3/1, ...  Both directions
// are closed-form over the binary representation of the index.
class CalkinWilf final : public Enumeration {
  public:
    Rational nth(std::uint64_t i) const override;
    std::optional<std::uint64_t> index_of(const Rational& q, std::uint64_t budget) const override;
    std::string id() const override { return "calkin-wilf"; }
};

// Diagonal sweep of the p/q grid by p + q, alternating direction per
// antidiagonal, skipping non-reduced pairs: 1/1, 2/1, 1/2, 1/3, 3/1, 4/1, ...
class ZigZag final : public Enumeration {
  public:
    Rational nth(std::uint64_t i) const override;
    std::string id() const override { return "zigzag"; }

  private:
    void extend(std::uint64_t upto) const;
    mutable std::mutex mu_;
    mutable std::vector<Rational> memo_;
    mutable std::uint64_t diag_ = 1;
};

// Shells by max(p, q); within a shell ascending by denominator, then
// numerator, reduced pairs only: 1/1, 2/1, 1/2, 3/1, 3/2, 1/3, 2/3, ...
class DenominatorMajor final : public Enumeration {
  public:
    Rational nth(std::uint64_t i) const override;
    std::string id() const override { return "denominator-major"; }

  private:
    void extend(std::uint64_t upto) const;
    mutable std::mutex mu_;
    mutable std::vector<Rational> memo_;
    mutable std::uint64_t shell_ = 0;
};

// Explicit finite sequence; duplicates are rejected at construction.
class ListEnumeration final : public Enumeration {
  public:
    explicit ListEnumeration(std::vector<Rational> values);

    Rational nth(std::uint64_t i) const override;
    std::optional<std::uint64_t> size() const override { return values_.size(); }
    std::string id() const override;

  private:
    std::vector<Rational> values_;
};

// Restriction of a base enumeration to the elements strictly inside a window
// interval, in base order.  Scanning progress is memoized and shared.
class WindowAdapter final : public Enumeration {
  public:
    WindowAdapter(EnumPtr base, OpenInterval window);

    Rational nth(std::uint64_t i) const override;
    std::optional<std::uint64_t> size() const override;
    std::string id() const override;
    const OpenInterval& window() const { return window_; }

  private:
    bool extend(std::uint64_t upto) const;  // false once the base is exhausted
    EnumPtr base_;
    OpenInterval window_;
    mutable std::mutex mu_;
    mutable std::vector<std::pair<Rational, std::uint64_t>> hits_;  // value, base index
    mutable std::uint64_t frontier_ = 0;
    mutable bool base_done_ = false;
};

// Finite rearrangement applied to positions: a transposition list, block
// reversal of fixed width, or a one-step rotation of a prefix.  All are
// bijections on indices, so injectivity of the base is preserved.
struct ReorderSpec {
    enum class Kind { Transpositions, Blocks, Rotate };
    Kind kind = Kind::Transpositions;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> swaps;  // Transpositions
    std::uint64_t param = 0;                                     // Blocks / Rotate

    // Parses "swap(i,j)[;swap(k,l)...]", "blocks(B)", "rotate(K)".
    static ReorderSpec parse(std::string_view text);
    std::uint64_t apply(std::uint64_t i) const;
    std::string str() const;
};

class ReorderedEnumeration final : public Enumeration {
  public:
    ReorderedEnumeration(EnumPtr base, ReorderSpec spec);

    Rational nth(std::uint64_t i) const override;
    std::optional<std::uint64_t> size() const override { return base_->size(); }
    std::string id() const override;

  private:
    EnumPtr base_;
    ReorderSpec spec_;
};

// Builds an enumeration from a spec string:
//   "calkin-wilf" | "zigzag" | "denominator-major" | "list:1/2,3/4,..."
// with optional modifiers "| window=lo,hi" and "| reorder=..." (applied in
// the order written).
EnumPtr parse_enumeration(std::string_view spec);

}  // namespace omegalab
