#pragma once

#include <stdexcept>
#include <string>

#include "omegalab/rational.hpp"

namespace omegalab {

// Open interval (lo, hi) with rational endpoints; construction requires lo < hi.
class OpenInterval {
  public:
    OpenInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (!(lo_ < hi_)) throw std::domain_error("interval: endpoints must satisfy lo < hi");
    }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    bool contains(const Rational& x) const { return lo_ < x && x < hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational midpoint() const { return omegalab::midpoint(lo_, hi_); }

    // True iff (lo, hi) is strictly inside *this (proper nesting on both sides).
    bool strictly_contains(const OpenInterval& inner) const {
        return lo_ < inner.lo_ && inner.hi_ < hi_;
    }

    std::string str() const { return "(" + lo_.str() + ", " + hi_.str() + ")"; }

    friend bool operator==(const OpenInterval& a, const OpenInterval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

  private:
    Rational lo_, hi_;
};

}  // namespace omegalab
