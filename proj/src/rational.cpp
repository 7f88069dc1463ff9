#include "omegalab/rational.hpp"

#include <algorithm>

namespace omegalab {
namespace {

bool valid_integer_token(std::string_view t) {
    if (!t.empty() && t.front() == '-') t.remove_prefix(1);
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Rational Rational::from_string(std::string_view text) {
    std::string_view num = text, den;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        if (!valid_integer_token(den) || den.front() == '-')
            throw std::domain_error("rational: malformed fraction '" + std::string(text) + "'");
    }
    if (!valid_integer_token(num))
        throw std::domain_error("rational: malformed fraction '" + std::string(text) + "'");
    Integer n(std::string(num), 10);
    Integer d = den.empty() ? Integer(1) : Integer(std::string(den), 10);
    if (d == 0) throw std::domain_error("rational: zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
}

}  // namespace omegalab
