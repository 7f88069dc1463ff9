#include "omegalab/enumeration.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

namespace omegalab {
namespace {

std::uint64_t parse_u64(std::string_view t, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw std::domain_error(std::string("enumeration: malformed ") + what + " '" + std::string(t) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<std::uint64_t> Enumeration::index_of(const Rational& q, std::uint64_t budget) const {
    std::uint64_t limit = budget;
    if (auto n = size()) limit = std::min<std::uint64_t>(limit, *n);
    for (std::uint64_t i = 1; i <= limit; ++i)
        if (nth(i) == q) return i;
    return std::nullopt;
}

Rational CalkinWilf::nth(std::uint64_t i) const {
    if (i == 0) throw std::domain_error("enumeration: positions are 1-based");
    // Walk the bits of i below its leading one: 0 descends left
    // (p/q -> p/(p+q)), 1 descends right (p/q -> (p+q)/q).
    int top = 63;
    while (top > 0 && !(i >> top & 1)) --top;
    Integer p = 1, q = 1;
    for (int b = top - 1; b >= 0; --b) {
        if (i >> b & 1) p += q;
        else q += p;
    }
    return Rational(p, q);
}

std::optional<std::uint64_t> CalkinWilf::index_of(const Rational& q, std::uint64_t) const {
    if (q.sign() <= 0) return std::nullopt;
    // Reverse the descent; the bit path read backwards, under a leading one,
    // is the index.  Depth beyond 63 bits does not fit a 64-bit position.
    Integer p = q.num(), d = q.den();
    std::vector<bool> bits;
    while (!(p == 1 && d == 1)) {
        if (bits.size() >= 63) return std::nullopt;
        if (p > d) { bits.push_back(true); p -= d; }
        else       { bits.push_back(false); d -= p; }
    }
    std::uint64_t idx = 1;
    for (auto it = bits.rbegin(); it != bits.rend(); ++it) idx = idx << 1 | (*it ? 1 : 0);
    return idx;
}

void ZigZag::extend(std::uint64_t upto) const {
    while (memo_.size() < upto) {
        ++diag_;  // antidiagonal p + q = diag_, starting at 2
        const std::uint64_t d = diag_;
        if (d % 2 == 0) {
            for (std::uint64_t p = 1; p < d; ++p)
                if (std::gcd(p, d - p) == 1) memo_.emplace_back(Integer(p), Integer(d - p));
        } else {
            for (std::uint64_t p = d - 1; p >= 1; --p)
                if (std::gcd(p, d - p) == 1) memo_.emplace_back(Integer(p), Integer(d - p));
        }
    }
}

Rational ZigZag::nth(std::uint64_t i) const {
    if (i == 0) throw std::domain_error("enumeration: positions are 1-based");
    std::lock_guard<std::mutex> lock(mu_);
    extend(i);
    return memo_[i - 1];
}

void DenominatorMajor::extend(std::uint64_t upto) const {
    while (memo_.size() < upto) {
        ++shell_;  // shell m: reduced pairs with max(p, q) = m
        const std::uint64_t m = shell_;
        if (m == 1) {
            memo_.emplace_back(1, 1);
            continue;
        }
        for (std::uint64_t q = 1; q < m; ++q)
            if (std::gcd(m, q) == 1) memo_.emplace_back(Integer(m), Integer(q));
        for (std::uint64_t p = 1; p < m; ++p)
            if (std::gcd(p, m) == 1) memo_.emplace_back(Integer(p), Integer(m));
    }
}

Rational DenominatorMajor::nth(std::uint64_t i) const {
    if (i == 0) throw std::domain_error("enumeration: positions are 1-based");
    std::lock_guard<std::mutex> lock(mu_);
    extend(i);
    return memo_[i - 1];
}

ListEnumeration::ListEnumeration(std::vector<Rational> values) : values_(std::move(values)) {
    std::set<std::string> seen;
    for (const auto& v : values_)
        if (!seen.insert(v.str()).second)
            throw std::domain_error("enumeration: duplicate element " + v.str() + " in list");
}

Rational ListEnumeration::nth(std::uint64_t i) const {
    if (i == 0) throw std::domain_error("enumeration: positions are 1-based");
    if (i > values_.size())
        throw out_of_domain("enumeration: position " + std::to_string(i) + " past end of finite list");
    return values_[i - 1];
}

std::string ListEnumeration::id() const {
    std::string out = "list:";
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (k) out += ',';
        out += values_[k].str();
    }
    return out;
}

WindowAdapter::WindowAdapter(EnumPtr base, OpenInterval window)
    : base_(std::move(base)), window_(std::move(window)) {
    if (!base_) throw std::domain_error("window adapter: null base enumeration");
}

bool WindowAdapter::extend(std::uint64_t upto) const {
    while (hits_.size() < upto && !base_done_) {
        auto base_size = base_->size();
        if (base_size && frontier_ >= *base_size) {
            base_done_ = true;
            break;
        }
        ++frontier_;
        Rational v = base_->nth(frontier_);
        if (window_.contains(v)) hits_.emplace_back(std::move(v), frontier_);
    }
    return hits_.size() >= upto;
}

Rational WindowAdapter::nth(std::uint64_t i) const {
    if (i == 0) throw std::domain_error("enumeration: positions are 1-based");
    std::lock_guard<std::mutex> lock(mu_);
    if (!extend(i))
        throw out_of_domain("enumeration: position " + std::to_string(i) + " past end of window");
    return hits_[i - 1].first;
}

std::optional<std::uint64_t> WindowAdapter::size() const {
    if (!base_->size()) return std::nullopt;
    std::lock_guard<std::mutex> lock(mu_);
    extend(UINT64_MAX);  // finite base: drain it
    return hits_.size();
}

std::string WindowAdapter::id() const {
    return base_->id() + " | window=" + window_.lo().str() + "," + window_.hi().str();
}

ReorderSpec ReorderSpec::parse(std::string_view text) {
    ReorderSpec spec;
    text = trim(text);
    auto arg_of = [&](std::string_view t, std::string_view head) -> std::optional<std::string_view> {
        if (t.substr(0, head.size()) != head) return std::nullopt;
        t.remove_prefix(head.size());
        if (t.empty() || t.front() != '(' || t.back() != ')') return std::nullopt;
        return t.substr(1, t.size() - 2);
    };
    if (auto a = arg_of(text, "blocks")) {
        spec.kind = Kind::Blocks;
        spec.param = parse_u64(trim(*a), "block size");
        if (spec.param == 0) throw std::domain_error("reorder: block size must be positive");
        return spec;
    }
    if (auto a = arg_of(text, "rotate")) {
        spec.kind = Kind::Rotate;
        spec.param = parse_u64(trim(*a), "rotation prefix");
        if (spec.param == 0) throw std::domain_error("reorder: rotation prefix must be positive");
        return spec;
    }
    spec.kind = Kind::Transpositions;
    std::string_view rest = text;
    while (!rest.empty()) {
        auto semi = rest.find(';');
        std::string_view item = trim(rest.substr(0, semi));
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        auto a = arg_of(item, "swap");
        if (!a) throw std::domain_error("reorder: malformed spec '" + std::string(text) + "'");
        auto comma = a->find(',');
        if (comma == std::string_view::npos)
            throw std::domain_error("reorder: swap needs two positions in '" + std::string(item) + "'");
        std::uint64_t i = parse_u64(trim(a->substr(0, comma)), "swap position");
        std::uint64_t j = parse_u64(trim(a->substr(comma + 1)), "swap position");
        if (i == 0 || j == 0 || i == j)
            throw std::domain_error("reorder: swap(" + std::to_string(i) + "," + std::to_string(j) +
                                    ") is not a bijection on positions");
        spec.swaps.emplace_back(i, j);
    }
    if (spec.swaps.empty()) throw std::domain_error("reorder: empty spec");
    return spec;
}

std::uint64_t ReorderSpec::apply(std::uint64_t i) const {
    switch (kind) {
        case Kind::Transpositions:
            for (auto [a, b] : swaps) {
                if (i == a) i = b;
                else if (i == b) i = a;
            }
            return i;
        case Kind::Blocks: {
            // Reverse each consecutive block of width param: 2,1,4,3,... for width 2.
            std::uint64_t block = (i - 1) / param, off = (i - 1) % param;
            return block * param + (param - 1 - off) + 1;
        }
        case Kind::Rotate:
            // One-step rotation of the prefix 1..param.
            if (i > param) return i;
            return i == param ? 1 : i + 1;
    }
    throw internal_error("reorder: unhandled kind");
}

std::string ReorderSpec::str() const {
    switch (kind) {
        case Kind::Transpositions: {
            std::string out;
            for (std::size_t k = 0; k < swaps.size(); ++k) {
                if (k) out += ';';
                out += "swap(" + std::to_string(swaps[k].first) + "," + std::to_string(swaps[k].second) + ")";
            }
            return out;
        }
        case Kind::Blocks: return "blocks(" + std::to_string(param) + ")";
        case Kind::Rotate: return "rotate(" + std::to_string(param) + ")";
    }
    throw internal_error("reorder: unhandled kind");
}

ReorderedEnumeration::ReorderedEnumeration(EnumPtr base, ReorderSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
    if (!base_) throw std::domain_error("reorder: null base enumeration");
    if (auto n = base_->size()) {
        // Rearranged positions must stay within a finite base.
        auto check = [&](std::uint64_t pos) {
            if (pos > *n)
                throw std::domain_error("reorder: position " + std::to_string(pos) +
                                        " exceeds finite base of size " + std::to_string(*n));
        };
        if (spec_.kind == ReorderSpec::Kind::Transpositions)
            for (auto [a, b] : spec_.swaps) { check(a); check(b); }
        else check(spec_.param);
    }
}

Rational ReorderedEnumeration::nth(std::uint64_t i) const {
    if (i == 0) throw std::domain_error("enumeration: positions are 1-based");
    return base_->nth(spec_.apply(i));
}

std::string ReorderedEnumeration::id() const {
    return base_->id() + " | reorder=" + spec_.str();
}

EnumPtr parse_enumeration(std::string_view spec) {
    std::vector<std::string_view> parts;
    while (true) {
        auto bar = spec.find('|');
        parts.push_back(trim(spec.substr(0, bar)));
        if (bar == std::string_view::npos) break;
        spec = spec.substr(bar + 1);
    }
    if (parts.empty() || parts[0].empty()) throw std::domain_error("enumeration: empty spec");

    EnumPtr e;
    std::string_view head = parts[0];
    if (head == "calkin-wilf") e = std::make_shared<CalkinWilf>();
    else if (head == "zigzag") e = std::make_shared<ZigZag>();
    else if (head == "denominator-major") e = std::make_shared<DenominatorMajor>();
    else if (head.substr(0, 5) == "list:") {
        std::vector<Rational> vals;
        std::string_view rest = head.substr(5);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            vals.push_back(Rational::from_string(std::string(trim(rest.substr(0, comma)))));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        e = std::make_shared<ListEnumeration>(std::move(vals));
    } else {
        throw std::domain_error("enumeration: unknown spec '" + std::string(head) + "'");
    }

    for (std::size_t k = 1; k < parts.size(); ++k) {
        std::string_view mod = parts[k];
        if (mod.substr(0, 7) == "window=") {
            std::string_view arg = mod.substr(7);
            auto comma = arg.find(',');
            if (comma == std::string_view::npos)
                throw std::domain_error("enumeration: window needs 'lo,hi'");
            Rational lo = Rational::from_string(std::string(trim(arg.substr(0, comma))));
            Rational hi = Rational::from_string(std::string(trim(arg.substr(comma + 1))));
            e = std::make_shared<WindowAdapter>(e, OpenInterval(lo, hi));
        } else if (mod.substr(0, 8) == "reorder=") {
            e = std::make_shared<ReorderedEnumeration>(e, ReorderSpec::parse(mod.substr(8)));
        } else {
            throw std::domain_error("enumeration: unknown modifier '" + std::string(mod) + "'");
        }
    }
    return e;
}

}  // namespace omegalab
