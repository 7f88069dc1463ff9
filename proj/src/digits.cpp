#include "omegalab/digits.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

namespace omegalab {
namespace {

bool all_digits(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool all_nines(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == '9'; });
}

// Cache of 10^s - 1 keyed by s; period lengths repeat heavily across calls.
const Integer& ones_mask(unsigned long s) {
    static std::mutex mu;
    static std::map<unsigned long, Integer> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, pow10(s) - 1).first;
    return it->second;
}

// Halve the candidate period while its two halves agree; the remainder cycle
// can only overshoot the digit period by a factor of 2 or 4 (see expansion_u64).
void minimize_period(std::string& per) {
    while (per.size() % 2 == 0) {
        std::size_t h = per.size() / 2;
        if (std::memcmp(per.data(), per.data() + h, h) != 0) break;
        per.resize(h);
    }
}

// Fast path: denominator fits comfortably in 64 bits.  Consumes the reduced
// fractional part u/q (0 < u < q) and emits preperiod + minimal period.
void expansion_u64(std::uint64_t u, std::uint64_t q, std::string& pre, std::string& per) {
    // Preperiod length r = max(v2(q), v5(q)); after r digits the remainder
    // sequence is purely periodic.
    unsigned r2 = 0, r5 = 0;
    for (std::uint64_t t = q; t % 2 == 0; t /= 2) ++r2;
    for (std::uint64_t t = q; t % 5 == 0; t /= 5) ++r5;
    unsigned r = std::max(r2, r5);

    std::uint64_t rem = u;
    pre.clear();
    pre.reserve(r);
    for (unsigned i = 0; i < r; ++i) {
        rem *= 10;
        pre.push_back(static_cast<char>('0' + rem / q));
        rem %= q;
    }
    per.clear();
    if (rem == 0) {
        per.push_back('0');
        return;
    }

    // Emit the cycle four digits per division; the first return of the marked
    // remainder under x -> x * 10^4 happens after s / gcd(s, 4) steps, i.e.
    // after s, 2s or 4s digits where s is the true period.
    const std::uint64_t mark = rem;
    do {
        rem *= 10000;
        std::uint64_t chunk = rem / q;
        rem %= q;
        char buf[4] = {static_cast<char>('0' + chunk / 1000),
                       static_cast<char>('0' + chunk / 100 % 10),
                       static_cast<char>('0' + chunk / 10 % 10),
                       static_cast<char>('0' + chunk % 10)};
        per.append(buf, 4);
    } while (rem != mark);
    minimize_period(per);
}

// General path for big denominators: the whole preperiod block in one bigint
// division, then a digit-at-a-time remainder cycle.
void expansion_mpz(const Integer& u, const Integer& q, std::string& pre, std::string& per) {
    unsigned long r2 = 0, r5 = 0;
    {
        Integer t = q;
        while (mpz_even_p(t.get_mpz_t())) { mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), 1); ++r2; }
        t = q;
        while (mpz_divisible_ui_p(t.get_mpz_t(), 5)) { mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), 5); ++r5; }
    }
    unsigned long r = std::max(r2, r5);

    pre.clear();
    if (r > 0) {
        Integer scaled = u * pow10(r), block, rem;
        mpz_fdiv_qr(block.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), q.get_mpz_t());
        pre = block.get_str();
        if (pre.size() < r) pre.insert(pre.begin(), r - pre.size(), '0');
        per.clear();
        if (rem == 0) {
            per.push_back('0');
            return;
        }
        Integer mark = rem;
        do {
            rem *= 10;
            Integer d;
            mpz_fdiv_qr(d.get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t());
            per.push_back(static_cast<char>('0' + d.get_ui()));
        } while (rem != mark);
        return;
    }

    per.clear();
    Integer rem = u, mark = u;
    do {
        rem *= 10;
        Integer d;
        mpz_fdiv_qr(d.get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t());
        per.push_back(static_cast<char>('0' + d.get_ui()));
    } while (rem != mark);
}

}  // namespace

Integer pow10(unsigned long e) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
    return p;
}

const char* kind_name(DigitStream::Kind k) {
    switch (k) {
        case DigitStream::Kind::EventuallyPeriodic: return "periodic";
        case DigitStream::Kind::RuleBased: return "rule";
        case DigitStream::Kind::Seeded: return "seeded";
    }
    return "?";
}

std::string DigitStream::digits_prefix(std::uint64_t count) const {
    std::string out;
    out.reserve(count);
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(static_cast<char>('0' + digit_at(n)));
    return out;
}

std::string DecimalExpansion::str() const {
    return int_part.get_str() + "." + preperiod + "(" + period + ")";
}

DecimalExpansion decimal_expansion(const Rational& r) {
    if (r.sign() < 0) throw std::domain_error("decimal_expansion: negative value");
    DecimalExpansion out;
    out.int_part = r.floor();
    Rational frac = r - Rational(out.int_part, 1);
    if (frac.is_zero()) {
        out.period = "0";
        return out;
    }
    Integer num = frac.num(), den = frac.den();
    if (den.fits_ulong_p() && den.get_ui() <= 1000000000000000ul) {
        expansion_u64(num.get_ui(), den.get_ui(), out.preperiod, out.period);
    } else {
        expansion_mpz(num, den, out.preperiod, out.period);
    }
    return out;
}

PeriodicStream::PeriodicStream(Integer int_part, std::string preperiod, std::string period)
    : int_part_(std::move(int_part)), pre_(std::move(preperiod)), per_(std::move(period)) {
    if (int_part_ < 0) throw std::domain_error("digit stream: negative integer part");
    if (per_.empty()) throw std::domain_error("digit stream: empty period");
    if (!all_digits(pre_) || !all_digits(per_)) throw std::domain_error("digit stream: non-digit character");
    if (all_nines(per_)) throw std::domain_error("digit stream: all-nines period is not canonical");
    expansion_.int_part = int_part_;
    expansion_.preperiod = pre_;
    expansion_.period = per_;
}

int PeriodicStream::digit_at(std::uint64_t n) const {
    if (n == 0) throw std::domain_error("digit_at: positions are 1-based");
    if (n <= pre_.size()) return pre_[n - 1] - '0';
    return per_[(n - pre_.size() - 1) % per_.size()] - '0';
}

std::string PeriodicStream::id() const { return value().str(); }

Rational PeriodicStream::value() const {
    return from_period(pre_, per_, int_part_);
}

Rational from_period(const std::string& preperiod, const std::string& period,
                     const Integer& int_part) {
    if (period.empty()) throw std::domain_error("from_period: empty period");
    if (!all_digits(preperiod) || !all_digits(period))
        throw std::domain_error("from_period: non-digit character");
    if (all_nines(period)) throw std::domain_error("from_period: all-nines period is not canonical");
    if (int_part < 0) throw std::domain_error("from_period: negative integer part");

    const unsigned long r = preperiod.size();
    const unsigned long s = period.size();
    const Integer& T = ones_mask(s);

    Integer A = 0, B = 0;
    if (r > 0) mpz_set_str(A.get_mpz_t(), preperiod.c_str(), 10);
    mpz_set_str(B.get_mpz_t(), period.c_str(), 10);

    // Value = (A*T + B) / (10^r * T).  The two denominator factors are
    // coprime-reducible independently: gcd(N, T) = gcd(B, T) since N = A*T + B,
    // and gcd(N, 10^r) only needs N mod 10^r.
    Integer N = A * T + B;
    if (N == 0 && int_part == 0) throw std::domain_error("from_period: zero value is out of range");

    Integer gT, num;
    mpz_gcd(gT.get_mpz_t(), B.get_mpz_t(), T.get_mpz_t());
    Integer den = T / gT;
    num = N / gT;

    if (r > 0) {
        Integer P = pow10(r);
        Integer nr = num % P, g25;
        if (nr == 0) nr = P;
        mpz_gcd(g25.get_mpz_t(), nr.get_mpz_t(), P.get_mpz_t());
        num /= g25;
        den *= P / g25;
    }
    Rational v(num, den);
    if (int_part > 0) v += Rational(int_part, 1);
    return v;
}

std::shared_ptr<const PeriodicStream> to_digit_stream(const Rational& q) {
    if (!(q.sign() > 0) || Rational(1) < q)
        throw out_of_domain("to_digit_stream: value must lie in (0, 1]");
    DecimalExpansion e = decimal_expansion(q);
    return std::make_shared<PeriodicStream>(e.int_part, std::move(e.preperiod), std::move(e.period));
}

int digit_at(const DigitStream& s, std::uint64_t n) {
    if (n == 0) throw std::domain_error("digit_at: positions are 1-based");
    return s.digit_at(n);
}

SqrtStream::SqrtStream(unsigned long k) : k_(k) {
    if (k < 2) throw std::domain_error("sqrt stream: k must be >= 2");
    unsigned long isq = static_cast<unsigned long>(std::sqrt(static_cast<double>(k)));
    for (unsigned long c = isq > 1 ? isq - 1 : 1; c <= isq + 1; ++c)
        if (c * c == k) throw std::domain_error("sqrt stream: k must be a non-square");
}

int SqrtStream::digit_at(std::uint64_t n) const {
    if (n == 0) throw std::domain_error("digit_at: positions are 1-based");
    std::lock_guard<std::mutex> lock(mu_);
    if (n > cache_.size()) {
        std::uint64_t len = std::max<std::uint64_t>(2 * n, 64);
        // floor(sqrt(k) * 10^len) = isqrt(k * 10^(2 len)); its last len decimal
        // digits are exactly the first len fractional digits of sqrt(k).
        Integer scaled = Integer(k_) * pow10(2 * len), root;
        mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
        std::string s = root.get_str();
        if (s.size() <= len) throw internal_error("sqrt stream: unexpected root size");
        cache_ = s.substr(s.size() - len);
    }
    return cache_[n - 1] - '0';
}

int ChampernowneStream::digit_at(std::uint64_t n) const {
    if (n == 0) throw std::domain_error("digit_at: positions are 1-based");
    std::uint64_t pos = n + offset_ - 1;  // 1-based position in 123456789101112...
    std::uint64_t len = 1, count = 9, first = 1;
    while (pos > len * count) {
        pos -= len * count;
        ++len;
        count *= 10;
        first *= 10;
    }
    std::uint64_t number = first + (pos - 1) / len;
    std::uint64_t idx = (pos - 1) % len;  // digit index within the number, msd first
    std::uint64_t div = 1;
    for (std::uint64_t i = len - 1; i > idx; --i) div *= 10;
    return static_cast<int>(number / div % 10);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

int SeededStream::digit_at(std::uint64_t n) const {
    if (n == 0) throw std::domain_error("digit_at: positions are 1-based");
    std::uint64_t h = splitmix64(seed_ ^ (n * 0xD1B54A32D192ED03ull));
    if (n % 32 == 0) return static_cast<int>(h % 9);  // canonicality: no all-nines tail
    return static_cast<int>(h % 10);
}

unsigned long nth_nonsquare(std::uint64_t m) {
    if (m == 0) throw std::domain_error("nth_nonsquare: m must be >= 1");
    // m-th non-square is m + floor(1/2 + sqrt(m)); integer-only evaluation.
    std::uint64_t k = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
    while (k > 0 && k * k > m) --k;
    while ((k + 1) * (k + 1) <= m) ++k;           // k = floor(sqrt(m))
    return static_cast<unsigned long>(m + k + (m > k * k + k ? 1 : 0));
}

}  // namespace omegalab
