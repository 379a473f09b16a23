#include "acsp/numeric.hpp"

#include <limits>

namespace acsp {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kMin = std::numeric_limits<std::int64_t>::min();

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

std::string to_string(const Rational& q) { return q.str(); }

Rational parse_rational(const std::string& text) { return Rational(text); }

BigInt lcm_big(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a / gcd(a, b) * b);
}

SmallInt SmallInt::from(const BigInt& b) {
    if (b > std::numeric_limits<std::int64_t>::max() || b < std::numeric_limits<std::int64_t>::min())
        throw NumericOverflow();
    return SmallInt(b.convert_to<std::int64_t>());
}

SmallRational::SmallRational(std::int64_t n, std::int64_t d) { *this = normalize(n, d); }

SmallRational SmallRational::normalize(__int128 n, __int128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n > kMax || n < kMin || d > kMax) throw NumericOverflow();
    SmallRational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = n == 0 ? 1 : static_cast<std::int64_t>(d);
    return r;
}

SmallRational SmallRational::from(const Rational& q) {
    const auto& n = numerator(q);
    const auto& d = denominator(q);
    if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min() ||
        d > std::numeric_limits<std::int64_t>::max())
        throw NumericOverflow();
    SmallRational r;
    r.num_ = n.convert_to<std::int64_t>();
    r.den_ = d.convert_to<std::int64_t>();
    return r;
}

SmallRational operator+(const SmallRational& a, const SmallRational& b) {
    if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t r;
        if (__builtin_add_overflow(a.num_, b.num_, &r)) throw NumericOverflow();
        return SmallRational(r);
    }
    if (a.den_ == b.den_)
        return SmallRational::normalize(static_cast<__int128>(a.num_) + b.num_, a.den_);
    return SmallRational::normalize(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                                    static_cast<__int128>(a.den_) * b.den_);
}

SmallRational operator-(const SmallRational& a, const SmallRational& b) { return a + (-b); }

SmallRational operator*(const SmallRational& a, const SmallRational& b) {
    if (a.num_ == 0 || b.num_ == 0) return SmallRational();
    if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t r;
        if (__builtin_mul_overflow(a.num_, b.num_, &r)) throw NumericOverflow();
        return SmallRational(r);
    }
    return SmallRational::normalize(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

SmallRational operator/(const SmallRational& a, const SmallRational& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero");
    return SmallRational::normalize(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

SmallRational SmallRational::operator-() const {
    if (num_ == std::numeric_limits<std::int64_t>::min()) throw NumericOverflow();
    SmallRational r = *this;
    r.num_ = -num_;
    return r;
}

}  // namespace acsp
