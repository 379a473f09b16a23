// Exact number types.
//
// BigInt / Rational are the public arbitrary-precision types. SmallInt and
// SmallRational are 64-bit fast paths that throw NumericOverflow instead of
// wrapping; the solvers run on them first and redo the work on the big types
// when an overflow is reported.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acsp {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

struct NumericOverflow : std::runtime_error {
    NumericOverflow() : std::runtime_error("64-bit fast path overflow") {}
};

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

class SmallInt {
public:
    SmallInt() = default;
    SmallInt(std::int64_t v) : v_(v) {}  // NOLINT(google-explicit-constructor)

    static SmallInt from(const BigInt& b);
    BigInt to_big() const { return BigInt(v_); }
    std::int64_t value() const { return v_; }

    friend SmallInt operator+(SmallInt a, SmallInt b) {
        std::int64_t r;
        if (__builtin_add_overflow(a.v_, b.v_, &r)) throw NumericOverflow();
        return r;
    }
    friend SmallInt operator-(SmallInt a, SmallInt b) {
        std::int64_t r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw NumericOverflow();
        return r;
    }
    friend SmallInt operator*(SmallInt a, SmallInt b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw NumericOverflow();
        return r;
    }
    // Exact division only.
    friend SmallInt operator/(SmallInt a, SmallInt b) {
        if (b.v_ == -1) return SmallInt(0) - a;
        return a.v_ / b.v_;
    }
    friend SmallInt operator%(SmallInt a, SmallInt b) {
        if (b.v_ == -1) return 0;
        return a.v_ % b.v_;
    }
    SmallInt operator-() const { return SmallInt(0) - *this; }
    SmallInt& operator+=(SmallInt o) { return *this = *this + o; }
    SmallInt& operator-=(SmallInt o) { return *this = *this - o; }
    SmallInt& operator*=(SmallInt o) { return *this = *this * o; }
    friend auto operator<=>(SmallInt a, SmallInt b) = default;

private:
    std::int64_t v_ = 0;
};

class SmallRational {
public:
    SmallRational() = default;
    SmallRational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    SmallRational(std::int64_t n, std::int64_t d);

    static SmallRational from(const Rational& q);
    Rational to_big() const { return Rational(num_, den_); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    friend SmallRational operator+(const SmallRational& a, const SmallRational& b);
    friend SmallRational operator-(const SmallRational& a, const SmallRational& b);
    friend SmallRational operator*(const SmallRational& a, const SmallRational& b);
    friend SmallRational operator/(const SmallRational& a, const SmallRational& b);
    SmallRational operator-() const;
    SmallRational& operator+=(const SmallRational& o) { return *this = *this + o; }
    SmallRational& operator-=(const SmallRational& o) { return *this = *this - o; }
    SmallRational& operator*=(const SmallRational& o) { return *this = *this * o; }
    SmallRational& operator/=(const SmallRational& o) { return *this = *this / o; }

    friend bool operator==(const SmallRational& a, const SmallRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const SmallRational& a, const SmallRational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const SmallRational& a, const SmallRational& b) { return b < a; }
    friend bool operator<=(const SmallRational& a, const SmallRational& b) { return !(b < a); }
    friend bool operator>=(const SmallRational& a, const SmallRational& b) { return !(a < b); }

private:
    static SmallRational normalize(__int128 n, __int128 d);
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Uniform helpers so templated engines can run on either tier.
inline bool is_zero(const Rational& q) { return q == 0; }
inline int sign(const Rational& q) { return q.sign(); }
inline bool is_zero(const SmallRational& q) { return q.is_zero(); }
inline int sign(const SmallRational& q) { return q.sign(); }
inline bool is_zero(const BigInt& q) { return q == 0; }
inline int sign(const BigInt& q) { return q.sign(); }
inline bool is_zero(SmallInt q) { return q.value() == 0; }
inline int sign(SmallInt q) { return (q.value() > 0) - (q.value() < 0); }
inline BigInt abs_value(const BigInt& a) { return abs(a); }
inline SmallInt abs_value(SmallInt a) { return a.value() < 0 ? -a : a; }

template <class T> struct NumberTier;
template <> struct NumberTier<Rational> {
    static Rational from(const Rational& q) { return q; }
    static const Rational& big(const Rational& q) { return q; }
};
template <> struct NumberTier<SmallRational> {
    static SmallRational from(const Rational& q) { return SmallRational::from(q); }
    static Rational big(const SmallRational& q) { return q.to_big(); }
};
template <> struct NumberTier<BigInt> {
    static BigInt from(const BigInt& q) { return q; }
    static const BigInt& big(const BigInt& q) { return q; }
};
template <> struct NumberTier<SmallInt> {
    static SmallInt from(const BigInt& q) { return SmallInt::from(q); }
    static BigInt big(SmallInt q) { return q.to_big(); }
};

// Extended gcd with g = a*u + b*v, g >= 0.
template <class Int> Int ext_gcd(const Int& a, const Int& b, Int& u, Int& v) {
    Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (!is_zero(r)) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (sign(old_r) < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    u = old_s;
    v = old_t;
    return old_r;
}

BigInt lcm_big(const BigInt& a, const BigInt& b);

}  // namespace acsp
