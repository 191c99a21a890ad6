#ifndef OWAST_RATIONAL_HPP
#define OWAST_RATIONAL_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace owast {

/// Exact rational arithmetic on 64-bit numerator/denominator.
///
/// All coloring decisions and bound comparisons in this library are made on
/// exact rationals; a wrong sign caused by floating error would produce an
/// unsound edge coloring. Intermediate products run in 128 bits and any
/// result that does not fit back into 64 bits throws std::overflow_error.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const { return Rational(unchecked{}, -num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return make(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return make(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const { return (double)num_ / (double)den_; }

    /// Parses a plain decimal such as "0.28", "-1.5", "7" or ".4".
    static Rational from_decimal(std::string_view s) {
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = s[i] == '-';
            ++i;
        }
        std::int64_t intpart = 0, frac = 0, scale = 1;
        bool any_digit = false;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            intpart = checked_mul_add(intpart, 10, s[i] - '0');
            any_digit = true;
            ++i;
        }
        if (i < s.size() && s[i] == '.') {
            ++i;
            while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
                if (scale > 100000000000000000LL)
                    throw std::invalid_argument("Rational: too many decimal digits");
                frac = checked_mul_add(frac, 10, s[i] - '0');
                scale = scale * 10;
                any_digit = true;
                ++i;
            }
        }
        if (!any_digit || i != s.size())
            throw std::invalid_argument("Rational: malformed decimal '" + std::string(s) + "'");
        Rational r = make((__int128)intpart * scale + frac, (__int128)scale);
        return neg ? -r : r;
    }

    /// True when the value has a finite decimal expansion (denominator 2^a·5^b).
    bool has_finite_decimal() const {
        std::int64_t d = den_;
        while (d % 2 == 0) d /= 2;
        while (d % 5 == 0) d /= 5;
        return d == 1;
    }

    /// Exact decimal rendering; requires has_finite_decimal().
    std::string to_decimal_string() const {
        std::int64_t d = den_;
        int twos = 0, fives = 0;
        while (d % 2 == 0) { d /= 2; ++twos; }
        while (d % 5 == 0) { d /= 5; ++fives; }
        if (d != 1) throw std::domain_error("Rational: no finite decimal expansion");
        // scale numerator so the denominator becomes a power of ten
        __int128 n = num_;
        int digits = twos > fives ? twos : fives;
        for (int k = 0; k < digits - fives; ++k) n *= 5;
        for (int k = 0; k < digits - twos; ++k) n *= 2;
        bool neg = n < 0;
        if (neg) n = -n;
        std::string raw;
        if (n == 0) raw = "0";
        while (n > 0) {
            raw.push_back(char('0' + (int)(n % 10)));
            n /= 10;
        }
        while ((int)raw.size() <= digits) raw.push_back('0');
        std::string out;
        if (neg) out.push_back('-');
        for (int k = (int)raw.size() - 1; k >= 0; --k) {
            out.push_back(raw[k]);
            if (k == digits && digits > 0) out.push_back('.');
        }
        return out;
    }

    /// Decimal when exact, "num/den" otherwise.
    std::string to_string() const {
        if (has_finite_decimal()) return to_decimal_string();
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    struct unchecked {};
    Rational(unchecked, std::int64_t n, std::int64_t d) : num_(n), den_(d) {}

    static std::int64_t checked_mul_add(std::int64_t v, int mul, int add) {
        __int128 r = (__int128)v * mul + add;
        return narrow(r);
    }

    static std::int64_t narrow(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Rational: 64-bit overflow");
        return (std::int64_t)v;
    }

    static Rational make(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rational r{unchecked{}, narrow(n), narrow(d)};
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace owast

#endif // OWAST_RATIONAL_HPP
