#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace weaving {

// Exact rational arithmetic on 64-bit words. The crossing schedule only ever
// produces numerators and denominators bounded by small polynomials in g, so
// no big-integer fallback is required; intermediate products go through
// 128-bit and overflow is checked anyway.
class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_integer() const { return den_ == 1; }

    // Round-down (true floor, also for negative values).
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    Rat frac() const { return *this - Rat(floor()); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat::of_checked((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                               (__int128)a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat::of_checked((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                               (__int128)a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat::of_checked((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return Rat::of_checked((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat operator-() const { return Rat(-num_, den_); }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    double to_double() const { return (double)num_ / (double)den_; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    static Rat of_checked(__int128 n, __int128 d) {
        Rat r;
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a != 0) { n /= a; d /= a; }
        constexpr __int128 lim = (__int128)1 << 62;
        if (n >= lim || n <= -lim || d >= lim)
            throw std::overflow_error("Rat: 64-bit overflow");
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }

    void normalize() {
        Rat r = of_checked(num_, den_);
        num_ = r.num_;
        den_ = r.den_;
    }

    long long num_ = 0;
    long long den_ = 1;
};

// A rational time nudged infinitesimally: base + eps * (0+). Used for the
// one-sided evaluations "just before" and "just after" a crossing.
struct EpsRat {
    Rat base;
    int eps = 0;  // -1, 0, +1

    friend bool operator==(const EpsRat& a, const EpsRat& b) {
        return a.base == b.base && a.eps == b.eps;
    }
    friend bool operator<(const EpsRat& a, const EpsRat& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.eps < b.eps;
    }
};

}  // namespace weaving
