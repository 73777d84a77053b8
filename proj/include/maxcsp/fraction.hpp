#pragma once

#include <maxcsp/errors.hpp>

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace maxcsp {

// Exact rational arithmetic on 64-bit integers. All measures, thresholds and
// reduction bookkeeping go through this type; floating point never enters any
// comparison. Intermediate products are taken in 128 bits and checked on the
// way back down so silent overflow cannot corrupt a certificate.
class fraction {
public:
    fraction() = default;

    fraction(std::int64_t num) : num_(num), den_(1) {}

    fraction(std::int64_t num, std::int64_t den) : num_(num), den_(den)
    {
        if (den_ == 0)
            throw contract_error("fraction: zero denominator");
        normalise();
    }

    [[nodiscard]] auto num() const -> std::int64_t { return num_; }
    [[nodiscard]] auto den() const -> std::int64_t { return den_; }

    friend auto operator+(const fraction & a, const fraction & b) -> fraction
    {
        return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }

    friend auto operator-(const fraction & a, const fraction & b) -> fraction
    {
        return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }

    friend auto operator*(const fraction & a, const fraction & b) -> fraction
    {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }

    friend auto operator/(const fraction & a, const fraction & b) -> fraction
    {
        if (b.num_ == 0)
            throw contract_error("fraction: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    friend auto operator==(const fraction & a, const fraction & b) -> bool
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend auto operator!=(const fraction & a, const fraction & b) -> bool { return ! (a == b); }

    friend auto operator<(const fraction & a, const fraction & b) -> bool
    {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }

    friend auto operator<=(const fraction & a, const fraction & b) -> bool { return ! (b < a); }
    friend auto operator>(const fraction & a, const fraction & b) -> bool { return b < a; }
    friend auto operator>=(const fraction & a, const fraction & b) -> bool { return ! (a < b); }

    // Smallest integer >= the value (exact).
    [[nodiscard]] auto ceil() const -> std::int64_t
    {
        auto q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0)
            ++q;
        return q;
    }

    [[nodiscard]] auto str() const -> std::string
    {
        if (den_ == 1)
            return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend auto operator<<(std::ostream & o, const fraction & f) -> std::ostream &
    {
        return o << f.str();
    }

private:
    using i128 = __int128;

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static auto from_i128(i128 n, i128 d) -> fraction
    {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw contract_error("fraction: overflow past 64 bits after normalisation");
        fraction f;
        f.num_ = static_cast<std::int64_t>(n);
        f.den_ = static_cast<std::int64_t>(d);
        return f;
    }

    static auto gcd128(i128 a, i128 b) -> i128
    {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalise()
    {
        auto f = from_i128(num_, den_);
        num_ = f.num_;
        den_ = f.den_;
    }
};

}
