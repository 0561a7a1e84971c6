#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diversity {

/// Exact rational value. Always reduced, denominator positive.
///
/// Thin wrapper over boost::rational so that every comparison and operator
/// is Rat against Rat (integers convert implicitly).
class Rat
{
public:
    using Int = std::int64_t;

    Rat() = default;
    Rat(Int n) : v_(n) {}
    Rat(Int n, Int d) : v_(n, d) {}

    Int numerator() const { return v_.numerator(); }
    Int denominator() const { return v_.denominator(); }

    friend Rat operator+(const Rat & a, const Rat & b) { return Rat(a.v_ + b.v_); }
    friend Rat operator-(const Rat & a, const Rat & b) { return Rat(a.v_ - b.v_); }
    friend Rat operator*(const Rat & a, const Rat & b) { return Rat(a.v_ * b.v_); }
    friend Rat operator/(const Rat & a, const Rat & b) { return Rat(a.v_ / b.v_); }
    Rat operator-() const { return Rat(-v_); }
    Rat & operator+=(const Rat & o) { v_ += o.v_; return *this; }
    Rat & operator-=(const Rat & o) { v_ -= o.v_; return *this; }
    Rat & operator*=(const Rat & o) { v_ *= o.v_; return *this; }
    Rat & operator/=(const Rat & o) { v_ /= o.v_; return *this; }

    friend bool operator==(const Rat & a, const Rat & b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rat & a, const Rat & b)
    {
        if (a.v_ < b.v_)
            return std::strong_ordering::less;
        if (b.v_ < a.v_)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    explicit Rat(boost::rational<Int> v) : v_(v) {}
    boost::rational<Int> v_;
};

inline Rat abs(const Rat & r) { return r < Rat(0) ? -r : r; }

/// Renders "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rat & r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p/q" or "p" (optional leading '-'). Throws std::invalid_argument.
inline Rat parse_rat(std::string_view text)
{
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty())
            throw std::invalid_argument("empty integer in rational '" + std::string(text) + "'");
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size())
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        std::int64_t v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
            if (v > (INT64_MAX - 9) / 10)
                throw std::invalid_argument("rational out of range '" + std::string(text) + "'");
            v = v * 10 + (s[i] - '0');
        }
        return neg ? -v : v;
    };

    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rat(parse_int(text));
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (den <= 0)
        throw std::invalid_argument("non-positive denominator in '" + std::string(text) + "'");
    return Rat(num, den);
}

inline std::ostream & operator<<(std::ostream & os, const Rat & r) { return os << to_string(r); }

} // namespace diversity
