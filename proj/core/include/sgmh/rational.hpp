#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "sgmh/types.hpp"

namespace sgmh {

/// Exact fraction over 128-bit integers, kept in lowest terms with a
/// positive denominator. Only what admission arithmetic needs.
class Rational {
public:
    using Int = int128;

    constexpr Rational() = default;
    Rational(Int num, Int den = 1);

    Int num() const noexcept { return num_; }
    Int den() const noexcept { return den_; }

    double to_double() const noexcept;
    std::string to_string() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    Int num_ = 0;
    Int den_ = 1;
};

std::string int128_to_string(int128 v);

} // namespace sgmh
