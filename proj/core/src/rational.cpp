#include "sgmh/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgmh {
namespace {

Rational::Int abs128(Rational::Int v) { return v < 0 ? -v : v; }

Rational::Int gcd128(Rational::Int a, Rational::Int b)
{
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(Int num, Int den)
{
    if (den == 0)
        throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const Int g = gcd128(num, den);
    num_ = g > 1 ? num / g : num;
    den_ = g > 1 ? den / g : den;
}

double Rational::to_double() const noexcept
{
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string int128_to_string(int128 v)
{
    if (v == 0)
        return "0";
    const bool neg = v < 0;
    std::string s;
    while (v != 0) {
        int digit = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
        v /= 10;
    }
    if (neg)
        s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

std::string Rational::to_string() const
{
    if (den_ == 1)
        return int128_to_string(num_);
    return int128_to_string(num_) + "/" + int128_to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b)
{
    const auto g = gcd128(a.den_, b.den_);
    return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
}

Rational operator-(const Rational& a, const Rational& b)
{
    return a + Rational(-b.num_, b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    const auto lhs = a.num_ * b.den_;
    const auto rhs = b.num_ * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

} // namespace sgmh
