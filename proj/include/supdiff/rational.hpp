#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace supdiff {

// Exact scalar. mpq_class keeps numerator/denominator canonical after every
// arithmetic operation; values built from strings are canonicalized by
// parse_rational.
using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Returns sqrt(q) when q >= 0 is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

// Point or direction in R^n.
class RatVector {
public:
    RatVector() = default;
    explicit RatVector(std::size_t dim) : coords_(dim) {}
    explicit RatVector(std::vector<Rational> coords) : coords_(std::move(coords)) {}
    RatVector(std::initializer_list<Rational> coords) : coords_(coords) {}

    static RatVector unit(std::size_t dim, std::size_t axis, int sign = 1);

    std::size_t dim() const { return coords_.size(); }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }
    Rational& operator[](std::size_t i) { return coords_[i]; }
    const std::vector<Rational>& coords() const { return coords_; }

    auto begin() const { return coords_.begin(); }
    auto end() const { return coords_.end(); }

    bool is_zero() const;

    RatVector& operator+=(const RatVector& other);
    RatVector& operator-=(const RatVector& other);
    RatVector& operator*=(const Rational& s);

    friend RatVector operator+(RatVector a, const RatVector& b) { return a += b; }
    friend RatVector operator-(RatVector a, const RatVector& b) { return a -= b; }
    friend RatVector operator*(const Rational& s, RatVector a) { return a *= s; }
    friend RatVector operator-(RatVector a)
    {
        for (auto& c : a.coords_) c = -c;
        return a;
    }

    friend bool operator==(const RatVector& a, const RatVector& b) { return a.coords_ == b.coords_; }
    friend bool operator<(const RatVector& a, const RatVector& b);

    // Positive multiple with coprime integer coordinates (directions only).
    RatVector primitive() const;

    std::vector<std::string> to_strings() const;
    std::string str() const;

private:
    std::vector<Rational> coords_;
};

Rational dot(const RatVector& a, const RatVector& b);
Rational norm_inf(const RatVector& v);
Rational norm_1(const RatVector& v);

std::ostream& operator<<(std::ostream& os, const RatVector& v);

// Rational extended by -inf/+inf; used for support values and suprema.
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(Rational v) : value_(std::move(v)) {}

    static ExtRational plus_infinity() { return ExtRational(Infinite {}, 1); }
    static ExtRational minus_infinity() { return ExtRational(Infinite {}, -1); }

    bool is_finite() const { return inf_ == 0; }
    bool is_plus_infinity() const { return inf_ > 0; }
    bool is_minus_infinity() const { return inf_ < 0; }
    const Rational& value() const { return value_; }

    friend bool operator==(const ExtRational& a, const ExtRational& b)
    {
        return a.inf_ == b.inf_ && (a.inf_ != 0 || a.value_ == b.value_);
    }
    friend bool operator<(const ExtRational& a, const ExtRational& b);
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }

    // Sum with infinity absorption; -inf + +inf is rejected.
    friend ExtRational operator+(const ExtRational& a, const ExtRational& b);

    std::string str() const;

private:
    struct Infinite {};
    ExtRational(Infinite, int inf) : inf_(inf) {}
    Rational value_ {0};
    int inf_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExtRational& v);

// Exact real of the form q + m*sqrt(r) (r >= 0), or +inf. Values of
// x -> -sqrt(x) land here; comparisons are decided by sign analysis and
// squaring, never by floating point.
class ExactReal {
public:
    ExactReal() = default;
    ExactReal(Rational q) : q_(std::move(q)) {}
    ExactReal(Rational q, Rational m, Rational r);

    static ExactReal plus_infinity();

    bool is_finite() const { return !infinite_; }
    bool is_rational() const { return !infinite_ && sgn(m_) == 0; }
    const Rational& rational_part() const { return q_; }
    const Rational& sqrt_coefficient() const { return m_; }
    const Rational& radicand() const { return r_; }

    // Defined only when is_rational().
    const Rational& as_rational() const;

    ExactReal operator+(const Rational& shift) const;
    ExactReal operator-(const Rational& shift) const { return *this + Rational(-shift); }

    friend int compare(const ExactReal& a, const ExactReal& b);
    friend bool operator==(const ExactReal& a, const ExactReal& b) { return compare(a, b) == 0; }
    friend bool operator<(const ExactReal& a, const ExactReal& b) { return compare(a, b) < 0; }
    friend bool operator<=(const ExactReal& a, const ExactReal& b) { return compare(a, b) <= 0; }
    friend bool operator>(const ExactReal& a, const ExactReal& b) { return compare(a, b) > 0; }
    friend bool operator>=(const ExactReal& a, const ExactReal& b) { return compare(a, b) >= 0; }

    // |a - b| <= bound, exactly. Both operands must be finite.
    friend bool within(const ExactReal& a, const ExactReal& b, const Rational& bound);

    double approx() const;
    std::string str() const;

private:
    Rational q_ {0};
    Rational m_ {0};
    Rational r_ {0};
    bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExactReal& v);

// Sign of a + b*sqrt(r) + c*sqrt(s), r, s >= 0.
int sign_of(const Rational& a, const Rational& b, const Rational& r, const Rational& c, const Rational& s);

} // namespace supdiff
