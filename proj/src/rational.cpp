#include "supdiff/rational.hpp"

#include "supdiff/error.hpp"

#include <cmath>
#include <sstream>

namespace supdiff {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::ZeroNormal: return "ZERO_NORMAL";
    case ErrorCode::Improper: return "IMPROPER";
    case ErrorCode::InvalidOverride: return "INVALID_OVERRIDE";
    case ErrorCode::NotRational: return "NOT_RATIONAL";
    case ErrorCode::NoSqrt: return "NO_SQRT";
    case ErrorCode::NotEpsSubgradient: return "NOT_EPS_SUBGRADIENT";
    case ErrorCode::DimensionCap: return "DIMENSION_CAP";
    case ErrorCode::UnsupportedFamily: return "UNSUPPORTED_FAMILY";
    case ErrorCode::PreconditionContinuity: return "PRECONDITION_CONTINUITY";
    case ErrorCode::PreconditionActive: return "PRECONDITION_ACTIVE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    }
    return "UNKNOWN";
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
    std::size_t start = s[0] == '-' ? 1 : 0;
    bool seen_slash = false;
    bool digit_before = false;
    bool digit_after = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (c == '/' && !seen_slash) {
            seen_slash = true;
        } else if (c >= '0' && c <= '9') {
            (seen_slash ? digit_after : digit_before) = true;
        } else {
            throw Error(ErrorCode::ParseError, "malformed rational '" + s + "'");
        }
    }
    if (!digit_before || (seen_slash && !digit_after))
        throw Error(ErrorCode::ParseError, "malformed rational '" + s + "'");
    Rational q;
    if (q.set_str(s, 10) != 0) throw Error(ErrorCode::ParseError, "malformed rational '" + s + "'");
    if (sgn(q.get_den()) == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::optional<Rational> exact_sqrt(const Rational& q)
{
    if (sgn(q) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return std::nullopt;
    mpz_class num;
    mpz_class den;
    mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------- RatVector

RatVector RatVector::unit(std::size_t dim, std::size_t axis, int sign)
{
    RatVector v(dim);
    v[axis] = sign;
    return v;
}

bool RatVector::is_zero() const
{
    for (const auto& c : coords_)
        if (sgn(c) != 0) return false;
    return true;
}

RatVector& RatVector::operator+=(const RatVector& other)
{
    if (other.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "vector addition");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

RatVector& RatVector::operator-=(const RatVector& other)
{
    if (other.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "vector subtraction");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

RatVector& RatVector::operator*=(const Rational& s)
{
    for (auto& c : coords_) c *= s;
    return *this;
}

bool operator<(const RatVector& a, const RatVector& b)
{
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

RatVector RatVector::primitive() const
{
    mpz_class l = 1;
    for (const auto& c : coords_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> ints;
    ints.reserve(coords_.size());
    mpz_class g = 0;
    for (const auto& c : coords_) {
        mpz_class v = c.get_num() * (l / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        ints.push_back(std::move(v));
    }
    if (g == 0) return *this;
    RatVector out(coords_.size());
    for (std::size_t i = 0; i < ints.size(); ++i) out[i] = Rational(ints[i] / g);
    return out;
}

std::vector<std::string> RatVector::to_strings() const
{
    std::vector<std::string> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) out.push_back(c.get_str());
    return out;
}

std::string RatVector::str() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

Rational dot(const RatVector& a, const RatVector& b)
{
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "dot product");
    Rational s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

Rational norm_inf(const RatVector& v)
{
    Rational m = 0;
    for (const auto& c : v) {
        Rational a = abs(c);
        if (a > m) m = a;
    }
    return m;
}

Rational norm_1(const RatVector& v)
{
    Rational s = 0;
    for (const auto& c : v) s += abs(c);
    return s;
}

std::ostream& operator<<(std::ostream& os, const RatVector& v)
{
    os << '(';
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) os << ", ";
        os << v[i].get_str();
    }
    return os << ')';
}

// -------------------------------------------------------------- ExtRational

bool operator<(const ExtRational& a, const ExtRational& b)
{
    if (a.inf_ != b.inf_) return a.inf_ < b.inf_;
    if (a.inf_ != 0) return false;
    return a.value_ < b.value_;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b)
{
    if (a.inf_ != 0 && b.inf_ != 0 && a.inf_ != b.inf_)
        throw Error(ErrorCode::InvalidArgument, "-inf + +inf is undefined");
    if (a.inf_ != 0) return a;
    if (b.inf_ != 0) return b;
    return ExtRational(Rational(a.value_ + b.value_));
}

std::string ExtRational::str() const
{
    if (inf_ > 0) return "+inf";
    if (inf_ < 0) return "-inf";
    return value_.get_str();
}

std::ostream& operator<<(std::ostream& os, const ExtRational& v) { return os << v.str(); }

// ---------------------------------------------------------------- ExactReal

namespace {

// Sign of a + b*sqrt(r).
int sign2(const Rational& a, const Rational& b, const Rational& r)
{
    int sa = sgn(a);
    int sb = sgn(r) == 0 ? 0 : sgn(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with b^2 r
    Rational lhs = a * a;
    Rational rhs = b * b * r;
    int c = cmp(lhs, rhs);
    if (c == 0) return 0;
    return c > 0 ? sa : sb;
}

} // namespace

int sign_of(const Rational& a, const Rational& b, const Rational& r, const Rational& c, const Rational& s)
{
    // alpha = a + b sqrt(r), beta = c sqrt(s)
    int s_alpha = sign2(a, b, r);
    int s_beta = sgn(s) == 0 ? 0 : sgn(c);
    if (s_beta == 0) return s_alpha;
    if (s_alpha == 0) return s_beta;
    if (s_alpha == s_beta) return s_alpha;
    // compare alpha^2 = a^2 + b^2 r + 2ab sqrt(r) with beta^2 = c^2 s
    Rational p = a * a + b * b * r - c * c * s;
    Rational q = 2 * a * b;
    int d = sign2(p, q, r);
    if (d == 0) return 0;
    return d > 0 ? s_alpha : s_beta;
}

ExactReal::ExactReal(Rational q, Rational m, Rational r) : q_(std::move(q)), m_(std::move(m)), r_(std::move(r))
{
    if (sgn(r_) < 0) throw Error(ErrorCode::InvalidArgument, "negative radicand");
    if (auto root = exact_sqrt(r_)) {
        q_ += m_ * *root;
        m_ = 0;
        r_ = 0;
    } else if (sgn(m_) == 0) {
        r_ = 0;
    }
}

ExactReal ExactReal::plus_infinity()
{
    ExactReal v;
    v.infinite_ = true;
    return v;
}

const Rational& ExactReal::as_rational() const
{
    if (!is_rational()) throw Error(ErrorCode::NotRational, "value " + str() + " is not rational");
    return q_;
}

ExactReal ExactReal::operator+(const Rational& shift) const
{
    if (infinite_) return *this;
    ExactReal v = *this;
    v.q_ += shift;
    return v;
}

int compare(const ExactReal& a, const ExactReal& b)
{
    if (a.infinite_ || b.infinite_) return int(a.infinite_) - int(b.infinite_);
    return sign_of(Rational(a.q_ - b.q_), a.m_, a.r_, Rational(-b.m_), b.r_);
}

bool within(const ExactReal& a, const ExactReal& b, const Rational& bound)
{
    if (!a.is_finite() || !b.is_finite()) throw Error(ErrorCode::InvalidArgument, "within() on infinite value");
    return a <= b + bound && b <= a + bound;
}

double ExactReal::approx() const
{
    if (infinite_) return HUGE_VAL;
    return q_.get_d() + m_.get_d() * std::sqrt(r_.get_d());
}

std::string ExactReal::str() const
{
    if (infinite_) return "+inf";
    if (sgn(m_) == 0) return q_.get_str();
    std::string out;
    if (sgn(q_) != 0) out = q_.get_str() + (sgn(m_) > 0 ? " + " : " - ");
    else if (sgn(m_) < 0) out = "-";
    Rational am = abs(m_);
    if (am != 1) out += am.get_str() + "*";
    return out + "sqrt(" + r_.get_str() + ")";
}

std::ostream& operator<<(std::ostream& os, const ExactReal& v) { return os << v.str(); }

} // namespace supdiff
