#pragma once

#include "supdiff/polyhedron.hpp"
#include "supdiff/rational.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace supdiff {

struct AffinePiece {
    RatVector a;
    Rational b;

    Rational operator()(const RatVector& y) const { return dot(a, y) + b; }
    friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

struct Override {
    RatVector point;
    Rational value;
};

/// One linearity cell of a max-affine function: the closure of the set where
/// exactly the pieces in `pieces` are active and exactly the domain rows in
/// `facets` are tight. On its relative interior the subdifferential is the
/// constant set `slopes`.
struct LinearityCell {
    std::vector<std::size_t> pieces;
    std::vector<std::size_t> facets;
    polyrat::Polyhedron region;
    polyrat::Polyhedron slopes;
    RatVector relint_point;
};

/// y -> max_i <a_i, y> + b_i on a polyhedral domain, optionally raised at
/// finitely many vertices of the domain.
class MaxAffineFunction {
public:
    MaxAffineFunction(std::vector<AffinePiece> pieces, std::optional<polyrat::Polyhedron> domain = std::nullopt,
                      std::vector<Override> overrides = {});

    std::size_t dim() const { return dim_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }
    // Minimized domain polyhedron; facet indices refer to its hrep().
    const polyrat::Polyhedron& domain() const { return domain_; }
    const std::vector<Override>& overrides() const { return overrides_; }
    bool has_overrides() const { return !overrides_.empty(); }

    // Max of the pieces, ignoring domain and overrides.
    Rational base_value(const RatVector& y) const;
    ExtRational eval(const RatVector& y) const;
    const Override* override_at(const RatVector& y) const;

    std::vector<std::size_t> active_pieces(const RatVector& y) const;

    MaxAffineFunction without_overrides() const;
    MaxAffineFunction restricted(const polyrat::Polyhedron& q) const;

    // Epigraph of the override-free function in R^{n+1}, last coordinate t.
    const polyrat::Polyhedron& epigraph() const;
    const std::vector<LinearityCell>& cells() const;

    std::string str() const;

private:
    struct Cache;
    std::size_t dim_;
    std::vector<AffinePiece> pieces_;
    polyrat::Polyhedron domain_;
    std::vector<Override> overrides_;
    std::shared_ptr<Cache> cache_;
};

/// x -> -scale * sqrt(u), u = (reflect ? -y : y) - shift, +inf when u < 0.
struct Analytic1D {
    enum class Kind { NegSqrt };

    Kind kind = Kind::NegSqrt;
    bool reflect = false;
    Rational shift {0};
    Rational scale {1};

    Analytic1D() = default;
    Analytic1D(bool reflect, Rational shift, Rational scale);

    int sigma() const { return reflect ? -1 : 1; }
    Rational arg(const Rational& y) const { return sigma() * y - shift; }
    ExactReal eval(const Rational& y) const;
    polyrat::Polyhedron domain() const;
    std::string str() const;
};

class ConvexFunction {
public:
    ConvexFunction(MaxAffineFunction f) : rep_(std::move(f)) {}
    ConvexFunction(Analytic1D f) : rep_(std::move(f)) {}

    std::size_t dim() const;
    bool is_max_affine() const { return std::holds_alternative<MaxAffineFunction>(rep_); }
    const MaxAffineFunction& max_affine() const { return std::get<MaxAffineFunction>(rep_); }
    const Analytic1D& analytic() const { return std::get<Analytic1D>(rep_); }

    ExactReal eval(const RatVector& y) const;
    polyrat::Polyhedron domain() const;
    ConvexFunction lsc_envelope() const;
    bool is_lsc() const;
    // f + indicator of q.
    ConvexFunction restricted(const polyrat::Polyhedron& q) const;

    std::string str() const;

private:
    std::variant<MaxAffineFunction, Analytic1D> rep_;
};

struct FamilyEntry {
    std::string label;
    ConvexFunction f;
};

class FunctionFamily {
public:
    FunctionFamily(std::size_t dim, std::vector<FamilyEntry> entries);

    std::size_t dim() const { return dim_; }
    const std::vector<FamilyEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool all_max_affine() const;

    FunctionFamily lsc_envelope() const;

private:
    std::size_t dim_;
    std::vector<FamilyEntry> entries_;
};

/// The supremum of a family: an exact max-affine function when every member
/// is max-affine, otherwise an evaluation handle over the members.
class SupFunction {
public:
    explicit SupFunction(FunctionFamily fam);

    const FunctionFamily& family() const { return fam_; }
    bool is_max_affine() const { return exact_.has_value(); }
    const MaxAffineFunction& max_affine() const;

    ExactReal eval(const RatVector& y) const;
    const polyrat::Polyhedron& domain() const { return domain_; }

private:
    FunctionFamily fam_;
    polyrat::Polyhedron domain_;
    std::optional<MaxAffineFunction> exact_;
};

SupFunction sup_function(const FunctionFamily& fam);

/// Labels t with f_t(x) >= f(x) - eps (cl f_t when use_cl). When f(x) is +inf
/// the set is {t : f_t(x) = +inf}.
std::set<std::string> active_set(const FunctionFamily& fam, const RatVector& x, const Rational& eps, bool use_cl);
std::vector<std::size_t> active_indices(const FunctionFamily& fam, const RatVector& x, const Rational& eps,
                                        bool use_cl);

} // namespace supdiff
