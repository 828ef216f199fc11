#pragma once

#include "supdiff/convex_function.hpp"

#include <optional>
#include <string>
#include <vector>

namespace supdiff {

polyrat::Polyhedron subdifferential(const ConvexFunction& f, const RatVector& x);

// Exact eps-subdifferential. Empty when x is outside the domain.
polyrat::Polyhedron eps_subdifferential(const ConvexFunction& f, const RatVector& x, const Rational& eps);

enum class Variant { Breve, Hat, SmallFrown };

const char* to_string(Variant v);

enum class BallNorm { Max, L1 };

// Closed eps-ball around x in the chosen norm.
polyrat::Polyhedron norm_ball(const RatVector& x, const Rational& eps, BallNorm norm);

/// Enlargement of the subdifferential of f at x: exact subgradients at points
/// y with |f(y) - f(x)| <= eps, in the sup-norm eps-ball around x (dropped for
/// SmallFrown), and with |<y*, y - x>| <= eps (Breve, SmallFrown) or
/// y* in the 2eps-subdifferential at x (Hat).
struct EnlargementQuery {
    ConvexFunction f;
    RatVector x;
    Rational eps;
    Variant variant = Variant::Breve;
    BallNorm norm = BallNorm::Max;
};

/// The enlargement is a union of polyhedra; `inner_parts` are certified
/// subsets and `outer_parts` cover it.
struct EnlargementSandwich {
    EnlargementQuery query;
    std::vector<polyrat::Polyhedron> inner_parts;
    std::vector<polyrat::Polyhedron> outer_parts;
    bool exact = false;

    polyrat::Polyhedron inner() const;
    polyrat::Polyhedron outer() const;
};

EnlargementSandwich enlargement(const EnlargementQuery& q);

struct Membership {
    bool member = false;
    std::optional<RatVector> witness;
};

Membership enlargement_member(const EnlargementQuery& q, const RatVector& ystar);

struct BRWitness {
    RatVector x_eps;
    RatVector xstar_eps;
    Rational lambda_eps;
    RatVector ystar_eps;
    Rational sqrt_eps;
};

// Nearby exact subgradient for an eps-subgradient (max-affine f; the lsc
// envelope is used). eps must be the square of a rational.
BRWitness br_witness(const ConvexFunction& f, const RatVector& x, const RatVector& xstar, const Rational& eps);

} // namespace supdiff
