#pragma once

#include "supdiff/subdifferential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace supdiff::formulas {

enum class FormulaKind { BrondstedM5, HlzEps, BreveFvb1, HatCor1, SinlM1, Marco2, ValadierClassic };

const char* to_string(FormulaKind k);
std::optional<FormulaKind> parse_formula_kind(std::string_view name);
const std::vector<FormulaKind>& all_formula_kinds();

/// Hypotheses an instance declares about itself; the continuity formulas
/// refuse to run without them.
struct Hypotheses {
    bool lsc = true;
    bool continuous_at_x = false;
    bool continuous_somewhere = false;
};

struct RhsOptions {
    Hypotheses hyp;
    BallNorm norm = BallNorm::Max;
};

struct RhsSandwich {
    Rational eps;
    polyrat::Polyhedron inner;
    polyrat::Polyhedron outer;
    bool exact = false;
};

// Exact subdifferential of sup fam at x.
polyrat::Polyhedron lhs_subdifferential(const FunctionFamily& fam, const RatVector& x);

// Normal cone of dom(sup fam) at x; empty outside the domain.
polyrat::Polyhedron domain_normal_cone(const FunctionFamily& fam, const RatVector& x);

RhsSandwich rhs_at_eps(FormulaKind kind, const FunctionFamily& fam, const RatVector& x, const Rational& eps,
                       const RhsOptions& opts = {});

// One sandwich per grid value, computed concurrently.
std::vector<RhsSandwich> rhs_over_grid(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                       const std::vector<Rational>& grid, const RhsOptions& opts = {});

// Intersection of the per-eps sandwiches (plus the normal cone for MARCO2).
// Throws InvalidArgument if the outer sets fail to shrink along the grid.
RhsSandwich intersect_over_grid(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                const std::vector<Rational>& grid, const RhsOptions& opts = {});
RhsSandwich intersect_sandwiches(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                 const std::vector<RhsSandwich>& per_eps);

// {(2^-k)^2 : k = 1..levels}
std::vector<Rational> dyadic_square_grid(int levels = 6);
std::vector<Rational> parse_grid(std::string_view text);

enum class VerdictStatus { ExactMatch, SandwichPass, Mismatch };
enum class VerdictBasis { GridBottom, ExactLimit };

const char* to_string(VerdictStatus s);
const char* to_string(VerdictBasis b);

struct DirectionWitness {
    RatVector direction;
    ExtRational lhs_support;
    ExtRational rhs_bound;
};

struct PointWitness {
    RatVector point;
    std::string side;
};

struct Verdict {
    FormulaKind kind {};
    VerdictStatus status = VerdictStatus::Mismatch;
    VerdictBasis basis = VerdictBasis::GridBottom;
    std::optional<std::variant<DirectionWitness, PointWitness>> witness;
    std::vector<Rational> grid;
    Rational support_tolerance;
    ExtRational gap;
    std::size_t directions_checked = 0;
    polyrat::Polyhedron lhs;
    RhsSandwich rhs;
    std::string note;
};

// Seeded random integer directions in [-4, 4]^n, nonzero.
std::vector<RatVector> random_directions(std::size_t n, std::size_t count, std::uint64_t seed);

/// Verdict for the identity lhs = RHS. The supplied directions are extended
/// with the axis directions and the facet normals of lhs and the RHS outer
/// set. For the two eps-subdifferential formulas the RHS is taken in the
/// limit eps -> 0 whenever every active member varies continuously there.
Verdict verify_formula(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                       const std::vector<Rational>& grid, const std::vector<RatVector>& directions,
                       const Rational& tol, const RhsOptions& opts = {});

} // namespace supdiff::formulas
