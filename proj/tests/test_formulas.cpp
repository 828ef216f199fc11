#include "support.hpp"

#include "supdiff/error.hpp"
#include "supdiff/formulas.hpp"

#include <doctest.h>

using namespace testsupport;
using namespace supdiff::formulas;
using supdiff::ExtRational;

namespace {

FunctionFamily abs_family()
{
    return FunctionFamily(1, {{"x", MaxAffineFunction({{RatVector{1}, 0}})},
                              {"-x", MaxAffineFunction({{RatVector{-1}, 0}})}});
}

FunctionFamily sqrt_pair()
{
    return FunctionFamily(1, {{"1", Analytic1D(false, 0, 1)}, {"2", Analytic1D(true, 0, 1)}});
}

FunctionFamily non_lsc_pair()
{
    auto half = [](int dir) {
        return dir > 0 ? Polyhedron::interval(Rational(0), ExtRational::plus_infinity())
                       : Polyhedron::interval(ExtRational::minus_infinity(), Rational(0));
    };
    MaxAffineFunction f1({{RatVector{1}, 0}}, half(1), {{RatVector{0}, 1}});
    MaxAffineFunction f2({{RatVector{-1}, 0}}, half(-1), {{RatVector{0}, 1}});
    return FunctionFamily(1, {{"1", f1}, {"2", f2}});
}

const Hypotheses kContinuous {true, true, true};

} // namespace

TEST_CASE("formula kinds")
{
    for (auto k : all_formula_kinds()) CHECK(parse_formula_kind(to_string(k)) == k);
    CHECK_FALSE(parse_formula_kind("FVB"));
    CHECK(dyadic_square_grid(3) == std::vector<Rational>{Rational(1, 4), Rational(1, 16), Rational(1, 64)});
    CHECK(parse_grid("1/4, 1/16,1/64") == dyadic_square_grid(3));
    CHECK_THROWS_AS(parse_grid("1/16,1/4"), supdiff::Error);
    CHECK_THROWS_AS(parse_grid("1/4,x"), supdiff::Error);
}

TEST_CASE("left-hand sides")
{
    CHECK(lhs_subdifferential(sqrt_pair(), RatVector{0}).is_whole_space());
    CHECK(same_set(lhs_subdifferential(abs_family(), RatVector{0}), Polyhedron::box(RatVector{-1}, RatVector{1})));
    CHECK(lhs_subdifferential(non_lsc_pair(), RatVector{0}).is_whole_space());
    CHECK(lhs_subdifferential(sqrt_pair(), RatVector{1}).is_empty());
}

TEST_CASE("right-hand sides at one eps")
{
    auto s = rhs_at_eps(FormulaKind::BreveFvb1, sqrt_pair(), RatVector{0}, Rational(1, 4));
    CHECK(s.exact);
    CHECK(s.inner.is_whole_space());
    auto e = rhs_at_eps(FormulaKind::BreveFvb1, non_lsc_pair(), RatVector{0}, Rational(1, 8));
    CHECK(e.exact);
    CHECK(e.outer.is_empty());
    for (Rational eps : {Rational(1, 2), Rational(1, 64)}) {
        auto b = rhs_at_eps(FormulaKind::BrondstedM5, abs_family(), RatVector{0}, eps);
        CHECK(same_set(b.outer, Polyhedron::box(RatVector{-1}, RatVector{1})));
    }
    CHECK_THROWS_AS(rhs_at_eps(FormulaKind::BrondstedM5, abs_family(), RatVector{1}, Rational(1, 4)),
                    supdiff::Error);
    CHECK_THROWS_AS(rhs_at_eps(FormulaKind::Marco2, abs_family(), RatVector{0}, Rational(1, 4)), supdiff::Error);
    CHECK_THROWS_AS(rhs_at_eps(FormulaKind::ValadierClassic, abs_family(), RatVector{0}, Rational(1, 4)),
                    supdiff::Error);
}

TEST_CASE("grid intersections")
{
    auto grid = dyadic_square_grid(3);
    CHECK(intersect_over_grid(FormulaKind::BreveFvb1, sqrt_pair(), RatVector{0}, grid).outer.is_whole_space());
    CHECK(same_set(intersect_over_grid(FormulaKind::BrondstedM5, abs_family(), RatVector{0}, grid).inner,
                   Polyhedron::box(RatVector{-1}, RatVector{1})));
    CHECK(intersect_over_grid(FormulaKind::BreveFvb1, non_lsc_pair(), RatVector{0}, grid).outer.is_empty());
}

TEST_CASE("verdicts on the bundled examples")
{
    auto grid = dyadic_square_grid(6);
    auto dirs = random_directions(1, 8, 7);
    Rational tol(1, 256);

    auto sq = verify_formula(FormulaKind::BreveFvb1, sqrt_pair(), RatVector{0}, grid, dirs, tol);
    CHECK(sq.status == VerdictStatus::ExactMatch);

    auto nl = verify_formula(FormulaKind::BreveFvb1, non_lsc_pair(), RatVector{0}, grid, dirs, tol);
    CHECK(nl.status == VerdictStatus::Mismatch);
    REQUIRE(nl.witness);
    CHECK(std::holds_alternative<PointWitness>(*nl.witness));

    auto cl = verify_formula(FormulaKind::BreveFvb1, non_lsc_pair().lsc_envelope(), RatVector{0}, grid, dirs, tol);
    CHECK(cl.status == VerdictStatus::ExactMatch);
    CHECK(cl.lhs.is_whole_space());

    RhsOptions opts {kContinuous, supdiff::BallNorm::Max};
    for (auto k : all_formula_kinds()) {
        auto v = verify_formula(k, abs_family(), RatVector{0}, grid, dirs, tol, opts);
        CHECK_MESSAGE(v.status == VerdictStatus::ExactMatch, to_string(k));
        CHECK(same_set(v.rhs.outer, Polyhedron::box(RatVector{-1}, RatVector{1})));
    }
    auto hlz = verify_formula(FormulaKind::HlzEps, sqrt_pair(), RatVector{0}, grid, dirs, tol);
    CHECK(hlz.status == VerdictStatus::ExactMatch);
    CHECK(hlz.basis == VerdictBasis::GridBottom);
    auto sinl = verify_formula(FormulaKind::SinlM1, non_lsc_pair(), RatVector{0}, grid, dirs, tol);
    CHECK(sinl.status == VerdictStatus::ExactMatch);
}

TEST_CASE("hinge family uses the exact limit")
{
    FunctionFamily fam(1, {{"h", MaxAffineFunction({{RatVector{0}, 0}, {RatVector{1}, -1}})},
                           {"z", MaxAffineFunction({{RatVector{-1}, 0}})}});
    auto grid = dyadic_square_grid(6);
    auto v = verify_formula(FormulaKind::HlzEps, fam, RatVector{0}, grid, random_directions(1, 4, 1), Rational(1, 256));
    CHECK(v.status == VerdictStatus::ExactMatch);
    CHECK(v.basis == VerdictBasis::ExactLimit);
    CHECK(same_set(v.rhs.outer, Polyhedron::box(RatVector{-1}, RatVector{0})));
    // at every grid eps the RHS keeps the extra slopes [0, eps]
    auto bottom = rhs_at_eps(FormulaKind::HlzEps, fam, RatVector{0}, grid.back());
    CHECK(same_set(bottom.outer, Polyhedron::box(RatVector{-1}, RatVector{grid.back()})));
}
