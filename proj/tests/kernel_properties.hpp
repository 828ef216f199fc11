#pragma once

// Seeded property suites for the polyhedral and subdifferential identities, shared by the unit tests and
// the acceptance runner.

#include "support.hpp"

#include "supdiff/harness.hpp"
#include "supdiff/subdifferential.hpp"

#include <sstream>
#include <string>

namespace testsupport {

using supdiff::BallNorm;
using supdiff::EnlargementQuery;
using supdiff::Variant;

struct PropertyResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t violations = 0;
    std::string first;

    void fail(const std::string& why)
    {
        if (violations++ == 0) first = why;
    }
    bool ok() const { return violations == 0 && cases > 0; }
};

// {lambda y : y in A, lambda in [l, u]} through the homogenized lift
// {(y, lambda) : y in lambda A}, projected onto y.
inline Polyhedron scalar_hull(const Polyhedron& a, const Rational& l, const Rational& u)
{
    const std::size_t n = a.dim();
    const auto& h = a.hrep();
    HalfspaceSystem lift(n + 1);
    // lambda < 0 flips the homogenized inequalities
    const int s = sgn(u) < 0 ? -1 : 1;
    auto widen = [n, s](const Halfspace& hs) {
        RatVector v(n + 1);
        for (std::size_t i = 0; i < n; ++i) v[i] = s * hs.normal[i];
        v[n] = -s * hs.offset;
        return v;
    };
    for (const auto& q : h.inequalities) lift.add_inequality(widen(q), 0);
    for (const auto& e : h.equalities) lift.add_equality(widen(e), 0);
    lift.add_inequality(RatVector::unit(n + 1, n, 1), u);
    lift.add_inequality(RatVector::unit(n + 1, n, -1), Rational(-l));
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) keep.push_back(i);
    return project(Polyhedron::from_hrep(std::move(lift)), keep);
}

inline Rational dyadic_square(int k)
{
    Rational e(1, 1);
    for (int i = 0; i < 2 * k; ++i) e /= 2;
    return e;
}

inline std::string case_tag(std::size_t c, const std::string& what)
{
    std::ostringstream os;
    os << "case " << c << ": " << what;
    return os.str();
}

inline PropertyResult check_interval_scaling(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r {"interval scaling commutes with the closed hull"};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        Polyhedron a = random_polytope(rng, n);
        Rational l = rng.rational(1, 3);
        Rational u = l + rng.rational(0, 2);
        if (rng.uniform(0, 1)) {
            Rational t = -u;
            u = -l;
            l = t;
        }
        Polyhedron lifted = scalar_hull(a, l, u);
        Polyhedron hull = closed_conv_union({scale(a, l), scale(a, u)}, n);
        ++r.cases;
        if (!same_set(lifted, hull)) r.fail(case_tag(c, "Omega*A differs from co(lA u uA) for " + a.str()));
    }
    return r;
}

// A_eps = C + eps Q shrinks to the core C; Lambda_eps A_eps is compared with
// A_eps along the grid eps = (2^-k)^2, k = 1..5.
inline PropertyResult check_shrinking_scaling(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r {"scaled shrinking sets share their intersection"};
    Rng rng(seed);
    const int levels = 5;
    for (std::size_t c = 0; c < cases; ++c) {
        ++r.cases;
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        Polyhedron core = random_polytope(rng, n);
        Polyhedron spread = random_polytope(rng, n);
        std::vector<Polyhedron> as;
        std::vector<Polyhedron> ss;
        std::vector<Rational> roots;
        for (int k = 1; k <= levels; ++k) {
            Rational eps = dyadic_square(k);
            Rational root = *supdiff::exact_sqrt(eps);
            Rational l = 1 / (1 + root);
            Rational u = 1 / (1 - root);
            Polyhedron a = minkowski_sum(core, scale(spread, eps));
            as.push_back(a);
            ss.push_back(closed_conv_union({scale(a, l), scale(a, u)}, n));
            roots.push_back(root);
        }
        Polyhedron int_a = as.front();
        Polyhedron int_s = ss.front();
        for (int k = 1; k < levels; ++k) {
            if (!contains_set(as[k - 1], as[k])) r.fail(case_tag(c, "A_eps not nested"));
            if (!contains_set(ss[k - 1], ss[k])) r.fail(case_tag(c, "Lambda_eps A_eps not nested"));
            int_a = intersect(int_a, as[k]);
            int_s = intersect(int_s, ss[k]);
        }
        const Polyhedron& a = as.back();
        const Polyhedron& s = ss.back();
        if (!same_set(int_a, a) || !same_set(int_s, s)) r.fail(case_tag(c, "grid intersection is not the bottom set"));
        if (!contains_set(s, a)) r.fail(case_tag(c, "A_eps not inside Lambda_eps A_eps"));
        if (!contains_set(s, core)) r.fail(case_tag(c, "core lost"));
        const Rational root = roots.back();
        const Rational spread_factor = root / (1 - root);
        for (int j = 0; j < 12; ++j) {
            RatVector d = rng.nonzero_vector(n, -4, 4);
            Rational sa = support(a, d).value();
            Rational ssup = support(s, d).value();
            Rational expect = std::max(Rational(sa / (1 + root)), Rational(sa / (1 - root)));
            if (ssup != expect) r.fail(case_tag(c, "support of Lambda A is not max(l, u) * support of A"));
            if (ssup - sa > spread_factor * abs(sa)) r.fail(case_tag(c, "support gap above sqrt(eps)/(1-sqrt(eps))"));
        }
    }
    return r;
}

inline PropertyResult check_orthogonal_widening(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r {"A + L-perp over subspaces through x"};
    Rng rng(seed);
    using supdiff::polyrat::Subspace;
    for (std::size_t c = 0; c < cases; ++c) {
        ++r.cases;
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        Polyhedron a = random_polyhedron(rng, n);
        RatVector x = rng.vector(n, -2, 2);
        std::vector<Subspace> family;
        long extra = rng.uniform(1, 3);
        for (long j = 0; j < extra; ++j) {
            std::vector<RatVector> basis;
            if (!x.is_zero()) basis.push_back(x);
            long more = rng.uniform(0, static_cast<long>(n) - 1);
            for (long m = 0; m < more; ++m) {
                RatVector v = rng.nonzero_vector(n, -2, 2);
                std::vector<RatVector> trial = basis;
                trial.push_back(v);
                if (rank(trial) == trial.size()) basis = trial;
            }
            family.emplace_back(n, basis);
        }
        Polyhedron without_whole = Polyhedron::whole_space(n);
        for (const auto& l : family) {
            if (!l.contains(x)) r.fail(case_tag(c, "subspace misses x"));
            Polyhedron widened = minkowski_sum(a, l.orthogonal_complement().as_polyhedron());
            if (!contains_set(widened, a)) r.fail(case_tag(c, "A + L-perp lost part of A"));
            without_whole = intersect(without_whole, widened);
        }
        if (!contains_set(without_whole, a)) r.fail(case_tag(c, "intersection lost part of A"));
        Polyhedron with_whole = intersect(without_whole, minkowski_sum(a, Subspace::whole(n).orthogonal_complement().as_polyhedron()));
        if (!same_set(with_whole, a)) r.fail(case_tag(c, "intersection with L = R^n is not A"));
    }
    return r;
}

// Domain through x: random halfspaces whose slack at x is 0..2.
inline Polyhedron domain_around(Rng& rng, const RatVector& x)
{
    const std::size_t n = x.dim();
    HalfspaceSystem h(n);
    long m = rng.uniform(1, 2 * static_cast<long>(n));
    for (long k = 0; k < m; ++k) {
        RatVector a = rng.nonzero_vector(n, -3, 3);
        h.add_inequality(a, Rational(dot(a, x) + rng.uniform(0, 2)));
    }
    return Polyhedron::from_hrep(std::move(h));
}

inline PropertyResult check_coordinate_restrictions(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r {"coordinate-subspace restrictions recover the subdifferential"};
    Rng rng(seed);
    using supdiff::polyrat::Subspace;
    for (std::size_t c = 0; c < cases; ++c) {
        ++r.cases;
        std::size_t n = static_cast<std::size_t>(rng.uniform(2, 3));
        RatVector x = rng.vector(n, -1, 1);
        x[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1))] = 0;
        std::vector<AffinePiece> ps;
        long pieces = rng.uniform(1, 3);
        for (long i = 0; i < pieces; ++i) ps.push_back({rng.vector(n, -4, 4), Rational(rng.uniform(-4, 4))});
        MaxAffineFunction f = rng.uniform(0, 1) ? MaxAffineFunction(ps, domain_around(rng, x)) : MaxAffineFunction(ps);
        Polyhedron exact = supdiff::subdifferential(f, x);
        Polyhedron meet = Polyhedron::whole_space(n);
        for (std::size_t mask = 0; mask < (std::size_t {1} << n); ++mask) {
            std::vector<std::size_t> axes;
            bool holds_x = true;
            for (std::size_t i = 0; i < n; ++i) {
                if ((mask >> i) & 1)
                    axes.push_back(i);
                else if (sgn(x[i]) != 0)
                    holds_x = false;
            }
            if (!holds_x) continue;
            Polyhedron sub = supdiff::subdifferential(f.restricted(Subspace::coordinate(n, axes).as_polyhedron()), x);
            if (!contains_set(sub, exact)) r.fail(case_tag(c, "restriction lost subgradients"));
            meet = intersect(meet, sub);
        }
        if (!same_set(meet, exact)) r.fail(case_tag(c, "intersection differs from the subdifferential of " + f.str()));
    }
    return r;
}

inline MaxAffineFunction random_function(Rng& rng, std::size_t n, RatVector& x)
{
    x = rng.vector(n, -1, 1);
    std::vector<AffinePiece> ps;
    long pieces = rng.uniform(1, 4);
    for (long i = 0; i < pieces; ++i) ps.push_back({rng.vector(n, -4, 4), Rational(rng.uniform(-4, 4))});
    if (rng.uniform(0, 1)) return MaxAffineFunction(ps, domain_around(rng, x));
    return MaxAffineFunction(ps);
}

inline PropertyResult check_nesting(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r {"eps-subdifferential nesting"};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        ++r.cases;
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        RatVector x;
        MaxAffineFunction f = random_function(rng, n, x);
        Rational e1 = rng.rational(0, 1);
        Rational e2 = e1 + rng.rational(0, 1);
        auto d0 = supdiff::subdifferential(f, x);
        auto d1 = supdiff::eps_subdifferential(f, x, e1);
        auto d2 = supdiff::eps_subdifferential(f, x, e2);
        if (!contains_set(d1, d0) || !contains_set(d2, d1)) r.fail(case_tag(c, "nesting fails for " + f.str()));
    }
    return r;
}

inline PropertyResult check_chain(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r {"enlargement chain BREVE in HAT in 2eps-subdifferential"};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        ++r.cases;
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        RatVector x;
        MaxAffineFunction f = random_function(rng, n, x);
        Rational eps = dyadic_square(static_cast<int>(rng.uniform(1, 3)));
        auto breve = supdiff::enlargement({f, x, eps, Variant::Breve});
        auto twice = supdiff::eps_subdifferential(f, x, 2 * eps);
        EnlargementQuery hat {f, x, eps, Variant::Hat};
        for (const auto& part : breve.inner_parts) {
            for (const auto& g : part.vrep().vertices) {
                if (!supdiff::enlargement_member(hat, g).member) r.fail(case_tag(c, "BREVE generator outside HAT"));
                if (!member(twice, g)) r.fail(case_tag(c, "BREVE generator outside the 2eps-subdifferential"));
            }
        }
        if (!contains_set(twice, breve.inner())) r.fail(case_tag(c, "BREVE inner set outside the 2eps-subdifferential"));
    }
    return r;
}

// Every inner generator of the member enlargements lies in the
// 3eps-subdifferential of the supremum.
inline PropertyResult check_inclusion_3eps(std::uint64_t seed, std::size_t cases, Variant v)
{
    PropertyResult r {v == Variant::Hat ? "HAT inner sets inside the 3eps-subdifferential"
                                        : "BREVE inner sets inside the 3eps-subdifferential"};
    Rng rng(seed);
    using supdiff::harness::GenKind;
    for (std::size_t c = 0; c < cases; ++c) {
        ++r.cases;
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        std::size_t k = static_cast<std::size_t>(rng.uniform(2, 5));
        GenKind kind = rng.uniform(0, 1) ? GenKind::WithIndicator : GenKind::FullDomain;
        auto inst = supdiff::harness::gen_random_instance(n, k, static_cast<std::uint64_t>(rng.uniform(0, 1 << 20)), kind);
        Rational eps = dyadic_square(static_cast<int>(rng.uniform(1, 3)));
        auto sup = supdiff::sup_function(inst.family);
        auto big = supdiff::eps_subdifferential(sup.max_affine(), inst.x, 3 * eps);
        for (auto t : supdiff::active_indices(inst.family, inst.x, eps, false)) {
            auto s = supdiff::enlargement({inst.family.entries()[t].f, inst.x, eps, v});
            for (const auto& part : s.inner_parts)
                for (const auto& g : part.vrep().vertices)
                    if (!member(big, g)) r.fail(case_tag(c, "generator outside in " + inst.name));
            if (!contains_set(big, s.inner())) r.fail(case_tag(c, "inner set outside in " + inst.name));
        }
    }
    return r;
}

} // namespace testsupport
