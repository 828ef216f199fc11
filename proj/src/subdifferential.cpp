#include "supdiff/subdifferential.hpp"

#include "supdiff/error.hpp"

#include <algorithm>

namespace supdiff {

using polyrat::GeneratorSystem;
using polyrat::HalfspaceSystem;
using polyrat::Polyhedron;

const char* to_string(Variant v)
{
    switch (v) {
    case Variant::Breve: return "BREVE";
    case Variant::Hat: return "HAT";
    case Variant::SmallFrown: return "SMALLFROWN";
    }
    return "?";
}

namespace {

// eps-subdifferential of the override-free function at a domain point x:
// the image of {lambda in simplex, mu >= 0 : sum lambda_i delta_i + sum mu_j s_j <= eps}
// under (lambda, mu) -> sum lambda_i a_i + sum mu_j c_j, plus the equality normals.
Polyhedron base_eps_subdifferential(const MaxAffineFunction& f, const RatVector& x, const Rational& eps)
{
    const std::size_t n = f.dim();
    const auto& pieces = f.pieces();
    const auto& h = f.domain().hrep();
    const Rational fx = f.base_value(x);

    std::vector<Rational> delta;
    for (const auto& p : pieces) delta.push_back(fx - p(x));
    std::vector<Rational> slack;
    for (const auto& q : h.inequalities) slack.push_back(q.offset - dot(q.normal, x));

    GeneratorSystem g(n);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (delta[i] > eps) continue;
        g.vertices.push_back(pieces[i].a);
        if (delta[i] == eps) continue;
        for (std::size_t l = 0; l < pieces.size(); ++l) {
            if (delta[l] <= eps) continue;
            Rational lam = (delta[l] - eps) / (delta[l] - delta[i]);
            g.vertices.push_back(lam * pieces[i].a + Rational(1 - lam) * pieces[l].a);
        }
        for (std::size_t j = 0; j < slack.size(); ++j) {
            if (sgn(slack[j]) == 0) continue;
            Rational mu = (eps - delta[i]) / slack[j];
            g.vertices.push_back(pieces[i].a + mu * h.inequalities[j].normal);
        }
    }
    for (std::size_t j = 0; j < slack.size(); ++j)
        if (sgn(slack[j]) == 0) g.rays.push_back(h.inequalities[j].normal);
    for (const auto& e : h.equalities) {
        g.rays.push_back(e.normal);
        g.rays.push_back(-e.normal);
    }
    return Polyhedron::from_vrep(std::move(g));
}

Polyhedron max_affine_eps(const MaxAffineFunction& f, const RatVector& x, const Rational& eps)
{
    if (!polyrat::member(f.domain(), x)) return Polyhedron::empty(f.dim());
    if (const Override* o = f.override_at(x)) {
        Rational gap = o->value - f.base_value(x);
        if (eps < gap) return Polyhedron::empty(f.dim());
        return base_eps_subdifferential(f, x, Rational(eps - gap));
    }
    return base_eps_subdifferential(f, x, eps);
}

// Slopes s (in the u variable) are mapped back to y-slopes sigma * s.
Polyhedron slope_ray(const Analytic1D& f, const Rational& bound)
{
    if (f.sigma() > 0) return Polyhedron::interval(ExtRational::minus_infinity(), bound);
    return Polyhedron::interval(Rational(-bound), ExtRational::plus_infinity());
}

Polyhedron analytic_eps(const Analytic1D& f, const RatVector& x, const Rational& eps)
{
    const Rational u0 = f.arg(x[0]);
    const Rational& c = f.scale;
    if (sgn(u0) < 0) return Polyhedron::empty(1);
    if (sgn(u0) == 0) {
        if (sgn(eps) == 0) return Polyhedron::empty(1);
        return slope_ray(f, Rational(-c * c / (4 * eps)));
    }
    auto r = exact_sqrt(u0);
    if (!r) throw Error(ErrorCode::NotRational, "sqrt of " + u0.get_str() + " is irrational");
    if (sgn(eps) == 0) return Polyhedron::point(RatVector{Rational(f.sigma() * (-c / (2 * *r)))});
    auto sq = exact_sqrt(Rational(eps * eps + 2 * eps * c * *r));
    if (!sq) throw Error(ErrorCode::NotRational, "eps-subdifferential endpoints are irrational");
    Rational t1 = (c * *r + eps - *sq) / (2 * u0);
    Rational t2 = (c * *r + eps + *sq) / (2 * u0);
    RatVector lo{Rational(-t2)};
    RatVector hi{Rational(-t1)};
    if (f.sigma() < 0) {
        lo = RatVector{t1};
        hi = RatVector{t2};
    }
    return Polyhedron::box(lo, hi);
}

EnlargementSandwich exact_sandwich(const EnlargementQuery& q, Polyhedron set)
{
    EnlargementSandwich s {q, {}, {}, true};
    if (!set.is_empty()) {
        s.inner_parts.push_back(set);
        s.outer_parts.push_back(set);
    }
    return s;
}

EnlargementSandwich analytic_enlargement(const EnlargementQuery& q)
{
    const Analytic1D& f = q.f.analytic();
    const Rational u0 = f.arg(q.x[0]);
    if (sgn(u0) < 0) return exact_sandwich(q, Polyhedron::empty(1));
    if (sgn(u0) != 0)
        throw Error(ErrorCode::UnsupportedFamily, "analytic enlargement only at the domain endpoint");
    const Rational& c = f.scale;
    const Rational& eps = q.eps;
    // admissible u = |y - x| satisfy c sqrt(u) <= eps and, with the ball, u <= eps
    Rational umax = eps * eps / (c * c);
    if (q.variant != Variant::SmallFrown && eps < umax) umax = eps;
    auto r = exact_sqrt(umax);
    if (!r) throw Error(ErrorCode::NoSqrt, "enlargement endpoint needs sqrt(" + umax.get_str() + ")");
    Rational bound = -c / (2 * *r);
    if (q.variant == Variant::Hat) {
        Rational b2 = -c * c / (8 * eps);
        if (b2 < bound) bound = b2;
    }
    return exact_sandwich(q, slope_ray(f, bound));
}

EnlargementSandwich max_affine_enlargement(const EnlargementQuery& q)
{
    const MaxAffineFunction& m = q.f.max_affine();
    const std::size_t n = m.dim();
    const RatVector& x = q.x;
    const Rational& eps = q.eps;
    if (!polyrat::member(m.domain(), x)) return exact_sandwich(q, Polyhedron::empty(n));
    const Rational fx = m.eval(x).value();
    const Polyhedron eps2 = eps_subdifferential(q.f, x, Rational(2 * eps));

    const Polyhedron ball = norm_ball(x, eps, q.norm);

    EnlargementSandwich s {q, {}, {}, false};
    std::vector<RatVector> witnesses {x};
    for (const auto& cell : m.cells()) {
        const AffinePiece& g = m.pieces()[cell.pieces.front()];
        HalfspaceSystem h(n);
        h.add_inequality(g.a, Rational(fx + eps - g.b));
        h.add_inequality(-g.a, Rational(g.b - fx + eps));
        Polyhedron y = polyrat::intersect(cell.region, Polyhedron::from_hrep(std::move(h)));
        if (q.variant != Variant::SmallFrown) y = polyrat::intersect(y, ball);
        if (y.is_empty()) continue;
        const auto& vs = y.vrep().vertices;
        if (y.is_singleton() && m.override_at(vs.front())) continue;
        Polyhedron part = polyrat::intersect(cell.slopes, eps2);
        if (!part.is_empty()) s.outer_parts.push_back(part);
        for (const auto& w : vs)
            if (std::find(witnesses.begin(), witnesses.end(), w) == witnesses.end()) witnesses.push_back(w);
    }
    for (const auto& w : witnesses) {
        if (m.override_at(w)) continue;
        Polyhedron d = subdifferential(q.f, w);
        if (q.variant == Variant::Hat) {
            d = polyrat::intersect(d, eps2);
        } else if (w != x) {
            HalfspaceSystem h(n);
            RatVector dir = w - x;
            h.add_inequality(dir, eps);
            h.add_inequality(-dir, eps);
            d = polyrat::intersect(d, Polyhedron::from_hrep(std::move(h)));
        }
        if (!d.is_empty()) s.inner_parts.push_back(d);
    }
    s.exact = polyrat::same_set(s.inner(), s.outer());
    return s;
}

} // namespace

Polyhedron norm_ball(const RatVector& x, const Rational& eps, BallNorm norm)
{
    const std::size_t n = x.dim();
    if (norm == BallNorm::Max) {
        RatVector lo = x;
        RatVector hi = x;
        for (std::size_t k = 0; k < n; ++k) {
            lo[k] -= eps;
            hi[k] += eps;
        }
        return Polyhedron::box(lo, hi);
    }
    GeneratorSystem g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g.vertices.push_back(x + eps * RatVector::unit(n, k, 1));
        g.vertices.push_back(x + eps * RatVector::unit(n, k, -1));
    }
    if (sgn(eps) == 0) g.vertices = {x};
    return Polyhedron::from_vrep(std::move(g));
}

Polyhedron subdifferential(const ConvexFunction& f, const RatVector& x)
{
    if (x.dim() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "subdifferential point");
    if (f.is_max_affine()) {
        const auto& m = f.max_affine();
        if (m.override_at(x)) return Polyhedron::empty(m.dim());
        return max_affine_eps(m, x, 0);
    }
    const Analytic1D& a = f.analytic();
    if (sgn(a.arg(x[0])) <= 0) return Polyhedron::empty(1);
    return analytic_eps(a, x, 0);
}

Polyhedron eps_subdifferential(const ConvexFunction& f, const RatVector& x, const Rational& eps)
{
    if (x.dim() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "eps-subdifferential point");
    if (sgn(eps) < 0) throw Error(ErrorCode::InvalidArgument, "negative eps");
    if (f.is_max_affine()) return max_affine_eps(f.max_affine(), x, eps);
    return analytic_eps(f.analytic(), x, eps);
}

Polyhedron EnlargementSandwich::inner() const { return polyrat::closed_conv_union(inner_parts, query.f.dim()); }
Polyhedron EnlargementSandwich::outer() const { return polyrat::closed_conv_union(outer_parts, query.f.dim()); }

EnlargementSandwich enlargement(const EnlargementQuery& q)
{
    if (q.x.dim() != q.f.dim()) throw Error(ErrorCode::DimensionMismatch, "enlargement point");
    if (sgn(q.eps) <= 0) throw Error(ErrorCode::InvalidArgument, "enlargement needs eps > 0");
    if (q.f.is_max_affine()) return max_affine_enlargement(q);
    return analytic_enlargement(q);
}

Membership enlargement_member(const EnlargementQuery& q, const RatVector& ystar)
{
    const std::size_t n = q.f.dim();
    if (q.x.dim() != n || ystar.dim() != n) throw Error(ErrorCode::DimensionMismatch, "membership query");
    if (sgn(q.eps) <= 0) throw Error(ErrorCode::InvalidArgument, "enlargement needs eps > 0");
    const ExactReal fx = q.f.eval(q.x);
    if (!fx.is_finite()) return {};
    const Rational& eps = q.eps;
    if (q.variant == Variant::Hat && !polyrat::member(eps_subdifferential(q.f, q.x, Rational(2 * eps)), ystar))
        return {};

    if (!q.f.is_max_affine()) {
        const Analytic1D& a = q.f.analytic();
        Rational s = a.sigma() * ystar[0];
        if (sgn(s) >= 0) return {};
        Rational root = a.scale / (2 * -s);
        Rational u = root * root;
        RatVector y {Rational(a.sigma() * (u + a.shift))};
        if (q.variant != Variant::SmallFrown && abs(y[0] - q.x[0]) > eps) return {};
        if (!within(ExactReal(Rational(-a.scale * root)), fx, eps)) return {};
        if (q.variant != Variant::Hat && abs(ystar[0] * (y[0] - q.x[0])) > eps) return {};
        return {true, y};
    }

    const MaxAffineFunction& m = q.f.max_affine();
    const Rational f0 = fx.as_rational();
    RatVector lifted(n + 1);
    for (std::size_t k = 0; k < n; ++k) lifted[k] = ystar[k];
    lifted[n] = -1;
    ExtRational conj = polyrat::support(m.epigraph(), lifted);
    if (!conj.is_finite()) return {};
    const Rational& c = conj.value();

    HalfspaceSystem h = m.domain().hrep();
    for (const auto& p : m.pieces()) h.add_inequality(p.a - ystar, Rational(-c - p.b));
    h.add_inequality(ystar, Rational(f0 + eps + c));
    h.add_inequality(-ystar, Rational(-(f0 - eps + c)));
    if (q.variant != Variant::SmallFrown) {
        const Polyhedron ball = norm_ball(q.x, eps, q.norm);
        for (const auto& row : ball.hrep().inequalities) h.add_inequality(row.normal, row.offset);
    }
    if (q.variant != Variant::Hat) {
        Rational yx = dot(ystar, q.x);
        h.add_inequality(ystar, Rational(eps + yx));
        h.add_inequality(-ystar, Rational(eps - yx));
    }
    Polyhedron feasible = Polyhedron::from_hrep(std::move(h));
    if (feasible.is_empty()) return {};
    const auto& g = feasible.vrep();
    for (const auto& v : g.vertices)
        if (!m.override_at(v)) return {true, v};
    if (feasible.is_singleton()) return {};
    RatVector mid(n);
    for (const auto& v : g.vertices) mid += v;
    mid *= Rational(1, static_cast<long>(g.vertices.size()));
    for (const auto& r : g.rays) mid += r;
    return {true, mid};
}

BRWitness br_witness(const ConvexFunction& f0, const RatVector& x, const RatVector& xstar, const Rational& eps)
{
    if (sgn(eps) <= 0) throw Error(ErrorCode::InvalidArgument, "br_witness needs eps > 0");
    auto root = exact_sqrt(eps);
    if (!root) throw Error(ErrorCode::NoSqrt, "eps = " + eps.get_str() + " is not a rational square");
    const Rational& r = *root;
    const ConvexFunction f = f0.lsc_envelope();
    if (!f.is_max_affine()) throw Error(ErrorCode::UnsupportedFamily, "br_witness needs a max-affine function");
    const MaxAffineFunction& m = f.max_affine();
    const std::size_t n = m.dim();
    if (x.dim() != n || xstar.dim() != n) throw Error(ErrorCode::DimensionMismatch, "br_witness arguments");
    if (!polyrat::member(eps_subdifferential(f, x, eps), xstar))
        throw Error(ErrorCode::NotEpsSubgradient, xstar.str() + " is not an eps-subgradient at " + x.str());

    // minimize max_i g_i(y) - <x*, y> + r (|y - x|_inf + |<x*, y - x>|) over the domain,
    // as an LP in (y, t, u, v) solved over the vertices of its feasible region
    const std::size_t dim = n + 3;
    const std::size_t ti = n;
    const std::size_t ui = n + 1;
    const std::size_t vi = n + 2;
    auto embed = [dim, n](const RatVector& a) {
        RatVector z(dim);
        for (std::size_t k = 0; k < n; ++k) z[k] = a[k];
        return z;
    };
    HalfspaceSystem h(dim);
    for (const auto& p : m.pieces()) {
        RatVector row = embed(p.a);
        row[ti] = -1;
        h.add_inequality(row, Rational(-p.b));
    }
    for (std::size_t k = 0; k < n; ++k) {
        RatVector row(dim);
        row[k] = 1;
        row[ui] = -1;
        h.add_inequality(row, x[k]);
        row[k] = -1;
        h.add_inequality(row, Rational(-x[k]));
    }
    const Rational sx = dot(xstar, x);
    {
        RatVector row = embed(xstar);
        row[vi] = -1;
        h.add_inequality(row, sx);
        row = embed(-xstar);
        row[vi] = -1;
        h.add_inequality(row, Rational(-sx));
    }
    const auto& dh = m.domain().hrep();
    for (const auto& q : dh.inequalities) h.add_inequality(embed(q.normal), q.offset);
    for (const auto& e : dh.equalities) h.add_equality(embed(e.normal), e.offset);

    RatVector cost = embed(-xstar);
    cost[ti] = 1;
    cost[ui] = r;
    cost[vi] = r;
    const Polyhedron lp = Polyhedron::from_hrep(std::move(h));
    std::optional<Rational> best;
    RatVector x_eps;
    for (const auto& v : lp.vrep().vertices) {
        Rational val = dot(cost, v);
        RatVector y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = v[k];
        if (!best || val < *best || (val == *best && y < x_eps)) {
            best = val;
            x_eps = y;
        }
    }
    const Rational at_x = m.base_value(x) - sx;
    if (at_x == *best) x_eps = x;

    // (y*, lambda) with x* + r (y* + lambda x*) in the subdifferential at x_eps,
    // y* in the dual unit ball, <y*, d> = -|d|_inf and lambda <x*, d> = -|<x*, d>|
    const RatVector d = x_eps - x;
    const Polyhedron sub = subdifferential(f, x_eps).minimized();
    HalfspaceSystem k(n + 1);
    auto row_of = [n](const RatVector& a, const Rational& lam) {
        RatVector z(n + 1);
        for (std::size_t i = 0; i < n; ++i) z[i] = a[i];
        z[n] = lam;
        return z;
    };
    for (const auto& q : sub.hrep().inequalities)
        k.add_inequality(row_of(r * q.normal, Rational(r * dot(q.normal, xstar))),
                         Rational(q.offset - dot(q.normal, xstar)));
    for (const auto& e : sub.hrep().equalities)
        k.add_equality(row_of(r * e.normal, Rational(r * dot(e.normal, xstar))),
                       Rational(e.offset - dot(e.normal, xstar)));
    for (std::size_t mask = 0; mask < (std::size_t {1} << n); ++mask) {
        RatVector sgnv(n);
        for (std::size_t i = 0; i < n; ++i) sgnv[i] = (mask >> i) & 1 ? -1 : 1;
        k.add_inequality(row_of(sgnv, 0), 1);
    }
    k.add_equality(row_of(d, 0), Rational(-norm_inf(d)));
    const Rational sd = dot(xstar, d);
    k.add_equality(row_of(RatVector(n), sd), Rational(-abs(sd)));
    k.add_inequality(row_of(RatVector(n), 1), 1);
    k.add_inequality(row_of(RatVector(n), -1), 1);
    const Polyhedron pairs = Polyhedron::from_hrep(std::move(k));
    if (pairs.is_empty()) throw Error(ErrorCode::InvalidArgument, "no optimality multipliers found at " + x_eps.str());
    RatVector choice(n + 1);
    if (!polyrat::member(pairs, choice)) choice = pairs.vrep().vertices.front();

    BRWitness w;
    w.x_eps = x_eps;
    w.ystar_eps = RatVector(n);
    for (std::size_t i = 0; i < n; ++i) w.ystar_eps[i] = choice[i];
    w.lambda_eps = choice[n];
    w.xstar_eps = xstar + r * (w.ystar_eps + w.lambda_eps * xstar);
    w.sqrt_eps = r;
    return w;
}

} // namespace supdiff
