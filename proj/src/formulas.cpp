#include "supdiff/formulas.hpp"

#include "supdiff/error.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <random>

namespace supdiff::formulas {

using polyrat::GeneratorSystem;
using polyrat::Polyhedron;

namespace {

constexpr std::array<std::pair<FormulaKind, const char*>, 7> kNames {{
    {FormulaKind::BrondstedM5, "BRONDSTED_M5"},
    {FormulaKind::HlzEps, "HLZ_EPS"},
    {FormulaKind::BreveFvb1, "BREVE_FVB1"},
    {FormulaKind::HatCor1, "HAT_COR1"},
    {FormulaKind::SinlM1, "SINL_M1"},
    {FormulaKind::Marco2, "MARCO2"},
    {FormulaKind::ValadierClassic, "VALADIER_CLASSIC"},
}};

bool adds_normal_cone_inside(FormulaKind k)
{
    return k == FormulaKind::HlzEps || k == FormulaKind::BreveFvb1 || k == FormulaKind::HatCor1;
}

bool eps_subdifferential_kind(FormulaKind k) { return k == FormulaKind::BrondstedM5 || k == FormulaKind::HlzEps; }

void check_hypotheses(FormulaKind kind, const Hypotheses& hyp)
{
    if (kind == FormulaKind::ValadierClassic && !hyp.continuous_at_x)
        throw Error(ErrorCode::PreconditionContinuity, "VALADIER_CLASSIC needs f continuous at x");
    if (kind == FormulaKind::Marco2 && !hyp.continuous_somewhere && !hyp.continuous_at_x)
        throw Error(ErrorCode::PreconditionContinuity, "MARCO2 needs f finite and continuous at some point");
}

std::vector<std::size_t> members_for(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                     const Rational& eps)
{
    if (kind == FormulaKind::BrondstedM5) {
        auto active = active_indices(fam, x, 0, false);
        if (active.size() != fam.size())
            throw Error(ErrorCode::PreconditionActive, "BRONDSTED_M5 needs every member active at x");
        return active;
    }
    return active_indices(fam, x, eps, kind == FormulaKind::Marco2);
}

ConvexFunction member_function(FormulaKind kind, const ConvexFunction& f, const Polyhedron& dom)
{
    if (kind == FormulaKind::Marco2) return f.lsc_envelope();
    if (kind == FormulaKind::SinlM1) return f.restricted(dom);
    return f;
}

// Union over the eps-ball of the exact subdifferentials: the slopes of every
// cell whose region meets the ball.
std::vector<Polyhedron> ball_subdifferentials(const ConvexFunction& g, const RatVector& x, const Rational& eps,
                                              BallNorm norm)
{
    if (!g.is_max_affine()) throw Error(ErrorCode::UnsupportedFamily, "VALADIER_CLASSIC needs max-affine members");
    const MaxAffineFunction& m = g.max_affine();
    const Polyhedron ball = norm_ball(x, eps, norm);
    std::vector<Polyhedron> out;
    for (const auto& cell : m.cells()) {
        if (cell.region.is_singleton() && m.override_at(cell.region.vrep().vertices.front())) continue;
        if (polyrat::intersect(cell.region, ball).is_empty()) continue;
        out.push_back(cell.slopes);
    }
    return out;
}

RhsSandwich assemble(const Rational& eps, std::size_t n, std::vector<Polyhedron> inner, std::vector<Polyhedron> outer)
{
    RhsSandwich s {eps, polyrat::closed_conv_union(inner, n), polyrat::closed_conv_union(outer, n), false};
    s.exact = polyrat::same_set(s.inner, s.outer);
    return s;
}

void check_grid(const std::vector<Rational>& grid)
{
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty eps grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (sgn(grid[i]) <= 0) throw Error(ErrorCode::InvalidArgument, "eps grid must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "eps grid must be strictly decreasing");
    }
}

bool varies_continuously(const FunctionFamily& fam, const RatVector& x, const std::vector<std::size_t>& members)
{
    for (auto t : members) {
        const ConvexFunction& f = fam.entries()[t].f;
        if (!f.is_max_affine() && sgn(f.analytic().arg(x[0])) == 0) return false;
    }
    return true;
}

std::vector<RatVector> facet_directions(const Polyhedron& p)
{
    std::vector<RatVector> out;
    if (p.is_empty()) return out;
    const Polyhedron m = p.minimized();
    const auto& h = m.hrep();
    for (const auto& row : h.inequalities) out.push_back(row.normal);
    for (const auto& row : h.equalities) {
        out.push_back(row.normal);
        out.push_back(-row.normal);
    }
    return out;
}

ExtRational support_gap(const ExtRational& a, const ExtRational& b)
{
    if (a.is_finite() && b.is_finite()) return Rational(abs(a.value() - b.value()));
    if (a == b) return Rational(0);
    return ExtRational::plus_infinity();
}

RatVector some_point(const Polyhedron& p) { return p.vrep().vertices.front(); }

// A certificate that `small` is not contained in `big`: a row of big's
// H-representation that small violates, or a point of small when big is empty.
std::variant<DirectionWitness, PointWitness> separate(const Polyhedron& big, const Polyhedron& small, bool small_is_lhs)
{
    if (big.is_empty()) return PointWitness {some_point(small), small_is_lhs ? "lhs" : "inner"};
    for (const auto& d : facet_directions(big)) {
        ExtRational s_small = polyrat::support(small, d);
        ExtRational s_big = polyrat::support(big, d);
        if (s_big < s_small) {
            if (small_is_lhs) return DirectionWitness {d, s_small, s_big};
            return DirectionWitness {d, s_big, s_small};
        }
    }
    return PointWitness {some_point(small), small_is_lhs ? "lhs" : "inner"};
}

} // namespace

const char* to_string(FormulaKind k)
{
    for (const auto& [kind, name] : kNames)
        if (kind == k) return name;
    return "?";
}

std::optional<FormulaKind> parse_formula_kind(std::string_view name)
{
    for (const auto& [kind, n] : kNames)
        if (name == n) return kind;
    return std::nullopt;
}

const std::vector<FormulaKind>& all_formula_kinds()
{
    static const std::vector<FormulaKind> kinds = [] {
        std::vector<FormulaKind> out;
        for (const auto& entry : kNames) out.push_back(entry.first);
        return out;
    }();
    return kinds;
}

const char* to_string(VerdictStatus s)
{
    switch (s) {
    case VerdictStatus::ExactMatch: return "EXACT_MATCH";
    case VerdictStatus::SandwichPass: return "SANDWICH_PASS";
    case VerdictStatus::Mismatch: return "MISMATCH";
    }
    return "?";
}

const char* to_string(VerdictBasis b) { return b == VerdictBasis::GridBottom ? "GRID_BOTTOM" : "EXACT_LIMIT"; }

Polyhedron lhs_subdifferential(const FunctionFamily& fam, const RatVector& x)
{
    if (x.dim() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "lhs point");
    SupFunction sup(fam);
    if (sup.is_max_affine()) return subdifferential(sup.max_affine(), x);
    if (!polyrat::member(sup.domain(), x)) return Polyhedron::empty(fam.dim());
    if (sup.domain().is_singleton()) return Polyhedron::whole_space(fam.dim());
    throw Error(ErrorCode::UnsupportedFamily, "no closed form for this supremum");
}

Polyhedron domain_normal_cone(const FunctionFamily& fam, const RatVector& x)
{
    return polyrat::normal_cone(SupFunction(fam).domain(), x);
}

RhsSandwich rhs_at_eps(FormulaKind kind, const FunctionFamily& fam, const RatVector& x, const Rational& eps,
                       const RhsOptions& opts)
{
    const std::size_t n = fam.dim();
    if (x.dim() != n) throw Error(ErrorCode::DimensionMismatch, "rhs point");
    if (sgn(eps) <= 0) throw Error(ErrorCode::InvalidArgument, "rhs needs eps > 0");
    check_hypotheses(kind, opts.hyp);

    const SupFunction sup(fam);
    const auto members = members_for(kind, fam, x, eps);
    std::vector<Polyhedron> inner;
    std::vector<Polyhedron> outer;
    for (auto t : members) {
        const ConvexFunction g = member_function(kind, fam.entries()[t].f, sup.domain());
        switch (kind) {
        case FormulaKind::BrondstedM5:
        case FormulaKind::HlzEps: {
            Polyhedron p = eps_subdifferential(g, x, eps);
            inner.push_back(p);
            outer.push_back(p);
            break;
        }
        case FormulaKind::ValadierClassic:
            for (auto& p : ball_subdifferentials(g, x, eps, opts.norm)) {
                inner.push_back(p);
                outer.push_back(p);
            }
            break;
        default: {
            Variant v = kind == FormulaKind::HatCor1 ? Variant::Hat : Variant::Breve;
            auto s = enlargement({g, x, eps, v, opts.norm});
            inner.insert(inner.end(), s.inner_parts.begin(), s.inner_parts.end());
            outer.insert(outer.end(), s.outer_parts.begin(), s.outer_parts.end());
        }
        }
    }
    if (adds_normal_cone_inside(kind)) {
        const Polyhedron cone = polyrat::normal_cone(sup.domain(), x);
        for (auto& p : inner) p = polyrat::minkowski_sum(p, cone);
        for (auto& p : outer) p = polyrat::minkowski_sum(p, cone);
    }
    return assemble(eps, n, std::move(inner), std::move(outer));
}

std::vector<RhsSandwich> rhs_over_grid(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                       const std::vector<Rational>& grid, const RhsOptions& opts)
{
    check_grid(grid);
    std::vector<std::future<RhsSandwich>> jobs;
    for (const auto& eps : grid)
        jobs.push_back(std::async(std::launch::async, [&, eps] { return rhs_at_eps(kind, fam, x, eps, opts); }));
    std::vector<RhsSandwich> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

RhsSandwich intersect_sandwiches(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                 const std::vector<RhsSandwich>& per_eps)
{
    if (per_eps.empty()) throw Error(ErrorCode::InvalidArgument, "empty eps grid");
    RhsSandwich s = per_eps.front();
    for (std::size_t i = 1; i < per_eps.size(); ++i) {
        if (!polyrat::contains_set(per_eps[i - 1].outer, per_eps[i].outer))
            throw Error(ErrorCode::InvalidArgument, "outer RHS grows from eps = " + per_eps[i - 1].eps.get_str() +
                                                        " to eps = " + per_eps[i].eps.get_str());
        s.eps = per_eps[i].eps;
        s.inner = polyrat::intersect(s.inner, per_eps[i].inner);
        s.outer = polyrat::intersect(s.outer, per_eps[i].outer);
    }
    if (kind == FormulaKind::Marco2) {
        const Polyhedron cone = domain_normal_cone(fam, x);
        s.inner = polyrat::minkowski_sum(cone, s.inner);
        s.outer = polyrat::minkowski_sum(cone, s.outer);
    }
    s.inner = s.inner.minimized();
    s.outer = s.outer.minimized();
    s.exact = polyrat::same_set(s.inner, s.outer);
    return s;
}

RhsSandwich intersect_over_grid(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                                const std::vector<Rational>& grid, const RhsOptions& opts)
{
    return intersect_sandwiches(kind, fam, x, rhs_over_grid(kind, fam, x, grid, opts));
}

std::vector<Rational> dyadic_square_grid(int levels)
{
    std::vector<Rational> out;
    for (int k = 1; k <= levels; ++k) {
        Rational e(1, 1);
        mpz_mul_2exp(e.get_den_mpz_t(), e.get_den_mpz_t(), static_cast<mp_bitcnt_t>(2 * k));
        out.push_back(e);
    }
    return out;
}

std::vector<Rational> parse_grid(std::string_view text)
{
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        out.push_back(parse_rational(item));
        pos = comma + 1;
    }
    try {
        check_grid(out);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return out;
}

std::vector<RatVector> random_directions(std::size_t n, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 eng(seed);
    std::vector<RatVector> out;
    while (out.size() < count) {
        RatVector d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = static_cast<long>(eng() % 9) - 4;
        if (!d.is_zero()) out.push_back(d);
    }
    return out;
}

Verdict verify_formula(FormulaKind kind, const FunctionFamily& fam, const RatVector& x,
                       const std::vector<Rational>& grid, const std::vector<RatVector>& directions,
                       const Rational& tol, const RhsOptions& opts)
{
    if (directions.empty()) throw Error(ErrorCode::InvalidArgument, "verify_formula needs directions");
    if (sgn(tol) < 0) throw Error(ErrorCode::InvalidArgument, "negative tolerance");
    const std::size_t n = fam.dim();

    Verdict v;
    v.kind = kind;
    v.grid = grid;
    v.support_tolerance = tol;
    v.lhs = lhs_subdifferential(fam, x);
    const auto per_eps = rhs_over_grid(kind, fam, x, grid, opts);
    v.rhs = intersect_sandwiches(kind, fam, x, per_eps);

    const Polyhedron cone = domain_normal_cone(fam, x);
    for (const auto& s : per_eps) {
        Polyhedron outer = kind == FormulaKind::Marco2 ? polyrat::minkowski_sum(cone, s.outer) : s.outer;
        if (!polyrat::contains_set(outer, v.lhs)) {
            v.witness = separate(outer, v.lhs, true);
            v.note = "lhs not contained in the outer RHS at eps = " + s.eps.get_str();
            v.gap = ExtRational::plus_infinity();
            return v;
        }
    }

    if (eps_subdifferential_kind(kind)) {
        const auto members = kind == FormulaKind::BrondstedM5 ? members_for(kind, fam, x, grid.back())
                                                              : active_indices(fam, x, 0, false);
        if (varies_continuously(fam, x, active_indices(fam, x, grid.back(), false))) {
            std::vector<Polyhedron> parts;
            for (auto t : members) {
                Polyhedron p = subdifferential(fam.entries()[t].f, x);
                if (kind == FormulaKind::HlzEps) p = polyrat::minkowski_sum(p, cone);
                parts.push_back(p);
            }
            Polyhedron limit = polyrat::closed_conv_union(parts, n);
            for (const auto& s : per_eps)
                if (!polyrat::contains_set(s.outer, limit))
                    throw Error(ErrorCode::InvalidArgument, "limit RHS escapes the RHS at eps = " + s.eps.get_str());
            v.basis = VerdictBasis::ExactLimit;
            v.rhs = {Rational(0), limit, limit, true};
        }
    }

    if (!polyrat::contains_set(v.rhs.outer, v.lhs)) {
        v.witness = separate(v.rhs.outer, v.lhs, true);
        v.note = "lhs not contained in the outer RHS";
        v.gap = ExtRational::plus_infinity();
        return v;
    }
    if (!polyrat::contains_set(v.lhs, v.rhs.inner)) {
        v.witness = separate(v.lhs, v.rhs.inner, false);
        v.note = "inner RHS not contained in lhs";
        v.gap = ExtRational::plus_infinity();
        return v;
    }

    std::vector<RatVector> dirs = directions;
    for (std::size_t k = 0; k < n; ++k) {
        dirs.push_back(RatVector::unit(n, k, 1));
        dirs.push_back(RatVector::unit(n, k, -1));
    }
    for (const auto& d : facet_directions(v.lhs)) dirs.push_back(d);
    for (const auto& d : facet_directions(v.rhs.outer)) dirs.push_back(d);
    v.directions_checked = dirs.size();

    ExtRational worst = Rational(0);
    std::optional<DirectionWitness> worst_dir;
    for (const auto& d : dirs) {
        ExtRational sl = polyrat::support(v.lhs, d);
        ExtRational so = polyrat::support(v.rhs.outer, d);
        ExtRational g = support_gap(so, sl);
        if (worst < g) {
            worst = g;
            worst_dir = DirectionWitness {d, sl, so};
        }
    }
    v.gap = worst;
    if (polyrat::same_set(v.lhs, v.rhs.inner) && polyrat::same_set(v.lhs, v.rhs.outer)) {
        v.status = VerdictStatus::ExactMatch;
    } else if (worst <= ExtRational(tol)) {
        v.status = VerdictStatus::SandwichPass;
    } else {
        v.witness = *worst_dir;
        v.note = "support gap exceeds the tolerance";
    }
    return v;
}

} // namespace supdiff::formulas
