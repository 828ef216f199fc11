#include "supdiff/error.hpp"
#include "supdiff/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace supdiff::polyrat {

bool operator<(const Halfspace& a, const Halfspace& b)
{
    if (a.normal == b.normal) return a.offset < b.offset;
    return a.normal < b.normal;
}

void HalfspaceSystem::add_inequality(RatVector normal, Rational offset)
{
    if (normal.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "inequality dimension");
    if (normal.is_zero()) {
        if (sgn(offset) < 0) infeasible = true;
        return;
    }
    inequalities.push_back({std::move(normal), std::move(offset)});
}

void HalfspaceSystem::add_equality(RatVector normal, Rational offset)
{
    if (normal.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "equality dimension");
    if (normal.is_zero()) {
        if (sgn(offset) != 0) infeasible = true;
        return;
    }
    equalities.push_back({std::move(normal), std::move(offset)});
}

void HalfspaceSystem::validate() const
{
    for (const auto* list : {&inequalities, &equalities}) {
        for (const auto& h : *list) {
            if (h.normal.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "halfspace dimension");
            if (h.normal.is_zero()) throw Error(ErrorCode::ZeroNormal, "halfspace with zero normal");
        }
    }
}

void GeneratorSystem::validate() const
{
    for (const auto& v : vertices)
        if (v.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "vertex dimension");
    for (const auto& r : rays) {
        if (r.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "ray dimension");
        if (r.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero ray");
    }
    if (vertices.empty() && !rays.empty())
        throw Error(ErrorCode::InvalidArgument, "rays without a vertex");
}

// ---------------------------------------------------------------- Polyhedron

struct Polyhedron::State {
    std::size_t dim = 0;
    mutable std::once_flag h_once;
    mutable std::once_flag v_once;
    mutable std::optional<HalfspaceSystem> h;
    mutable std::optional<GeneratorSystem> v;
};

Polyhedron Polyhedron::from_hrep(HalfspaceSystem h)
{
    h.validate();
    auto s = std::make_shared<State>();
    s->dim = h.dim;
    std::sort(h.inequalities.begin(), h.inequalities.end());
    h.inequalities.erase(std::unique(h.inequalities.begin(), h.inequalities.end()), h.inequalities.end());
    s->h = std::move(h);
    return Polyhedron(std::move(s));
}

Polyhedron Polyhedron::from_vrep(GeneratorSystem v)
{
    v.validate();
    auto s = std::make_shared<State>();
    s->dim = v.dim;
    std::sort(v.vertices.begin(), v.vertices.end());
    v.vertices.erase(std::unique(v.vertices.begin(), v.vertices.end()), v.vertices.end());
    for (auto& r : v.rays) r = r.primitive();
    std::sort(v.rays.begin(), v.rays.end());
    v.rays.erase(std::unique(v.rays.begin(), v.rays.end()), v.rays.end());
    s->v = std::move(v);
    return Polyhedron(std::move(s));
}

Polyhedron Polyhedron::empty(std::size_t dim)
{
    auto s = std::make_shared<State>();
    s->dim = dim;
    HalfspaceSystem h(dim);
    h.infeasible = true;
    s->h = std::move(h);
    s->v = GeneratorSystem(dim);
    return Polyhedron(std::move(s));
}

Polyhedron Polyhedron::whole_space(std::size_t dim)
{
    GeneratorSystem g(dim);
    g.vertices.push_back(RatVector(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        g.rays.push_back(RatVector::unit(dim, i, 1));
        g.rays.push_back(RatVector::unit(dim, i, -1));
    }
    auto s = std::make_shared<State>();
    s->dim = dim;
    s->h = HalfspaceSystem(dim);
    s->v = std::move(g);
    return Polyhedron(std::move(s));
}

Polyhedron Polyhedron::point(const RatVector& p)
{
    GeneratorSystem g(p.dim());
    g.vertices.push_back(p);
    return from_vrep(std::move(g));
}

Polyhedron Polyhedron::box(const RatVector& lo, const RatVector& hi)
{
    if (lo.dim() != hi.dim()) throw Error(ErrorCode::DimensionMismatch, "box bounds");
    HalfspaceSystem h(lo.dim());
    for (std::size_t i = 0; i < lo.dim(); ++i) {
        h.add_inequality(RatVector::unit(lo.dim(), i, 1), hi[i]);
        h.add_inequality(RatVector::unit(lo.dim(), i, -1), Rational(-lo[i]));
    }
    return from_hrep(std::move(h));
}

Polyhedron Polyhedron::interval(const ExtRational& lo, const ExtRational& hi)
{
    HalfspaceSystem h(1);
    if (lo.is_plus_infinity() || hi.is_minus_infinity()) return empty(1);
    if (hi.is_finite()) h.add_inequality(RatVector{1}, hi.value());
    if (lo.is_finite()) h.add_inequality(RatVector{-1}, Rational(-lo.value()));
    return from_hrep(std::move(h));
}

Polyhedron Polyhedron::ray_from(const RatVector& apex, const RatVector& direction)
{
    GeneratorSystem g(apex.dim());
    g.vertices.push_back(apex);
    g.rays.push_back(direction);
    return from_vrep(std::move(g));
}

std::size_t Polyhedron::dim() const { return state_->dim; }

bool Polyhedron::has_hrep() const { return state_->h.has_value(); }
bool Polyhedron::has_vrep() const { return state_->v.has_value(); }

const HalfspaceSystem& Polyhedron::hrep() const
{
    std::call_once(state_->h_once, [this] {
        if (!state_->h) state_->h = vrep_to_hrep(*state_->v);
    });
    return *state_->h;
}

const GeneratorSystem& Polyhedron::vrep() const
{
    std::call_once(state_->v_once, [this] {
        if (!state_->v) state_->v = hrep_to_vrep(*state_->h);
    });
    return *state_->v;
}

bool Polyhedron::is_empty() const
{
    if (state_->h && state_->h->infeasible) return true;
    return vrep().empty();
}

Polyhedron Polyhedron::minimized() const
{
    if (is_empty()) return empty(dim());
    HalfspaceSystem h = vrep_to_hrep(vrep());
    GeneratorSystem v = hrep_to_vrep(h);
    auto s = std::make_shared<State>();
    s->dim = dim();
    s->h = std::move(h);
    s->v = std::move(v);
    return Polyhedron(std::move(s));
}

bool Polyhedron::is_bounded() const { return vrep().rays.empty(); }

bool Polyhedron::is_singleton() const
{
    const auto& g = vrep();
    return g.vertices.size() == 1 && g.rays.empty();
}

bool Polyhedron::is_whole_space() const
{
    if (is_empty()) return false;
    const Polyhedron m = minimized();
    const auto& h = m.hrep();
    return h.inequalities.empty() && h.equalities.empty();
}

std::string Polyhedron::str() const
{
    if (is_empty()) return "{}";
    const auto& g = vrep();
    std::ostringstream os;
    os << "conv{";
    for (std::size_t i = 0; i < g.vertices.size(); ++i) os << (i ? ", " : "") << g.vertices[i];
    os << "}";
    if (!g.rays.empty()) {
        os << " + cone{";
        for (std::size_t i = 0; i < g.rays.size(); ++i) os << (i ? ", " : "") << g.rays[i];
        os << "}";
    }
    return os.str();
}

// ---------------------------------------------------------------- operations

namespace {

void require_same_dim(const Polyhedron& p, const Polyhedron& q, const char* op)
{
    if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, op);
}

} // namespace

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q)
{
    require_same_dim(p, q, "intersect");
    const auto& hp = p.hrep();
    const auto& hq = q.hrep();
    if (hp.infeasible || hq.infeasible) return Polyhedron::empty(p.dim());
    HalfspaceSystem h = hp;
    h.inequalities.insert(h.inequalities.end(), hq.inequalities.begin(), hq.inequalities.end());
    h.equalities.insert(h.equalities.end(), hq.equalities.begin(), hq.equalities.end());
    return Polyhedron::from_hrep(std::move(h));
}

Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q)
{
    require_same_dim(p, q, "minkowski_sum");
    if (p.is_empty() || q.is_empty()) return Polyhedron::empty(p.dim());
    const auto& gp = p.vrep();
    const auto& gq = q.vrep();
    GeneratorSystem g(p.dim());
    for (const auto& a : gp.vertices)
        for (const auto& b : gq.vertices) g.vertices.push_back(a + b);
    g.rays = gp.rays;
    g.rays.insert(g.rays.end(), gq.rays.begin(), gq.rays.end());
    return Polyhedron::from_vrep(std::move(g));
}

Polyhedron closed_conv_union(const std::vector<Polyhedron>& parts, std::size_t dim)
{
    GeneratorSystem g(dim);
    for (const auto& p : parts) {
        if (p.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "closed_conv_union");
        if (p.is_empty()) continue;
        const auto& gp = p.vrep();
        g.vertices.insert(g.vertices.end(), gp.vertices.begin(), gp.vertices.end());
        g.rays.insert(g.rays.end(), gp.rays.begin(), gp.rays.end());
    }
    if (g.vertices.empty()) return Polyhedron::empty(dim);
    return Polyhedron::from_vrep(std::move(g));
}

ExtRational support(const Polyhedron& p, const RatVector& d)
{
    if (d.dim() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "support direction");
    if (p.is_empty()) return ExtRational::minus_infinity();
    const auto& g = p.vrep();
    for (const auto& r : g.rays)
        if (sgn(dot(d, r)) > 0) return ExtRational::plus_infinity();
    Rational best = dot(d, g.vertices.front());
    for (const auto& v : g.vertices) {
        Rational s = dot(d, v);
        if (s > best) best = s;
    }
    return best;
}

bool member(const Polyhedron& p, const RatVector& y)
{
    if (y.dim() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "member point");
    const auto& h = p.hrep();
    if (h.infeasible) return false;
    for (const auto& e : h.equalities)
        if (dot(e.normal, y) != e.offset) return false;
    for (const auto& i : h.inequalities)
        if (dot(i.normal, y) > i.offset) return false;
    return true;
}

bool contains_set(const Polyhedron& outer, const Polyhedron& inner)
{
    require_same_dim(outer, inner, "contains_set");
    if (inner.is_empty()) return true;
    if (outer.is_empty()) return false;
    const auto& h = outer.hrep();
    const auto& g = inner.vrep();
    for (const auto& v : g.vertices)
        if (!member(outer, v)) return false;
    for (const auto& r : g.rays) {
        for (const auto& e : h.equalities)
            if (sgn(dot(e.normal, r)) != 0) return false;
        for (const auto& i : h.inequalities)
            if (sgn(dot(i.normal, r)) > 0) return false;
    }
    return true;
}

bool same_set(const Polyhedron& p, const Polyhedron& q) { return contains_set(p, q) && contains_set(q, p); }

Polyhedron project(const Polyhedron& p, const std::vector<std::size_t>& keep, std::size_t max_dim)
{
    const std::size_t n = p.dim();
    if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "project: empty coordinate set");
    for (auto k : keep)
        if (k >= n) throw Error(ErrorCode::InvalidArgument, "project: coordinate out of range");
    if (n > max_dim)
        throw Error(ErrorCode::DimensionCap, "Fourier-Motzkin limited to dimension " + std::to_string(max_dim));
    if (p.is_empty()) return Polyhedron::empty(keep.size());

    // columns still present, in original indexing
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    HalfspaceSystem h = p.hrep();

    auto drop_column = [](HalfspaceSystem& sys, std::size_t j) {
        HalfspaceSystem out(sys.dim - 1);
        auto cut = [j](const RatVector& v) {
            RatVector w(v.dim() - 1);
            for (std::size_t i = 0, k = 0; i < v.dim(); ++i)
                if (i != j) w[k++] = v[i];
            return w;
        };
        out.infeasible = sys.infeasible;
        for (const auto& e : sys.equalities) out.add_equality(cut(e.normal), e.offset);
        for (const auto& q : sys.inequalities) out.add_inequality(cut(q.normal), q.offset);
        return out;
    };

    for (std::size_t idx = n; idx-- > 0;) {
        if (std::find(keep.begin(), keep.end(), idx) != keep.end()) continue;
        const std::size_t j = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), idx) - cols.begin());

        auto eq_it = std::find_if(h.equalities.begin(), h.equalities.end(),
                                  [j](const Halfspace& e) { return sgn(e.normal[j]) != 0; });
        HalfspaceSystem next(h.dim);
        next.infeasible = h.infeasible;
        if (eq_it != h.equalities.end()) {
            const Halfspace pivot = *eq_it;
            auto substitute = [&pivot, j](const Halfspace& row) {
                Rational f = row.normal[j] / pivot.normal[j];
                return Halfspace{row.normal - f * pivot.normal, Rational(row.offset - f * pivot.offset)};
            };
            for (auto it = h.equalities.begin(); it != h.equalities.end(); ++it) {
                if (it == eq_it) continue;
                Halfspace s = substitute(*it);
                next.add_equality(s.normal, s.offset);
            }
            for (const auto& q : h.inequalities) {
                Halfspace s = substitute(q);
                next.add_inequality(s.normal, s.offset);
            }
        } else {
            next.equalities = h.equalities;
            std::vector<const Halfspace*> pos;
            std::vector<const Halfspace*> neg;
            for (const auto& q : h.inequalities) {
                int s = sgn(q.normal[j]);
                if (s > 0) pos.push_back(&q);
                else if (s < 0) neg.push_back(&q);
                else next.add_inequality(q.normal, q.offset);
            }
            for (const auto* a : pos) {
                for (const auto* b : neg) {
                    Rational ca = -b->normal[j];
                    Rational cb = a->normal[j];
                    RatVector nrm = ca * a->normal + cb * b->normal;
                    nrm[j] = 0;
                    next.add_inequality(nrm, Rational(ca * a->offset + cb * b->offset));
                }
            }
        }
        h = drop_column(next, j);
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(j));
        // redundancy elimination
        Polyhedron reduced = Polyhedron::from_hrep(h).minimized();
        if (reduced.is_empty()) return Polyhedron::empty(keep.size());
        h = reduced.hrep();
    }

    // permute remaining columns into `keep` order
    std::vector<std::size_t> perm;
    for (auto k : keep) perm.push_back(static_cast<std::size_t>(std::find(cols.begin(), cols.end(), k) - cols.begin()));
    auto reorder = [&perm](const RatVector& v) {
        RatVector w(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) w[i] = v[perm[i]];
        return w;
    };
    HalfspaceSystem out(keep.size());
    for (const auto& e : h.equalities) out.add_equality(reorder(e.normal), e.offset);
    for (const auto& q : h.inequalities) out.add_inequality(reorder(q.normal), q.offset);
    return Polyhedron::from_hrep(std::move(out));
}

Polyhedron linear_image(const Polyhedron& p, const Matrix& m)
{
    const std::size_t rows = m.size();
    for (const auto& row : m)
        if (row.size() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "linear_image matrix");
    if (p.is_empty()) return Polyhedron::empty(rows);
    auto apply = [&m, rows](const RatVector& v) {
        RatVector w(rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < v.dim(); ++j) w[i] += m[i][j] * v[j];
        return w;
    };
    const auto& g = p.vrep();
    GeneratorSystem out(rows);
    for (const auto& v : g.vertices) out.vertices.push_back(apply(v));
    for (const auto& r : g.rays) {
        RatVector w = apply(r);
        if (!w.is_zero()) out.rays.push_back(std::move(w));
    }
    return Polyhedron::from_vrep(std::move(out));
}

Polyhedron scale(const Polyhedron& p, const Rational& s)
{
    Matrix m(p.dim(), std::vector<Rational>(p.dim()));
    for (std::size_t i = 0; i < p.dim(); ++i) m[i][i] = s;
    return linear_image(p, m);
}

Polyhedron translate(const Polyhedron& p, const RatVector& shift)
{
    return minkowski_sum(p, Polyhedron::point(shift));
}

Polyhedron normal_cone(const Polyhedron& a, const RatVector& x, const Rational& eps)
{
    const std::size_t n = a.dim();
    if (sgn(eps) < 0) throw Error(ErrorCode::InvalidArgument, "normal_cone: negative eps");
    if (!member(a, x) || a.is_empty()) return Polyhedron::empty(n);
    if (sgn(eps) == 0) {
        const auto& h = a.hrep();
        GeneratorSystem g(n);
        g.vertices.push_back(RatVector(n));
        for (const auto& q : h.inequalities)
            if (dot(q.normal, x) == q.offset) g.rays.push_back(q.normal);
        for (const auto& e : h.equalities) {
            g.rays.push_back(e.normal);
            g.rays.push_back(-e.normal);
        }
        return Polyhedron::from_vrep(std::move(g));
    }
    const auto& g = a.vrep();
    HalfspaceSystem h(n);
    for (const auto& v : g.vertices) h.add_inequality(v - x, eps);
    for (const auto& r : g.rays) h.add_inequality(r, 0);
    return Polyhedron::from_hrep(std::move(h));
}

std::vector<Face> faces(const Polyhedron& p)
{
    std::vector<Face> out;
    if (p.is_empty()) return out;
    const auto& h = p.hrep();
    const auto& g = p.vrep();
    const std::size_t m = h.inequalities.size();

    auto tight_vertex = [&](std::size_t j, const RatVector& v) {
        return dot(h.inequalities[j].normal, v) == h.inequalities[j].offset;
    };
    auto tight_ray = [&](std::size_t j, const RatVector& r) { return sgn(dot(h.inequalities[j].normal, r)) == 0; };

    // closure of a tight set: all rows tight on every generator satisfying it
    auto closure = [&](const std::vector<std::size_t>& t) -> std::optional<std::vector<std::size_t>> {
        std::vector<const RatVector*> vs;
        std::vector<const RatVector*> rs;
        for (const auto& v : g.vertices)
            if (std::all_of(t.begin(), t.end(), [&](std::size_t j) { return tight_vertex(j, v); })) vs.push_back(&v);
        if (vs.empty()) return std::nullopt;
        for (const auto& r : g.rays)
            if (std::all_of(t.begin(), t.end(), [&](std::size_t j) { return tight_ray(j, r); })) rs.push_back(&r);
        std::vector<std::size_t> c;
        for (std::size_t j = 0; j < m; ++j) {
            bool all = std::all_of(vs.begin(), vs.end(), [&](const RatVector* v) { return tight_vertex(j, *v); }) &&
                       std::all_of(rs.begin(), rs.end(), [&](const RatVector* r) { return tight_ray(j, *r); });
            if (all) c.push_back(j);
        }
        return c;
    };

    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> queue;
    if (auto root = closure({})) {
        seen.insert(*root);
        queue.push_back(*root);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const auto t = queue[qi];
        for (std::size_t j = 0; j < m; ++j) {
            if (std::binary_search(t.begin(), t.end(), j)) continue;
            auto ext = t;
            ext.insert(std::upper_bound(ext.begin(), ext.end(), j), j);
            auto c = closure(ext);
            if (c && seen.insert(*c).second) queue.push_back(*c);
        }
    }
    std::vector<std::vector<std::size_t>> sets(seen.begin(), seen.end());
    std::stable_sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (auto& t : sets) {
        HalfspaceSystem fh(p.dim());
        fh.equalities = h.equalities;
        for (std::size_t j = 0; j < m; ++j) {
            if (std::binary_search(t.begin(), t.end(), j))
                fh.add_equality(h.inequalities[j].normal, h.inequalities[j].offset);
            else
                fh.add_inequality(h.inequalities[j].normal, h.inequalities[j].offset);
        }
        out.push_back({t, Polyhedron::from_hrep(std::move(fh))});
    }
    return out;
}

// ------------------------------------------------------------------ Subspace

Subspace::Subspace(std::size_t dim, std::vector<RatVector> basis) : dim_(dim), basis_(std::move(basis))
{
    for (const auto& b : basis_)
        if (b.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "subspace basis");
    if (rank(basis_) != basis_.size()) throw Error(ErrorCode::InvalidArgument, "subspace basis is dependent");
}

Subspace Subspace::coordinate(std::size_t dim, const std::vector<std::size_t>& axes)
{
    std::vector<RatVector> b;
    for (auto a : axes) b.push_back(RatVector::unit(dim, a));
    return Subspace(dim, std::move(b));
}

Subspace Subspace::whole(std::size_t dim)
{
    std::vector<std::size_t> axes(dim);
    for (std::size_t i = 0; i < dim; ++i) axes[i] = i;
    return coordinate(dim, axes);
}

Subspace Subspace::orthogonal_complement() const { return Subspace(dim_, null_space(dim_, basis_)); }

Polyhedron Subspace::as_polyhedron() const
{
    GeneratorSystem g(dim_);
    g.vertices.push_back(RatVector(dim_));
    for (const auto& b : basis_) {
        g.rays.push_back(b);
        g.rays.push_back(-b);
    }
    return Polyhedron::from_vrep(std::move(g));
}

bool Subspace::contains(const RatVector& v) const
{
    auto ext = basis_;
    ext.push_back(v);
    return rank(ext) == basis_.size();
}

} // namespace supdiff::polyrat
