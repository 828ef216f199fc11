#include "supdiff/error.hpp"
#include "supdiff/polyhedron.hpp"

#include <algorithm>
#include <set>

namespace supdiff::polyrat {

namespace {

using ZeroSet = std::vector<bool>;

struct Ray {
    RatVector v;
    ZeroSet zeros; // processed rows on which the ray is tight
};

bool subset(const ZeroSet& a, const ZeroSet& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

ZeroSet meet(const ZeroSet& a, const ZeroSet& b)
{
    ZeroSet out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

std::size_t count(const ZeroSet& z) { return static_cast<std::size_t>(std::count(z.begin(), z.end(), true)); }

void sort_unique(std::vector<RatVector>& vs)
{
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

// First nonzero coordinate positive; coprime integers.
RatVector sign_canonical(const RatVector& v)
{
    RatVector p = v.primitive();
    for (const auto& c : p) {
        if (sgn(c) == 0) continue;
        if (sgn(c) < 0) p = -p;
        break;
    }
    return p;
}

} // namespace

ConeGenerators cone_double_description(std::size_t dim, const std::vector<RatVector>& rows)
{
    std::vector<RatVector> lineality;
    for (std::size_t i = 0; i < dim; ++i) lineality.push_back(RatVector::unit(dim, i));
    std::vector<Ray> rays;
    const std::size_t m = rows.size();

    for (std::size_t c = 0; c < m; ++c) {
        const RatVector& h = rows[c];
        if (h.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "cone row dimension");

        std::size_t pivot = lineality.size();
        Rational hp;
        for (std::size_t i = 0; i < lineality.size(); ++i) {
            hp = dot(h, lineality[i]);
            if (sgn(hp) != 0) {
                pivot = i;
                break;
            }
        }

        if (pivot < lineality.size()) {
            RatVector l = lineality[pivot];
            if (sgn(hp) > 0) {
                l = -l;
                hp = -hp;
            }
            lineality.erase(lineality.begin() + static_cast<std::ptrdiff_t>(pivot));
            for (auto& other : lineality) {
                Rational ho = dot(h, other);
                if (sgn(ho) != 0) other = (other - Rational(ho / hp) * l).primitive();
            }
            for (auto& r : rays) {
                Rational hr = dot(h, r.v);
                if (sgn(hr) != 0) r.v = (r.v - Rational(hr / hp) * l).primitive();
                r.zeros[c] = true;
            }
            ZeroSet z(m);
            for (std::size_t k = 0; k < c; ++k) z[k] = true;
            rays.push_back({l.primitive(), std::move(z)});
            continue;
        }

        std::vector<Rational> val(rays.size());
        std::vector<std::size_t> pos;
        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = dot(h, rays[i].v);
            int s = sgn(val[i]);
            if (s > 0) {
                pos.push_back(i);
            } else {
                if (s == 0) rays[i].zeros[c] = true;
                next.push_back(rays[i]);
            }
        }
        if (pos.empty()) {
            rays = std::move(next);
            continue;
        }

        const std::size_t pointed_dim = dim - lineality.size();
        for (std::size_t in = 0; in < rays.size(); ++in) {
            if (sgn(val[in]) >= 0) continue;
            for (std::size_t ip : pos) {
                ZeroSet common = meet(rays[ip].zeros, rays[in].zeros);
                if (pointed_dim >= 2 && count(common) + 2 < pointed_dim) continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
                    if (k == ip || k == in) continue;
                    if (subset(common, rays[k].zeros)) adjacent = false;
                }
                if (!adjacent) continue;
                RatVector v = Rational(-val[in]) * rays[ip].v + val[ip] * rays[in].v;
                common[c] = true;
                next.push_back({v.primitive(), std::move(common)});
            }
        }
        rays = std::move(next);
    }

    ConeGenerators out;
    for (auto& l : lineality) out.lineality.push_back(sign_canonical(l));
    for (auto& r : rays)
        if (!r.v.is_zero()) out.rays.push_back(r.v.primitive());
    sort_unique(out.rays);
    return out;
}

GeneratorSystem hrep_to_vrep(const HalfspaceSystem& h)
{
    const std::size_t n = h.dim;
    GeneratorSystem out(n);
    if (h.infeasible) return out;

    std::vector<RatVector> rows;
    RatVector homog(n + 1);
    homog[0] = -1;
    rows.push_back(homog);
    auto lift = [n](const Halfspace& hs, int sign) {
        RatVector row(n + 1);
        row[0] = -sign * hs.offset;
        for (std::size_t i = 0; i < n; ++i) row[i + 1] = sign * hs.normal[i];
        return row;
    };
    for (const auto& e : h.equalities) {
        rows.push_back(lift(e, 1));
        rows.push_back(lift(e, -1));
    }
    for (const auto& hs : h.inequalities) rows.push_back(lift(hs, 1));

    ConeGenerators cone = cone_double_description(n + 1, rows);

    auto tail = [n](const RatVector& z) {
        RatVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = z[i + 1];
        return v;
    };
    for (const auto& z : cone.rays) {
        if (sgn(z[0]) > 0) {
            RatVector v = tail(z);
            v *= Rational(1 / z[0]);
            out.vertices.push_back(std::move(v));
        } else {
            out.rays.push_back(tail(z).primitive());
        }
    }
    if (out.vertices.empty()) {
        out.rays.clear();
        return out;
    }
    for (const auto& z : cone.lineality) {
        RatVector v = tail(z).primitive();
        if (v.is_zero()) continue;
        out.rays.push_back(v);
        out.rays.push_back(-v);
    }
    std::erase_if(out.rays, [](const RatVector& r) { return r.is_zero(); });
    sort_unique(out.vertices);
    sort_unique(out.rays);
    return out;
}

HalfspaceSystem vrep_to_hrep(const GeneratorSystem& v)
{
    const std::size_t n = v.dim;
    HalfspaceSystem out(n);
    if (v.empty()) {
        out.infeasible = true;
        return out;
    }
    std::vector<RatVector> rows;
    for (const auto& p : v.vertices) {
        RatVector row(n + 1);
        row[0] = 1;
        for (std::size_t i = 0; i < n; ++i) row[i + 1] = p[i];
        rows.push_back(std::move(row));
    }
    for (const auto& r : v.rays) {
        RatVector row(n + 1);
        for (std::size_t i = 0; i < n; ++i) row[i + 1] = r[i];
        rows.push_back(std::move(row));
    }
    ConeGenerators cone = cone_double_description(n + 1, rows);

    auto split = [n](const RatVector& z) {
        RatVector a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = z[i + 1];
        return Halfspace{a, Rational(-z[0])};
    };
    std::set<Halfspace> eqs;
    for (const auto& z : cone.lineality) {
        Halfspace hs = split(z);
        if (hs.normal.is_zero()) continue;
        RatVector c = sign_canonical(hs.normal);
        // rescale offset by the same positive/negative factor
        Rational f;
        for (std::size_t i = 0; i < n; ++i)
            if (sgn(hs.normal[i]) != 0) {
                f = c[i] / hs.normal[i];
                break;
            }
        eqs.insert({c, Rational(hs.offset * f)});
    }
    std::set<Halfspace> ineqs;
    for (const auto& z : cone.rays) {
        Halfspace hs = split(z);
        if (hs.normal.is_zero()) continue;
        RatVector c = hs.normal.primitive();
        Rational f;
        for (std::size_t i = 0; i < n; ++i)
            if (sgn(hs.normal[i]) != 0) {
                f = c[i] / hs.normal[i];
                break;
            }
        ineqs.insert({c, Rational(hs.offset * f)});
    }
    out.equalities.assign(eqs.begin(), eqs.end());
    out.inequalities.assign(ineqs.begin(), ineqs.end());
    return out;
}

std::size_t rank(const std::vector<RatVector>& vectors)
{
    if (vectors.empty()) return 0;
    std::vector<RatVector> m = vectors;
    const std::size_t cols = m.front().dim();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && sgn(m[piv][c]) == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c] / m[r][c];
            m[i] -= f * m[r];
        }
        ++r;
    }
    return r;
}

std::vector<RatVector> null_space(std::size_t dim, const std::vector<RatVector>& rows)
{
    // reduced row echelon form
    std::vector<RatVector> m = rows;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < dim && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && sgn(m[piv][c]) == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        m[r] *= Rational(1 / m[r][c]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c];
            m[i] -= f * m[r];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<RatVector> basis;
    for (std::size_t free = 0; free < dim; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        RatVector v(dim);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(v.primitive());
    }
    return basis;
}

} // namespace supdiff::polyrat
