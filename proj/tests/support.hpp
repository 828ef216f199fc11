#pragma once

#include "supdiff/polyhedron.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

namespace testsupport {

using supdiff::Rational;
using supdiff::RatVector;
using namespace supdiff::polyrat;

// Seeded generator. Integers are drawn by modulo so the stream is identical
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    long uniform(long lo, long hi)
    {
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(eng_() % span);
    }

    Rational rational(long lo, long hi, long max_den = 4)
    {
        long den = uniform(1, max_den);
        Rational q(uniform(lo * den, hi * den), den);
        q.canonicalize();
        return q;
    }

    RatVector vector(std::size_t n, long lo, long hi)
    {
        RatVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    RatVector nonzero_vector(std::size_t n, long lo, long hi)
    {
        for (;;) {
            RatVector v = vector(n, lo, hi);
            if (!v.is_zero()) return v;
        }
    }

private:
    std::mt19937_64 eng_;
};

// Bounded polytope containing the origin: a box cut by a few random halfspaces.
inline Polyhedron random_polytope(Rng& rng, std::size_t n)
{
    HalfspaceSystem h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h.add_inequality(RatVector::unit(n, i, 1), rng.uniform(1, 4));
        h.add_inequality(RatVector::unit(n, i, -1), rng.uniform(1, 4));
    }
    long extra = rng.uniform(0, 3);
    for (long k = 0; k < extra; ++k) h.add_inequality(rng.nonzero_vector(n, -3, 3), rng.uniform(1, 5));
    return Polyhedron::from_hrep(std::move(h));
}

// Possibly unbounded polyhedron containing a random integer point.
inline Polyhedron random_polyhedron(Rng& rng, std::size_t n)
{
    RatVector c = rng.vector(n, -2, 2);
    HalfspaceSystem h(n);
    long m = rng.uniform(1, 2 * static_cast<long>(n) + 1);
    for (long k = 0; k < m; ++k) {
        RatVector a = rng.nonzero_vector(n, -3, 3);
        h.add_inequality(a, Rational(dot(a, c) + rng.uniform(0, 3)));
    }
    return Polyhedron::from_hrep(std::move(h));
}

// Vertices of a bounded H-polytope by brute force: every n-subset of
// constraints solved as an equation system, kept when feasible.
inline std::vector<RatVector> brute_vertices(const HalfspaceSystem& h)
{
    const std::size_t n = h.dim;
    const auto& rows = h.inequalities;
    std::vector<RatVector> out;
    std::vector<std::size_t> pick(n);
    auto solve = [&](std::vector<std::size_t>& idx) -> std::optional<RatVector> {
        std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) m[r][c] = rows[idx[r]].normal[c];
            m[r][n] = rows[idx[r]].offset;
        }
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && sgn(m[p][c]) == 0) ++p;
            if (p == n) return std::nullopt;
            std::swap(m[p], m[c]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || sgn(m[r][c]) == 0) continue;
                Rational f = m[r][c] / m[c][c];
                for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
            }
        }
        RatVector v(n);
        for (std::size_t c = 0; c < n; ++c) v[c] = m[c][n] / m[c][c];
        return v;
    };
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
        if (depth == n) {
            auto v = solve(pick);
            if (!v) return;
            for (const auto& r : rows)
                if (dot(r.normal, *v) > r.offset) return;
            if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
            return;
        }
        for (std::size_t i = start; i < rows.size(); ++i) {
            pick[depth] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace testsupport

#include "supdiff/convex_function.hpp"

namespace testsupport {

using supdiff::AffinePiece;
using supdiff::Analytic1D;
using supdiff::ConvexFunction;
using supdiff::FunctionFamily;
using supdiff::MaxAffineFunction;

inline MaxAffineFunction random_max_affine(Rng& rng, std::size_t n, std::size_t pieces, bool with_domain)
{
    std::vector<AffinePiece> ps;
    for (std::size_t i = 0; i < pieces; ++i) ps.push_back({rng.vector(n, -4, 4), Rational(rng.uniform(-4, 4))});
    if (!with_domain) return MaxAffineFunction(ps);
    return MaxAffineFunction(ps, random_polyhedron(rng, n));
}

inline FunctionFamily random_family(Rng& rng, std::size_t n, std::size_t k, bool with_domain)
{
    for (;;) {
        std::vector<supdiff::FamilyEntry> es;
        for (std::size_t t = 0; t < k; ++t)
            es.push_back({"f" + std::to_string(t + 1),
                          random_max_affine(rng, n, static_cast<std::size_t>(rng.uniform(1, 2)), with_domain)});
        FunctionFamily fam(n, std::move(es));
        Polyhedron dom = Polyhedron::whole_space(n);
        for (const auto& e : fam.entries()) dom = intersect(dom, e.f.domain());
        if (!dom.is_empty()) return fam;
    }
}

// A point of the polyhedron: a vertex, pushed along a ray now and then.
inline RatVector random_point_in(Rng& rng, const Polyhedron& p)
{
    const auto& g = p.vrep();
    RatVector y = g.vertices[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(g.vertices.size()) - 1))];
    if (!g.rays.empty() && rng.uniform(0, 1))
        y += Rational(rng.uniform(0, 2)) * g.rays[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(g.rays.size()) - 1))];
    return y;
}

} // namespace testsupport
