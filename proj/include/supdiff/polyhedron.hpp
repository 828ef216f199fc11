#pragma once

#include "supdiff/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace supdiff::polyrat {

/// One linear constraint <normal, y> (<= or ==) offset.
struct Halfspace {
    RatVector normal;
    Rational offset;

    friend bool operator==(const Halfspace&, const Halfspace&) = default;
    friend bool operator<(const Halfspace& a, const Halfspace& b);
};

/// H-representation. `infeasible` is the explicit marker for a system known
/// to have no solution; the halfspace lists are then irrelevant.
struct HalfspaceSystem {
    std::size_t dim = 0;
    std::vector<Halfspace> inequalities;
    std::vector<Halfspace> equalities;
    bool infeasible = false;

    explicit HalfspaceSystem(std::size_t n = 0) : dim(n) {}

    // Appends <normal, y> <= offset. A zero normal is folded into the
    // infeasible marker (offset < 0) or dropped (offset >= 0).
    void add_inequality(RatVector normal, Rational offset);
    void add_equality(RatVector normal, Rational offset);

    // Throws ZeroNormal / DimensionMismatch on malformed input.
    void validate() const;
};

/// V-representation: conv(vertices) + cone(rays). Empty iff no vertex.
struct GeneratorSystem {
    std::size_t dim = 0;
    std::vector<RatVector> vertices;
    std::vector<RatVector> rays;

    explicit GeneratorSystem(std::size_t n = 0) : dim(n) {}
    bool empty() const { return vertices.empty(); }
    void validate() const;
};

/// Generators of the polyhedral cone {z : <row, z> <= 0 for all rows}.
struct ConeGenerators {
    std::vector<RatVector> lineality;
    std::vector<RatVector> rays;
};

// Double description (Motzkin et al.) with combinatorial adjacency test.
// Rows are processed in the given order; output rays are primitive integer
// vectors, sorted and deduplicated.
ConeGenerators cone_double_description(std::size_t dim, const std::vector<RatVector>& rows);

GeneratorSystem hrep_to_vrep(const HalfspaceSystem& h);
HalfspaceSystem vrep_to_hrep(const GeneratorSystem& v);

/// Closed convex polyhedron in R^n. Immutable; the missing representation is
/// computed on first use and cached (idempotent, thread-safe), so copies are
/// cheap and may be shared freely.
class Polyhedron {
public:
    Polyhedron() : Polyhedron(empty(0)) {}

    static Polyhedron from_hrep(HalfspaceSystem h);
    static Polyhedron from_vrep(GeneratorSystem v);
    static Polyhedron empty(std::size_t dim);
    static Polyhedron whole_space(std::size_t dim);
    static Polyhedron point(const RatVector& p);
    static Polyhedron box(const RatVector& lo, const RatVector& hi);
    // Closed 1-D interval with optional infinite ends.
    static Polyhedron interval(const ExtRational& lo, const ExtRational& hi);
    static Polyhedron ray_from(const RatVector& apex, const RatVector& direction);

    std::size_t dim() const;
    bool is_empty() const;

    bool has_hrep() const;
    bool has_vrep() const;
    const HalfspaceSystem& hrep() const;
    const GeneratorSystem& vrep() const;

    // Same set with a canonical irredundant H-representation.
    Polyhedron minimized() const;

    bool is_bounded() const;
    bool is_singleton() const;
    bool is_whole_space() const;

    std::string str() const;

private:
    struct State;
    explicit Polyhedron(std::shared_ptr<State> state) : state_(std::move(state)) {}
    std::shared_ptr<State> state_;
};

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);
Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q);
Polyhedron closed_conv_union(const std::vector<Polyhedron>& parts, std::size_t dim);
ExtRational support(const Polyhedron& p, const RatVector& d);
bool member(const Polyhedron& p, const RatVector& y);
bool contains_set(const Polyhedron& outer, const Polyhedron& inner);
bool same_set(const Polyhedron& p, const Polyhedron& q);

// Fourier-Motzkin projection onto the kept coordinates (in the given order).
// Throws DimensionCap when p.dim() exceeds `max_dim`.
Polyhedron project(const Polyhedron& p, const std::vector<std::size_t>& keep, std::size_t max_dim = 6);

using Matrix = std::vector<std::vector<Rational>>;

// Image {m y : y in p}; m has p.dim() columns.
Polyhedron linear_image(const Polyhedron& p, const Matrix& m);
Polyhedron scale(const Polyhedron& p, const Rational& s);
Polyhedron translate(const Polyhedron& p, const RatVector& shift);

/// Normal cone (eps = 0) or eps-normal set of A at x; empty when x is not in A.
Polyhedron normal_cone(const Polyhedron& a, const RatVector& x, const Rational& eps = 0);

/// A nonempty face of p, identified by the indices of the inequalities of
/// p.hrep() that are tight on it.
struct Face {
    std::vector<std::size_t> tight;
    Polyhedron set;
};

// All nonempty faces of p (p itself included), ordered by tight-set size
// then lexicographically.
std::vector<Face> faces(const Polyhedron& p);

/// Linear subspace spanned by a linearly independent basis.
class Subspace {
public:
    explicit Subspace(std::size_t dim, std::vector<RatVector> basis = {});

    static Subspace coordinate(std::size_t dim, const std::vector<std::size_t>& axes);
    static Subspace whole(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const std::vector<RatVector>& basis() const { return basis_; }

    Subspace orthogonal_complement() const;
    Polyhedron as_polyhedron() const;
    bool contains(const RatVector& v) const;

private:
    std::size_t dim_;
    std::vector<RatVector> basis_;
};

std::size_t rank(const std::vector<RatVector>& vectors);
// Basis of {v : <row, v> = 0 for all rows}.
std::vector<RatVector> null_space(std::size_t dim, const std::vector<RatVector>& rows);

} // namespace supdiff::polyrat
