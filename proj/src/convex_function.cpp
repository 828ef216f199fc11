#include "supdiff/convex_function.hpp"

#include "supdiff/error.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace supdiff {

using polyrat::GeneratorSystem;
using polyrat::HalfspaceSystem;
using polyrat::Polyhedron;

namespace {

ExactReal to_exact(const ExtRational& v)
{
    if (v.is_plus_infinity()) return ExactReal::plus_infinity();
    return ExactReal(v.value());
}

// p is an extreme point of the minimized polyhedron dom.
bool is_extreme_point(const Polyhedron& dom, const RatVector& p)
{
    const auto& h = dom.hrep();
    std::vector<RatVector> tight;
    for (const auto& e : h.equalities) tight.push_back(e.normal);
    for (const auto& q : h.inequalities)
        if (dot(q.normal, p) == q.offset) tight.push_back(q.normal);
    return polyrat::rank(tight) == dom.dim();
}

std::string affine_str(const AffinePiece& p)
{
    std::ostringstream os;
    os << "<" << p.a << ",y>";
    if (sgn(p.b) >= 0) os << "+";
    os << p.b.get_str();
    return os.str();
}

} // namespace

// ------------------------------------------------------- MaxAffineFunction

struct MaxAffineFunction::Cache {
    std::once_flag epi_once;
    std::once_flag cells_once;
    std::optional<Polyhedron> epigraph;
    std::vector<LinearityCell> cells;
};

MaxAffineFunction::MaxAffineFunction(std::vector<AffinePiece> pieces, std::optional<Polyhedron> domain,
                                     std::vector<Override> overrides)
    : pieces_(std::move(pieces)), cache_(std::make_shared<Cache>())
{
    if (pieces_.empty()) throw Error(ErrorCode::InvalidArgument, "max-affine function needs at least one piece");
    dim_ = pieces_.front().a.dim();
    if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    for (const auto& p : pieces_)
        if (p.a.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "piece dimension");
    if (domain && domain->dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "domain dimension");
    domain_ = domain ? domain->minimized() : Polyhedron::whole_space(dim_);
    if (domain_.is_empty()) throw Error(ErrorCode::Improper, "empty domain");

    for (auto& o : overrides) {
        if (o.point.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "override point");
        if (!polyrat::member(domain_, o.point))
            throw Error(ErrorCode::InvalidOverride, "override point " + o.point.str() + " outside the domain");
        for (const auto& prev : overrides_)
            if (prev.point == o.point) throw Error(ErrorCode::InvalidOverride, "duplicate override point");
        Rational base = base_value(o.point);
        if (o.value < base)
            throw Error(ErrorCode::InvalidOverride, "override below the max-affine value at " + o.point.str());
        if (o.value == base) continue;
        if (domain_.is_singleton()) {
            // a constant piece expresses the raised value exactly
            pieces_.push_back({RatVector(dim_), o.value});
            continue;
        }
        if (!is_extreme_point(domain_, o.point))
            throw Error(ErrorCode::InvalidOverride, "override point " + o.point.str() + " is not a vertex of the domain");
        overrides_.push_back(std::move(o));
    }
    std::sort(overrides_.begin(), overrides_.end(),
              [](const Override& a, const Override& b) { return a.point < b.point; });
}

Rational MaxAffineFunction::base_value(const RatVector& y) const
{
    Rational best = pieces_.front()(y);
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        Rational v = pieces_[i](y);
        if (v > best) best = v;
    }
    return best;
}

const Override* MaxAffineFunction::override_at(const RatVector& y) const
{
    for (const auto& o : overrides_)
        if (o.point == y) return &o;
    return nullptr;
}

ExtRational MaxAffineFunction::eval(const RatVector& y) const
{
    if (y.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "evaluation point");
    if (!polyrat::member(domain_, y)) return ExtRational::plus_infinity();
    if (const Override* o = override_at(y)) return o->value;
    return base_value(y);
}

std::vector<std::size_t> MaxAffineFunction::active_pieces(const RatVector& y) const
{
    Rational v = base_value(y);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (pieces_[i](y) == v) out.push_back(i);
    return out;
}

MaxAffineFunction MaxAffineFunction::without_overrides() const { return MaxAffineFunction(pieces_, domain_); }

MaxAffineFunction MaxAffineFunction::restricted(const Polyhedron& q) const
{
    Polyhedron dom = polyrat::intersect(domain_, q);
    std::vector<Override> kept;
    for (const auto& o : overrides_)
        if (polyrat::member(dom, o.point)) kept.push_back(o);
    return MaxAffineFunction(pieces_, dom, std::move(kept));
}

const Polyhedron& MaxAffineFunction::epigraph() const
{
    std::call_once(cache_->epi_once, [this] {
        const std::size_t n = dim_;
        HalfspaceSystem h(n + 1);
        auto lift = [n](const RatVector& a, const Rational& t) {
            RatVector v(n + 1);
            for (std::size_t i = 0; i < n; ++i) v[i] = a[i];
            v[n] = t;
            return v;
        };
        for (const auto& p : pieces_) h.add_inequality(lift(p.a, -1), Rational(-p.b));
        const auto& dh = domain_.hrep();
        for (const auto& q : dh.inequalities) h.add_inequality(lift(q.normal, 0), q.offset);
        for (const auto& e : dh.equalities) h.add_equality(lift(e.normal, 0), e.offset);
        cache_->epigraph = Polyhedron::from_hrep(std::move(h)).minimized();
    });
    return *cache_->epigraph;
}

const std::vector<LinearityCell>& MaxAffineFunction::cells() const
{
    std::call_once(cache_->cells_once, [this] {
        const std::size_t n = dim_;
        const auto& dh = domain_.hrep();
        std::vector<LinearityCell> out;
        for (const auto& face : polyrat::faces(epigraph())) {
            const auto& g = face.set.vrep();
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < pieces_.size(); ++i) {
                const auto& p = pieces_[i];
                bool tight = true;
                for (const auto& v : g.vertices) {
                    Rational val = p.b;
                    for (std::size_t k = 0; k < n; ++k) val += p.a[k] * v[k];
                    if (val != v[n]) tight = false;
                }
                for (const auto& r : g.rays) {
                    Rational val = 0;
                    for (std::size_t k = 0; k < n; ++k) val += p.a[k] * r[k];
                    if (val != r[n]) tight = false;
                }
                if (tight) s.push_back(i);
            }
            if (s.empty()) continue;

            GeneratorSystem proj(n);
            auto drop = [n](const RatVector& z) {
                RatVector y(n);
                for (std::size_t k = 0; k < n; ++k) y[k] = z[k];
                return y;
            };
            for (const auto& v : g.vertices) proj.vertices.push_back(drop(v));
            for (const auto& r : g.rays) {
                RatVector y = drop(r);
                if (!y.is_zero()) proj.rays.push_back(std::move(y));
            }
            LinearityCell cell;
            cell.pieces = s;
            for (std::size_t j = 0; j < dh.inequalities.size(); ++j) {
                const auto& q = dh.inequalities[j];
                bool tight = std::all_of(proj.vertices.begin(), proj.vertices.end(),
                                         [&](const RatVector& v) { return dot(q.normal, v) == q.offset; }) &&
                             std::all_of(proj.rays.begin(), proj.rays.end(),
                                         [&](const RatVector& r) { return sgn(dot(q.normal, r)) == 0; });
                if (tight) cell.facets.push_back(j);
            }
            RatVector mid(n);
            for (const auto& v : proj.vertices) mid += v;
            mid *= Rational(1, static_cast<long>(proj.vertices.size()));
            for (const auto& r : proj.rays) mid += r;
            cell.relint_point = mid;
            cell.region = Polyhedron::from_vrep(std::move(proj));

            GeneratorSystem sl(n);
            for (auto i : s) sl.vertices.push_back(pieces_[i].a);
            for (auto j : cell.facets) sl.rays.push_back(dh.inequalities[j].normal);
            for (const auto& e : dh.equalities) {
                sl.rays.push_back(e.normal);
                sl.rays.push_back(-e.normal);
            }
            cell.slopes = Polyhedron::from_vrep(std::move(sl));
            out.push_back(std::move(cell));
        }
        std::sort(out.begin(), out.end(), [](const LinearityCell& a, const LinearityCell& b) {
            if (a.pieces != b.pieces) return a.pieces < b.pieces;
            return a.facets < b.facets;
        });
        cache_->cells = std::move(out);
    });
    return cache_->cells;
}

std::string MaxAffineFunction::str() const
{
    std::ostringstream os;
    if (pieces_.size() == 1) {
        os << affine_str(pieces_.front());
    } else {
        os << "max{";
        for (std::size_t i = 0; i < pieces_.size(); ++i) os << (i ? ", " : "") << affine_str(pieces_[i]);
        os << "}";
    }
    if (!domain_.is_whole_space()) os << " on " << domain_.str();
    for (const auto& o : overrides_) os << " [" << o.point << " -> " << o.value.get_str() << "]";
    return os.str();
}

// -------------------------------------------------------------- Analytic1D

Analytic1D::Analytic1D(bool reflect_, Rational shift_, Rational scale_)
    : reflect(reflect_), shift(std::move(shift_)), scale(std::move(scale_))
{
    if (sgn(scale) <= 0) throw Error(ErrorCode::InvalidArgument, "analytic scale must be positive");
}

ExactReal Analytic1D::eval(const Rational& y) const
{
    Rational u = arg(y);
    if (sgn(u) < 0) return ExactReal::plus_infinity();
    return ExactReal(0, Rational(-scale), u);
}

Polyhedron Analytic1D::domain() const
{
    if (reflect) return Polyhedron::interval(ExtRational::minus_infinity(), Rational(-shift));
    return Polyhedron::interval(shift, ExtRational::plus_infinity());
}

std::string Analytic1D::str() const
{
    std::ostringstream os;
    os << "-";
    if (scale != 1) os << scale.get_str() << "*";
    os << "sqrt(" << (reflect ? "-y" : "y");
    if (sgn(shift) > 0) os << "-" << shift.get_str();
    if (sgn(shift) < 0) os << "+" << Rational(-shift).get_str();
    os << ")";
    return os.str();
}

// ----------------------------------------------------------- ConvexFunction

std::size_t ConvexFunction::dim() const { return is_max_affine() ? max_affine().dim() : 1; }

ExactReal ConvexFunction::eval(const RatVector& y) const
{
    if (y.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "evaluation point");
    if (is_max_affine()) return to_exact(max_affine().eval(y));
    return analytic().eval(y[0]);
}

Polyhedron ConvexFunction::domain() const
{
    return is_max_affine() ? max_affine().domain() : analytic().domain();
}

ConvexFunction ConvexFunction::lsc_envelope() const
{
    if (is_max_affine() && max_affine().has_overrides()) return max_affine().without_overrides();
    return *this;
}

bool ConvexFunction::is_lsc() const { return !is_max_affine() || !max_affine().has_overrides(); }

ConvexFunction ConvexFunction::restricted(const Polyhedron& q) const
{
    if (q.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "restriction set");
    if (is_max_affine()) return max_affine().restricted(q);
    Polyhedron dom = analytic().domain();
    if (polyrat::contains_set(q, dom)) return *this;
    Polyhedron both = polyrat::intersect(dom, q);
    if (both.is_empty()) throw Error(ErrorCode::Improper, "restriction leaves an empty domain");
    if (!both.is_singleton())
        throw Error(ErrorCode::UnsupportedFamily, "analytic function restricted to a proper subinterval");
    const RatVector p = both.vrep().vertices.front();
    const Rational v = analytic().eval(p[0]).as_rational();
    return MaxAffineFunction({{RatVector(1), v}}, Polyhedron::point(p));
}

std::string ConvexFunction::str() const { return is_max_affine() ? max_affine().str() : analytic().str(); }

// ----------------------------------------------------------- FunctionFamily

FunctionFamily::FunctionFamily(std::size_t dim, std::vector<FamilyEntry> entries)
    : dim_(dim), entries_(std::move(entries))
{
    if (entries_.empty()) throw Error(ErrorCode::InvalidArgument, "empty family");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].f.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "family member dimension");
        for (std::size_t j = 0; j < i; ++j)
            if (entries_[j].label == entries_[i].label)
                throw Error(ErrorCode::InvalidArgument, "duplicate label '" + entries_[i].label + "'");
    }
}

bool FunctionFamily::all_max_affine() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const FamilyEntry& e) { return e.f.is_max_affine(); });
}

FunctionFamily FunctionFamily::lsc_envelope() const
{
    std::vector<FamilyEntry> out;
    for (const auto& e : entries_) out.push_back({e.label, e.f.lsc_envelope()});
    return FunctionFamily(dim_, std::move(out));
}

// -------------------------------------------------------------- SupFunction

SupFunction::SupFunction(FunctionFamily fam) : fam_(std::move(fam))
{
    Polyhedron dom = Polyhedron::whole_space(fam_.dim());
    for (const auto& e : fam_.entries()) dom = polyrat::intersect(dom, e.f.domain());
    domain_ = dom.minimized();
    if (domain_.is_empty()) throw Error(ErrorCode::Improper, "the supremum is identically +inf");
    if (!fam_.all_max_affine()) return;

    std::vector<AffinePiece> pieces;
    std::vector<RatVector> points;
    for (const auto& e : fam_.entries()) {
        const auto& m = e.f.max_affine();
        for (const auto& p : m.pieces())
            if (std::find(pieces.begin(), pieces.end(), p) == pieces.end()) pieces.push_back(p);
        for (const auto& o : m.overrides())
            if (polyrat::member(domain_, o.point) && std::find(points.begin(), points.end(), o.point) == points.end())
                points.push_back(o.point);
    }
    MaxAffineFunction base(pieces, domain_);
    std::vector<Override> overrides;
    for (const auto& p : points) {
        ExactReal v = eval(p);
        const Rational& q = v.as_rational();
        if (q > base.base_value(p)) overrides.push_back({p, q});
    }
    exact_ = MaxAffineFunction(std::move(pieces), domain_, std::move(overrides));
}

const MaxAffineFunction& SupFunction::max_affine() const
{
    if (!exact_) throw Error(ErrorCode::UnsupportedFamily, "supremum is not max-affine");
    return *exact_;
}

ExactReal SupFunction::eval(const RatVector& y) const
{
    ExactReal best = fam_.entries().front().f.eval(y);
    for (std::size_t i = 1; i < fam_.size(); ++i) {
        ExactReal v = fam_.entries()[i].f.eval(y);
        if (v > best) best = v;
    }
    return best;
}

SupFunction sup_function(const FunctionFamily& fam) { return SupFunction(fam); }

std::vector<std::size_t> active_indices(const FunctionFamily& fam, const RatVector& x, const Rational& eps,
                                        bool use_cl)
{
    if (sgn(eps) < 0) throw Error(ErrorCode::InvalidArgument, "negative eps");
    ExactReal fx = fam.entries().front().f.eval(x);
    std::vector<ExactReal> vals;
    for (const auto& e : fam.entries()) {
        ExactReal v = e.f.eval(x);
        if (v > fx) fx = v;
        vals.push_back(use_cl ? e.f.lsc_envelope().eval(x) : v);
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        bool in = fx.is_finite() ? vals[i] >= fx - eps : !vals[i].is_finite();
        if (in) out.push_back(i);
    }
    return out;
}

std::set<std::string> active_set(const FunctionFamily& fam, const RatVector& x, const Rational& eps, bool use_cl)
{
    std::set<std::string> out;
    for (auto i : active_indices(fam, x, eps, use_cl)) out.insert(fam.entries()[i].label);
    return out;
}

} // namespace supdiff
