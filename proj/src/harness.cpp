#include "supdiff/harness.hpp"

#include "supdiff/error.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

namespace supdiff::harness {

using formulas::VerdictBasis;
using polyrat::HalfspaceSystem;
using polyrat::Polyhedron;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

json vector_to_json(const RatVector& v)
{
    json out = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) out.push_back(rational_to_json(v[i]));
    return out;
}

RatVector vector_from_json(const json& j, std::size_t dim)
{
    if (!j.is_array()) parse_fail("expected an array of rationals");
    if (j.size() != dim) parse_fail("expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
    RatVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rational_from_json(j[i]);
    return v;
}

json rows_to_json(const std::vector<polyrat::Halfspace>& rows)
{
    json out = json::array();
    for (const auto& r : rows) out.push_back({{"normal", vector_to_json(r.normal)}, {"offset", rational_to_json(r.offset)}});
    return out;
}

const char* status_name(VerdictStatus s) { return formulas::to_string(s); }

std::optional<VerdictStatus> parse_status(const std::string& s)
{
    for (auto st : {VerdictStatus::ExactMatch, VerdictStatus::SandwichPass, VerdictStatus::Mismatch})
        if (s == status_name(st)) return st;
    return std::nullopt;
}

std::string interval_end(const ExtRational& e)
{
    if (e.is_plus_infinity()) return "+inf";
    if (e.is_minus_infinity()) return "-inf";
    return e.value().get_str();
}

// Portable draws: modulo reduction of the raw 64-bit stream.
class Draw {
public:
    explicit Draw(std::seed_seq& seq) : eng_(seq) {}
    long uniform(long lo, long hi)
    {
        return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    RatVector vector(std::size_t n, long lo, long hi)
    {
        RatVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 eng_;
};

// A piece through (x, c) with |b| <= 8, or below c at x when `below`.
AffinePiece draw_piece(Draw& rng, std::size_t n, const RatVector& x, const Rational& c, bool below)
{
    for (;;) {
        RatVector a = rng.vector(n, -8, 8);
        Rational b = below ? Rational(rng.uniform(-8, 8)) : Rational(c - dot(a, x));
        if (abs(b) > 8) continue;
        if (below && dot(a, x) + b > c) continue;
        return {a, b};
    }
}

json witness_to_json(const std::variant<formulas::DirectionWitness, formulas::PointWitness>& w)
{
    if (const auto* d = std::get_if<formulas::DirectionWitness>(&w))
        return {{"direction", vector_to_json(d->direction)},
                {"lhs_support", d->lhs_support.str()},
                {"rhs_bound", d->rhs_bound.str()}};
    const auto& p = std::get<formulas::PointWitness>(w);
    return {{"point", vector_to_json(p.point)}, {"side", p.side}};
}

std::string seconds_str(double s)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << s;
    return os.str();
}

} // namespace

json rational_to_json(const Rational& q) { return q.get_str(); }

Rational rational_from_json(const json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    parse_fail("rationals must be strings \"p/q\" or integers");
}

json function_to_json(const ConvexFunction& f)
{
    if (!f.is_max_affine()) {
        const Analytic1D& a = f.analytic();
        return {{"kind", "analytic1d"},
                {"name", "neg_sqrt"},
                {"reflect", a.reflect},
                {"shift", rational_to_json(a.shift)},
                {"scale", rational_to_json(a.scale)}};
    }
    const MaxAffineFunction& m = f.max_affine();
    json pieces = json::array();
    for (const auto& p : m.pieces()) pieces.push_back({{"a", vector_to_json(p.a)}, {"b", rational_to_json(p.b)}});
    json out = {{"kind", "max_affine"}, {"pieces", pieces}};
    if (!m.domain().is_whole_space()) {
        const auto& h = m.domain().hrep();
        json dom = {{"ineqs", rows_to_json(h.inequalities)}};
        if (!h.equalities.empty()) dom["eqs"] = rows_to_json(h.equalities);
        out["domain"] = dom;
    }
    if (m.has_overrides()) {
        json ov = json::array();
        for (const auto& o : m.overrides())
            ov.push_back({{"point", vector_to_json(o.point)}, {"value", rational_to_json(o.value)}});
        out["overrides"] = ov;
    }
    return out;
}

ConvexFunction function_from_json(const json& j, std::size_t dim)
{
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "analytic1d") {
        if (dim != 1) parse_fail("analytic1d functions live on the real line");
        if (j.contains("name") && j.at("name") != "neg_sqrt") parse_fail("unknown analytic function");
        bool reflect = j.value("reflect", false);
        Rational shift = j.contains("shift") ? rational_from_json(j.at("shift")) : Rational(0);
        Rational scale = j.contains("scale") ? rational_from_json(j.at("scale")) : Rational(1);
        return Analytic1D(reflect, shift, scale);
    }
    if (kind != "max_affine") parse_fail("unknown function kind '" + kind + "'");
    std::vector<AffinePiece> pieces;
    for (const auto& p : field(j, "pieces")) pieces.push_back({vector_from_json(field(p, "a"), dim), rational_from_json(field(p, "b"))});
    std::optional<Polyhedron> domain;
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        HalfspaceSystem h(dim);
        if (d.contains("ineqs"))
            for (const auto& r : d.at("ineqs"))
                h.add_inequality(vector_from_json(field(r, "normal"), dim), rational_from_json(field(r, "offset")));
        if (d.contains("eqs"))
            for (const auto& r : d.at("eqs"))
                h.add_equality(vector_from_json(field(r, "normal"), dim), rational_from_json(field(r, "offset")));
        domain = Polyhedron::from_hrep(std::move(h));
    }
    std::vector<Override> overrides;
    if (j.contains("overrides"))
        for (const auto& o : j.at("overrides"))
            overrides.push_back({vector_from_json(field(o, "point"), dim), rational_from_json(field(o, "value"))});
    return MaxAffineFunction(std::move(pieces), std::move(domain), std::move(overrides));
}

json instance_to_json(const Instance& inst)
{
    json fam = json::array();
    for (const auto& e : inst.family.entries()) fam.push_back({{"label", e.label}, {"function", function_to_json(e.f)}});
    json out = {{"name", inst.name},
                {"dim", inst.family.dim()},
                {"x", vector_to_json(inst.x)},
                {"flags",
                 {{"lsc", inst.flags.lsc},
                  {"continuous_at_x", inst.flags.continuous_at_x},
                  {"continuous_somewhere", inst.flags.continuous_somewhere}}},
                {"family", fam}};
    if (inst.expected.lhs || !inst.expected.status.empty()) {
        json exp = json::object();
        if (inst.expected.lhs) exp["lhs"] = *inst.expected.lhs;
        if (!inst.expected.status.empty()) {
            json st = json::object();
            for (const auto& [k, s] : inst.expected.status) st[formulas::to_string(k)] = status_name(s);
            exp["formulas"] = st;
        }
        out["expected"] = exp;
    }
    return out;
}

Instance instance_from_json(const json& j)
{
    try {
        const std::size_t dim = field(j, "dim").get<std::size_t>();
        if (dim == 0) parse_fail("dim must be positive");
        std::vector<FamilyEntry> entries;
        for (const auto& e : field(j, "family"))
            entries.push_back({field(e, "label").get<std::string>(), function_from_json(field(e, "function"), dim)});
        Instance inst {field(j, "name").get<std::string>(), FunctionFamily(dim, std::move(entries)),
                       vector_from_json(field(j, "x"), dim), {}, {}};
        if (j.contains("flags")) {
            const json& f = j.at("flags");
            inst.flags.lsc = f.value("lsc", true);
            inst.flags.continuous_at_x = f.value("continuous_at_x", false);
            inst.flags.continuous_somewhere = f.value("continuous_somewhere", false);
        }
        if (inst.flags.continuous_at_x) inst.flags.continuous_somewhere = true;
        if (j.contains("expected")) {
            const json& e = j.at("expected");
            if (e.contains("lhs")) inst.expected.lhs = e.at("lhs").get<std::string>();
            if (e.contains("formulas")) {
                for (const auto& [name, st] : e.at("formulas").items()) {
                    auto k = formulas::parse_formula_kind(name);
                    if (!k) parse_fail("unknown formula '" + name + "'");
                    auto s = parse_status(st.get<std::string>());
                    if (!s) parse_fail("unknown verdict status '" + st.get<std::string>() + "'");
                    inst.expected.status[*k] = *s;
                }
            }
        }
        if (inst.flags.lsc)
            for (const auto& e : inst.family.entries())
                if (!e.f.is_lsc()) parse_fail("instance flagged lsc but member '" + e.label + "' is not");
        return inst;
    } catch (const json::exception& e) {
        parse_fail(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        parse_fail(e.what());
    }
}

Instance load_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in) parse_fail("cannot read '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        parse_fail(path + ": " + e.what());
    }
    return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << instance_to_json(inst).dump(2) << '\n';
}

const std::vector<Instance>& bundled_instances()
{
    static const std::vector<Instance> all = [] {
        using VS = VerdictStatus;
        using K = FormulaKind;
        const auto up = [](long lo) { return Polyhedron::interval(Rational(lo), ExtRational::plus_infinity()); };
        const auto down = [](long hi) { return Polyhedron::interval(ExtRational::minus_infinity(), Rational(hi)); };
        std::vector<Instance> out;

        out.push_back({"abs",
                       FunctionFamily(1, {{"x", MaxAffineFunction({{RatVector{1}, 0}})},
                                          {"-x", MaxAffineFunction({{RatVector{-1}, 0}})}}),
                       RatVector{0},
                       {true, true, true},
                       {"[-1, 1]", {}}});
        for (auto k : formulas::all_formula_kinds()) out.back().expected.status[k] = VS::ExactMatch;

        out.push_back({"sqrt_pair",
                       FunctionFamily(1, {{"1", Analytic1D(false, 0, 1)}, {"2", Analytic1D(true, 0, 1)}}),
                       RatVector{0},
                       {true, false, false},
                       {"R", {{K::BreveFvb1, VS::ExactMatch}}}});

        FunctionFamily non_lsc(1, {{"1", MaxAffineFunction({{RatVector{1}, 0}}, up(0), {{RatVector{0}, 1}})},
                                   {"2", MaxAffineFunction({{RatVector{-1}, 0}}, down(0), {{RatVector{0}, 1}})}});
        out.push_back({"non_lsc_pair",
                       non_lsc,
                       RatVector{0},
                       {false, false, false},
                       {"R",
                        {{K::BreveFvb1, VS::Mismatch},
                         {K::HatCor1, VS::Mismatch},
                         {K::HlzEps, VS::Mismatch},
                         {K::BrondstedM5, VS::Mismatch}}}});
        out.push_back({"non_lsc_pair_envelope",
                       non_lsc.lsc_envelope(),
                       RatVector{0},
                       {true, false, false},
                       {"R", {{K::BreveFvb1, VS::ExactMatch}, {K::HatCor1, VS::ExactMatch}}}});

        // f raised at the endpoint of its half-line; continuous on the interior.
        out.push_back({"non_lsc_halfline",
                       FunctionFamily(1, {{"1", MaxAffineFunction({{RatVector{1}, 0}}, up(0), {{RatVector{0}, 1}})},
                                          {"2", MaxAffineFunction({{RatVector{-1}, 0}})}}),
                       RatVector{0},
                       {false, false, true},
                       {"{}", {{K::Marco2, VS::ExactMatch}}}});

        out.push_back({"planes_at_kink",
                       FunctionFamily(2, {{"max", MaxAffineFunction({{RatVector{1, 0}, 0}, {RatVector{0, 1}, 0}})},
                                          {"diag", MaxAffineFunction({{RatVector{-1, -1}, 0}})},
                                          {"low", MaxAffineFunction({{RatVector{1, 1}, -1}})}}),
                       RatVector{0, 0},
                       {true, true, true},
                       {std::nullopt, {{K::ValadierClassic, VS::ExactMatch}, {K::Marco2, VS::ExactMatch}}}});

        const Polyhedron square = Polyhedron::box(RatVector{0, 0}, RatVector{1, 1});
        out.push_back({"box_corner",
                       FunctionFamily(2, {{"sum", MaxAffineFunction({{RatVector{1, 1}, 0}}, square)},
                                          {"neg", MaxAffineFunction({{RatVector{-1, 0}, 0}}, square)}}),
                       RatVector{0, 0},
                       {true, false, true},
                       {std::nullopt, {{K::Marco2, VS::ExactMatch}, {K::HlzEps, VS::ExactMatch}}}});
        return out;
    }();
    return all;
}

std::optional<Instance> bundled_instance(const std::string& name)
{
    for (const auto& inst : bundled_instances())
        if (inst.name == name) return inst;
    return std::nullopt;
}

const char* to_string(GenKind k) { return k == GenKind::FullDomain ? "FULL_DOMAIN" : "WITH_INDICATOR"; }

std::optional<GenKind> parse_gen_kind(std::string_view name)
{
    if (name == "FULL_DOMAIN") return GenKind::FullDomain;
    if (name == "WITH_INDICATOR") return GenKind::WithIndicator;
    return std::nullopt;
}

Instance gen_random_instance(std::size_t n, std::size_t k, std::uint64_t seed, GenKind kind)
{
    if (n < 1 || n > 3) throw Error(ErrorCode::InvalidArgument, "gen_random_instance needs 1 <= n <= 3");
    if (k < 2 || k > 5) throw Error(ErrorCode::InvalidArgument, "gen_random_instance needs 2 <= k <= 5");
    std::seed_seq seq {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k),
                       static_cast<std::uint32_t>(kind)};
    Draw rng(seq);

    // Half of the draws make every member active at x.
    const bool all_active = rng.uniform(0, 1) == 0;
    const RatVector x = rng.vector(n, -1, 1);
    const Rational c(rng.uniform(-4, 4));

    std::optional<Polyhedron> box;
    if (kind == GenKind::WithIndicator) {
        RatVector lo(n);
        RatVector hi(n);
        const std::size_t pinned = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = x[i] - rng.uniform(1, 3);
            hi[i] = x[i] + rng.uniform(1, 3);
            if (i == pinned || rng.uniform(0, 2) == 0) (rng.uniform(0, 1) ? lo[i] : hi[i]) = x[i];
        }
        box = Polyhedron::box(lo, hi);
    }

    std::vector<FamilyEntry> entries;
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t pieces = static_cast<std::size_t>(rng.uniform(1, 2));
        std::vector<AffinePiece> ps;
        for (std::size_t i = 0; i < pieces; ++i) {
            if (all_active)
                ps.push_back(draw_piece(rng, n, x, c, i > 0));
            else
                ps.push_back({rng.vector(n, -8, 8), Rational(rng.uniform(-8, 8))});
        }
        entries.push_back({"f" + std::to_string(t + 1), MaxAffineFunction(std::move(ps), box)});
    }
    std::string name = "gen_n" + std::to_string(n) + "_k" + std::to_string(k) + "_s" + std::to_string(seed) +
                       (kind == GenKind::FullDomain ? "_full" : "_indicator");
    const bool full = kind == GenKind::FullDomain;
    return {name, FunctionFamily(n, std::move(entries)), x, {true, full, true}, {}};
}

ExtRational oracle_support(const FunctionFamily& fam, const RatVector& x, const RatVector& d)
{
    if (x.dim() != fam.dim() || d.dim() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "oracle arguments");
    SupFunction sup(fam);
    if (!sup.is_max_affine()) throw Error(ErrorCode::UnsupportedFamily, "oracle needs a max-affine supremum");
    const MaxAffineFunction& m = sup.max_affine();
    if (!polyrat::member(m.domain(), x) || m.override_at(x)) return ExtRational::minus_infinity();

    const auto& h = m.domain().hrep();
    for (const auto& e : h.equalities)
        if (sgn(dot(e.normal, d)) != 0) return ExtRational::plus_infinity();
    std::vector<Rational> stops;
    for (const auto& q : h.inequalities) {
        Rational slack = q.offset - dot(q.normal, x);
        Rational nd = dot(q.normal, d);
        if (sgn(nd) <= 0) continue;
        if (sgn(slack) == 0) return ExtRational::plus_infinity();
        stops.push_back(slack / nd);
    }
    // breakpoints of the pieces along the ray
    const auto& ps = m.pieces();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            Rational c0 = ps[i](x) - ps[j](x);
            Rational c1 = dot(ps[i].a, d) - dot(ps[j].a, d);
            if (sgn(c1) == 0) continue;
            Rational root = -c0 / c1;
            if (sgn(root) > 0) stops.push_back(root);
        }
    }
    for (const auto& o : m.overrides()) {
        RatVector diff = o.point - x;
        std::size_t axis = 0;
        while (axis < d.dim() && sgn(d[axis]) == 0) ++axis;
        if (axis == d.dim()) break;
        Rational t = diff[axis] / d[axis];
        if (sgn(t) > 0 && t * d == diff) stops.push_back(t);
    }
    Rational t0 = stops.empty() ? Rational(1) : Rational(*std::min_element(stops.begin(), stops.end()) / 2);
    ExtRational moved = m.eval(x + t0 * d);
    return Rational((moved.value() - m.base_value(x)) / t0);
}

std::string describe_set(const Polyhedron& p)
{
    if (p.is_empty()) return "{}";
    if (p.is_whole_space()) return p.dim() == 1 ? "R" : "R^" + std::to_string(p.dim());
    if (p.dim() != 1) return p.minimized().str();
    ExtRational lo = polyrat::support(p, RatVector{-1});
    ExtRational hi = polyrat::support(p, RatVector{1});
    if (lo.is_finite()) lo = Rational(-lo.value());
    else lo = ExtRational::minus_infinity();
    if (lo == hi) return "{" + interval_end(hi) + "}";
    return std::string(lo.is_finite() ? "[" : "]") + interval_end(lo) + ", " + interval_end(hi) + (hi.is_finite() ? "]" : "[");
}

bool Report::ok() const
{
    for (const auto& r : results)
        if (!r.ok) return false;
    return true;
}

json Report::to_json(bool with_timing) const
{
    json grid = json::array();
    for (const auto& e : config.grid) grid.push_back(rational_to_json(e));
    json res = json::array();
    for (const auto& r : results) {
        json o = {{"formula", formulas::to_string(r.kind)}};
        if (!r.verdict) {
            o["status"] = "SKIPPED";
            o["reason"] = r.skipped;
        } else {
            const Verdict& v = *r.verdict;
            o["status"] = status_name(v.status);
            o["basis"] = formulas::to_string(v.basis);
            o["gap"] = v.gap.str();
            o["directions_checked"] = v.directions_checked;
            o["rhs_inner"] = describe_set(v.rhs.inner);
            o["rhs_outer"] = describe_set(v.rhs.outer);
            if (v.witness) o["witness"] = witness_to_json(*v.witness);
            if (!v.note.empty()) o["note"] = v.note;
        }
        if (r.expected) o["expected"] = status_name(*r.expected);
        o["ok"] = r.ok;
        if (with_timing) o["seconds"] = r.seconds;
        res.push_back(o);
    }
    json out = {{"instance", instance},
                {"grid", grid},
                {"tolerance", rational_to_json(config.tol)},
                {"directions", config.directions},
                {"seed", config.seed},
                {"norm", config.norm == BallNorm::Max ? "max" : "l1"},
                {"lhs", lhs},
                {"results", res},
                {"ok", ok()}};
    if (expected_lhs) out["expected_lhs"] = *expected_lhs;
    if (with_timing) out["seconds"] = seconds;
    return out;
}

std::string Report::to_text() const
{
    std::ostringstream os;
    os << "instance " << instance << "  lhs = " << lhs;
    if (expected_lhs && *expected_lhs != lhs) os << "  expected " << *expected_lhs << "  FAIL";
    os << "\n";
    for (const auto& r : results) {
        os << "  " << formulas::to_string(r.kind) << ": ";
        if (!r.verdict) {
            os << "SKIPPED (" << r.skipped << ")";
        } else {
            const Verdict& v = *r.verdict;
            os << status_name(v.status) << " [" << formulas::to_string(v.basis) << ", gap " << v.gap.str() << "]";
            os << "  inner = " << describe_set(v.rhs.inner) << ", outer = " << describe_set(v.rhs.outer);
            if (!v.note.empty()) os << "  (" << v.note << ")";
        }
        if (r.expected) os << "  expected " << status_name(*r.expected);
        os << (r.ok ? "  ok" : "  FAIL") << "  " << seconds_str(r.seconds) << "s\n";
    }
    os << (ok() ? "PASS" : "FAIL") << "  " << seconds_str(seconds) << "s\n";
    return os.str();
}

Report run_verify(const Instance& inst, const VerifyConfig& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.instance = inst.name;
    rep.config = cfg;
    const Polyhedron lhs = formulas::lhs_subdifferential(inst.family, inst.x);
    rep.lhs = describe_set(lhs);

    std::vector<FormulaKind> kinds;
    if (cfg.formula)
        kinds.push_back(*cfg.formula);
    else
        kinds = formulas::all_formula_kinds();
    const auto dirs = formulas::random_directions(inst.family.dim(), cfg.directions, cfg.seed);
    const formulas::RhsOptions opts {inst.flags, cfg.norm};

    std::vector<std::future<FormulaResult>> jobs;
    for (auto kind : kinds) {
        jobs.push_back(std::async(std::launch::async, [&, kind] {
            const auto t0 = std::chrono::steady_clock::now();
            FormulaResult r;
            r.kind = kind;
            if (auto it = inst.expected.status.find(kind); it != inst.expected.status.end()) r.expected = it->second;
            try {
                r.verdict = formulas::verify_formula(kind, inst.family, inst.x, cfg.grid, dirs, cfg.tol, opts);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::PreconditionContinuity && e.code() != ErrorCode::PreconditionActive &&
                    e.code() != ErrorCode::UnsupportedFamily)
                    throw;
                r.skipped = e.what();
            }
            if (!r.verdict) {
                r.ok = !r.expected;
            } else if (r.expected == VerdictStatus::Mismatch) {
                r.ok = r.verdict->status == VerdictStatus::Mismatch;
            } else {
                r.ok = r.verdict->status != VerdictStatus::Mismatch;
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return r;
        }));
    }
    for (auto& j : jobs) rep.results.push_back(j.get());
    rep.expected_lhs = inst.expected.lhs;
    if (inst.expected.lhs && *inst.expected.lhs != rep.lhs) {
        for (auto& r : rep.results) r.ok = false;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

Report run_verify(const std::string& instance_path, const VerifyConfig& cfg)
{
    return run_verify(load_instance(instance_path), cfg);
}

bool ExamplesReport::ok() const
{
    for (const auto& r : reports)
        if (!r.ok()) return false;
    return true;
}

json ExamplesReport::to_json(bool with_timing) const
{
    json reps = json::array();
    for (const auto& r : reports) reps.push_back(r.to_json(with_timing));
    json fs = json::array();
    for (const auto& f : facts) fs.push_back({{"instance", f.instance}, {"quantity", f.quantity}, {"value", f.value}});
    return {{"facts", fs}, {"reports", reps}, {"ok", ok()}};
}

std::string ExamplesReport::to_text() const
{
    std::ostringstream os;
    std::size_t width = 0;
    for (const auto& f : facts) width = std::max(width, f.instance.size() + f.quantity.size() + 2);
    for (const auto& f : facts) {
        std::string key = f.instance + ": " + f.quantity;
        os << key << std::string(width - key.size() + 2, ' ') << f.value << "\n";
    }
    os << "\n";
    for (const auto& r : reports) os << r.to_text() << "\n";
    os << (ok() ? "ALL EXAMPLES REPRODUCED" : "SOME EXAMPLES FAILED") << "\n";
    return os.str();
}

ExamplesReport reproduce_examples()
{
    ExamplesReport out;
    VerifyConfig cfg;
    for (const auto& inst : bundled_instances()) out.reports.push_back(run_verify(inst, cfg));

    const auto enl = [](const ConvexFunction& f, const Rational& eps, Variant v = Variant::Breve) {
        return describe_set(enlargement({f, RatVector{0}, eps, v}).outer());
    };
    const Instance sq = *bundled_instance("sqrt_pair");
    const Instance nl = *bundled_instance("non_lsc_pair");
    for (Rational eps : {Rational(1, 4), Rational(1, 16)}) {
        for (const auto& e : sq.family.entries())
            out.facts.push_back({sq.name, "breve enlargement of f" + e.label + " at 0, eps = " + eps.get_str(), enl(e.f, eps)});
    }
    out.facts.push_back({sq.name, "subdifferential of f at 0", describe_set(formulas::lhs_subdifferential(sq.family, sq.x))});
    for (const auto& e : nl.family.entries()) {
        out.facts.push_back({nl.name, "breve enlargement of f" + e.label + " at 0, eps = 1/4", enl(e.f, Rational(1, 4))});
        out.facts.push_back({nl.name, "breve enlargement of cl f" + e.label + " at 0, eps = 1/4",
                             enl(e.f.lsc_envelope(), Rational(1, 4))});
    }
    out.facts.push_back({nl.name, "subdifferential of f at 0", describe_set(formulas::lhs_subdifferential(nl.family, nl.x))});
    const Instance ab = *bundled_instance("abs");
    out.facts.push_back({ab.name, "subdifferential of f at 0", describe_set(formulas::lhs_subdifferential(ab.family, ab.x))});
    return out;
}

} // namespace supdiff::harness
