#include "support.hpp"

#include "supdiff/error.hpp"
#include "supdiff/harness.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace testsupport;
using namespace supdiff::harness;
using supdiff::ExtRational;
using supdiff::formulas::FormulaKind;

namespace {

FunctionFamily single(ConvexFunction f) { return FunctionFamily(f.dim(), {{"f", std::move(f)}}); }

bool parse_fails(const std::string& text)
{
    try {
        instance_from_json(json::parse(text));
    } catch (const supdiff::Error& e) {
        return e.code() == supdiff::ErrorCode::ParseError;
    }
    return false;
}

} // namespace

TEST_CASE("instance json round trip")
{
    for (const auto& inst : bundled_instances()) {
        json j = instance_to_json(inst);
        Instance back = instance_from_json(j);
        CHECK(instance_to_json(back) == j);
        CHECK(back.x == inst.x);
        CHECK(back.family.size() == inst.family.size());
    }
    Instance g = gen_random_instance(3, 4, 9, GenKind::WithIndicator);
    auto path = (std::filesystem::temp_directory_path() / "supdiff_roundtrip.json").string();
    save_instance(g, path);
    CHECK(instance_to_json(load_instance(path)) == instance_to_json(g));
    std::remove(path.c_str());
}

TEST_CASE("malformed instances")
{
    CHECK(parse_fails(R"({"name": "a"})"));
    CHECK(parse_fails(R"({"name": "a", "dim": 1, "x": ["0"], "family": []})"));
    CHECK(parse_fails(R"({"name": "a", "dim": 1, "x": ["0", "1"],
        "family": [{"label": "f", "function": {"kind": "max_affine", "pieces": [{"a": ["1"], "b": "0"}]}}]})"));
    CHECK(parse_fails(R"({"name": "a", "dim": 1, "x": ["1/0"],
        "family": [{"label": "f", "function": {"kind": "max_affine", "pieces": [{"a": ["1"], "b": "0"}]}}]})"));
    CHECK(parse_fails(R"({"name": "a", "dim": 1, "x": ["0"],
        "family": [{"label": "f", "function": {"kind": "spline"}}]})"));
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), supdiff::Error);
}

TEST_CASE("bundled lookup")
{
    CHECK(bundled_instance("abs"));
    CHECK_FALSE(bundled_instance("no_such_instance"));
}

TEST_CASE("generator is deterministic and bounded")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        for (auto kind : {GenKind::FullDomain, GenKind::WithIndicator}) {
            std::size_t n = 1 + seed % 3;
            std::size_t k = 2 + seed % 4;
            Instance a = gen_random_instance(n, k, seed, kind);
            CHECK(instance_to_json(a) == instance_to_json(gen_random_instance(n, k, seed, kind)));
            CHECK(a.family.size() == k);
            CHECK(a.family.dim() == n);
            for (std::size_t i = 0; i < n; ++i) CHECK(abs(a.x[i]) <= 1);
            for (const auto& e : a.family.entries()) {
                REQUIRE(e.f.is_max_affine());
                const auto& m = e.f.max_affine();
                CHECK(m.eval(a.x).is_finite());
                for (const auto& p : m.pieces()) {
                    CHECK(supdiff::norm_inf(p.a) <= 8);
                    CHECK(abs(p.b) <= 64);
                }
                const Polyhedron dom = m.domain();
                bool boundary = false;
                for (const auto& h : dom.hrep().inequalities) boundary |= dot(h.normal, a.x) == h.offset;
                CHECK(boundary == (kind == GenKind::WithIndicator));
            }
        }
    CHECK(gen_random_instance(2, 3, 1, GenKind::FullDomain).name == "gen_n2_k3_s1_full");
    CHECK_THROWS(gen_random_instance(4, 3, 1, GenKind::FullDomain));
    CHECK(parse_gen_kind("WITH_INDICATOR") == GenKind::WithIndicator);
    CHECK_FALSE(parse_gen_kind("BOX"));
}

TEST_CASE("oracle directional derivatives")
{
    auto abs_inst = *bundled_instance("abs");
    CHECK(oracle_support(abs_inst.family, RatVector {0}, RatVector {1}) == ExtRational(Rational(1)));
    CHECK(oracle_support(abs_inst.family, RatVector {0}, RatVector {-1}) == ExtRational(Rational(1)));
    CHECK(oracle_support(abs_inst.family, RatVector {0}, RatVector {3}) == ExtRational(Rational(3)));

    MaxAffineFunction zero_on_half({{RatVector {0}, 0}},
                                   Polyhedron::interval(Rational(0), ExtRational::plus_infinity()));
    auto half = single(zero_on_half);
    CHECK(oracle_support(half, RatVector {0}, RatVector {-1}).is_plus_infinity());
    CHECK(oracle_support(half, RatVector {0}, RatVector {1}) == ExtRational(Rational(0)));
    CHECK(oracle_support(half, RatVector {-1}, RatVector {1}).is_minus_infinity());

    MaxAffineFunction hinge({{RatVector {0}, 0}, {RatVector {2}, -2}});
    CHECK(oracle_support(single(hinge), RatVector {1}, RatVector {1}) == ExtRational(Rational(2)));
    CHECK(oracle_support(single(hinge), RatVector {1}, RatVector {-1}) == ExtRational(Rational(0)));
}

TEST_CASE("property: oracle matches the support of the exact subdifferential")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Instance inst = gen_random_instance(1 + seed % 3, 2 + seed % 4, seed, seed % 2 ? GenKind::WithIndicator
                                                                                       : GenKind::FullDomain);
        auto lhs = supdiff::formulas::lhs_subdifferential(inst.family, inst.x);
        for (const auto& d : supdiff::formulas::random_directions(inst.family.dim(), 10, seed))
            CHECK(supdiff::polyrat::support(lhs, d) == oracle_support(inst.family, inst.x, d));
    }
}

TEST_CASE("set descriptions")
{
    CHECK(describe_set(Polyhedron::whole_space(1)) == "R");
    CHECK(describe_set(Polyhedron::empty(1)) == "{}");
    CHECK(describe_set(Polyhedron::point(RatVector {Rational(1, 2)})) == "{1/2}");
    CHECK(describe_set(Polyhedron::box(RatVector {-1}, RatVector {1})) == "[-1, 1]");
    CHECK(describe_set(Polyhedron::interval(ExtRational::minus_infinity(), Rational(-2))) == "]-inf, -2]");
    CHECK(describe_set(Polyhedron::interval(Rational(3), ExtRational::plus_infinity())) == "[3, +inf[");
    CHECK(describe_set(Polyhedron::whole_space(2)) == "R^2");
}

TEST_CASE("bundled expectations hold")
{
    for (const auto& inst : bundled_instances()) {
        Report rep = run_verify(inst, VerifyConfig {});
        CHECK_MESSAGE(rep.ok(), rep.to_text());
        for (const auto& r : rep.results)
            if (r.expected) {
                REQUIRE(r.verdict);
                CHECK(r.verdict->status == *r.expected);
            }
    }
}

TEST_CASE("a wrong expectation is reported")
{
    Instance inst = *bundled_instance("non_lsc_pair");
    inst.expected.status[FormulaKind::BreveFvb1] = supdiff::formulas::VerdictStatus::ExactMatch;
    VerifyConfig cfg;
    cfg.formula = FormulaKind::BreveFvb1;
    Report rep = run_verify(inst, cfg);
    CHECK_FALSE(rep.ok());
    inst.expected.lhs = "{}";
    inst.expected.status.clear();
    CHECK_FALSE(run_verify(inst, cfg).ok());
}

TEST_CASE("reports are byte-deterministic")
{
    Instance inst = gen_random_instance(2, 3, 5, GenKind::WithIndicator);
    VerifyConfig cfg;
    cfg.seed = 4;
    std::string a = run_verify(inst, cfg).to_json().dump(2);
    std::string b = run_verify(inst, cfg).to_json().dump(2);
    CHECK(a == b);
    CHECK(a.find("seconds") == std::string::npos);
    CHECK(run_verify(inst, cfg).to_json(true).dump().find("seconds") != std::string::npos);
    CHECK(reproduce_examples().to_json().dump() == reproduce_examples().to_json().dump());
}

TEST_CASE("property: max-norm and l1-norm balls agree on the verdict")
{
    VerifyConfig max_cfg;
    VerifyConfig l1_cfg;
    l1_cfg.norm = supdiff::BallNorm::L1;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        Instance inst = gen_random_instance(1 + seed % 3, 2 + seed % 3, seed, seed % 2 ? GenKind::WithIndicator
                                                                                       : GenKind::FullDomain);
        for (auto k : {FormulaKind::BreveFvb1, FormulaKind::HatCor1}) {
            max_cfg.formula = l1_cfg.formula = k;
            Report a = run_verify(inst, max_cfg);
            Report b = run_verify(inst, l1_cfg);
            REQUIRE(a.results.size() == 1);
            REQUIRE(b.results.size() == 1);
            REQUIRE(a.results[0].verdict);
            REQUIRE(b.results[0].verdict);
            INFO(inst.name << " " << to_string(k));
            CHECK(a.results[0].verdict->status == b.results[0].verdict->status);
            CHECK(same_set(a.results[0].verdict->lhs, b.results[0].verdict->lhs));
        }
    }
}
