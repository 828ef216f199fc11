#pragma once

#include "supdiff/formulas.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace supdiff::harness {

using formulas::FormulaKind;
using formulas::Hypotheses;
using formulas::Verdict;
using formulas::VerdictStatus;
using json = nlohmann::ordered_json;

struct Expectation {
    std::optional<std::string> lhs;
    std::map<FormulaKind, VerdictStatus> status;
};

struct Instance {
    std::string name;
    FunctionFamily family;
    RatVector x;
    Hypotheses flags;
    Expectation expected;
};

// Text encodings used by the instance format: "p/q" rationals, vectors as
// arrays of such strings.
json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);

json function_to_json(const ConvexFunction& f);
ConvexFunction function_from_json(const json& j, std::size_t dim);

json instance_to_json(const Instance& inst);
// Throws ParseError on malformed input.
Instance instance_from_json(const json& j);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

const std::vector<Instance>& bundled_instances();
std::optional<Instance> bundled_instance(const std::string& name);

enum class GenKind { FullDomain, WithIndicator };
const char* to_string(GenKind k);
std::optional<GenKind> parse_gen_kind(std::string_view name);

// Deterministic in (n, k, seed, kind). Requires 1 <= n <= 3, 2 <= k <= 5.
Instance gen_random_instance(std::size_t n, std::size_t k, std::uint64_t seed, GenKind kind);

/// One-sided directional derivative f'(x; d) of the supremum, computed from
/// its pieces and domain alone: -inf when x is outside dom f or f is not lsc
/// at x, +inf when d leaves the domain.
ExtRational oracle_support(const FunctionFamily& fam, const RatVector& x, const RatVector& d);

// Interval notation in dimension one, generators otherwise.
std::string describe_set(const polyrat::Polyhedron& p);

struct VerifyConfig {
    std::optional<FormulaKind> formula;
    std::vector<Rational> grid = formulas::dyadic_square_grid(6);
    std::size_t directions = 50;
    std::uint64_t seed = 0;
    Rational tol {1, 256};
    BallNorm norm = BallNorm::Max;
};

struct FormulaResult {
    FormulaKind kind {};
    std::optional<Verdict> verdict;
    std::string skipped;
    std::optional<VerdictStatus> expected;
    bool ok = false;
    double seconds = 0;
};

struct Report {
    std::string instance;
    VerifyConfig config;
    std::string lhs;
    std::optional<std::string> expected_lhs;
    std::vector<FormulaResult> results;
    double seconds = 0;

    bool ok() const;
    json to_json(bool with_timing = false) const;
    std::string to_text() const;
};

Report run_verify(const Instance& inst, const VerifyConfig& cfg);
Report run_verify(const std::string& instance_path, const VerifyConfig& cfg);

/// The bundled suite on the fixed grid, plus the enlargement sets the
/// examples are about.
struct ExampleFact {
    std::string instance;
    std::string quantity;
    std::string value;
};

struct ExamplesReport {
    std::vector<Report> reports;
    std::vector<ExampleFact> facts;

    bool ok() const;
    json to_json(bool with_timing = false) const;
    std::string to_text() const;
};

ExamplesReport reproduce_examples();

} // namespace supdiff::harness
