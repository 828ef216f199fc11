#include "supdiff/error.hpp"
#include "supdiff/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace supdiff;
using namespace supdiff::harness;

namespace {

RatVector parse_vector(const std::string& text, std::size_t dim)
{
    std::vector<Rational> coords;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        coords.push_back(parse_rational(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (coords.size() != dim)
        throw Error(ErrorCode::ParseError, "expected " + std::to_string(dim) + " coordinates in '" + text + "'");
    RatVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = coords[i];
    return v;
}

Instance resolve_instance(const std::string& path, const std::string& bundled)
{
    if (!bundled.empty()) {
        auto inst = bundled_instance(bundled);
        if (!inst) throw Error(ErrorCode::ParseError, "no bundled instance named '" + bundled + "'");
        return *inst;
    }
    if (path.empty()) throw Error(ErrorCode::ParseError, "one of --instance or --bundled is required");
    return load_instance(path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"Exact subdifferentials of pointwise suprema and verification of their formulas"};
    app.require_subcommand(1);

    std::string instance_path;
    std::string bundled;
    std::string formula = "all";
    std::string grid = "1/4,1/16,1/64,1/256,1/1024,1/4096";
    std::size_t directions = 50;
    std::uint64_t seed = 0;
    std::string tol = "1/256";
    std::string report = "text";
    std::string norm = "max";
    bool timing = false;

    auto* verify = app.add_subcommand("verify", "verify formulas on one instance");
    verify->add_option("--instance", instance_path, "instance file (JSON)");
    verify->add_option("--bundled", bundled, "name of a bundled instance");
    verify->add_option("--formula", formula, "formula name or 'all'");
    verify->add_option("--eps-grid", grid, "strictly decreasing eps values");
    verify->add_option("--directions", directions, "number of random support directions");
    verify->add_option("--seed", seed, "seed for the random directions");
    verify->add_option("--tol", tol, "support-gap tolerance");
    verify->add_option("--norm", norm, "ball norm: max or l1")->check(CLI::IsMember({"max", "l1"}));
    verify->add_option("--report", report, "text or json")->check(CLI::IsMember({"text", "json"}));
    verify->add_flag("--timing", timing, "include timings in json reports");

    auto* examples = app.add_subcommand("examples", "reproduce the bundled examples");
    examples->add_option("--report", report, "text or json")->check(CLI::IsMember({"text", "json"}));
    examples->add_flag("--timing", timing, "include timings in json reports");

    std::size_t n = 1;
    std::size_t k = 2;
    std::string kind = "FULL_DOMAIN";
    std::string out_path;
    auto* gen = app.add_subcommand("gen", "write a random instance");
    gen->add_option("--n", n, "dimension (1..3)")->check(CLI::Range(1, 3));
    gen->add_option("--k", k, "family size (2..5)")->check(CLI::Range(2, 5));
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--kind", kind, "FULL_DOMAIN or WITH_INDICATOR")
        ->check(CLI::IsMember({"FULL_DOMAIN", "WITH_INDICATOR"}));
    gen->add_option("--out", out_path, "output file (stdout when omitted)");

    std::string direction;
    auto* oracle = app.add_subcommand("oracle", "directional derivative of the supremum");
    oracle->add_option("--instance", instance_path, "instance file (JSON)");
    oracle->add_option("--bundled", bundled, "name of a bundled instance");
    oracle->add_option("--direction", direction, "comma-separated rational direction")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            Instance inst = resolve_instance(instance_path, bundled);
            VerifyConfig cfg;
            if (formula != "all") {
                cfg.formula = formulas::parse_formula_kind(formula);
                if (!cfg.formula) throw Error(ErrorCode::ParseError, "unknown formula '" + formula + "'");
            }
            cfg.grid = formulas::parse_grid(grid);
            cfg.directions = directions;
            cfg.seed = seed;
            cfg.tol = parse_rational(tol);
            cfg.norm = norm == "max" ? BallNorm::Max : BallNorm::L1;
            Report rep = run_verify(inst, cfg);
            if (report == "json")
                std::cout << rep.to_json(timing).dump(2) << "\n";
            else
                std::cout << rep.to_text();
            return rep.ok() ? 0 : 1;
        }
        if (examples->parsed()) {
            ExamplesReport rep = reproduce_examples();
            if (report == "json")
                std::cout << rep.to_json(timing).dump(2) << "\n";
            else
                std::cout << rep.to_text();
            return rep.ok() ? 0 : 1;
        }
        if (gen->parsed()) {
            Instance inst = gen_random_instance(n, k, seed, *parse_gen_kind(kind));
            if (out_path.empty())
                std::cout << instance_to_json(inst).dump(2) << "\n";
            else
                save_instance(inst, out_path);
            return 0;
        }
        if (oracle->parsed()) {
            Instance inst = resolve_instance(instance_path, bundled);
            RatVector d = parse_vector(direction, inst.family.dim());
            std::cout << oracle_support(inst.family, inst.x, d).str() << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
