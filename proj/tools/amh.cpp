// amh: compute single quantities and run verification suites.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or config error,
// 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amh/amh.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;

/// Comma-separated reals; "inf" is accepted for exponents.
std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw amh::invalid_input(what + ": cannot parse '" + item + "'");
        }
        if (used != item.size())
            throw amh::invalid_input(what + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw amh::invalid_input(what + ": empty list");
    return out;
}

std::string format12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Options shared by commands that take a function on a box.
struct FunctionArgs {
    std::string family = "gaussian-bump";
    std::string params;
    std::string csv;
    std::uint64_t seed = 0;
    std::string box;
    int resolution = 0;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--family", family, "gaussian-bump, random-polynomial, sign-step, trig-mixture, abs-ridge, constant");
        cmd->add_option("--params", params, "comma-separated family parameters");
        cmd->add_option("--csv", csv, "grid CSV file; overrides --family and --box");
        cmd->add_option("--seed", seed, "family seed");
        cmd->add_option("--box", box, "lo1,hi1,lo2,hi2,...");
        cmd->add_option("--res", resolution, "per-axis resolution (0 = default)");
    }

    [[nodiscard]] amh::Box make_box(std::size_t n) const
    {
        if (box.empty())
            return amh::Box::cube(n, -1.0, 1.0);
        const auto b = parse_list(box, "--box");
        if (b.size() != 2 * n)
            throw amh::dimension_mismatch("--box: expected " + std::to_string(2 * n) + " values");
        amh::Point lo(n), hi(n);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = b[2 * i];
            hi[i] = b[2 * i + 1];
        }
        return amh::Box(lo, hi);
    }

    [[nodiscard]] amh::Field field(std::size_t n) const
    {
        if (!csv.empty()) {
            auto f = amh::load_csv(csv);
            if (f.dimension() != n)
                throw amh::dimension_mismatch("--csv: file dimension differs from the parameters");
            return amh::as_field(f);
        }
        amh::FunctionFamily fam;
        fam.kind = amh::parse_family_kind(family);
        if (!params.empty())
            fam.params = parse_list(params, "--params");
        fam.seed = seed;
        return amh::as_field(fam, make_box(n));
    }

    [[nodiscard]] int res(std::size_t n) const { return resolution > 0 ? resolution : amh::default_resolution(n); }
};

ordered_json ball_json(const amh::AnisotropicBall& b)
{
    return {{"center", b.center()}, {"radius", b.radius()}, {"anisotropy", b.anisotropy().components()}};
}

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Anisotropic mixed-norm Hardy space toolkit"};
    app.require_subcommand(1);

    // quasinorm
    std::string qa, qx;
    auto* quasinorm = app.add_subcommand("quasinorm", "print |x|_a");
    quasinorm->add_option("--a", qa, "anisotropy vector")->required();
    quasinorm->add_option("--x", qx, "point")->required();

    // mixed-norm
    std::string mp;
    FunctionArgs mf;
    mf.family = "constant";
    auto* mixed = app.add_subcommand("mixed-norm", "mixed Lebesgue norm of a sampled function");
    mixed->add_option("--p", mp, "exponent vector, innermost first; 'inf' allowed")->required();
    mf.add(mixed);

    // campanato
    std::string ca, cp, cq = "inf";
    int cs = 0, centers = 11, radius_count = 5, rounds = 2;
    double rmin = 0.0, rmax = 0.0;
    FunctionArgs cf;
    auto* camp = app.add_subcommand("campanato", "Campanato seminorm over a ball search");
    camp->add_option("--a", ca, "anisotropy vector")->required();
    camp->add_option("--p", cp, "exponent vector")->required();
    camp->add_option("--q", cq, "approximation exponent in [1, inf]");
    camp->add_option("--s", cs, "polynomial degree");
    camp->add_option("--centers", centers, "centers per axis");
    camp->add_option("--rmin", rmin, "smallest radius (0 = automatic)");
    camp->add_option("--rmax", rmax, "largest radius (0 = automatic)");
    camp->add_option("--radii", radius_count, "number of radii");
    camp->add_option("--rounds", rounds, "local refinement rounds");
    cf.add(camp);

    // atom and pair share ball and atom parameters
    std::string aa, ap, ar = "2", acenter;
    int as = -1;
    double aradius = 0.5;
    FunctionArgs af;
    std::string gfamily = "trig-mixture", gparams;
    std::uint64_t gseed = 1;
    auto add_atom_options = [&](CLI::App* cmd) {
        cmd->add_option("--a", aa, "anisotropy vector")->required();
        cmd->add_option("--p", ap, "exponent vector")->required();
        cmd->add_option("--r", ar, "size exponent in (1, inf]");
        cmd->add_option("--s", as, "moment degree (default: s_min)");
        cmd->add_option("--center", acenter, "ball center (default: origin)");
        cmd->add_option("--radius", aradius, "ball radius");
        af.add(cmd);
    };
    auto* atom_cmd = app.add_subcommand("atom", "build an atom from f on a ball and validate it");
    add_atom_options(atom_cmd);
    auto* pair_cmd = app.add_subcommand("pair", "single-ball bound |int a g| against the Campanato term");
    add_atom_options(pair_cmd);
    pair_cmd->add_option("--g-family", gfamily, "family of g");
    pair_cmd->add_option("--g-params", gparams, "parameters of g");
    pair_cmd->add_option("--g-seed", gseed, "seed of g");

    // suite
    std::string sname, sconfig, sreport = "report.json";
    std::uint64_t sseed = 0;
    double sscale = std::numeric_limits<double>::quiet_NaN();
    int sthreads = 0;
    bool sacceptance = false;
    auto* suite = app.add_subcommand("suite", "run a property suite and write a JSON report");
    suite->add_option("--name", sname, "geometry, norms, projection, atoms, campanato, duality, all")->required();
    suite->add_option("--seed", sseed, "master seed");
    suite->add_option("--config", sconfig, "JSON config overlay");
    suite->add_option("--report", sreport, "report path");
    suite->add_option("--tolerance-scale", sscale, "multiply every tolerance");
    suite->add_option("--threads", sthreads, "worker threads");
    suite->add_flag("--acceptance", sacceptance, "use acceptance case counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (quasinorm->parsed()) {
            const amh::AnisotropyVector a(parse_list(qa, "--a"));
            const auto x = parse_list(qx, "--x");
            if (x.size() != a.dimension())
                throw amh::dimension_mismatch("--a and --x differ in length");
            std::cout << format12(amh::quasi_norm(a, x)) << "\n";
            return exit_ok;
        }

        if (mixed->parsed()) {
            const amh::ExponentVector p(parse_list(mp, "--p"));
            const std::size_t n = p.dimension();
            const amh::Field f = mf.field(n);
            const auto g = mf.csv.empty() ? amh::sample(f.eval, f.domain, std::vector<int>(n, mf.res(n)))
                                          : amh::load_csv(mf.csv);
            const double v = amh::mixed_lebesgue_norm(g, p);
            ordered_json out{{"value", v}, {"resolution", g.lattice().resolution()}};
            std::cout << format12(v) << "\n" << out.dump() << "\n";
            return exit_ok;
        }

        if (camp->parsed()) {
            const amh::AnisotropyVector a(parse_list(ca, "--a"));
            const amh::ExponentVector p(parse_list(cp, "--p"));
            const double q = parse_list(cq, "--q").front();
            const std::size_t n = a.dimension();
            const amh::Field g = cf.field(n);
            const amh::CampanatoParams params{a, p, q, cs};
            const auto domain = amh::BallSearchDomain::lattice(g.domain, a, centers, rmin, rmax, radius_count, rounds);
            amh::CampanatoOptions options;
            options.resolution = cf.res(n);
            const auto res = amh::campanato_seminorm(g, params, domain, options);
            ordered_json out{{"value", res.value},
                             {"resolution", options.resolution},
                             {"witness", res.witness ? ball_json(*res.witness) : ordered_json(nullptr)},
                             {"witness_weight", res.witness_weight},
                             {"witness_error", res.witness_error},
                             {"evaluated", res.evaluated},
                             {"failures", res.failures},
                             {"skipped", res.skipped}};
            std::cout << format12(res.value) << "\n" << out.dump() << "\n";
            return exit_ok;
        }

        if (atom_cmd->parsed() || pair_cmd->parsed()) {
            const amh::AnisotropyVector a(parse_list(aa, "--a"));
            const amh::ExponentVector p(parse_list(ap, "--p"));
            const std::size_t n = a.dimension();
            const amh::Point center = acenter.empty() ? amh::Point(n, 0.0) : parse_list(acenter, "--center");
            if (center.size() != n)
                throw amh::dimension_mismatch("--center: wrong length");
            const amh::AnisotropicBall ball(center, aradius, a);
            const amh::AtomParams params{p, parse_list(ar, "--r").front(), as >= 0 ? as : amh::s_min(a, p)};
            const int res = af.res(n);
            const amh::Atom atom = amh::make_atom(af.field(n), ball, params, res, af.seed);

            if (atom_cmd->parsed()) {
                const auto& ev = atom.evidence;
                const bool ok = ev.support_ok && ev.size_ok && ev.moments_ok;
                ordered_json out{{"valid", ok},
                                 {"ball", ball_json(ball)},
                                 {"r", finite_or_null(params.r)},
                                 {"s", params.s},
                                 {"resolution", res},
                                 {"support_margin", ev.support_margin},
                                 {"size_ratio", ev.size_ratio},
                                 {"max_moment_residual", ev.max_moment_residual}};
                std::cout << out.dump() << "\n";
                return ok ? exit_ok : exit_failed;
            }

            amh::FunctionFamily gf;
            gf.kind = amh::parse_family_kind(gfamily);
            if (!gparams.empty())
                gf.params = parse_list(gparams, "--g-params");
            gf.seed = gseed;
            const auto chk = amh::single_ball_bound(atom, amh::as_field(gf, af.make_box(n)));
            ordered_json out{{"lhs", chk.lhs},
                             {"rhs", chk.rhs},
                             {"pass", chk.pass},
                             {"identity_residual", chk.identity_residual},
                             {"resolution", res}};
            std::cout << out.dump() << "\n";
            return chk.pass ? exit_ok : exit_failed;
        }

        if (suite->parsed()) {
            amh::Config cfg = sacceptance ? amh::Config::acceptance() : amh::Config();
            if (!sconfig.empty())
                cfg = amh::Config::load(sconfig, cfg);
            if (!std::isnan(sscale))
                cfg.tolerance_scale = sscale;
            if (sthreads > 0)
                cfg.threads = sthreads;
            cfg.validate();
            const auto report = amh::run_suite(sname, cfg, sseed);
            std::ofstream out(sreport);
            if (!out)
                throw amh::invalid_input("cannot write report " + sreport);
            out << report.to_json().dump(2) << "\n";
            out.close();
            std::cout << sname << ": " << report.cases.size() << " cases, " << report.failed() << " failed, "
                      << report.properties.size() << " properties, max violation " << report.max_violation() << "\n";
            return report.failed() == 0 ? exit_ok : exit_failed;
        }
    } catch (const amh::error& e) {
        std::cerr << e.what() << "\n";
        return e.numerical() ? exit_numerical : exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
