// Acceptance run: each criterion executes its property subset at acceptance
// case counts and prints one PASS/FAIL line. Exit 0 iff every line passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "amh/amh.hpp"

namespace {

struct Criterion {
    std::string id;
    std::string title;
    std::string suite;
    std::vector<std::string> properties;
    double time_limit; // seconds
    // Minimum case count per listed op, so a shrunken run cannot pass.
    std::vector<std::pair<std::string, std::size_t>> minimum_cases;
};

constexpr std::uint64_t seed = 20240601;

bool report_line(const std::string& id, const std::string& title, bool ok, const std::string& detail)
{
    std::printf("%s %s: %s (%s)\n", ok ? "PASS" : "FAIL", id.c_str(), title.c_str(), detail.c_str());
    std::fflush(stdout);
    return ok;
}

bool run(const Criterion& c, const amh::Config& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    amh::Report report;
    std::string thrown;
    try {
        report = amh::run_suite(c.suite, cfg, seed, c.properties);
    } catch (const std::exception& e) {
        thrown = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!thrown.empty())
        return report_line(c.id, c.title, false, "error: " + thrown);

    std::string shortfall;
    for (const auto& [op, minimum] : c.minimum_cases) {
        const auto* block = report.property(op);
        const std::size_t have = block ? block->cases : 0;
        if (have < minimum)
            shortfall += " " + op + " has " + std::to_string(have) + " < " + std::to_string(minimum);
    }
    const bool ok = report.failed() == 0 && seconds < c.time_limit && shortfall.empty() && !report.cases.empty();
    char detail[256];
    std::snprintf(detail, sizeof detail, "%zu cases, %zu failed, max violation %.3g, %.1f s of %.0f s", report.cases.size(),
                  report.failed(), report.max_violation(), seconds, c.time_limit);
    std::string text = detail;
    if (!shortfall.empty())
        text += ";" + shortfall;
    for (const auto& rec : report.cases)
        if (!rec.pass) {
            text += "; first failure " + rec.id + (rec.error.empty() ? "" : " (" + rec.error + ")");
            break;
        }
    return report_line(c.id, c.title, ok, text);
}

bool determinism()
{
    const auto start = std::chrono::steady_clock::now();
    const amh::Config cfg;
    std::string first, second;
    std::size_t failed = 0;
    try {
        const auto a = amh::run_suite("all", cfg, 7);
        const auto b = amh::run_suite("all", cfg, 7);
        first = a.to_json(false).dump(2);
        second = b.to_json(false).dump(2);
        failed = a.failed();
    } catch (const std::exception& e) {
        return report_line("AC9", "determinism of suite all", false, std::string("error: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char detail[192];
    std::snprintf(detail, sizeof detail, "%zu bytes, %s, %zu failed cases, %.1f s", first.size(),
                  first == second ? "identical" : "different", failed, seconds);
    return report_line("AC9", "determinism of suite all", first == second && !first.empty(), detail);
}

} // namespace

int main()
{
    const amh::Config cfg = amh::Config::acceptance();
    const std::size_t nq = static_cast<std::size_t>(cfg.count("quasi_norm"));
    const std::size_t nm = static_cast<std::size_t>(cfg.count("mixed_norm"));
    const std::size_t np = static_cast<std::size_t>(cfg.count("projection"));
    const std::size_t na = static_cast<std::size_t>(cfg.count("atoms"));
    const std::size_t nc = static_cast<std::size_t>(cfg.count("combinations"));

    const std::vector<Criterion> criteria{
        {"AC1", "quasi-norm laws", "geometry",
         {"quasi_norm.homogeneity", "quasi_norm.triangle", "quasi_norm.euclidean"}, 10.0,
         {{"quasi_norm.homogeneity", nq}, {"quasi_norm.triangle", nq}, {"quasi_norm.euclidean", nq}}},
        {"AC2", "ball volume at 256^2", "geometry", {"ball.volume"}, 30.0,
         {{"ball.volume", static_cast<std::size_t>(cfg.count("volume"))}}},
        {"AC3", "mixed-norm correctness", "norms", {"mixed_norm.rectangle", "mixed_norm.isotropic", "mixed_norm.axis_max"},
         30.0, {{"mixed_norm.rectangle", nm}, {"mixed_norm.isotropic", nm}, {"mixed_norm.axis_max", nm}}},
        {"AC4", "polynomial projection", "projection",
         {"projection.fixes", "projection.moments", "projection.covariance", "projection.ratio"}, 120.0,
         {{"projection.fixes", np}, {"projection.moments", np}, {"projection.covariance", np},
          {"projection.ratio_mean", np}}},
        {"AC5", "atom construction and validation", "atoms", {"atom.construct", "atom.sign"}, 120.0,
         {{"atom.support", na}, {"atom.size", na}, {"atom.moments", na}, {"atom.sign", 1}}},
        {"AC6", "coefficient l1 bound", "atoms", {"coefficient_l1.random", "coefficient_l1.examples"}, 120.0,
         {{"coefficient_l1.random", nc}, {"coefficient_l1.single", nc}}},
        {"AC7", "Campanato solvers", "campanato",
         {"approx.q2", "approx.minimax", "approx.median", "approx.examples", "campanato.monotone", "campanato.benchmark"},
         300.0,
         {{"approx.q2", static_cast<std::size_t>(cfg.count("approx_q2"))},
          {"approx.minimax", static_cast<std::size_t>(cfg.count("minimax"))},
          {"approx.median_constant", static_cast<std::size_t>(cfg.count("median"))},
          {"campanato.monotone", static_cast<std::size_t>(cfg.count("monotone"))},
          {"campanato.benchmark", 1}}},
        {"AC8", "duality inequalities", "duality",
         {"duality.single_ball", "duality.functional", "duality.dual_norm", "duality.examples"}, 600.0,
         {{"duality.single_ball", static_cast<std::size_t>(cfg.count("single_ball"))},
          {"duality.functional", static_cast<std::size_t>(cfg.count("functional"))},
          {"duality.dual_norm", static_cast<std::size_t>(cfg.count("dual_norm"))},
          {"duality.dual_benchmark", 1}}},
    };

    bool all = true;
    for (const auto& c : criteria)
        all = run(c, cfg) && all;
    all = determinism() && all;
    std::printf("%s\n", all ? "ALL PASS" : "SOME FAILED");
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
