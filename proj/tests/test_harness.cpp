#include <gtest/gtest.h>

#include "amh/config.hpp"
#include "amh/error.hpp"
#include "amh/harness.hpp"

using namespace amh;

namespace {

Config small()
{
    Config c;
    for (auto& [k, v] : c.counts)
        v = std::max(1, v / 10);
    c.counts["dual_samples"] = 200;
    return c;
}

} // namespace

class SuitePasses : public ::testing::TestWithParam<std::string> {};

TEST_P(SuitePasses, AtDefaultTolerances)
{
    const auto report = run_suite(GetParam(), small(), 11);
    EXPECT_EQ(report.failed(), 0u);
    EXPECT_FALSE(report.cases.empty());
    for (const auto& c : report.cases)
        EXPECT_TRUE(c.pass) << c.op << " seed " << c.seed << ": " << c.lhs << " > " << c.rhs << " " << c.error;
}

INSTANTIATE_TEST_SUITE_P(All, SuitePasses,
                         ::testing::Values("geometry", "norms", "projection", "atoms", "campanato", "duality"));

TEST(Report, SchemaFields)
{
    const auto report = run_suite("geometry", small(), 3);
    const auto j = report.to_json();
    for (const char* key : {"suite", "seed", "config_digest", "timestamp", "properties", "cases", "summary"})
        EXPECT_TRUE(j.contains(key)) << key;
    ASSERT_FALSE(j["cases"].empty());
    for (const char* key : {"id", "op", "lhs", "rhs", "margin", "pass", "seed", "resolution"})
        EXPECT_TRUE(j["cases"][0].contains(key)) << key;
    EXPECT_FALSE(report.to_json(false).contains("timestamp"));
    EXPECT_EQ(j["config_digest"], small().digest());
}

TEST(Report, DeterministicAcrossRunsAndThreads)
{
    Config one = small();
    Config two = small();
    two.threads = 3;
    const auto a = run_suite("all", one, 5).to_json(false).dump();
    EXPECT_EQ(run_suite("all", one, 5).to_json(false).dump(), a);
    EXPECT_EQ(run_suite("all", two, 5).to_json(false).dump(), a);
    EXPECT_EQ(one.digest(), two.digest());
    EXPECT_NE(run_suite("geometry", one, 6).to_json(false).dump(), run_suite("geometry", one, 5).to_json(false).dump());
}

TEST(Report, CaseSeedsFollowSuiteSeed)
{
    const auto report = run_suite("geometry", small(), 100, {"quasi_norm.homogeneity"});
    ASSERT_FALSE(report.cases.empty());
    for (const auto& c : report.cases)
        EXPECT_GE(c.seed, 100u);
}

TEST(Report, ZeroToleranceScaleFails)
{
    Config c = small();
    c.tolerance_scale = 0.0;
    EXPECT_GT(run_suite("geometry", c, 7).failed(), 0u);
}

TEST(Harness, UnknownSuite)
{
    EXPECT_THROW(run_suite("nosuch", small(), 1), invalid_input);
}

TEST(ConfigMerge, OverlaysAndRejects)
{
    Config c;
    c.merge(nlohmann::json::parse(R"({"tolerances": {"volume": 0.5}, "counts": {"volume": 3}})"));
    EXPECT_DOUBLE_EQ(c.tol("volume"), 0.5);
    EXPECT_EQ(c.count("volume"), 3);
    EXPECT_NE(c.digest(), Config().digest());

    EXPECT_THROW(Config().merge(nlohmann::json::parse(R"({"bogus": 1})")), invalid_input);
    EXPECT_THROW(Config().merge(nlohmann::json::parse(R"({"tolerances": {"bogus": 1}})")), invalid_input);
    EXPECT_THROW(Config().merge(nlohmann::json::parse(R"({"counts": {"volume": "many"}})")), invalid_input);
    EXPECT_THROW(Config().merge(nlohmann::json::parse(R"({"resolutions": {"ball_n2": 1}})")), invalid_input);
    EXPECT_THROW(Config().merge(nlohmann::json::parse("[1, 2]")), invalid_input);
    EXPECT_THROW((void)Config().tol("bogus"), invalid_input);
}

TEST(ConfigMerge, AcceptanceCountsAreLarger)
{
    const Config d;
    const Config a = Config::acceptance();
    for (const auto& [k, v] : d.counts)
        EXPECT_GE(a.count(k), v) << k;
    EXPECT_EQ(a.count("quasi_norm"), 10000);
}
