#include "tok/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

const std::string kSamples = TOK_SAMPLES_DIR;

struct Outcome {
    int code;
    std::string out, err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "tok");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = tok::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return kSamples + "/" + name; }

std::string temp_file(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST(Cli, TrefoilHomologyWithMarksAtTheBasepoint)
{
    const Outcome o = run({"homology", "--input", sample("trefoil.json"), "--reduced", "--marks-at-basepoint"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j["total_rank"], 3);
    EXPECT_EQ(j["coefficients"], "Z");
    ASSERT_EQ(j["homology"]["delta_graded"].size(), 1u);
}

TEST(Cli, TrefoilVerifyPasses)
{
    const Outcome o = run({"verify", "--input", sample("trefoil.json"), "--checks", "d2,faces,slide,r1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_TRUE(j["passed"].get<bool>());
    for (const auto& c : j["checks"]) EXPECT_EQ(c["result"], "pass");
}

TEST(Cli, FigureEightSpanningTrees)
{
    const Outcome o = run({"spantree", "--input", sample("fig8.json"), "--eval", "generic"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j["tree_complex"]["generators"].size(), 5u);
    EXPECT_EQ(j["tait_spanning_trees"], "5");
}

TEST(Cli, EvaluatedHomologyOverQ)
{
    const Outcome o =
        run({"homology", "--input", sample("trefoil.json"), "--reduced", "--eval", "x1=1,x2=2,x3=3,x4=4,x5=5,x6=1/2"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.json()["coefficients"], "Q");
    EXPECT_EQ(o.json()["total_rank"], 3);
}

TEST(Cli, BuildWritesTheComplex)
{
    const auto path = (std::filesystem::temp_directory_path() / "tok_build_out.json").string();
    const Outcome o = run({"build", "--input", sample("unknot_kink.json"), "--auto-mark", "--basepoint", "1", "--reduced",
                           "--output", path});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_TRUE(j["complex"].contains("d_v"));
    std::remove(path.c_str());
}

TEST(Cli, OutputIsDeterministic)
{
    const std::vector<std::string> args{"build", "--input", sample("nonalternating6.json"), "--auto-mark", "--jobs", "3"};
    const Outcome a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, NegativeControlExitsWithOne)
{
    const Outcome o = run({"verify", "--input", sample("trefoil_plain.json"), "--against", sample("fig8.json"),
                           "--checks", "invariance"});
    EXPECT_EQ(o.code, 1);
    EXPECT_FALSE(o.json()["passed"].get<bool>());
    EXPECT_EQ(o.json()["checks"][0]["result"], "fail");
    EXPECT_TRUE(o.json()["checks"][0].contains("witness"));
}

TEST(Cli, ReidemeisterPairPassesInvariance)
{
    const Outcome o = run({"verify", "--input", sample("trefoil_plain.json"), "--against",
                           sample("trefoil_kinked.json"), "--checks", "invariance"});
    EXPECT_EQ(o.code, 0) << o.err;
}

TEST(Cli, InputErrorsExitWithTwo)
{
    EXPECT_EQ(run({"homology", "--input", "/nonexistent/diagram.json"}).code, 2);
    EXPECT_EQ(run({"homology", "--input", temp_file("tok_bad.json", "{\"crossings\": 3}")}).code, 2);
    EXPECT_EQ(run({"verify", "--input", sample("trefoil.json"), "--checks", "nope"}).code, 2);
    EXPECT_EQ(run({"homology", "--input", sample("trefoil.json"), "--reduced"}).code, 2);  // polynomial entries
    EXPECT_EQ(run({"homology", "--input", sample("trefoil_plain.json"), "--reduced"}).code, 2);  // no basepoint
    EXPECT_EQ(run({"homology", "--bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"homology", "--input", sample("trefoil.json"), "--eval", "x1=-1"}).code, 2);
}

TEST(Cli, HelpExitsCleanly)
{
    const Outcome o = run({"--help"});
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("verify"), std::string::npos);
}
