#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsw/cli.hpp"

namespace fs = std::filesystem;
using dsw::cli::Json;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;

    std::vector<std::string> lines() const
    {
        std::vector<std::string> v;
        std::istringstream in(out);
        for (std::string line; std::getline(in, line);) {
            v.push_back(line);
        }
        return v;
    }
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int status = dsw::cli::dispatch(std::move(args), out, err);
    return {status, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("dsw-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-"
                                            + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        write("ds2.txt", "-\n0\n1\n1,0\n");
        write("ds3.txt", run({"ds", "enum", "3"}).out);
        write("bad_tree.txt", "-\n1,0\n");
        write("broken.txt", "-\n0,x\n");
        write("ds2_bad.col", "mu=2\n- -> 0\n0 -> 0\n1 -> 1\n1,0 -> 0\n");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text)
    {
        std::ofstream(dir_ / name) << text;
        return path(name);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, DsEnumGolden)
{
    const auto r = run({"ds", "enum", "2"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "-\n0\n1\n1,0\n");
    EXPECT_EQ(run({"ds", "enum", "21"}).status, 2);
    EXPECT_EQ(run({"ds", "enum", "4", "--cap", "3"}).status, 2);
}

TEST_F(Cli, DsEnumRoundTripsThroughValidate)
{
    for (int n = 0; n <= 10; ++n) {
        const auto file = write("ds" + std::to_string(n) + "_rt.txt", run({"ds", "enum", std::to_string(n)}).out);
        const auto r = run({"tree", "validate", file});
        EXPECT_EQ(r.status, 0) << r.err;
        EXPECT_EQ(r.out, "ok " + std::to_string(1 << n) + " nodes\n");
    }
}

TEST_F(Cli, SeqCmpGolden)
{
    EXPECT_EQ(run({"seq", "cmp", "--order", "lex3", "2,1", "2,0"}).out, "LT\n");
    EXPECT_EQ(run({"seq", "cmp", "--order", "lex1", "2", "2,1"}).out, "LT\n");
    EXPECT_EQ(run({"seq", "cmp", "--order", "lex2", "2", "2,1"}).out, "GT\n");
    EXPECT_EQ(run({"seq", "cmp", "--order", "star", "-", "1"}).out, "INCOMPARABLE\n");
    EXPECT_EQ(run({"seq", "cmp", "--order", "lex2", "w,3", "w,3"}).out, "EQ\n");
    EXPECT_EQ(run({"seq", "cmp", "--order", "lex9", "1", "0"}).status, 2);
    EXPECT_EQ(run({"seq", "cmp", "--order", "lex1", "0,1", "0"}).status, 2);
}

TEST_F(Cli, SeqMinGolden)
{
    EXPECT_EQ(run({"seq", "min", "--order", "lex2", "2,1", "2", "0"}).out, "0\n");
    EXPECT_EQ(run({"seq", "min", "--order", "lex2", "2,1", "2"}).out, "2,1\n");
    EXPECT_EQ(run({"seq", "min", "--order", "lex1", "2,1", "2"}).out, "2\n");
    EXPECT_EQ(run({"seq", "min", "--order", "lex3", "1"}).status, 2);
}

TEST_F(Cli, OrdGolden)
{
    EXPECT_EQ(run({"ord", "add", "w*2+3", "w+1"}).out, "w*3+1\n");
    EXPECT_EQ(run({"ord", "add", "1", "w"}).out, "w\n");
    EXPECT_EQ(run({"ord", "mul", "w+1", "2"}).out, "w*2+1\n");
    EXPECT_EQ(run({"ord", "cmp", "w^2+3", "w^2+w"}).out, "LT\n");
    const auto bad = run({"ord", "cmp", "w*1+w^2*1", "1"});
    EXPECT_EQ(bad.status, 2);
    EXPECT_NE(bad.err.find("exponents not strictly decreasing"), std::string::npos) << bad.err;
}

TEST_F(Cli, TreeRankAndValidate)
{
    EXPECT_EQ(run({"tree", "rank", "--mu", "1", "--at", "-", path("ds3.txt")}).out, "3\n");
    EXPECT_EQ(run({"tree", "rank", "--mu", "2", "--at", "-", path("ds3.txt")}).out, "1\n");
    EXPECT_EQ(run({"tree", "rank", "--mu", "1", "--lambda", "2", "--at", "-", path("ds3.txt")}).out, "2\n");
    const auto missing = run({"tree", "rank", "--mu", "1", "--at", "5", path("ds3.txt")});
    EXPECT_EQ(missing.status, 1);
    EXPECT_EQ(missing.out, "not-in-tree\n");
    EXPECT_EQ(run({"tree", "rank", "--mu", "0", "--at", "-", path("ds3.txt")}).status, 2);

    const auto invalid = run({"tree", "validate", path("bad_tree.txt")});
    EXPECT_EQ(invalid.status, 1);
    EXPECT_NE(invalid.out.find("invalid: "), std::string::npos);
    EXPECT_NE(invalid.out.find("prefix <1> missing"), std::string::npos) << invalid.out;
    const auto broken = run({"tree", "validate", path("broken.txt")});
    EXPECT_EQ(broken.status, 2);
    EXPECT_NE(broken.err.find("line 2:"), std::string::npos) << broken.err;
    EXPECT_EQ(run({"tree", "validate", path("nope.txt")}).status, 2);
}

TEST_F(Cli, SimGolden)
{
    EXPECT_EQ(run({"sim", "code", "0 ; 1"}).out, "n=2 lengths=1,1 meets=1,0;0,1 order=0,1\n");
    EXPECT_EQ(run({"sim", "similar", "0;1", "1;2"}).status, 0);
    const auto no = run({"sim", "similar", "1,0", "1"});
    EXPECT_EQ(no.status, 1);
    EXPECT_EQ(no.out, "not-similar\n");
    EXPECT_EQ(run({"sim", "code", "1 ; 1"}).status, 2);
}

TEST_F(Cli, ColorCheck)
{
    const auto bad = run({"color", "check", "--tree", path("ds2.txt"), "--colors", path("ds2_bad.col"), "-n", "1"});
    EXPECT_EQ(bad.status, 1);
    EXPECT_EQ(bad.out, "violation\n[0] -> 0\n[1] -> 1\n");
    const auto uni = run({"color", "check", "--uniform", "--tree", path("ds2.txt"), "--colors", path("ds2_bad.col")});
    EXPECT_EQ(uni.status, 1);
    EXPECT_EQ(run({"color", "check", "--uniform", "--tree", path("ds2.txt"), "--colors", path("ds2_bad.col"), "-n", "1"}).status, 2);
    EXPECT_EQ(run({"color", "check", "--tree", path("ds2.txt"), "--colors", path("ds2_bad.col")}).status, 2);
    write("const.col", "mu=2\n- -> 1\n0 -> 1\n1 -> 1\n1,0 -> 1\n");
    EXPECT_EQ(run({"color", "check", "--tree", path("ds2.txt"), "--colors", path("const.col"), "-n", "1"}).out, "holds\n");
    write("partial.col", "mu=2\n0 -> 1\n");
    const auto partial = run({"color", "check", "--tree", path("ds2.txt"), "--colors", path("partial.col"), "-n", "1"});
    EXPECT_EQ(partial.status, 2);
    EXPECT_NE(partial.err.find("no value"), std::string::npos) << partial.err;
}

TEST_F(Cli, ColorGenerateIsSeededAndRereadable)
{
    for (const char* kind : {"random", "constant", "length", "class"}) {
        const auto a = run({"--seed", "5", "color", "generate", "--tree", path("ds3.txt"), "--mu", "3", "--arities", "1,2",
                            "--kind", kind});
        const auto b = run({"--seed", "5", "color", "generate", "--tree", path("ds3.txt"), "--mu", "3", "--arities", "1,2",
                            "--kind", kind});
        ASSERT_EQ(a.status, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
        const auto file = write(std::string(kind) + ".col", a.out);
        const auto check = run({"color", "check", "--tree", path("ds3.txt"), "--colors", file, "-n", "1"});
        EXPECT_NE(check.status, 2) << check.err;
        if (std::string(kind) != "random") {
            EXPECT_EQ(check.status, 0) << kind;
        }
    }
    const auto r1 = run({"--seed", "1", "color", "generate", "--tree", path("ds3.txt"), "--mu", "3", "--kind", "random"});
    const auto r2 = run({"--seed", "2", "color", "generate", "--tree", path("ds3.txt"), "--mu", "3", "--kind", "random"});
    EXPECT_NE(r1.out, r2.out);
    EXPECT_EQ(run({"color", "generate", "--tree", path("ds3.txt"), "--mu", "2", "--kind", "stripes"}).status, 2);
}

TEST_F(Cli, SearchVerifyGolden)
{
    const auto holds = run({"search", "verify", "--tree", path("ds3.txt"), "--pattern", path("ds2.txt"), "--mu", "2",
                            "--arity", "1", "-n", "1"});
    EXPECT_EQ(holds.status, 0);
    EXPECT_EQ(holds.out, "holds\nchecked 256 of 256\n");
    const auto fails = run({"search", "verify", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--mu", "2",
                            "--arity", "1", "-n", "1"});
    EXPECT_EQ(fails.status, 1);
    EXPECT_EQ(fails.out, "fails\nchecked 3 of 16\ncounterexample\nmu=2\narities=1\n- -> 0\n0 -> 0\n1 -> 1\n1,0 -> 0\n");
    const auto budget = run({"--budget", "100", "search", "verify", "--tree", path("ds3.txt"), "--pattern",
                             path("ds2.txt"), "--mu", "2", "--arity", "1", "-n", "1"});
    EXPECT_EQ(budget.status, 2);
    EXPECT_NE(budget.err.find("budget"), std::string::npos) << budget.err;
    EXPECT_EQ(run({"search", "verify", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--mu", "2", "-n", "1"}).status,
              2);
    EXPECT_EQ(run({"search", "verify", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--mu", "2", "--arity", "1",
                   "--arities", "1,2", "-n", "1"})
                  .status,
              2);
}

TEST_F(Cli, SearchCopyGolden)
{
    const auto none = run({"search", "copy", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--colors",
                           path("ds2_bad.col"), "-n", "1"});
    EXPECT_EQ(none.status, 1);
    EXPECT_EQ(none.out, "none\n");
    write("ds3_pigeon.col", "mu=2\n- -> 0\n0 -> 0\n1 -> 1\n2 -> 0\n1,0 -> 0\n2,0 -> 0\n2,1 -> 0\n2,1,0 -> 0\n");
    const auto found = run({"search", "copy", "--tree", path("ds3.txt"), "--pattern", path("ds2.txt"), "--colors",
                            path("ds3_pigeon.col"), "-n", "1"});
    EXPECT_EQ(found.status, 0) << found.err;
    const auto lines = found.lines();
    ASSERT_GE(lines.size(), 5u);
    EXPECT_EQ(lines[0], "found");
    EXPECT_EQ(lines[1], "map - -> -");
    EXPECT_EQ(lines[2], "map 0 -> 0");
    EXPECT_EQ(lines[3], "map 1 -> 2");
    EXPECT_EQ(lines[4], "map 1,0 -> 2,0");
    EXPECT_EQ(lines[5].rfind("class [] n=1 lengths=1 ", 0), 0u) << lines[5];
}

TEST_F(Cli, ScatterGolden)
{
    EXPECT_EQ(run({"scatter", "embed", "--term", "prod(atom,2,fwd)", "--check"}).out,
              "alpha 5\n(0) -> 3,2\n(1) -> 4,2\norder-preserved\n");
    EXPECT_EQ(run({"scatter", "embed", "--term", "prod(atom,2,rev)"}).out, "alpha 5\n(1) -> 4,3\n(0) -> 4,2\n");
    EXPECT_EQ(run({"scatter", "embed", "--term", "prod(prod(atom,2,fwd),w,rev)", "--at", "0,1;5,0"}).out,
              "alpha w*2+1\n(0,1) -> w*2,w,4,2\n(5,0) -> w*2,w+5,3,2\n");
    EXPECT_EQ(run({"scatter", "embed", "--term", "atom", "--at", ""}).out, "alpha 0\n() -> -\n");
    EXPECT_EQ(run({"scatter", "embed", "--term", "prod(atom,w,fwd)"}).status, 2);
    EXPECT_EQ(run({"scatter", "embed", "--term", "prod(atom,2,up)"}).status, 2);
}

TEST_F(Cli, JsonAgreesWithText)
{
    const std::vector<std::vector<std::string>> cases{
        {"ds", "enum", "2"},
        {"ord", "add", "w*2+3", "w+1"},
        {"seq", "cmp", "--order", "lex3", "2,1", "2,0"},
        {"tree", "rank", "--mu", "2", "--at", "-", path("ds3.txt")},
        {"search", "verify", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--mu", "2", "--arity", "1", "-n", "1"},
        {"search", "copy", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--colors", path("ds2_bad.col"), "-n", "1"},
        {"color", "check", "--tree", path("ds2.txt"), "--colors", path("ds2_bad.col"), "-n", "1"},
        {"scatter", "embed", "--term", "prod(atom,2,fwd)", "--check"},
        {"sim", "similar", "1,0", "1"},
    };
    for (const auto& args : cases) {
        const auto text = run(args);
        auto json_args = args;
        json_args.insert(json_args.begin(), "--json");
        const auto doc = run(json_args);
        ASSERT_EQ(text.status, doc.status) << args[0];
        const Json j = doc.json();
        EXPECT_EQ(j.at("status"), text.status);
        EXPECT_EQ(j.at("command"), args[0] + " " + args[1]);
        const auto lines = text.lines();
        if (args[0] == "ds") {
            EXPECT_EQ(j.at("nodes").get<std::vector<std::string>>(), lines);
        } else if (args[0] == "ord" || args[0] == "seq") {
            EXPECT_EQ(j.at("result"), lines.at(0));
        } else if (args[0] == "tree") {
            EXPECT_EQ(std::to_string(j.at("rank").get<std::size_t>()), lines.at(0));
        } else if (args[1] == "verify") {
            EXPECT_EQ(j.at("holds").get<bool>(), lines.at(0) == "holds");
            EXPECT_EQ("checked " + std::to_string(j.at("colourings_checked").get<std::uint64_t>()) + " of "
                          + std::to_string(j.at("colourings_total").get<std::uint64_t>()),
                      lines.at(1));
            EXPECT_EQ(j.at("counterexample").at("assignments").size(), lines.size() - 5);
        } else if (args[1] == "copy") {
            EXPECT_EQ(j.at("found").get<bool>(), lines.at(0) == "found");
        } else if (args[0] == "color") {
            EXPECT_FALSE(j.at("holds").get<bool>());
            EXPECT_EQ("[" + j.at("violation").at("first").at(0).get<std::string>() + "] -> "
                          + std::to_string(j.at("violation").at("first_colour").get<int>()),
                      lines.at(1));
        } else if (args[0] == "scatter") {
            EXPECT_EQ("alpha " + j.at("alpha").get<std::string>(), lines.at(0));
            ASSERT_EQ(j.at("points").size(), lines.size() - 2);
            for (std::size_t i = 0; i < j.at("points").size(); ++i) {
                const auto& p = j.at("points").at(i);
                EXPECT_EQ(p.at("position").get<std::string>() + " -> " + p.at("image").get<std::string>(), lines.at(i + 1));
            }
            EXPECT_TRUE(j.at("order_preserved").get<bool>());
        } else if (args[0] == "sim") {
            EXPECT_FALSE(j.at("similar").get<bool>());
        }
    }
}

TEST_F(Cli, JsonErrorDocument)
{
    const auto r = run({"--json", "ord", "cmp", "w^", "1"});
    EXPECT_EQ(r.status, 2);
    const Json j = r.json();
    EXPECT_EQ(j.at("command"), "ord cmp");
    EXPECT_TRUE(j.contains("error"));
}

TEST_F(Cli, ExitCodeMatrix)
{
    struct Case {
        std::vector<std::string> args;
        int status;
    };
    const std::vector<Case> cases{
        {{"ds", "enum", "1"}, 0},
        {{}, 2},
        {{"frobnicate"}, 2},
        {{"ds", "enum"}, 2},
        {{"ds", "enum", "2", "--unknown"}, 2},
        {{"--threads", "0", "ds", "enum", "1"}, 2},
        {{"sim", "similar", "0", "1"}, 0},
        {{"sim", "similar", "0", "1,0"}, 1},
        {{"tree", "validate", path("ds2.txt")}, 0},
        {{"tree", "validate", path("bad_tree.txt")}, 1},
        {{"tree", "validate", path("broken.txt")}, 2},
        {{"search", "verify", "--tree", path("ds3.txt"), "--pattern", path("ds2.txt"), "--mu", "2", "--arity", "1", "-n", "1"}, 0},
        {{"search", "verify", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--mu", "2", "--arity", "1", "-n", "1"}, 1},
        {{"search", "verify", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--mu", "2", "--arity", "1", "-n", "0"}, 2},
        {{"search", "copy", "--tree", path("ds2.txt"), "--pattern", path("ds2.txt"), "--colors", path("ds2_bad.col"), "-n", "1"}, 1},
        {{"scatter", "embed", "--term", "sum(atom,atom)", "--check"}, 0},
    };
    for (const auto& c : cases) {
        const auto r = run(c.args);
        std::string joined;
        for (const auto& a : c.args) {
            joined += a + " ";
        }
        EXPECT_EQ(r.status, c.status) << joined << "\n" << r.out << r.err;
    }
}

TEST_F(Cli, ThreadsDoNotChangeBytes)
{
    for (const auto& file : {"ds2.txt", "ds3.txt"}) {
        std::vector<std::string> args{"search", "verify", "--tree", path(file), "--pattern", path("ds2.txt"),
                                      "--mu", "2", "--arity", "1", "-n", "1"};
        auto one = args;
        one.insert(one.begin(), {"--json", "--threads", "1"});
        auto eight = args;
        eight.insert(eight.begin(), {"--json", "--threads", "8"});
        EXPECT_EQ(run(one).out, run(eight).out);
    }
}
