#include "fdiff/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace fdiff;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& argv) {
    std::ostringstream out, err;
    int code = run_cli(argv, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("fdiff_cli_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }
    std::string read(const std::string& name) const {
        std::ifstream in(path_ / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    const fs::path& dir() const { return path_; }

private:
    fs::path path_;
};

const char* kPair =
    "order 5\n"
    "X = x^2 d/dy\n"
    "f = (2*x, 4*y)\n"
    "g = (x, x + y)\n"
    "w = 3 dx/x + d(1/(x*y))\n";

}  // namespace

TEST(Cli, ExpAndAbelianPair) {
    TempDir t;
    const std::string doc = t.write("pair.fd", kPair);
    CliRun e = cli({"exp", doc, "X"});
    EXPECT_EQ(e.code, kExitOk);
    EXPECT_NE(e.out.find("exp(X) = (x, y + x^2)"), std::string::npos) << e.out;
    CliRun a = cli({"analyze", doc, "f", "g", "--abelian"});
    EXPECT_EQ(a.code, kExitRefuted);
    EXPECT_NE(a.out.find("pair: g1,g2"), std::string::npos) << a.out;
    EXPECT_NE(a.out.find("witness [g1,g2]"), std::string::npos);
    EXPECT_EQ(cli({"analyze", doc, "f"}).code, kExitOk);
    EXPECT_EQ(cli({"pushforward", doc, "g", "X"}).code, kExitOk);
    CliRun r = cli({"residues", doc, "w"});
    EXPECT_NE(r.out.find("residue along x = 0: 3"), std::string::npos) << r.out;
    CliRun help = cli({"--help"});
    EXPECT_EQ(help.code, kExitOk);
    EXPECT_NE(help.out.find("verify-paper"), std::string::npos);
}

TEST(Cli, ErrorSurface) {
    TempDir t;
    const std::string doc = t.write("pair.fd", kPair);
    struct Case {
        std::vector<std::string> argv;
        int code;
        std::string message;
    };
    const std::vector<Case> cases = {
        {{"exp", t.write("lex.fd", "order 3\nX = x $ y\n"), "X"}, kExitParse, "lexical error"},
        {{"exp", t.write("syn.fd", "order 3\nX = (x +\n"), "X"}, kExitParse, "syntax error"},
        {{"exp", doc, "f"}, kExitParse, "arity error"},
        {{"exp", doc, "Y"}, kExitParse, "undefined name error"},
        {{"exp", t.path("missing.fd"), "X"}, kExitParse, "cannot read"},
        {{"frobnicate", doc}, kExitParse, "usage error"},
        {{"exp", doc, "x d/dx"}, kExitPrecondition, "nilpotent"},
        {{"integrate", doc, "1/(x + y) dx"}, kExitPrecondition, "precondition error"},
        {{"analyze", doc, "f", "g", "--abelian"}, kExitRefuted, "status: refuted"},
        {{"analyze", doc, "f", "--theorem-c"}, kExitPrecondition, "regular dicritic"},
    };
    std::set<std::string> messages;
    for (const auto& c : cases) {
        CliRun r = cli(c.argv);
        EXPECT_EQ(r.code, c.code) << c.argv.front() << " " << r.err << r.out;
        EXPECT_NE((r.err + r.out).find(c.message), std::string::npos) << r.err << r.out;
        messages.insert(r.err + r.out);
    }
    EXPECT_EQ(messages.size(), cases.size());
}

TEST(Cli, ConsistencyFailureFromFixtures) {
    TempDir t;
    t.write("bad_assert.fd", "order 4\nassert x == y\n");
    CliRun r = cli({"verify-paper", "--fixtures", t.dir().string()});
    EXPECT_EQ(r.code, kExitConsistency);
    EXPECT_NE(r.out.find("FAIL bad_assert"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("assertion at line 2, column 1 fails"), std::string::npos);

    TempDir u;
    u.write("wrong_status.fd", "order 4\nf = (2*x, 4*y)\ng = (x, x + y)\n#! analyze f g => ok\n");
    EXPECT_EQ(cli({"verify-paper", "--fixtures", u.dir().string(), "--update-goldens"}).code, kExitConsistency);
    CliRun w = cli({"verify-paper", "--fixtures", u.dir().string()});
    EXPECT_NE(w.out.find("expected ok, got refuted"), std::string::npos) << w.out;

    TempDir v;
    v.write("fine.fd", "order 4\nX = y d/dx\n#! exp X => ok\n");
    CliRun missing = cli({"verify-paper", "--fixtures", v.dir().string()});
    EXPECT_EQ(missing.code, kExitConsistency);
    EXPECT_NE(missing.out.find("missing golden report fine.1.json"), std::string::npos);
    EXPECT_EQ(cli({"verify-paper", "--fixtures", v.dir().string(), "--update-goldens"}).code, kExitOk);
    EXPECT_EQ(cli({"verify-paper", "--fixtures", v.dir().string()}).code, kExitOk);
    // a changed report no longer matches its golden
    v.write("fine.fd", "order 5\nX = y d/dx\n#! exp X => ok\n");
    CliRun changed = cli({"verify-paper", "--fixtures", v.dir().string()});
    EXPECT_EQ(changed.code, kExitConsistency);
    EXPECT_NE(changed.out.find("report differs from fine.1.json"), std::string::npos);
}

TEST(Cli, MachineReportsAreDeterministicAndReproducible) {
    TempDir t;
    const std::string doc = t.write("pair.fd", kPair);
    const std::vector<std::string> args = {"analyze", doc, "f", "g", "exp(X)", "--abelian", "--derived",
                                           "--word-bound", "3", "--depth", "2"};
    std::vector<std::string> a = args, b = args;
    a.insert(a.end(), {"--machine-output", t.path("a.json")});
    b.insert(b.end(), {"--machine-output", t.path("b.json")});
    EXPECT_EQ(cli(a).code, kExitRefuted);
    EXPECT_EQ(cli(b).code, kExitRefuted);
    const std::string first = t.read("a.json");
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, t.read("b.json"));

    // the report carries its document and arguments; re-running them gives the same report
    nlohmann::json j = nlohmann::json::parse(first);
    const std::string again = t.write("again.fd", j["document"].get<std::string>());
    std::vector<std::string> c = {"analyze", again};
    for (const auto& s : j["arguments"]) c.push_back(s.get<std::string>());
    c.insert(c.end(), {"--abelian", "--derived", "--word-bound", "3", "--depth", "2", "--machine-output",
                       t.path("c.json")});
    EXPECT_EQ(cli(c).code, kExitRefuted);
    EXPECT_EQ(t.read("c.json"), first);
    EXPECT_EQ(j["result"]["abelian"]["verdict"], "refuted");
    EXPECT_EQ(j["status"], "refuted");
}

TEST(Cli, SplitCommand) {
    EXPECT_EQ(split_command("analyze --homothety u \"(2*x, 2*y)\""),
              (std::vector<std::string>{"analyze", "--homothety", "u", "(2*x, 2*y)"}));
    EXPECT_TRUE(split_command("   ").empty());
}

TEST(Cli, VerifyPaperCorpus) {
    CliRun r = cli({"verify-paper"});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}
