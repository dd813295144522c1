#include "fdiff/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef FDIFF_FIXTURE_DIR
#define FDIFF_FIXTURE_DIR "fixtures"
#endif

namespace fdiff {

namespace fs = std::filesystem;

namespace {

struct Invocation {
    std::string command;
    std::string file;
    std::vector<std::string> args;
    std::optional<unsigned> order;
    std::string machine_output;
    std::string fixtures = FDIFF_FIXTURE_DIR;
    bool update_goldens = false;
    std::vector<std::string> analyses;
    RunOptions opts;
};

enum class Parsed { Run, Help, Error };

Parsed parse_command_line(const std::vector<std::string>& argv, Invocation& inv, std::string& message) {
    CLI::App app{"Exact calculator for formal vector fields, diffeomorphisms and one-forms", "fdiff"};
    app.require_subcommand(1, 1);
    std::optional<unsigned> word_bound, depth;
    app.add_option("--order", inv.order, "Jet order, overrides the document header")->check(CLI::Range(1, 64));
    app.add_option("--word-bound", word_bound, "Maximum word length for group analysis")->check(CLI::Range(1, 64));
    app.add_option("--depth", depth, "Maximum series depth for group analysis")->check(CLI::Range(1, 64));
    app.add_option("--machine-output", inv.machine_output, "Write the canonical report to this file");
    app.add_option("--fixtures", inv.fixtures, "Fixture directory for verify-paper");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"exp", "time-1 flow of a field (time with --time)"},
        {"log", "infinitesimal generator of a unipotent diffeo"},
        {"bracket", "Lie bracket of two fields"},
        {"commutator", "group commutator of two diffeos"},
        {"pushforward", "push a field forward by a diffeo"},
        {"pullback", "pull a one-form back by a diffeo"},
        {"dualforms", "closed one-forms dual to two commuting fields"},
        {"dualframe", "fields dual to two one-forms"},
        {"integrate", "decompose a closed form with poles on the axes"},
        {"residues", "residues of a closed form along the axes"},
        {"analyze", "group certificates for a list of diffeos or groups"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->add_option("file", inv.file, "Input document")->required();
        sub->add_option("args", inv.args, "Expressions evaluated against the document");
        if (name == "exp") sub->add_option("--time", inv.opts.time, "Flow time");
        if (name == "analyze") {
            for (const char* a : {"abelian", "quasi-abelian", "derived", "central", "chain", "lie", "theorem-c",
                                  "theorem-d", "homothety"}) {
                sub->add_flag_callback(std::string("--") + a, [&inv, a] { inv.analyses.emplace_back(a); });
            }
            sub->add_option_function<std::string>(
                "--centralizer",
                [&inv](const std::string& f) {
                    inv.opts.centralizer = f;
                    inv.analyses.emplace_back("centralizer");
                },
                "Check against a regular dicritic diffeo commuting with the group");
        }
    }
    CLI::App* verify = app.add_subcommand("verify-paper", "run the fixture corpus");
    verify->fallthrough();
    verify->add_flag("--update-goldens", inv.update_goldens, "Rewrite the golden reports");

    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        message = app.help();
        return Parsed::Help;
    } catch (const CLI::ParseError& e) {
        message = e.what();
        return Parsed::Error;
    }
    inv.command = app.get_subcommands().front()->get_name();
    inv.opts.word_bound = word_bound;
    inv.opts.depth_bound = depth;
    inv.opts.analyses = inv.analyses;
    return Parsed::Run;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Report execute(const Invocation& inv) {
    auto text = read_file(inv.file);
    if (!text) return error_report(inv.command, inv.args, kExitParse, "cannot read '" + inv.file + "'");
    try {
        SourceDocument doc = parse(*text, inv.order);
        return run(inv.command, inv.args, doc, inv.opts);
    } catch (const std::exception& e) {
        return error_report(inv.command, inv.args, exit_code_for(e), e.what());
    }
}

struct FixtureResult {
    std::size_t assertions = 0;
    std::size_t directives = 0;
    std::vector<std::string> failures;
};

FixtureResult check_fixture(const fs::path& path, const fs::path& golden_dir, bool update) {
    FixtureResult res;
    auto text = read_file(path.string());
    if (!text) {
        res.failures.push_back("cannot read the fixture");
        return res;
    }
    SourceDocument doc;
    try {
        doc = parse(*text);
        const std::string printed = print(doc);
        SourceDocument again = parse(printed);
        if (!same_document(doc, again)) res.failures.push_back("parse(print(doc)) differs from doc");
        if (print(again) != printed) res.failures.push_back("print is not idempotent");
    } catch (const std::exception& e) {
        res.failures.push_back(e.what());
        return res;
    }
    res.assertions = doc.asserts.size();
    for (const auto& a : doc.asserts) {
        if (values_equal(a.lhs, a.rhs) != a.equal) res.failures.push_back("assertion at " + a.pos.str() + " fails");
    }
    res.directives = doc.directives.size();
    for (std::size_t k = 0; k < doc.directives.size(); ++k) {
        const Directive& d = doc.directives[k];
        std::vector<std::string> argv = split_command(d.command);
        if (argv.empty() || argv.front() == "verify-paper") {
            res.failures.push_back("directive at " + d.pos.str() + " is not a document command");
            continue;
        }
        argv.insert(argv.begin() + 1, path.string());
        Report r = invoke(argv);
        const std::string got = status_name(r.exit_code);
        if (got != d.expected) {
            std::string why = r.machine.contains("error") ? " (" + r.machine["error"].get<std::string>() + ")" : "";
            res.failures.push_back("directive at " + d.pos.str() + ": expected " + d.expected + ", got " + got + why);
        }
        const fs::path golden = golden_dir / (path.stem().string() + "." + std::to_string(k + 1) + ".json");
        if (update) {
            fs::create_directories(golden_dir);
            std::ofstream(golden, std::ios::binary) << r.machine_text();
        } else if (auto expected = read_file(golden.string())) {
            if (*expected != r.machine_text()) {
                res.failures.push_back("directive at " + d.pos.str() + ": report differs from " +
                                       golden.filename().string());
            }
        } else {
            res.failures.push_back("missing golden report " + golden.filename().string());
        }
    }
    return res;
}

Report verify_paper(const Invocation& inv) {
    Report report;
    report.machine["command"] = "verify-paper";
    const fs::path dir(inv.fixtures);
    if (!fs::is_directory(dir)) return error_report("verify-paper", {}, kExitParse, "no fixture directory '" + inv.fixtures + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".fd") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) return error_report("verify-paper", {}, kExitParse, "no fixtures in '" + inv.fixtures + "'");
    bool all = true;
    report.machine["fixtures"] = nlohmann::json::object();
    for (const auto& f : files) {
        FixtureResult r = check_fixture(f, dir / "golden", inv.update_goldens);
        const std::string stem = f.stem().string();
        report.machine["fixtures"][stem] = {
            {"assertions", r.assertions}, {"directives", r.directives}, {"failures", r.failures}};
        const bool ok = r.failures.empty();
        all = all && ok;
        report.human.push_back(std::string(ok ? "PASS " : "FAIL ") + stem + " (" + std::to_string(r.assertions) +
                               " assertions, " + std::to_string(r.directives) + " directives)");
        for (const auto& why : r.failures) report.human.push_back("  " + why);
    }
    report.exit_code = all ? kExitOk : kExitConsistency;
    report.machine["exit_code"] = report.exit_code;
    report.machine["status"] = status_name(report.exit_code);
    report.human.push_back("status: " + status_name(report.exit_code));
    return report;
}

}  // namespace

std::vector<std::string> split_command(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, have = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            have = true;
        } else if (!quoted && (c == ' ' || c == '\t')) {
            if (have) out.push_back(cur);
            cur.clear();
            have = false;
        } else {
            cur += c;
            have = true;
        }
    }
    if (have) out.push_back(cur);
    return out;
}

Report invoke(const std::vector<std::string>& argv) {
    Invocation inv;
    std::string message;
    switch (parse_command_line(argv, inv, message)) {
        case Parsed::Help:
        case Parsed::Error: return error_report("", {}, kExitParse, message);
        case Parsed::Run: break;
    }
    if (inv.command == "verify-paper") return error_report(inv.command, {}, kExitParse, "verify-paper cannot be nested");
    return execute(inv);
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    Invocation inv;
    std::string message;
    switch (parse_command_line(argv, inv, message)) {
        case Parsed::Help: out << message; return kExitOk;
        case Parsed::Error: err << "usage error: " << message << "\n"; return kExitParse;
        case Parsed::Run: break;
    }
    Report report = inv.command == "verify-paper" ? verify_paper(inv) : execute(inv);
    if (report.machine.contains("error")) {
        err << (inv.file.empty() ? "" : inv.file + ": ") << status_name(report.exit_code) << " error: "
            << report.machine["error"].get<std::string>() << "\n";
    } else {
        out << report.human_text();
    }
    if (!inv.machine_output.empty()) {
        std::ofstream f(inv.machine_output, std::ios::binary);
        if (!f) {
            err << "cannot write '" << inv.machine_output << "'\n";
            return kExitParse;
        }
        f << report.machine_text();
    }
    return report.exit_code;
}

}  // namespace fdiff
