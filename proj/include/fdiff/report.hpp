#pragma once

#include "fdiff/document.hpp"
#include "fdiff/group_analysis.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fdiff {

enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitPrecondition = 3,
    kExitRefuted = 4,
    kExitConsistency = 5,
};

/// "ok", "parse", "precondition", "refuted", "consistency".
std::string status_name(int exit_code);

struct RunOptions {
    std::optional<unsigned> word_bound;
    std::optional<unsigned> depth_bound;
    /// analyze: abelian, quasi-abelian, derived, central, chain, lie,
    /// theorem-c, theorem-d, homothety, centralizer. Empty means abelian.
    std::vector<std::string> analyses;
    /// analyze --centralizer: expression for the regular dicritic element.
    std::optional<std::string> centralizer;
    /// exp: expression for the flow time.
    std::optional<std::string> time;
};

struct Report {
    int exit_code = kExitOk;
    std::vector<std::string> human;
    /// Canonical machine form; keys are sorted by the json object map.
    nlohmann::json machine;

    std::string human_text() const;
    std::string machine_text() const { return machine.dump(2) + "\n"; }
};

/// Subcommands that operate on one document.
const std::vector<std::string>& document_commands();

/// Runs one subcommand. Arguments are expressions evaluated against the
/// document. Library and document errors propagate to the caller.
Report run(const std::string& command, const std::vector<std::string>& args, const SourceDocument& doc,
           const RunOptions& options);

/// Report for a failure raised by run or parse.
Report error_report(const std::string& command, const std::vector<std::string>& args, int exit_code,
                    const std::string& message);

/// Exit code for a caught library or document error.
int exit_code_for(const std::exception& e);

}  // namespace fdiff
