#include "fdiff/report.hpp"

#include <algorithm>

namespace fdiff {

using nlohmann::json;

std::string status_name(int exit_code) {
    switch (exit_code) {
        case kExitOk: return "ok";
        case kExitParse: return "parse";
        case kExitPrecondition: return "precondition";
        case kExitRefuted: return "refuted";
        case kExitConsistency: return "consistency";
        default: return "error";
    }
}

std::string Report::human_text() const {
    std::string out;
    for (const auto& line : human) out += line + "\n";
    return out;
}

const std::vector<std::string>& document_commands() {
    static const std::vector<std::string> cmds = {"exp", "log", "bracket", "commutator", "pushforward", "pullback",
                                                  "dualforms", "dualframe", "integrate", "residues", "analyze"};
    return cmds;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const ConsistencyError*>(&e)) return kExitConsistency;
    if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const MismatchError*>(&e)) {
        return kExitPrecondition;
    }
    return kExitConsistency;
}

namespace {

json base_report(const std::string& command, const std::vector<std::string>& args) {
    json j;
    j["command"] = command;
    j["arguments"] = args;
    return j;
}

class Runner {
public:
    Runner(const SourceDocument& doc, const std::vector<std::string>& args, const RunOptions& opts)
        : doc_(doc), args_(args), opts_(opts) {}

    Report dispatch(const std::string& cmd) {
        if (cmd == "exp") return exp_cmd();
        if (cmd == "log") return unary<Diffeo>("log", [](const Diffeo& f) { return Value(log(f)); });
        if (cmd == "bracket") return bracket_cmd();
        if (cmd == "commutator") return commutator_cmd();
        if (cmd == "pushforward") return pushforward_cmd();
        if (cmd == "pullback") return pullback_cmd();
        if (cmd == "dualforms") return dualforms_cmd();
        if (cmd == "dualframe") return dualframe_cmd();
        if (cmd == "integrate") return integrate_cmd();
        if (cmd == "residues") return residues_cmd();
        if (cmd == "analyze") return analyze_cmd();
        throw ArityError(Position{}, "unknown command '" + cmd + "'");
    }

private:
    std::string str(const Value& v) const { return print(v, doc_.vars); }

    void require_count(const std::string& cmd, std::size_t lo, std::size_t hi) const {
        if (args_.size() < lo || args_.size() > hi) {
            throw ArityError(Position{}, cmd + " takes " + std::to_string(lo) +
                                             (hi == lo ? "" : hi > 64 ? " or more" : " to " + std::to_string(hi)) +
                                             " argument(s), got " + std::to_string(args_.size()));
        }
    }

    template <class T>
    T arg(std::size_t k, const std::string& cmd) const {
        Value v = evaluate_expression(doc_, args_[k]);
        if (!std::holds_alternative<T>(v)) {
            Value probe = T{};
            throw ArityError(Position{}, "argument " + std::to_string(k + 1) + " of " + cmd + " must be a " +
                                             kind_name(probe) + ", got " + kind_name(v));
        }
        return std::get<T>(std::move(v));
    }

    Report value_report(const std::string& label, const Value& v) const {
        Report r;
        r.machine["result"]["value"] = str(v);
        r.human.push_back(label + " = " + str(v));
        return r;
    }

    template <class T, class F>
    Report unary(const std::string& cmd, F f) const {
        require_count(cmd, 1, 1);
        return value_report(cmd + "(" + args_[0] + ")", f(arg<T>(0, cmd)));
    }

    Report exp_cmd() const {
        require_count("exp", 1, 1);
        VectorField X = arg<VectorField>(0, "exp");
        if (!opts_.time) return value_report("exp(" + args_[0] + ")", exp(X));
        Value t = evaluate_expression(doc_, *opts_.time);
        if (!std::holds_alternative<Scalar>(t)) throw ArityError(Position{}, "flow time must be a scalar");
        Report r = value_report("exp(" + *opts_.time + " * " + args_[0] + ")", exp_t(X, std::get<Scalar>(t)));
        r.machine["result"]["time"] = std::get<Scalar>(t).str();
        return r;
    }

    Report bracket_cmd() const {
        require_count("bracket", 2, 2);
        VectorField Z = lie_bracket(arg<VectorField>(0, "bracket"), arg<VectorField>(1, "bracket"));
        Report r = value_report("[" + args_[0] + ", " + args_[1] + "]", Z);
        r.machine["result"]["zero"] = Z.is_zero();
        return r;
    }

    Report commutator_cmd() const {
        require_count("commutator", 2, 2);
        Diffeo c = commutator(arg<Diffeo>(0, "commutator"), arg<Diffeo>(1, "commutator"));
        Report r = value_report("[" + args_[0] + ", " + args_[1] + "]", c);
        r.machine["result"]["tangency_order"] = tangency_order(c).str();
        r.human.push_back("tangency order: " + tangency_order(c).str());
        return r;
    }

    Report pushforward_cmd() const {
        require_count("pushforward", 2, 2);
        const Diffeo g = arg<Diffeo>(0, "pushforward");
        const VectorField X = arg<VectorField>(1, "pushforward");
        const VectorField Y = pushforward(g, X);
        Report r = value_report("pushforward", Y);
        r.machine["result"]["invariant"] = Y == X;
        auto c = X.is_zero() ? std::nullopt : proportionality(Y, X);
        r.machine["result"]["projective_factor"] = c ? c->str() : "none";
        r.human.push_back("invariant: " + std::string(Y == X ? "yes" : "no"));
        return r;
    }

    Report pullback_cmd() const {
        require_count("pullback", 2, 2);
        const OneForm w = arg<OneForm>(1, "pullback");
        const OneForm p = pullback(arg<Diffeo>(0, "pullback"), w);
        Report r = value_report("pullback", p);
        r.machine["result"]["invariant"] = p == w;
        r.human.push_back("invariant: " + std::string(p == w ? "yes" : "no"));
        return r;
    }

    Report dualforms_cmd() const {
        require_count("dualforms", 2, 2);
        const VectorField X = arg<VectorField>(0, "dualforms"), Y = arg<VectorField>(1, "dualforms");
        auto [w1, w2] = dual_closed_forms(X, Y);
        const unsigned n = static_cast<unsigned>(doc_.n_vars()), N = *doc_.order;
        const MeroJet one = MeroJet::constant(n, N, Scalar(1)), zero = MeroJet::constant(n, N, Scalar());
        const bool dual = w1.evaluate(X) == one && w1.evaluate(Y) == zero && w2.evaluate(X) == zero &&
                          w2.evaluate(Y) == one;
        if (!dual) throw ConsistencyError("dual forms fail the pairing with the input fields");
        Report r;
        r.machine["result"] = {{"w1", str(w1)}, {"w2", str(w2)}, {"closed", {is_closed(w1), is_closed(w2)}},
                               {"dual", dual}};
        r.human = {"w1 = " + str(w1), "w2 = " + str(w2),
                   "closed: " + std::string(is_closed(w1) && is_closed(w2) ? "yes" : "no"), "dual: yes"};
        return r;
    }

    Report dualframe_cmd() const {
        require_count("dualframe", 2, 2);
        auto [X1, X2] = dual_frame(arg<OneForm>(0, "dualframe"), arg<OneForm>(1, "dualframe"));
        Report r;
        r.machine["result"] = {{"X1", X1.str(doc_.vars)}, {"X2", X2.str(doc_.vars)}};
        r.human = {"X1 = " + X1.str(doc_.vars), "X2 = " + X2.str(doc_.vars)};
        return r;
    }

    Report integrate_cmd() const {
        require_count("integrate", 1, 1);
        IntegrationResult res = integrate_closed(arg<OneForm>(0, "integrate"));
        Report r;
        r.machine["result"] = {{"lambda", res.lambda.str()},
                               {"mu", res.mu.str()},
                               {"pole_x", res.pole_x},
                               {"pole_y", res.pole_y},
                               {"primitive", res.primitive.str(doc_.vars)},
                               {"precision", res.precision}};
        const std::string& x = doc_.vars.at(0);
        const std::string& y = doc_.vars.at(1);
        r.human = {"lambda = " + res.lambda.str(), "mu = " + res.mu.str(),
                   "poles: " + x + "^" + std::to_string(res.pole_x) + " " + y + "^" + std::to_string(res.pole_y),
                   "primitive = " + res.primitive.str(doc_.vars),
                   "exact through degree " + std::to_string(res.precision)};
        return r;
    }

    Report residues_cmd() const {
        require_count("residues", 1, 1);
        const OneForm w = arg<OneForm>(0, "residues");
        Report r;
        for (std::size_t axis = 0; axis < 2; ++axis) {
            const std::string res = residue_along_axis(w, axis).str();
            r.machine["result"][doc_.vars.at(axis)] = res;
            r.human.push_back("residue along " + doc_.vars.at(axis) + " = 0: " + res);
        }
        return r;
    }

    // ------------------------------------------------------------- analysis

    GroupSpec group_spec() const {
        require_count("analyze", 1, 1000);
        std::vector<Diffeo> gens;
        for (std::size_t k = 0; k < args_.size(); ++k) {
            Value v = evaluate_expression(doc_, args_[k]);
            if (auto* g = std::get_if<Group>(&v)) {
                gens.insert(gens.end(), g->generators.begin(), g->generators.end());
            } else if (auto* f = std::get_if<Diffeo>(&v)) {
                gens.push_back(*f);
            } else {
                throw ArityError(Position{}, "argument " + std::to_string(k + 1) +
                                                 " of analyze must be a diffeo or group, got " + kind_name(v));
            }
        }
        GroupSpec spec(gens);
        spec.word_bound = opts_.word_bound.value_or(doc_.word_bound.value_or(spec.word_bound));
        spec.depth_bound = opts_.depth_bound.value_or(doc_.depth_bound.value_or(spec.depth_bound));
        spec.validate();
        return spec;
    }

    json certificate_json(const Certificate& c) const {
        json j;
        j["verdict"] = to_string(c.verdict);
        json detail = json::object();
        for (const auto& [k, v] : c.detail) detail[k] = v;
        j["detail"] = detail;
        if (c.witness) j["witness"] = {{"word", c.witness->word}, {"value", str(c.witness->value)}};
        return j;
    }

    void certificate_lines(std::vector<std::string>& out, const std::string& label, const Certificate& c) const {
        out.push_back(label + ": " + to_string(c.verdict));
        for (const auto& [k, v] : c.detail) out.push_back("  " + k + ": " + v);
        if (c.witness) out.push_back("  witness " + c.witness->word + " = " + str(c.witness->value));
    }

    Report analyze_cmd() const {
        const GroupSpec spec = group_spec();
        std::vector<std::string> analyses = opts_.analyses;
        if (analyses.empty()) analyses.push_back("abelian");
        Report r;
        json& res = r.machine["result"];
        res["bounds"] = {{"word_bound", spec.word_bound}, {"depth_bound", spec.depth_bound},
                         {"level_cap", spec.level_cap}};
        res["conventions"] = {
            {"jet_matrix", "right action: column j holds m_j o f, so jet_matrix(f o g) = jet_matrix(g) jet_matrix(f)"},
            {"commutator", "[a,b] = a o b o a^-1 o b^-1"},
            {"word", "a*b = a o b"}};
        for (std::size_t k = 0; k < spec.generators.size(); ++k) {
            res["generators"]["g" + std::to_string(k + 1)] = str(spec.generators[k]);
        }
        r.human.push_back("group with " + std::to_string(spec.generators.size()) + " generators, word bound " +
                          std::to_string(spec.word_bound) + ", depth " + std::to_string(spec.depth_bound));
        bool refuted = false, inconsistent = false;
        for (const std::string& a : analyses) {
            if (a == "abelian" || a == "quasi-abelian" || a == "homothety") {
                Certificate c;
                if (a == "abelian") c = is_abelian(spec);
                if (a == "quasi-abelian") c = is_quasi_abelian(spec);
                if (a == "homothety") {
                    if (spec.generators.size() != 2) {
                        throw ArityError(Position{}, "homothety analysis takes exactly 2 generators");
                    }
                    c = corollary_9_3_check(spec.generators[0], spec.generators[1]);
                }
                res[a] = certificate_json(c);
                certificate_lines(r.human, a, c);
                refuted = refuted || c.verdict == Verdict::Refuted;
            } else if (a == "derived" || a == "central") {
                auto probe = a == "derived" ? derived_series_probe(spec) : central_series_probe(spec);
                json arr = json::array();
                for (std::size_t d = 0; d < probe.size(); ++d) {
                    arr.push_back(certificate_json(probe[d]));
                    certificate_lines(r.human, a + " depth " + std::to_string(d + 1), probe[d]);
                    refuted = refuted || probe[d].verdict == Verdict::Refuted;
                }
                res[a] = arr;
            } else if (a == "theorem-c" || a == "theorem-d" || a == "centralizer") {
                Certificate c;
                if (a == "theorem-c") c = theorem_c_check(spec);
                if (a == "theorem-d") c = theorem_d_check(spec);
                if (a == "centralizer") {
                    if (!opts_.centralizer) throw ArityError(Position{}, "centralizer analysis needs --centralizer");
                    Value f = evaluate_expression(doc_, *opts_.centralizer);
                    if (!std::holds_alternative<Diffeo>(f)) {
                        throw ArityError(Position{}, "--centralizer must be a diffeo, got " + kind_name(f));
                    }
                    c = dicritic_centralizer_check(spec, std::get<Diffeo>(f));
                }
                res[a] = certificate_json(c);
                certificate_lines(r.human, a, c);
                inconsistent = inconsistent || c.verdict == Verdict::Refuted;
            } else if (a == "chain") {
                if (spec.generators.size() < 2) throw ArityError(Position{}, "chain analysis needs 2 generators");
                json arr = json::array();
                for (const auto& s : commutator_chain(spec.generators[0], spec.generators[1])) {
                    arr.push_back({{"label", s.label}, {"order", s.order.str()}, {"value", str(s.value)}});
                    r.human.push_back("chain " + s.label + ": order " + s.order.str());
                }
                res[a] = arr;
            } else if (a == "lie") {
                std::vector<VectorField> logs;
                for (const auto& g : spec.generators) logs.push_back(log(g));
                LieSpan span = lie_closure(logs);
                const unsigned len = lie_derived_length(span);
                res[a] = {{"dimension", span.basis.size()}, {"closure_depth", span.closure_depth},
                          {"derived_length", len}};
                r.human.push_back("lie: dimension " + std::to_string(span.basis.size()) + ", derived length " +
                                  std::to_string(len));
            } else {
                throw ArityError(Position{}, "unknown analysis '" + a + "'");
            }
        }
        r.exit_code = inconsistent ? kExitConsistency : refuted ? kExitRefuted : kExitOk;
        return r;
    }

    const SourceDocument& doc_;
    const std::vector<std::string>& args_;
    const RunOptions& opts_;
};

}  // namespace

Report run(const std::string& command, const std::vector<std::string>& args, const SourceDocument& doc,
           const RunOptions& options) {
    if (!doc.order) throw SyntaxError(Position{}, "the document declares no order");
    Report r = Runner(doc, args, options).dispatch(command);
    json j = base_report(command, args);
    j["result"] = r.machine["result"];
    j["document"] = print(doc);
    j["exit_code"] = r.exit_code;
    j["status"] = status_name(r.exit_code);
    r.machine = std::move(j);
    r.human.push_back("status: " + status_name(r.exit_code));
    return r;
}

Report error_report(const std::string& command, const std::vector<std::string>& args, int exit_code,
                    const std::string& message) {
    Report r;
    r.exit_code = exit_code;
    r.machine = base_report(command, args);
    r.machine["error"] = message;
    r.machine["exit_code"] = exit_code;
    r.machine["status"] = status_name(exit_code);
    r.human.push_back(message);
    return r;
}

}  // namespace fdiff
