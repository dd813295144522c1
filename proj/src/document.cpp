#include "fdiff/document.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace fdiff {

std::string Position::str() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

ParseError::ParseError(const std::string& kind, Position pos, const std::string& detail)
    : Error(pos.str() + ": " + kind + " error: " + detail), kind_(kind), pos_(pos), detail_(detail) {}

std::string kind_name(const Value& v) {
    static const char* names[] = {"scalar", "function", "field", "diffeo", "form", "group"};
    return names[v.index()];
}

const Value* SourceDocument::find(const std::string& name) const {
    for (const auto& d : decls) {
        if (d.name == name) return &d.value;
    }
    return nullptr;
}

namespace {

// ---------------------------------------------------------------------- lexer

enum class Tok {
    Number, Ident, DField, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBrack, RBrack,
    Comma, Assign, Eq, Ne, Newline, Directive, End
};

struct Token {
    Tok t;
    std::string text;
    Position pos;
};

std::string describe(Tok t) {
    switch (t) {
        case Tok::Number: return "number";
        case Tok::Ident: return "name";
        case Tok::DField: return "'d/d<var>'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrack: return "'['";
        case Tok::RBrack: return "']'";
        case Tok::Comma: return "','";
        case Tok::Assign: return "'='";
        case Tok::Eq: return "'=='";
        case Tok::Ne: return "'!='";
        case Tok::Newline: return "end of line";
        case Tok::Directive: return "directive";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::string describe(const Token& tok) {
    switch (tok.t) {
        case Tok::Number:
        case Tok::Ident: return "'" + tok.text + "'";
        case Tok::DField: return "'d/d" + tok.text + "'";
        default: return describe(tok.t);
    }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    Position pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (src[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
            ++i;
        }
    };
    auto read_ident = [&](std::size_t from) {
        std::size_t j = from;
        while (j < src.size() && ident_char(src[j])) ++j;
        return j;
    };
    while (i < src.size()) {
        const char c = src[i];
        const Position start = pos;
        if (c == ' ' || c == '\t' || c == '\r') {
            advance(1);
        } else if (c == '\n' || c == ';') {
            out.push_back({Tok::Newline, "", start});
            advance(1);
        } else if (c == '#') {
            std::size_t end = src.find('\n', i);
            if (end == std::string::npos) end = src.size();
            if (i + 1 < src.size() && src[i + 1] == '!') {
                std::string body = src.substr(i + 2, end - i - 2);
                out.push_back({Tok::Directive, body, start});
            }
            advance(end - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && ident_start(src[j])) {
                Position bad = start;
                bad.column += static_cast<unsigned>(j - i);
                throw LexError(bad, "malformed number '" + src.substr(i, read_ident(j) - i) + "'");
            }
            out.push_back({Tok::Number, src.substr(i, j - i), start});
            advance(j - i);
        } else if (ident_start(c)) {
            std::size_t j = read_ident(i);
            if (j - i == 1 && c == 'd' && j + 2 < src.size() && src[j] == '/' && src[j + 1] == 'd' &&
                ident_start(src[j + 2])) {
                std::size_t k = read_ident(j + 2);
                out.push_back({Tok::DField, src.substr(j + 2, k - j - 2), start});
                advance(k - i);
            } else {
                out.push_back({Tok::Ident, src.substr(i, j - i), start});
                advance(j - i);
            }
        } else {
            const char n = i + 1 < src.size() ? src[i + 1] : '\0';
            Tok t;
            std::size_t len = 1;
            switch (c) {
                case '+': t = Tok::Plus; break;
                case '-': t = Tok::Minus; break;
                case '*': t = Tok::Star; break;
                case '/': t = Tok::Slash; break;
                case '^': t = Tok::Caret; break;
                case '(': t = Tok::LParen; break;
                case ')': t = Tok::RParen; break;
                case '[': t = Tok::LBrack; break;
                case ']': t = Tok::RBrack; break;
                case ',': t = Tok::Comma; break;
                case '=':
                    t = n == '=' ? Tok::Eq : Tok::Assign;
                    len = n == '=' ? 2 : 1;
                    break;
                case '!':
                    if (n != '=') throw LexError(start, "unexpected character '!'");
                    t = Tok::Ne;
                    len = 2;
                    break;
                default: {
                    std::ostringstream msg;
                    if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
                        msg << "unexpected byte 0x" << std::hex << static_cast<unsigned>(static_cast<unsigned char>(c));
                    } else {
                        msg << "unexpected character '" << c << "'";
                    }
                    throw LexError(start, msg.str());
                }
            }
            out.push_back({t, src.substr(i, len), start});
            advance(len);
        }
    }
    out.push_back({Tok::End, "", pos});
    return out;
}

// --------------------------------------------------------------------- parser

const std::set<std::string> kKeywords = {"order", "vars", "word_bound", "depth", "assert"};
const std::set<std::string> kFunctions = {"exp", "log", "d", "inverse", "compose", "pushforward", "pullback", "group"};
const std::set<std::string> kConstants = {"R", "i", "id"};

bool reserved(const std::string& name) {
    return kKeywords.count(name) || kFunctions.count(name) || kConstants.count(name);
}

std::string join_expected(const std::vector<Tok>& ts) {
    std::string out;
    for (std::size_t k = 0; k < ts.size(); ++k) out += (k ? ", " : "") + describe(ts[k]);
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
    bool at(Tok t) const { return peek().t == t; }
    Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    [[noreturn]] void fail(const std::vector<Tok>& expected) const {
        throw SyntaxError(peek().pos, "expected " + std::string(expected.size() > 1 ? "one of " : "") +
                                          join_expected(expected) + ", found " + describe(peek()));
    }
    Token expect(Tok t) {
        if (!at(t)) fail({t});
        return take();
    }

    // form names dx, dy, ... are the only identifiers that multiply by juxtaposition
    std::function<bool(const std::string&)> is_form_name;

    Expr expression() {
        Expr lhs = term();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Token op = take();
            Expr rhs = term();
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

private:
    static Expr binary(const Token& op, Expr a, Expr b) {
        Expr e{Expr::Kind::Binary, op.pos, op.text, 0, {}};
        e.args.push_back(std::move(a));
        e.args.push_back(std::move(b));
        return e;
    }

    bool implicit_operand() const {
        if (at(Tok::DField)) return true;
        if (!at(Tok::Ident) || peek(1).t == Tok::LParen) return false;
        return peek().text == "R" || (is_form_name && is_form_name(peek().text));
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (at(Tok::Star) || at(Tok::Slash)) {
                Token op = take();
                Expr rhs = unary();
                lhs = binary(op, std::move(lhs), std::move(rhs));
            } else if (implicit_operand()) {
                Token op{Tok::Star, "*", peek().pos};
                Expr rhs = unary();
                lhs = binary(op, std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    Expr unary() {
        if (at(Tok::Minus)) {
            Token op = take();
            Expr e{Expr::Kind::Unary, op.pos, "-", 0, {}};
            e.args.push_back(unary());
            return e;
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!at(Tok::Caret)) return base;
        Token op = take();
        bool negative = false;
        if (at(Tok::Minus)) {
            take();
            negative = true;
        }
        Token n = expect(Tok::Number);
        if (n.text.size() > 9) throw SyntaxError(n.pos, "exponent too large");
        Expr e{Expr::Kind::Power, op.pos, "^", std::stol(n.text) * (negative ? -1 : 1), {}};
        e.args.push_back(std::move(base));
        return e;
    }

    Expr primary() {
        const Token& tok = peek();
        switch (tok.t) {
            case Tok::Number: {
                Token t = take();
                return Expr{Expr::Kind::Number, t.pos, t.text, 0, {}};
            }
            case Tok::DField: {
                Token t = take();
                return Expr{Expr::Kind::CoordinateField, t.pos, t.text, 0, {}};
            }
            case Tok::Ident: {
                Token t = take();
                if (!at(Tok::LParen)) return Expr{Expr::Kind::Name, t.pos, t.text, 0, {}};
                take();
                Expr call{Expr::Kind::Call, t.pos, t.text, 0, {}};
                if (!at(Tok::RParen)) {
                    call.args.push_back(expression());
                    while (at(Tok::Comma)) {
                        take();
                        call.args.push_back(expression());
                    }
                }
                if (!at(Tok::RParen)) fail({Tok::Comma, Tok::RParen});
                take();
                return call;
            }
            case Tok::LParen: {
                Token t = take();
                Expr first = expression();
                if (at(Tok::RParen)) {
                    take();
                    return first;
                }
                if (!at(Tok::Comma)) fail({Tok::Comma, Tok::RParen});
                Expr tuple{Expr::Kind::Tuple, t.pos, "", 0, {}};
                tuple.args.push_back(std::move(first));
                while (at(Tok::Comma)) {
                    take();
                    if (at(Tok::RParen)) break;
                    tuple.args.push_back(expression());
                }
                if (!at(Tok::RParen)) fail({Tok::Comma, Tok::RParen});
                take();
                return tuple;
            }
            case Tok::LBrack: {
                Token t = take();
                Expr br{Expr::Kind::Bracket, t.pos, "", 0, {}};
                br.args.push_back(expression());
                expect(Tok::Comma);
                br.args.push_back(expression());
                expect(Tok::RBrack);
                return br;
            }
            default:
                fail({Tok::Number, Tok::Ident, Tok::DField, Tok::LParen, Tok::LBrack, Tok::Minus});
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

// ------------------------------------------------------------------ evaluator

class Evaluator {
public:
    Evaluator(const SourceDocument& doc, unsigned order) : doc_(doc), n_(doc.n_vars()), N_(order) {}

    Value eval(const Expr& e) {
        std::vector<Value> args;
        for (const Expr& a : e.args) args.push_back(eval(a));
        try {
            return apply(e, args);
        } catch (const ParseError&) {
            throw;
        } catch (const PreconditionError& x) {
            throw PreconditionError(e.pos.str() + ": " + x.what());
        } catch (const MismatchError& x) {
            throw MismatchError(e.pos.str() + ": " + x.what());
        } catch (const ConsistencyError& x) {
            throw ConsistencyError(e.pos.str() + ": " + x.what());
        }
    }

    std::optional<std::size_t> var_index(const std::string& name) const {
        auto it = std::find(doc_.vars.begin(), doc_.vars.end(), name);
        if (it == doc_.vars.end()) return std::nullopt;
        return static_cast<std::size_t>(it - doc_.vars.begin());
    }

private:
    [[noreturn]] static void arity(const Expr& e, const std::string& msg) { throw ArityError(e.pos, msg); }

    MeroJet constant(const Scalar& c) const { return MeroJet::constant(n_, N_, c); }

    std::optional<MeroJet> as_function(const Value& v) const {
        if (const auto* s = std::get_if<Scalar>(&v)) return constant(*s);
        if (const auto* f = std::get_if<MeroJet>(&v)) return *f;
        return std::nullopt;
    }

    // power series of a quotient without poles at the origin
    Jet to_jet(const MeroJet& f) const {
        if (f.shift().degree() != 0 || f.den().constant_term().is_zero()) {
            throw PreconditionError("function has a pole at the origin");
        }
        if (f.den().terms().size() == 1) return f.num() * f.den().constant_term().inverse();
        return f.num() * invert_unit(f.den());
    }

    Jet jet_arg(const Expr& e, const Value& v, const std::string& what) const {
        auto f = as_function(v);
        if (!f) arity(e, what + " must be a function, got " + kind_name(v));
        return to_jet(*f);
    }

    template <class T>
    const T& get(const Expr& e, const Value& v, const std::string& what) const {
        const T* p = std::get_if<T>(&v);
        if (!p) {
            Value probe = T{};
            arity(e, what + " must be a " + kind_name(probe) + ", got " + kind_name(v));
        }
        return *p;
    }

    OneForm scale_form(const OneForm& w, const MeroJet& f) const {
        std::vector<MeroJet> c;
        for (const auto& r : w.coeffs()) c.push_back(r * f);
        return OneForm(std::move(c));
    }

    Value name(const Expr& e) const {
        if (const Value* v = doc_.find(e.text)) return *v;
        if (auto k = var_index(e.text)) return MeroJet(Jet::variable(n_, N_, *k));
        if (e.text == "R") return VectorField::radial(n_, N_);
        if (e.text == "i") return Scalar::i();
        if (e.text == "id") return Diffeo::identity(n_, N_);
        if (e.text.size() > 1 && e.text[0] == 'd') {
            if (auto k = var_index(e.text.substr(1))) return coordinate_form(n_, N_, *k);
        }
        throw UndefinedNameError(e.pos, "'" + e.text + "' is not declared");
    }

    Value negate(const Expr& e, const Value& v) const {
        if (const auto* s = std::get_if<Scalar>(&v)) return -*s;
        if (const auto* f = std::get_if<MeroJet>(&v)) return -*f;
        if (const auto* X = std::get_if<VectorField>(&v)) return -*X;
        if (const auto* w = std::get_if<OneForm>(&v)) return *w * Scalar(-1);
        arity(e, "cannot negate a " + kind_name(v));
    }

    Value add(const Expr& e, const Value& a, const Value& b, bool minus) const {
        const Scalar sign(minus ? -1 : 1);
        if (a.index() == b.index()) {
            if (const auto* s = std::get_if<Scalar>(&a)) return *s + sign * std::get<Scalar>(b);
            if (const auto* f = std::get_if<MeroJet>(&a)) return minus ? *f - std::get<MeroJet>(b) : *f + std::get<MeroJet>(b);
            if (const auto* X = std::get_if<VectorField>(&a)) return *X + std::get<VectorField>(b) * sign;
            if (const auto* w = std::get_if<OneForm>(&a)) return *w + std::get<OneForm>(b) * sign;
        }
        auto fa = as_function(a), fb = as_function(b);
        if (fa && fb) return minus ? *fa - *fb : *fa + *fb;
        arity(e, "cannot " + std::string(minus ? "subtract" : "add") + " a " + kind_name(a) + " and a " +
                     kind_name(b));
    }

    Value multiply(const Expr& e, const Value& a, const Value& b) const {
        if (const auto* s = std::get_if<Scalar>(&b); s && !std::holds_alternative<Scalar>(a)) {
            return multiply(e, b, a);
        }
        if (const auto* s = std::get_if<Scalar>(&a)) {
            if (const auto* t = std::get_if<Scalar>(&b)) return *s * *t;
            if (const auto* f = std::get_if<MeroJet>(&b)) return *f * *s;
            if (const auto* X = std::get_if<VectorField>(&b)) return *X * *s;
            if (const auto* w = std::get_if<OneForm>(&b)) return *w * *s;
        }
        if (std::holds_alternative<MeroJet>(b) && !std::holds_alternative<MeroJet>(a)) return multiply(e, b, a);
        if (const auto* f = std::get_if<MeroJet>(&a)) {
            if (const auto* g = std::get_if<MeroJet>(&b)) return *f * *g;
            if (const auto* X = std::get_if<VectorField>(&b)) return X->times(to_jet(*f));
            if (const auto* w = std::get_if<OneForm>(&b)) return scale_form(*w, *f);
        }
        if (std::holds_alternative<Diffeo>(a) && std::holds_alternative<Diffeo>(b)) {
            return compose(std::get<Diffeo>(a), std::get<Diffeo>(b));
        }
        arity(e, "cannot multiply a " + kind_name(a) + " by a " + kind_name(b));
    }

    Value divide(const Expr& e, const Value& a, const Value& b) const {
        if (const auto* s = std::get_if<Scalar>(&b)) {
            if (s->is_zero()) throw PreconditionError("division by zero");
            if (const auto* t = std::get_if<Scalar>(&a)) return *t / *s;
            return multiply(e, a, s->inverse());
        }
        const auto* g = std::get_if<MeroJet>(&b);
        if (!g) arity(e, "cannot divide by a " + kind_name(b));
        if (g->is_zero()) throw PreconditionError("division by zero");
        const MeroJet inv = constant(Scalar(1)) / *g;
        if (auto f = as_function(a)) return *f * inv;
        if (const auto* X = std::get_if<VectorField>(&a)) return X->times(to_jet(inv));
        if (const auto* w = std::get_if<OneForm>(&a)) return scale_form(*w, inv);
        arity(e, "cannot divide a " + kind_name(a));
    }

    Value raise(const Expr& e, const Value& v) const {
        const long k = e.exponent;
        if (const auto* s = std::get_if<Scalar>(&v)) {
            if (s->is_zero() && k < 0) throw PreconditionError("division by zero");
            return s->pow(k);
        }
        if (const auto* f = std::get_if<MeroJet>(&v)) {
            if (f->is_zero() && k < 0) throw PreconditionError("division by zero");
            MeroJet r = constant(Scalar(1));
            const MeroJet base = k < 0 ? constant(Scalar(1)) / *f : *f;
            for (long j = 0; j < std::labs(k); ++j) r = r * base;
            return r;
        }
        if (const auto* f = std::get_if<Diffeo>(&v)) return power(*f, k);
        arity(e, "cannot raise a " + kind_name(v) + " to a power");
    }

    void count(const Expr& e, const std::vector<Value>& args, std::size_t lo, std::size_t hi) const {
        if (args.size() < lo || args.size() > hi) {
            std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + " or " + std::to_string(hi);
            arity(e, e.text + " takes " + want + " argument" + (hi == 1 ? "" : "s") + ", got " +
                         std::to_string(args.size()));
        }
    }

    Value call(const Expr& e, const std::vector<Value>& args) const {
        const std::string& f = e.text;
        if (!kFunctions.count(f)) throw UndefinedNameError(e.pos, "'" + f + "' is not a function");
        if (f == "group") {
            if (args.empty()) arity(e, "group takes at least 1 argument, got 0");
            Group g;
            for (const Value& v : args) {
                if (const auto* h = std::get_if<Group>(&v)) {
                    g.generators.insert(g.generators.end(), h->generators.begin(), h->generators.end());
                } else {
                    g.generators.push_back(get<Diffeo>(e, v, "group generator"));
                }
            }
            return g;
        }
        if (f == "exp") {
            count(e, args, 1, 2);
            const auto& X = get<VectorField>(e, args[0], "argument of exp");
            if (args.size() == 1) return exp(X);
            return exp_t(X, get<Scalar>(e, args[1], "time of exp"));
        }
        if (f == "log") {
            count(e, args, 1, 1);
            return log(get<Diffeo>(e, args[0], "argument of log"));
        }
        if (f == "d") {
            count(e, args, 1, 1);
            auto g = as_function(args[0]);
            if (!g) arity(e, "argument of d must be a function, got " + kind_name(args[0]));
            return exterior_derivative(*g);
        }
        if (f == "inverse") {
            count(e, args, 1, 1);
            return inverse(get<Diffeo>(e, args[0], "argument of inverse"));
        }
        count(e, args, 2, 2);
        const auto& g = get<Diffeo>(e, args[0], "first argument of " + f);
        if (f == "compose") return compose(g, get<Diffeo>(e, args[1], "second argument of compose"));
        if (f == "pushforward") return pushforward(g, get<VectorField>(e, args[1], "second argument of pushforward"));
        return pullback(g, get<OneForm>(e, args[1], "second argument of pullback"));
    }

    Value apply(const Expr& e, const std::vector<Value>& args) const {
        switch (e.kind) {
            case Expr::Kind::Number: return Scalar(Rational(mpz_class(e.text)));
            case Expr::Kind::Name: return name(e);
            case Expr::Kind::CoordinateField: {
                auto k = var_index(e.text);
                if (!k) throw UndefinedNameError(e.pos, "'" + e.text + "' is not a variable");
                return VectorField::coordinate(n_, N_, *k);
            }
            case Expr::Kind::Unary: return negate(e, args[0]);
            case Expr::Kind::Binary:
                if (e.text == "+" || e.text == "-") return add(e, args[0], args[1], e.text == "-");
                if (e.text == "*") return multiply(e, args[0], args[1]);
                return divide(e, args[0], args[1]);
            case Expr::Kind::Power: return raise(e, args[0]);
            case Expr::Kind::Tuple: {
                if (args.size() != n_) {
                    arity(e, "diffeomorphism needs " + std::to_string(n_) + " components, got " +
                                 std::to_string(args.size()));
                }
                std::vector<Jet> comps;
                for (std::size_t k = 0; k < args.size(); ++k) {
                    comps.push_back(jet_arg(e.args[k], args[k], "component " + std::to_string(k + 1)));
                }
                return Diffeo(std::move(comps));
            }
            case Expr::Kind::Bracket: {
                if (std::holds_alternative<VectorField>(args[0]) && std::holds_alternative<VectorField>(args[1])) {
                    return lie_bracket(std::get<VectorField>(args[0]), std::get<VectorField>(args[1]));
                }
                if (std::holds_alternative<Diffeo>(args[0]) && std::holds_alternative<Diffeo>(args[1])) {
                    return commutator(std::get<Diffeo>(args[0]), std::get<Diffeo>(args[1]));
                }
                arity(e, "bracket needs two fields or two diffeos, got " + kind_name(args[0]) + " and " +
                             kind_name(args[1]));
            }
            case Expr::Kind::Call: return call(e, args);
        }
        return Scalar();
    }

    const SourceDocument& doc_;
    std::size_t n_;
    unsigned N_;
};

void setup_form_names(Parser& p, const SourceDocument& doc) {
    p.is_form_name = [&doc](const std::string& s) {
        if (s.size() < 2 || s[0] != 'd' || doc.find(s)) return false;
        return std::find(doc.vars.begin(), doc.vars.end(), s.substr(1)) != doc.vars.end();
    };
}

unsigned small_number(const Token& t, unsigned lo, unsigned hi, const std::string& what) {
    if (t.text.size() > 6 || std::stoul(t.text) < lo || std::stoul(t.text) > hi) {
        throw SyntaxError(t.pos, what + " must be between " + std::to_string(lo) + " and " + std::to_string(hi));
    }
    return static_cast<unsigned>(std::stoul(t.text));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class DocumentBuilder {
public:
    DocumentBuilder(const std::string& text, std::optional<unsigned> order_override)
        : p_(lex(text)), override_(order_override) {
        setup_form_names(p_, doc_);
        if (override_) doc_.order = override_;
    }

    SourceDocument build() {
        while (!p_.at(Tok::End)) {
            statement();
            if (!p_.at(Tok::End) && !p_.at(Tok::Directive)) {
                if (!p_.at(Tok::Newline)) p_.fail({Tok::Newline});
                p_.take();
            }
        }
        return std::move(doc_);
    }

private:
    void require_header(const Token& at) {
        if (!doc_.order) throw SyntaxError(at.pos, "missing 'order' header before the first declaration");
        if (doc_.vars.empty()) doc_.vars = default_var_names(2);
        body_started_ = true;
    }

    void statement() {
        if (p_.at(Tok::Newline)) return;
        if (p_.at(Tok::Directive)) {
            directive(p_.take());
            return;
        }
        if (!p_.at(Tok::Ident)) p_.fail({Tok::Ident, Tok::Newline});
        const Token head = p_.take();
        if (head.text == "order") {
            Token n = p_.expect(Tok::Number);
            if (seen_order_) throw SyntaxError(head.pos, "duplicate 'order' header");
            if (body_started_) throw SyntaxError(head.pos, "'order' must precede the declarations");
            seen_order_ = true;
            const unsigned N = small_number(n, 1, 64, "jet order");
            if (!override_) doc_.order = N;
        } else if (head.text == "vars") {
            if (!doc_.vars.empty()) throw SyntaxError(head.pos, "'vars' must appear once, before the declarations");
            VarNames names;
            for (;;) {
                Token v = p_.expect(Tok::Ident);
                if (reserved(v.text) || v.text[0] == 'd' ||
                    std::find(names.begin(), names.end(), v.text) != names.end()) {
                    throw SyntaxError(v.pos, "'" + v.text + "' cannot name a variable");
                }
                names.push_back(v.text);
                if (!p_.at(Tok::Comma)) break;
                p_.take();
            }
            if (names.size() > kMaxVars) throw ArityError(head.pos, "too many variables");
            doc_.vars = std::move(names);
        } else if (head.text == "word_bound" || head.text == "depth") {
            Token n = p_.expect(Tok::Number);
            const unsigned v = small_number(n, 1, 64, head.text);
            (head.text == "depth" ? doc_.depth_bound : doc_.word_bound) = v;
        } else if (head.text == "assert") {
            require_header(head);
            Assertion a;
            a.pos = head.pos;
            a.lhs = Evaluator(doc_, *doc_.order).eval(p_.expression());
            if (!p_.at(Tok::Eq) && !p_.at(Tok::Ne)) p_.fail({Tok::Eq, Tok::Ne});
            a.equal = p_.take().t == Tok::Eq;
            a.rhs = Evaluator(doc_, *doc_.order).eval(p_.expression());
            doc_.asserts.push_back(std::move(a));
        } else {
            declaration(head);
        }
    }

    void declaration(const Token& head) {
        p_.expect(Tok::Assign);
        require_header(head);
        const std::string& name = head.text;
        Evaluator ev(doc_, *doc_.order);
        const bool form_name = name.size() > 1 && name[0] == 'd' &&
                               std::find(doc_.vars.begin(), doc_.vars.end(), name.substr(1)) != doc_.vars.end();
        if (reserved(name) || ev.var_index(name) || form_name) {
            throw SyntaxError(head.pos, "'" + name + "' is reserved and cannot be declared");
        }
        if (doc_.find(name)) throw SyntaxError(head.pos, "'" + name + "' is already declared");
        Declaration d;
        d.name = name;
        d.pos = head.pos;
        d.expr = p_.expression();
        d.value = ev.eval(d.expr);
        doc_.decls.push_back(std::move(d));
    }

    void directive(const Token& tok) {
        const std::string body = trim(tok.text);
        const auto arrow = body.rfind("=>");
        if (arrow == std::string::npos) {
            throw SyntaxError(tok.pos, "directive needs '=> <expected status>'");
        }
        Directive d;
        d.pos = tok.pos;
        d.command = trim(body.substr(0, arrow));
        d.expected = trim(body.substr(arrow + 2));
        if (d.command.empty() || d.expected.empty()) throw SyntaxError(tok.pos, "empty directive");
        doc_.directives.push_back(std::move(d));
    }

    Parser p_;
    std::optional<unsigned> override_;
    SourceDocument doc_;
    bool seen_order_ = false;
    bool body_started_ = false;
};

}  // namespace

SourceDocument parse(const std::string& text, std::optional<unsigned> order_override) {
    return DocumentBuilder(text, order_override).build();
}

Value evaluate_expression(const SourceDocument& doc, const std::string& text) {
    Parser p(lex(text));
    setup_form_names(p, doc);
    if (!doc.order || doc.vars.empty()) {
        throw SyntaxError(Position{}, "the document declares no order");
    }
    Expr e = p.expression();
    if (!p.at(Tok::End)) {
        throw SyntaxError(p.peek().pos, "expected end of expression, found " + describe(p.peek()));
    }
    return Evaluator(doc, *doc.order).eval(e);
}

std::string print(const Value& v, const VarNames& names) {
    struct Visitor {
        const VarNames& names;
        std::string operator()(const Scalar& s) const { return s.str(); }
        std::string operator()(const MeroJet& f) const { return f.str(names); }
        std::string operator()(const VectorField& X) const { return X.str(names); }
        std::string operator()(const OneForm& w) const { return w.str(names); }
        std::string operator()(const Diffeo& f) const {
            std::string out = "(";
            for (std::size_t i = 0; i < f.n_vars(); ++i) out += (i ? ", " : "") + f[i].str(names);
            return out + (f.n_vars() == 1 ? ",)" : ")");
        }
        std::string operator()(const Group& g) const {
            std::string out = "group(";
            for (std::size_t i = 0; i < g.generators.size(); ++i) {
                out += (i ? ", " : "") + (*this)(g.generators[i]);
            }
            return out + ")";
        }
    };
    return std::visit(Visitor{names}, v);
}

std::string print(const SourceDocument& doc) {
    std::string out;
    if (doc.order) out += "order " + std::to_string(*doc.order) + "\n";
    if (!doc.vars.empty()) {
        out += "vars ";
        for (std::size_t i = 0; i < doc.vars.size(); ++i) out += (i ? ", " : "") + doc.vars[i];
        out += "\n";
    }
    if (doc.word_bound) out += "word_bound " + std::to_string(*doc.word_bound) + "\n";
    if (doc.depth_bound) out += "depth " + std::to_string(*doc.depth_bound) + "\n";
    for (const auto& d : doc.decls) out += d.name + " = " + print(d.value, doc.vars) + "\n";
    for (const auto& a : doc.asserts) {
        out += "assert " + print(a.lhs, doc.vars) + (a.equal ? " == " : " != ") + print(a.rhs, doc.vars) + "\n";
    }
    for (const auto& d : doc.directives) out += "#! " + d.command + " => " + d.expected + "\n";
    return out;
}

bool values_equal(const Value& a, const Value& b) {
    if (a.index() == b.index()) return a == b;
    const auto* sa = std::get_if<Scalar>(&a);
    const auto* sb = std::get_if<Scalar>(&b);
    const auto* fa = std::get_if<MeroJet>(&a);
    const auto* fb = std::get_if<MeroJet>(&b);
    if (sa && fb) return *fb == MeroJet::constant(fb->n_vars(), fb->order(), *sa);
    if (fa && sb) return *fa == MeroJet::constant(fa->n_vars(), fa->order(), *sb);
    return false;
}

bool same_document(const SourceDocument& a, const SourceDocument& b) {
    if (a.order != b.order || a.vars != b.vars || a.word_bound != b.word_bound || a.depth_bound != b.depth_bound) {
        return false;
    }
    if (a.decls.size() != b.decls.size() || a.asserts.size() != b.asserts.size() ||
        a.directives.size() != b.directives.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.decls.size(); ++k) {
        if (a.decls[k].name != b.decls[k].name || !(a.decls[k].value == b.decls[k].value)) return false;
    }
    for (std::size_t k = 0; k < a.asserts.size(); ++k) {
        const auto &x = a.asserts[k], &y = b.asserts[k];
        if (x.equal != y.equal || !values_equal(x.lhs, y.lhs) || !values_equal(x.rhs, y.rhs)) return false;
    }
    for (std::size_t k = 0; k < a.directives.size(); ++k) {
        if (a.directives[k].command != b.directives[k].command ||
            a.directives[k].expected != b.directives[k].expected) {
            return false;
        }
    }
    return true;
}

}  // namespace fdiff
