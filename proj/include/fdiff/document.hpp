#pragma once

#include "fdiff/error.hpp"
#include "fdiff/formal_maps.hpp"
#include "fdiff/mero_forms.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fdiff {

struct Position {
    unsigned line = 1;
    unsigned column = 1;
    std::string str() const;
    bool operator==(const Position&) const = default;
};

/// Base of the four document errors. what() reads
/// "line L, column C: <kind> error: <detail>".
class ParseError : public Error {
public:
    ParseError(const std::string& kind, Position pos, const std::string& detail);
    Position position() const { return pos_; }
    const std::string& kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    std::string kind_;
    Position pos_;
    std::string detail_;
};

/// Character outside the token alphabet, malformed number.
class LexError : public ParseError {
public:
    LexError(Position pos, const std::string& detail) : ParseError("lexical", pos, detail) {}
};

/// Unexpected token; the detail lists the expected token set.
class SyntaxError : public ParseError {
public:
    SyntaxError(Position pos, const std::string& detail) : ParseError("syntax", pos, detail) {}
};

/// Wrong number or kind of operands: a tuple whose length differs from
/// the number of variables, exp of a form, a field times a field.
class ArityError : public ParseError {
public:
    ArityError(Position pos, const std::string& detail) : ParseError("arity", pos, detail) {}
};

class UndefinedNameError : public ParseError {
public:
    UndefinedNameError(Position pos, const std::string& detail) : ParseError("undefined name", pos, detail) {}
};

struct Group {
    std::vector<Diffeo> generators;
    bool operator==(const Group&) const = default;
};

/// A document value: scalar, function (possibly a quotient), vector field,
/// diffeomorphism, one-form, or group.
using Value = std::variant<Scalar, MeroJet, VectorField, Diffeo, OneForm, Group>;

std::string kind_name(const Value& v);

/// Expression tree with source positions.
struct Expr {
    enum class Kind { Number, Name, CoordinateField, Unary, Binary, Power, Tuple, Bracket, Call };
    Kind kind = Kind::Number;
    Position pos;
    /// Number literal, name, variable of d/dvar, operator symbol, or callee.
    std::string text;
    long exponent = 0;
    std::vector<Expr> args;
};

struct Declaration {
    std::string name;
    Position pos;
    Expr expr;
    Value value;
};

/// "assert lhs == rhs" (or "!=").
struct Assertion {
    Position pos;
    bool equal = true;
    Value lhs;
    Value rhs;
};

/// "#! command line => expected status" line.
struct Directive {
    Position pos;
    std::string command;
    std::string expected;
};

struct SourceDocument {
    std::optional<unsigned> order;
    VarNames vars;
    std::optional<unsigned> word_bound;
    std::optional<unsigned> depth_bound;
    std::vector<Declaration> decls;
    std::vector<Assertion> asserts;
    std::vector<Directive> directives;

    /// Value bound to name, nullptr if absent.
    const Value* find(const std::string& name) const;
    std::size_t n_vars() const { return vars.size(); }
};

/// Equal header, names, values, assertions and directives; expression trees
/// are not compared.
bool same_document(const SourceDocument& a, const SourceDocument& b);

/// Parses and evaluates a document. order_override replaces the header
/// order; without either, a document with declarations is rejected.
/// Library errors raised while evaluating keep their type and gain the
/// position as a prefix.
SourceDocument parse(const std::string& text, std::optional<unsigned> order_override = {});

/// Evaluates one expression against the bindings of doc.
Value evaluate_expression(const SourceDocument& doc, const std::string& text);

/// Canonical text for a value; parse(print(v)) = v.
std::string print(const Value& v, const VarNames& names);
/// Header, declarations, assertions and directives in canonical form.
std::string print(const SourceDocument& doc);

/// Whether two values are equal, a scalar being equal to the constant
/// function of the same value.
bool values_equal(const Value& a, const Value& b);

}  // namespace fdiff
