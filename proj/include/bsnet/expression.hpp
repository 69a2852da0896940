#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bsnet/jet.hpp"

namespace bsnet {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Small arithmetic expression language for user-defined problems.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Functions: exp log sqrt sin cos abs max min pow ncdf. Constants: pi.
/// Evaluates either on doubles or on Jet2 (for exact derivatives in one variable).
class Expression {
public:
    struct Node;

    Expression() = default;
    static Expression parse(std::string_view text, std::vector<std::string> variables);

    double eval(std::span<const double> vars) const;
    Jet2 eval(std::span<const Jet2> vars) const;

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace bsnet
