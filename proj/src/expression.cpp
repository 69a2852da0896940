#include "bsnet/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "bsnet/special_fn.hpp"

namespace bsnet {

enum class Op { number, variable, neg, add, sub, mul, div, pow, call };
enum class Fn { exp, log, sqrt, sin, cos, abs, max, min, pow, ncdf };

struct Expression::Node {
    Op op = Op::number;
    double number = 0.0;
    std::size_t var = 0;
    Fn fn = Fn::exp;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct FnInfo {
    const char* name;
    Fn fn;
    std::size_t arity;
};

constexpr FnInfo kFunctions[] = {
    {"exp", Fn::exp, 1}, {"log", Fn::log, 1}, {"sqrt", Fn::sqrt, 1}, {"sin", Fn::sin, 1},
    {"cos", Fn::cos, 1}, {"abs", Fn::abs, 1}, {"max", Fn::max, 2},   {"min", Fn::min, 2},
    {"pow", Fn::pow, 2}, {"ncdf", Fn::ncdf, 1},
};

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression '" + std::string(s_) + "': " + msg + " at column " +
                         std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make(Op op, std::vector<NodePtr> args) {
        auto n = std::make_shared<Expression::Node>();
        n->op = op;
        n->args = std::move(args);
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::add, {lhs, term()});
            else if (accept('-')) lhs = make(Op::sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Op::div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Op::pow, {base, unary()});
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        double value = 0.0;
        const char* first = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), value);
        if (ec != std::errc()) fail("bad number");
        pos_ += static_cast<std::size_t>(ptr - first);
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::number;
        n->number = value;
        return n;
    }

    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string id(s_.substr(start, pos_ - start));

        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            const FnInfo* info = nullptr;
            for (const auto& f : kFunctions)
                if (id == f.name) info = &f;
            if (!info) fail("unknown function '" + id + "'");
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::call;
            n->fn = info->fn;
            n->args.push_back(expr());
            while (accept(',')) n->args.push_back(expr());
            if (!accept(')')) fail("expected ')'");
            if (n->args.size() != info->arity)
                fail("function '" + id + "' takes " + std::to_string(info->arity) + " arguments");
            return n;
        }
        auto n = std::make_shared<Expression::Node>();
        if (id == "pi") {
            n->op = Op::number;
            n->number = std::numbers::pi;
            return n;
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == id) {
                n->op = Op::variable;
                n->var = i;
                return n;
            }
        }
        fail("unknown variable '" + id + "'");
    }
};

double ncdf(double x) { return special::normal_cdf(x); }
Jet2 ncdf(const Jet2& a) {
    const double phi = std::exp(-0.5 * a.v * a.v) / std::sqrt(2.0 * std::numbers::pi);
    return compose(a, special::normal_cdf(a.v), phi, -a.v * phi);
}

template <class T>
T evaluate(const Expression::Node& n, std::span<const T> vars) {
    using std::abs, std::cos, std::exp, std::log, std::max, std::min, std::pow, std::sin,
        std::sqrt;
    auto arg = [&](std::size_t i) { return evaluate<T>(*n.args[i], vars); };
    switch (n.op) {
    case Op::number: return T(n.number);
    case Op::variable: return vars[n.var];
    case Op::neg: return -arg(0);
    case Op::add: return arg(0) + arg(1);
    case Op::sub: return arg(0) - arg(1);
    case Op::mul: return arg(0) * arg(1);
    case Op::div: return arg(0) / arg(1);
    case Op::pow: return pow(arg(0), arg(1));
    case Op::call:
        switch (n.fn) {
        case Fn::exp: return exp(arg(0));
        case Fn::log: return log(arg(0));
        case Fn::sqrt: return sqrt(arg(0));
        case Fn::sin: return sin(arg(0));
        case Fn::cos: return cos(arg(0));
        case Fn::abs: return abs(arg(0));
        case Fn::max: return max(arg(0), arg(1));
        case Fn::min: return min(arg(0), arg(1));
        case Fn::pow: return pow(arg(0), arg(1));
        case Fn::ncdf: return ncdf(arg(0));
        }
    }
    return T(0.0);
}

} // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
    Expression e;
    e.text_ = std::string(text);
    e.root_ = Parser(text, variables).parse();
    return e;
}

double Expression::eval(std::span<const double> vars) const {
    return evaluate<double>(*root_, vars);
}

Jet2 Expression::eval(std::span<const Jet2> vars) const { return evaluate<Jet2>(*root_, vars); }

} // namespace bsnet
