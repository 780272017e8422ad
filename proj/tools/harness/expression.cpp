#include "harness/expression.hpp"

#include <fronttrack/types.hpp>

#include <boost/fusion/include/adapt_struct.hpp>
#include <boost/spirit/home/x3.hpp>
#include <boost/spirit/home/x3/support/ast/variant.hpp>

#include <cmath>
#include <list>
#include <vector>

namespace fronttrack::harness::ast {

namespace x3 = boost::spirit::x3;

struct signed_;
struct call;
struct chain;

struct operand : x3::variant<double, std::string, x3::forward_ast<signed_>, x3::forward_ast<call>,
                             x3::forward_ast<chain>> {
    using base_type::base_type;
    using base_type::operator=;
};

struct signed_ {
    char sign = '+';
    operand value;
};

struct link {
    char op = '+';
    operand value;
};

struct chain {
    operand first;
    std::list<link> rest;
};

struct call {
    std::string name;
    std::vector<chain> args;
};

} // namespace fronttrack::harness::ast

BOOST_FUSION_ADAPT_STRUCT(fronttrack::harness::ast::signed_, sign, value)
BOOST_FUSION_ADAPT_STRUCT(fronttrack::harness::ast::link, op, value)
BOOST_FUSION_ADAPT_STRUCT(fronttrack::harness::ast::chain, first, rest)
BOOST_FUSION_ADAPT_STRUCT(fronttrack::harness::ast::call, name, args)

namespace fronttrack::harness {

namespace grammar {

namespace x3 = boost::spirit::x3;

x3::rule<class sum_, ast::chain> const sum = "sum";
x3::rule<class product_, ast::chain> const product = "product";
x3::rule<class power_, ast::chain> const power = "power";
x3::rule<class unary_, ast::operand> const unary = "unary";
x3::rule<class negated_, ast::signed_> const negated = "negated";
x3::rule<class primary_, ast::operand> const primary = "primary";
x3::rule<class call_, ast::call> const call = "call";
x3::rule<class name_, std::string> const name = "name";

auto const name_def = x3::lexeme[x3::alpha >> *(x3::alnum | x3::char_('_'))];
// Sign binds looser than ^, so -x^2 = -(x^2) and 2^-1 = 0.5.
auto const sum_def = product >> *(x3::char_("+-") >> product);
auto const product_def = unary >> *(x3::char_("*/") >> unary);
auto const unary_def = negated | power;
auto const negated_def = x3::char_("+-") >> unary;
auto const power_def = primary >> *(x3::char_('^') >> unary);
auto const call_def = name >> '(' >> (sum % ',') >> ')';
auto const primary_def = x3::double_ | call | name | ('(' >> sum >> ')');

BOOST_SPIRIT_DEFINE(sum, product, power, unary, negated, primary, call, name)

} // namespace grammar

namespace {

double call_function(const std::string& f, const std::vector<double>& a) {
    auto need = [&](std::size_t n) {
        if (a.size() != n)
            throw Error(ErrorCode::InvalidArgument, f + " takes " + std::to_string(n) + " argument(s)");
    };
    if (f == "min" || f == "max") {
        need(2);
        return f == "min" ? std::min(a[0], a[1]) : std::max(a[0], a[1]);
    }
    if (f == "clamp") {
        need(3);
        return std::clamp(a[0], a[1], a[2]);
    }
    need(1);
    const double v = a[0];
    if (f == "sin") return std::sin(v);
    if (f == "cos") return std::cos(v);
    if (f == "tan") return std::tan(v);
    if (f == "exp") return std::exp(v);
    if (f == "log") return std::log(v);
    if (f == "sqrt") return std::sqrt(v);
    if (f == "abs") return std::abs(v);
    if (f == "tanh") return std::tanh(v);
    if (f == "sign") return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    if (f == "step") return v >= 0.0 ? 1.0 : 0.0;
    throw Error(ErrorCode::InvalidArgument, "unknown function '" + f + "'");
}

struct Evaluator {
    double x;

    double operator()(double v) const { return v; }
    double operator()(const std::string& n) const {
        if (n == "x") return x;
        if (n == "pi") return M_PI;
        throw Error(ErrorCode::InvalidArgument, "unknown name '" + n + "'");
    }
    double operator()(const ast::signed_& s) const {
        const double v = boost::apply_visitor(*this, s.value);
        return s.sign == '-' ? -v : v;
    }
    double operator()(const ast::call& c) const {
        std::vector<double> args;
        for (const auto& a : c.args) args.push_back((*this)(a));
        return call_function(c.name, args);
    }
    double operator()(const ast::chain& c) const {
        if (!c.rest.empty() && c.rest.front().op == '^') {
            // right-associative
            std::vector<double> vals{boost::apply_visitor(*this, c.first)};
            for (const auto& l : c.rest) vals.push_back(boost::apply_visitor(*this, l.value));
            double r = vals.back();
            for (std::size_t k = vals.size() - 1; k-- > 0;) r = std::pow(vals[k], r);
            return r;
        }
        double v = boost::apply_visitor(*this, c.first);
        for (const auto& l : c.rest) {
            const double w = boost::apply_visitor(*this, l.value);
            switch (l.op) {
            case '+': v += w; break;
            case '-': v -= w; break;
            case '*': v *= w; break;
            case '/': v /= w; break;
            }
        }
        return v;
    }
};

} // namespace

struct Expression::Node {
    ast::chain tree;
};

Expression Expression::parse(const std::string& text) {
    namespace x3 = boost::spirit::x3;
    auto node = std::make_shared<Node>();
    auto it = text.begin();
    const bool ok = x3::phrase_parse(it, text.end(), grammar::sum, x3::space, node->tree);
    if (!ok || it != text.end())
        throw Error(ErrorCode::InvalidArgument,
                    "cannot parse expression '" + text + "' near position " + std::to_string(it - text.begin()));
    Expression e;
    e.text_ = text;
    e.root_ = node;
    (void)e(0.0);  // surfaces unknown names and arities now
    return e;
}

double Expression::operator()(double x) const { return Evaluator{x}(root_->tree); }

} // namespace fronttrack::harness
