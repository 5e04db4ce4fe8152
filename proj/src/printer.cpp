#include "rlam/syntax.hpp"

#include <map>

namespace rlam {

namespace {

// 0 lambda/if, 1 comparison, 2 additive, 3 multiplicative, 4 unary,
// 5 application/projection, 6 atom
const std::map<std::string, std::pair<std::string, int>> binary_ops = {
    {"add", {"+", 2}}, {"sub", {"-", 2}}, {"mul", {"*", 3}}, {"lt", {"<", 1}},
    {"le", {"<=", 1}}, {"eq", {"=", 1}},  {"gt", {">", 1}},  {"ge", {">=", 1}},
};

std::string print(const Term& t, int ctx);

std::string print_params(const std::vector<Param>& params)
{
    std::string s;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        s += (i ? ", " : "") + p.name + ":" + (p.ref ? to_string(*p.ref) : to_string(p.type));
    }
    return s;
}

std::string print_annotation(const IfAnnotation& ann)
{
    std::string s;
    auto entry = [&](const char* key, const std::optional<Formula>& f) {
        if (f)
            s += std::string(s.empty() ? "" : "; ") + key + ": " + to_string(*f);
    };
    entry("guard", ann.guard_continuity);
    entry("zero", ann.guard_zero);
    entry("one", ann.guard_one);
    entry("then", ann.then_domain);
    entry("else", ann.else_domain);
    return "{" + s + "}";
}

std::string print_args(const std::vector<Term>& args)
{
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? ", " : "") + print(args[i], 0);
    return s + ")";
}

std::string print(const Term& t, int ctx)
{
    int prec = 6;
    std::string s;
    if (const auto* x = t.as<ast::Var>()) {
        s = x->name;
    } else if (const auto* x = t.as<ast::Lit>()) {
        s = format_rational(x->value);
        if (x->value < 0)
            prec = 4;
    } else if (const auto* x = t.as<ast::PrimApp>()) {
        auto op = binary_ops.find(x->prim);
        if (op != binary_ops.end() && x->args.size() == 2) {
            prec = op->second.second;
            // Comparisons do not chain; arithmetic associates to the left.
            int right = prec == 1 ? 2 : prec + 1;
            int left = prec == 1 ? 2 : prec;
            s = print(x->args[0], left) + " " + op->second.first + " " + print(x->args[1], right);
        } else if (x->prim == "neg" && x->args.size() == 1) {
            prec = 4;
            // neg(2.0) prints as -(2.0) so it is not read back as the literal -2.
            const Term& a = x->args[0];
            s = "-" + print(a, a.is<ast::Lit>() ? 7 : 5);
        } else {
            s = x->prim + print_args(x->args);
        }
    } else if (const auto* x = t.as<ast::Lam>()) {
        prec = 0;
        s = "\\" + print_params(x->params) + ". " + print(x->body, 0);
    } else if (const auto* x = t.as<ast::App>()) {
        prec = 5;
        s = print(x->fn, 5) + " ";
        if (x->args.size() == 1 && !x->args[0].is<ast::Pair>())
            s += print(x->args[0], 6);
        else if (x->args.size() == 1)
            s += "(" + print(x->args[0], 0) + ")";
        else
            s += print_args(x->args);
    } else if (const auto* x = t.as<ast::Pair>()) {
        s = "(" + print(x->left, 0) + ", " + print(x->right, 0) + ")";
    } else if (const auto* x = t.as<ast::Proj>()) {
        prec = 5;
        s = std::string(x->index == 1 ? "fst " : "snd ") + print(x->arg, 6);
    } else if (const auto* x = t.as<ast::If>()) {
        prec = 0;
        s = "if " + print(x->guard, 1);
        if (x->ann)
            s += " " + print_annotation(*x->ann);
        s += " then " + print(x->then_branch, 0) + " else " + print(x->else_branch, 0);
    }
    return prec < ctx ? "(" + s + ")" : s;
}

} // namespace

std::string pretty(const Term& t) { return print(t, 0); }

} // namespace rlam
