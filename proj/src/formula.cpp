#include "rlam/formula.hpp"

#include <stdexcept>
#include <variant>

namespace rlam {

struct Expr::Node {
    Kind kind;
    std::string name;
    Rational value;
    std::vector<Expr> args;
};

Expr Expr::var(std::string name)
{
    return Expr(std::make_shared<const Node>(Node{Kind::Var, std::move(name), 0, {}}));
}

Expr Expr::constant(Rational value)
{
    return Expr(std::make_shared<const Node>(Node{Kind::Const, {}, std::move(value), {}}));
}

Expr Expr::app(std::string fn, std::vector<Expr> args)
{
    return Expr(std::make_shared<const Node>(Node{Kind::App, std::move(fn), 0, std::move(args)}));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const std::string& Expr::name() const { return node_->name; }
const Rational& Expr::value() const { return node_->value; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Expr::Kind::Var:
        return a.name() == b.name();
    case Expr::Kind::Const:
        return a.value() == b.value();
    case Expr::Kind::App:
        return a.name() == b.name() && a.args() == b.args();
    }
    return false;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::app("add", {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::app("sub", {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::app("mul", {a, b}); }
Expr operator-(const Expr& a) { return Expr::app("neg", {a}); }

struct Formula::Node {
    Kind kind;
    std::vector<Expr> exprs;
    std::vector<Formula> subs;
};

Formula Formula::top()
{
    static const Formula t(std::make_shared<const Node>(Node{Kind::Top, {}, {}}));
    return t;
}

Formula Formula::leq(Expr lhs, Expr rhs)
{
    return Formula(std::make_shared<const Node>(Node{Kind::Leq, {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::conj(Formula a, Formula b)
{
    return Formula(std::make_shared<const Node>(Node{Kind::And, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::negate(Formula a)
{
    return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {std::move(a)}}));
}

Formula Formula::bottom() { return negate(top()); }
Formula Formula::lt(Expr lhs, Expr rhs) { return negate(leq(std::move(rhs), std::move(lhs))); }
Formula Formula::eq(Expr lhs, Expr rhs) { return conj(leq(lhs, rhs), leq(rhs, lhs)); }
Formula Formula::geq(Expr lhs, Expr rhs) { return leq(std::move(rhs), std::move(lhs)); }
Formula Formula::gt(Expr lhs, Expr rhs) { return negate(leq(std::move(lhs), std::move(rhs))); }
Formula Formula::disj(Formula a, Formula b) { return negate(conj(negate(std::move(a)), negate(std::move(b)))); }
Formula Formula::implies(Formula a, Formula b) { return disj(negate(std::move(a)), std::move(b)); }

Formula Formula::conj_all(const std::vector<Formula>& parts)
{
    std::optional<Formula> acc;
    for (const auto& p : parts) {
        if (p.is_top())
            continue;
        acc = acc ? conj(*acc, p) : p;
    }
    return acc ? *acc : top();
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Expr& Formula::lhs() const { return node_->exprs.at(0); }
const Expr& Formula::rhs() const { return node_->exprs.at(1); }
const Formula& Formula::left() const { return node_->subs.at(0); }
const Formula& Formula::right() const { return node_->subs.at(1); }
const Formula& Formula::operand() const { return node_->subs.at(0); }

bool operator==(const Formula& a, const Formula& b)
{
    if (a.node_ == b.node_)
        return true;
    return a.kind() == b.kind() && a.node_->exprs == b.node_->exprs && a.node_->subs == b.node_->subs;
}

namespace {

void collect(const Expr& e, std::set<std::string>& out)
{
    switch (e.kind()) {
    case Expr::Kind::Var:
        out.insert(e.name());
        break;
    case Expr::Kind::Const:
        break;
    case Expr::Kind::App:
        for (const auto& a : e.args())
            collect(a, out);
        break;
    }
}

void collect(const Formula& f, std::set<std::string>& out)
{
    switch (f.kind()) {
    case Formula::Kind::Top:
        break;
    case Formula::Kind::Leq:
        collect(f.lhs(), out);
        collect(f.rhs(), out);
        break;
    case Formula::Kind::And:
        collect(f.left(), out);
        collect(f.right(), out);
        break;
    case Formula::Kind::Not:
        collect(f.operand(), out);
        break;
    }
}

} // namespace

std::set<std::string> vars(const Expr& e)
{
    std::set<std::string> out;
    collect(e, out);
    return out;
}

std::set<std::string> vars(const Formula& f)
{
    std::set<std::string> out;
    collect(f, out);
    return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& sub)
{
    switch (e.kind()) {
    case Expr::Kind::Var:
        if (auto it = sub.find(e.name()); it != sub.end())
            return it->second;
        return e;
    case Expr::Kind::Const:
        return e;
    case Expr::Kind::App: {
        std::vector<Expr> args;
        args.reserve(e.args().size());
        for (const auto& a : e.args())
            args.push_back(substitute(a, sub));
        return Expr::app(e.name(), std::move(args));
    }
    }
    return e;
}

Formula substitute(const Formula& f, const std::map<std::string, Expr>& sub)
{
    if (sub.empty())
        return f;
    switch (f.kind()) {
    case Formula::Kind::Top:
        return f;
    case Formula::Kind::Leq:
        return Formula::leq(substitute(f.lhs(), sub), substitute(f.rhs(), sub));
    case Formula::Kind::And:
        return Formula::conj(substitute(f.left(), sub), substitute(f.right(), sub));
    case Formula::Kind::Not:
        return Formula::negate(substitute(f.operand(), sub));
    }
    return f;
}

Formula rename(const Formula& f, const std::map<std::string, std::string>& renaming)
{
    std::map<std::string, Expr> sub;
    for (const auto& [from, to] : renaming)
        if (from != to)
            sub.emplace(from, Expr::var(to));
    return substitute(f, sub);
}

std::vector<Formula> conjuncts(const Formula& f)
{
    std::vector<Formula> out;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (g.kind() == Formula::Kind::And) {
            stack.push_back(g.right());
            stack.push_back(g.left());
        } else if (!g.is_top()) {
            out.push_back(g);
        }
    }
    return out;
}

namespace {

// Expression precedence: 1 additive, 2 multiplicative, 3 unary, 4 atom.
int expr_prec(const Expr& e)
{
    if (e.is_const())
        return e.value() < 0 ? 3 : 4;
    if (!e.is_app())
        return 4;
    if ((e.name() == "add" || e.name() == "sub") && e.args().size() == 2)
        return 1;
    if (e.name() == "mul" && e.args().size() == 2)
        return 2;
    if (e.name() == "neg" && e.args().size() == 1)
        return 3;
    return 4;
}

std::string print_expr(const Expr& e, int ctx)
{
    std::string s;
    int prec = expr_prec(e);
    switch (e.kind()) {
    case Expr::Kind::Var:
        s = e.name();
        break;
    case Expr::Kind::Const:
        s = format_rational(e.value());
        break;
    case Expr::Kind::App:
        if (prec == 1 || prec == 2) {
            const char* op = e.name() == "add" ? " + " : e.name() == "sub" ? " - " : " * ";
            s = print_expr(e.args()[0], prec) + op + print_expr(e.args()[1], prec + 1);
        } else if (prec == 3) {
            const Expr& arg = e.args()[0];
            // "-(2.0)" keeps neg(2) distinct from the literal -2.
            s = "-" + print_expr(arg, arg.is_const() ? 5 : 4);
        } else {
            s = e.name() + "(";
            for (std::size_t i = 0; i < e.args().size(); ++i)
                s += (i ? ", " : "") + print_expr(e.args()[i], 0);
            s += ")";
        }
        break;
    }
    return prec < ctx ? "(" + s + ")" : s;
}

bool is_leq(const Formula& f) { return f.kind() == Formula::Kind::Leq; }
bool is_not(const Formula& f) { return f.kind() == Formula::Kind::Not; }

// Formula precedence: 0 =>, 1 \/, 2 /\, 3 ~, 4 atom.
std::string print_formula(const Formula& f, int ctx)
{
    std::string s;
    int prec = 4;
    switch (f.kind()) {
    case Formula::Kind::Top:
        s = "T";
        break;
    case Formula::Kind::Leq:
        s = print_expr(f.lhs(), 0) + " <= " + print_expr(f.rhs(), 0);
        break;
    case Formula::Kind::And: {
        const Formula& l = f.left();
        const Formula& r = f.right();
        if (is_leq(l) && is_leq(r) && l.lhs() == r.rhs() && l.rhs() == r.lhs()) {
            s = print_expr(l.lhs(), 0) + " = " + print_expr(l.rhs(), 0);
        } else {
            prec = 2;
            // The right operand of /\ is printed one level tighter so that
            // re-parsing (right-nested) rebuilds the same tree.
            s = print_formula(l, 3) + " /\\ " + print_formula(r, 2);
        }
        break;
    }
    case Formula::Kind::Not: {
        const Formula& g = f.operand();
        if (is_leq(g)) {
            s = print_expr(g.rhs(), 0) + " < " + print_expr(g.lhs(), 0);
        } else if (g.kind() == Formula::Kind::And && is_not(g.left()) && is_not(g.right())) {
            prec = 1;
            const Formula& a = g.left().operand();
            const Formula& b = g.right().operand();
            s = print_formula(a, 2) + " \\/ " + print_formula(b, 1);
        } else {
            prec = 3;
            s = "~" + print_formula(g, 5);
        }
        break;
    }
    }
    return prec < ctx ? "(" + s + ")" : s;
}

} // namespace

std::string to_string(const Expr& e) { return print_expr(e, 0); }
std::string to_string(const Formula& f) { return print_formula(f, 0); }

} // namespace rlam
