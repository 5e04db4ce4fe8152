#include "rlam/term.hpp"

#include <stdexcept>

namespace rlam {

Term Term::var(std::string name)
{
    if (name.empty())
        throw std::invalid_argument("empty variable name");
    return Term(std::make_shared<const TermNode>(TermNode{ast::Var{std::move(name)}}));
}

Term Term::lit(Rational value)
{
    value.canonicalize();
    return Term(std::make_shared<const TermNode>(TermNode{ast::Lit{std::move(value)}}));
}

Term Term::prim(std::string name, std::vector<Term> args)
{
    return Term(std::make_shared<const TermNode>(TermNode{ast::PrimApp{std::move(name), std::move(args)}}));
}

Term Term::lam(std::vector<Param> params, Term body)
{
    if (params.empty())
        throw std::invalid_argument("lambda needs at least one parameter");
    return Term(std::make_shared<const TermNode>(TermNode{ast::Lam{std::move(params), std::move(body)}}));
}

Term Term::app(Term fn, std::vector<Term> args)
{
    if (args.empty())
        throw std::invalid_argument("application needs at least one argument");
    return Term(std::make_shared<const TermNode>(TermNode{ast::App{std::move(fn), std::move(args)}}));
}

Term Term::pair(Term left, Term right)
{
    return Term(std::make_shared<const TermNode>(TermNode{ast::Pair{std::move(left), std::move(right)}}));
}

Term Term::proj(int index, Term arg)
{
    if (index != 1 && index != 2)
        throw std::invalid_argument("projection index must be 1 or 2");
    return Term(std::make_shared<const TermNode>(TermNode{ast::Proj{index, std::move(arg)}}));
}

Term Term::ite(Term guard, Term then_branch, Term else_branch, std::optional<IfAnnotation> ann)
{
    if (ann && ann->empty())
        ann.reset();
    return Term(std::make_shared<const TermNode>(
        TermNode{ast::If{std::move(guard), std::move(then_branch), std::move(else_branch), std::move(ann)}}));
}

bool operator==(const Param& a, const Param& b)
{
    if (a.name != b.name || !(a.type == b.type) || a.ref.has_value() != b.ref.has_value())
        return false;
    return !a.ref || ref_equiv(*a.ref, *b.ref);
}

bool operator==(const IfAnnotation& a, const IfAnnotation& b)
{
    return a.guard_continuity == b.guard_continuity && a.guard_zero == b.guard_zero && a.guard_one == b.guard_one &&
           a.then_domain == b.then_domain && a.else_domain == b.else_domain;
}

namespace {

struct EqVisitor {
    const TermNode& other;

    bool operator()(const ast::Var& x) const { return std::get<ast::Var>(other.v).name == x.name; }
    bool operator()(const ast::Lit& x) const { return std::get<ast::Lit>(other.v).value == x.value; }
    bool operator()(const ast::PrimApp& x) const
    {
        const auto& y = std::get<ast::PrimApp>(other.v);
        return x.prim == y.prim && x.args == y.args;
    }
    bool operator()(const ast::Lam& x) const
    {
        const auto& y = std::get<ast::Lam>(other.v);
        return x.params == y.params && x.body == y.body;
    }
    bool operator()(const ast::App& x) const
    {
        const auto& y = std::get<ast::App>(other.v);
        return x.fn == y.fn && x.args == y.args;
    }
    bool operator()(const ast::Pair& x) const
    {
        const auto& y = std::get<ast::Pair>(other.v);
        return x.left == y.left && x.right == y.right;
    }
    bool operator()(const ast::Proj& x) const
    {
        const auto& y = std::get<ast::Proj>(other.v);
        return x.index == y.index && x.arg == y.arg;
    }
    bool operator()(const ast::If& x) const
    {
        const auto& y = std::get<ast::If>(other.v);
        return x.guard == y.guard && x.then_branch == y.then_branch && x.else_branch == y.else_branch &&
               x.ann == y.ann;
    }
};

} // namespace

bool operator==(const Term& a, const Term& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.node_->v.index() != b.node_->v.index())
        return false;
    return std::visit(EqVisitor{*b.node_}, a.node_->v);
}

} // namespace rlam
