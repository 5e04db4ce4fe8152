#include "rlam/autodiff.hpp"

#include "rlam/errors.hpp"
#include "rlam/semantics.hpp"
#include "rlam/subst.hpp"
#include "rlam/syntax.hpp"
#include "rlam/typing.hpp"

namespace rlam {

DualNaming::DualNaming(const std::set<std::string>& sources)
{
    std::set<std::string> taken = sources;
    for (const auto& x : sources) {
        std::string dx = "d%" + x;
        if (taken.count(dx))
            dx = fresh_name(dx, taken);
        taken.insert(dx);
        map_.emplace(x, std::move(dx));
    }
}

const std::string& DualNaming::operator()(const std::string& x) const
{
    auto it = map_.find(x);
    if (it == map_.end())
        throw AdError("no dual name for variable '" + x + "'");
    return it->second;
}

SimpleType ad_type(const SimpleType& t)
{
    switch (t.kind()) {
    case SimpleType::Kind::Real:
        return SimpleType::prod(SimpleType::real(), SimpleType::real());
    case SimpleType::Kind::Prod:
        return SimpleType::prod(ad_type(t.left()), ad_type(t.right()));
    case SimpleType::Kind::Arrow:
        return SimpleType::arrow(ad_type(t.domain()), ad_type(t.codomain()));
    }
    return t;
}

TypingContext ad_ctx(const TypingContext& ctx, const DualNaming& naming)
{
    TypingContext out;
    for (const auto& e : ctx.entries())
        out = out.extended(naming(e.name), ad_type(e.type));
    return out;
}

TypingContext ad_ctx(const TypingContext& ctx)
{
    std::set<std::string> names;
    for (const auto& e : ctx.entries())
        names.insert(e.name);
    return ad_ctx(ctx, DualNaming(names));
}

namespace {

Term transform(const Term& t, const DualNaming& naming, const PrimRegistry& prims)
{
    auto rec = [&](const Term& u) { return transform(u, naming, prims); };
    if (const auto* x = t.as<ast::Var>())
        return Term::var(naming(x->name));
    if (const auto* x = t.as<ast::Lit>())
        return Term::pair(Term::lit(x->value), Term::lit(0));
    if (const auto* x = t.as<ast::PrimApp>()) {
        const PrimFn& fn = prims.at(x->prim);
        if (fn.partials.size() != fn.arity)
            throw AdError("primitive '" + x->prim + "' has no registered partial derivatives");
        std::vector<Term> duals, primals;
        for (const auto& a : x->args) {
            duals.push_back(rec(a));
            primals.push_back(Term::proj(1, duals.back()));
        }
        Term primal = Term::prim(fn.name, primals);
        // Chain rule, summed left to right; no summands gives 0.
        std::optional<Term> tangent;
        for (std::size_t i = 0; i < fn.arity; ++i) {
            Term part = Term::prim("mul", {Term::prim(prims.canonical(fn.partials[i]), primals),
                                          Term::proj(2, duals[i])});
            tangent = tangent ? Term::prim("add", {*tangent, part}) : part;
        }
        return Term::pair(primal, tangent ? *tangent : Term::lit(0));
    }
    if (const auto* x = t.as<ast::Lam>()) {
        std::vector<Param> params;
        for (const auto& p : x->params)
            params.push_back(Param{naming(p.name), ad_type(p.type), std::nullopt});
        return Term::lam(std::move(params), rec(x->body));
    }
    if (const auto* x = t.as<ast::App>()) {
        std::vector<Term> args;
        for (const auto& a : x->args)
            args.push_back(rec(a));
        return Term::app(rec(x->fn), std::move(args));
    }
    if (const auto* x = t.as<ast::Pair>())
        return Term::pair(rec(x->left), rec(x->right));
    if (const auto* x = t.as<ast::Proj>())
        return Term::proj(x->index, rec(x->arg));
    throw AdError("conditionals cannot be differentiated: " + pretty(t));
}

} // namespace

AdResult ad_term(const Term& t, const TypingContext& ctx, const PrimRegistry& prims)
{
    std::set<std::string> names = all_names(t);
    for (const auto& e : ctx.entries())
        names.insert(e.name);
    DualNaming naming(names);
    Term out = transform(t, naming, prims);
    return {std::move(out), std::move(naming)};
}

Term ad_term(const Term& t, const DualNaming& naming, const PrimRegistry& prims)
{
    return transform(t, naming, prims);
}

Term dual_of(const std::string& x, const std::string& y) { return Term::pair(Term::var(y), Term::lit(x == y ? 1 : 0)); }

Term derive(const TypingContext& theta, const Term& t, const std::string& x, const PrimRegistry& prims)
{
    for (const auto& e : theta.entries())
        if (!e.type.is_real())
            throw AdError("derive needs a context of reals; '" + e.name + "' has type " + to_string(e.type));
    AdResult r = ad_term(t, theta, prims);
    std::map<std::string, Term> sub;
    for (const auto& e : theta.entries())
        sub.insert_or_assign(r.naming(e.name), dual_of(x, e.name));
    return Term::proj(2, substitute(r.term, sub));
}

std::vector<double> grad_at(const Term& t, const TypingContext& theta, std::span<const double> point,
                            const PrimRegistry& prims)
{
    std::size_t n = check_first_order(theta, t, prims);
    if (point.size() != n)
        throw EvalError("expected " + std::to_string(n) + " coordinate(s), got " + std::to_string(point.size()));
    SemEnv env;
    for (std::size_t i = 0; i < n; ++i)
        env.insert_or_assign(theta.entries()[i].name, Value::real(point[i]));
    std::vector<double> out;
    for (const auto& e : theta.entries())
        out.push_back(eval(env, derive(theta, t, e.name, prims), prims).as_real());
    return out;
}

} // namespace rlam
