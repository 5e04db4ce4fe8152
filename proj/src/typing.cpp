#include "rlam/typing.hpp"

#include "rlam/errors.hpp"
#include "rlam/syntax.hpp"

namespace rlam {

namespace {

SimpleType check(const TypingContext& ctx, const Term& t, const PrimRegistry& prims)
{
    if (const auto* x = t.as<ast::Var>()) {
        if (const SimpleType* ty = ctx.find(x->name))
            return *ty;
        throw UnboundVariable(x->name);
    }
    if (t.is<ast::Lit>())
        return SimpleType::real();
    if (const auto* x = t.as<ast::PrimApp>()) {
        const PrimFn* fn = prims.find(x->prim);
        if (!fn)
            throw TypeError("prim", pretty(t), "unknown primitive '" + x->prim + "'");
        if (fn->arity != x->args.size())
            throw ArityMismatch(x->prim, fn->arity, x->args.size(), pretty(t));
        for (const auto& a : x->args) {
            SimpleType at = check(ctx, a, prims);
            if (!at.is_real())
                throw TypeError("prim", pretty(a),
                                "argument of primitive '" + x->prim + "' has type " + to_string(at) + ", expected R");
        }
        return SimpleType::real();
    }
    if (const auto* x = t.as<ast::Lam>()) {
        TypingContext inner = ctx;
        std::vector<SimpleType> doms;
        for (const auto& p : x->params) {
            if (p.ref && !(erase(*p.ref) == p.type))
                throw TypeError("abs", p.name, "refinement annotation of '" + p.name + "' does not erase to its type");
            inner = inner.extended(p.name, p.type);
            doms.push_back(p.type);
        }
        return SimpleType::arrow(SimpleType::tuple(doms), check(inner, x->body, prims));
    }
    if (const auto* x = t.as<ast::App>()) {
        SimpleType ft = check(ctx, x->fn, prims);
        if (!ft.is_arrow())
            throw TypeError("app", pretty(x->fn), "application of non-function of type " + to_string(ft));
        std::vector<SimpleType> args;
        for (const auto& a : x->args)
            args.push_back(check(ctx, a, prims));
        SimpleType at = SimpleType::tuple(args);
        if (!(at == ft.domain()))
            throw TypeError("app", pretty(t),
                            "argument of type " + to_string(at) + " passed to function expecting " +
                                to_string(ft.domain()));
        return ft.codomain();
    }
    if (const auto* x = t.as<ast::Pair>())
        return SimpleType::prod(check(ctx, x->left, prims), check(ctx, x->right, prims));
    if (const auto* x = t.as<ast::Proj>()) {
        SimpleType at = check(ctx, x->arg, prims);
        if (!at.is_prod())
            throw TypeError("proj", pretty(t), "projection of non-product of type " + to_string(at));
        return x->index == 1 ? at.left() : at.right();
    }
    const auto& x = *t.as<ast::If>();
    SimpleType gt = check(ctx, x.guard, prims);
    if (!gt.is_real())
        throw TypeError("if", pretty(x.guard), "guard has type " + to_string(gt) + ", expected R");
    SimpleType a = check(ctx, x.then_branch, prims);
    SimpleType b = check(ctx, x.else_branch, prims);
    if (!(a == b))
        throw TypeError("if", pretty(t), "branches have different types " + to_string(a) + " and " + to_string(b));
    return a;
}

} // namespace

SimpleType typecheck(const TypingContext& ctx, const Term& t, const PrimRegistry& prims)
{
    return check(ctx, t, prims);
}

bool check_restricted(const SimpleType& t)
{
    if (t.is_real())
        return true;
    if (t.is_prod())
        return false;
    bool seen_real = false;
    for (const auto& c : tuple_components(t.domain())) {
        if (c.is_real()) {
            seen_real = true;
        } else if (seen_real || !check_restricted(c)) {
            return false;
        }
    }
    return check_restricted(t.codomain());
}

std::size_t check_first_order(const TypingContext& ctx, const Term& t, const PrimRegistry& prims)
{
    for (const auto& e : ctx.entries())
        if (!e.type.is_real())
            throw NotFirstOrder("binding '" + e.name + "' has type " + to_string(e.type) + ", expected R");
    SimpleType ty;
    try {
        ty = typecheck(ctx, t, prims);
    } catch (const TypeError& e) {
        throw NotFirstOrder(std::string("term is ill-typed: ") + e.what());
    }
    if (!ty.is_real())
        throw NotFirstOrder("term has type " + to_string(ty) + ", expected R");
    return ctx.size();
}

} // namespace rlam
