#ifndef RLAM_SEMANTICS_HPP
#define RLAM_SEMANTICS_HPP

#include "rlam/errors.hpp"
#include "rlam/registry.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

#include <concepts>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rlam {

// Semantic values over a scalar domain S: reals, pairs and functions.
// Multi-argument functions take their arguments as a right-nested tuple.
template <class S>
class BasicValue {
public:
    using Fn = std::function<BasicValue(const BasicValue&)>;

    static BasicValue real(S x) { return BasicValue(Rep(std::in_place_index<0>, std::move(x))); }
    static BasicValue pair(BasicValue a, BasicValue b)
    {
        return BasicValue(Rep(std::in_place_index<1>, std::make_shared<const std::pair<BasicValue, BasicValue>>(
                                                          std::move(a), std::move(b))));
    }
    static BasicValue fun(Fn f)
    {
        return BasicValue(Rep(std::in_place_index<2>, std::make_shared<const Fn>(std::move(f))));
    }
    static BasicValue tuple(std::vector<BasicValue> parts)
    {
        BasicValue acc = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;)
            acc = pair(parts[i], acc);
        return acc;
    }

    bool is_real() const { return rep_.index() == 0; }
    bool is_pair() const { return rep_.index() == 1; }
    bool is_fun() const { return rep_.index() == 2; }

    const S& as_real() const
    {
        if (!is_real())
            throw EvalError("expected a real value");
        return std::get<0>(rep_);
    }
    const BasicValue& first() const { return pair_rep().first; }
    const BasicValue& second() const { return pair_rep().second; }
    BasicValue operator()(const BasicValue& arg) const
    {
        if (!is_fun())
            throw EvalError("application of a non-function value");
        return (*std::get<2>(rep_))(arg);
    }

private:
    using Rep = std::variant<S, std::shared_ptr<const std::pair<BasicValue, BasicValue>>, std::shared_ptr<const Fn>>;
    explicit BasicValue(Rep rep) : rep_(std::move(rep)) {}

    const std::pair<BasicValue, BasicValue>& pair_rep() const
    {
        if (!is_pair())
            throw EvalError("projection of a non-pair value");
        return *std::get<1>(rep_);
    }

    Rep rep_;
};

using Value = BasicValue<double>;
template <class S>
using BasicEnv = std::map<std::string, BasicValue<S>>;
using SemEnv = BasicEnv<double>;

// How literals, prims and guards are interpreted for a scalar type.
//   S literal(const Rational&) const;
//   S apply(const PrimFn&, std::span<const S>) const;
//   bool is_zero(const S&) const;
template <class M>
concept ScalarModel = requires(const M& m, const Rational& r, const PrimFn& f) {
    typename M::Scalar;
    { m.literal(r) } -> std::convertible_to<typename M::Scalar>;
    { m.apply(f, std::span<const typename M::Scalar>{}) } -> std::convertible_to<typename M::Scalar>;
    { m.is_zero(std::declval<const typename M::Scalar&>()) } -> std::convertible_to<bool>;
};

struct DoubleModel {
    using Scalar = double;
    double literal(const Rational& r) const;
    double apply(const PrimFn& f, std::span<const double> args) const { return f.eval(args); }
    bool is_zero(double x) const { return x == 0.0; }
};

struct ExactModel {
    using Scalar = Rational;
    Rational literal(const Rational& r) const { return r; }
    Rational apply(const PrimFn& f, std::span<const Rational> args) const;
    bool is_zero(const Rational& x) const { return x == 0; }
};

// Environment-passing evaluator, generic in the scalar model. The conditional
// takes the else branch exactly when the guard is zero. Function values keep a
// reference to `prims`, which must outlive them.
template <ScalarModel M>
BasicValue<typename M::Scalar> evaluate(const BasicEnv<typename M::Scalar>& env, const Term& t, const M& model,
                                        const PrimRegistry& prims = PrimRegistry::standard())
{
    using V = BasicValue<typename M::Scalar>;
    if (const auto* x = t.as<ast::Var>()) {
        auto it = env.find(x->name);
        if (it == env.end())
            throw EvalError("unbound variable '" + x->name + "'");
        return it->second;
    }
    if (const auto* x = t.as<ast::Lit>())
        return V::real(model.literal(x->value));
    if (const auto* x = t.as<ast::PrimApp>()) {
        const PrimFn& fn = prims.at(x->prim);
        if (fn.arity != x->args.size())
            throw EvalError("arity mismatch for primitive '" + x->prim + "'");
        std::vector<typename M::Scalar> args;
        args.reserve(x->args.size());
        for (const auto& a : x->args)
            args.push_back(evaluate(env, a, model, prims).as_real());
        return V::real(model.apply(fn, args));
    }
    if (const auto* x = t.as<ast::Lam>()) {
        const ast::Lam* lam = x;
        auto captured = std::make_shared<const BasicEnv<typename M::Scalar>>(env);
        Term keep = t;
        return V::fun([lam, captured, keep, model, &prims](const V& arg) {
            BasicEnv<typename M::Scalar> inner = *captured;
            const V* rest = &arg;
            for (std::size_t i = 0; i < lam->params.size(); ++i) {
                if (i + 1 == lam->params.size()) {
                    inner.insert_or_assign(lam->params[i].name, *rest);
                } else {
                    inner.insert_or_assign(lam->params[i].name, rest->first());
                    rest = &rest->second();
                }
            }
            return evaluate(inner, lam->body, model, prims);
        });
    }
    if (const auto* x = t.as<ast::App>()) {
        V fn = evaluate(env, x->fn, model, prims);
        std::vector<V> args;
        args.reserve(x->args.size());
        for (const auto& a : x->args)
            args.push_back(evaluate(env, a, model, prims));
        return fn(V::tuple(std::move(args)));
    }
    if (const auto* x = t.as<ast::Pair>())
        return V::pair(evaluate(env, x->left, model, prims), evaluate(env, x->right, model, prims));
    if (const auto* x = t.as<ast::Proj>()) {
        V p = evaluate(env, x->arg, model, prims);
        return x->index == 1 ? p.first() : p.second();
    }
    const auto& x = *t.as<ast::If>();
    V g = evaluate(env, x.guard, model, prims);
    return model.is_zero(g.as_real()) ? evaluate(env, x.else_branch, model, prims)
                                      : evaluate(env, x.then_branch, model, prims);
}

Value eval(const SemEnv& env, const Term& t, const PrimRegistry& prims = PrimRegistry::standard());
BasicValue<Rational> eval_exact(const BasicEnv<Rational>& env, const Term& t,
                                const PrimRegistry& prims = PrimRegistry::standard());

// Whether v has the shape of the simple type t.
template <class S>
bool matches_shape(const BasicValue<S>& v, const SimpleType& t)
{
    switch (t.kind()) {
    case SimpleType::Kind::Real:
        return v.is_real();
    case SimpleType::Kind::Prod:
        return v.is_pair() && matches_shape(v.first(), t.left()) && matches_shape(v.second(), t.right());
    case SimpleType::Kind::Arrow:
        return v.is_fun();
    }
    return false;
}

std::string to_string(const Value& v);

using RealFn = std::function<double(std::span<const double>)>;

// (a1..an) |-> eval({xi -> ai}, t). Throws NotFirstOrder via check_first_order.
RealFn denote_first_order(const Term& t, const TypingContext& ctx, const PrimRegistry& prims = PrimRegistry::standard());

} // namespace rlam

#endif
