#include "rlam/semantics.hpp"

#include "rlam/typing.hpp"

#include <fmt/format.h>

namespace rlam {

double DoubleModel::literal(const Rational& r) const { return to_double(r); }

Rational ExactModel::apply(const PrimFn& f, std::span<const Rational> args) const
{
    if (!f.exact)
        throw UnsupportedPrim("primitive '" + f.name + "' has no exact evaluator");
    return f.exact(args);
}

Value eval(const SemEnv& env, const Term& t, const PrimRegistry& prims)
{
    return evaluate(env, t, DoubleModel{}, prims);
}

BasicValue<Rational> eval_exact(const BasicEnv<Rational>& env, const Term& t, const PrimRegistry& prims)
{
    return evaluate(env, t, ExactModel{}, prims);
}

std::string to_string(const Value& v)
{
    if (v.is_real())
        return fmt::format("{}", v.as_real());
    if (v.is_pair())
        return "(" + to_string(v.first()) + ", " + to_string(v.second()) + ")";
    return "<function>";
}

RealFn denote_first_order(const Term& t, const TypingContext& ctx, const PrimRegistry& prims)
{
    std::size_t n = check_first_order(ctx, t, prims);
    std::vector<std::string> names;
    for (const auto& e : ctx.entries())
        names.push_back(e.name);
    return [t, names, n, &prims](std::span<const double> point) {
        if (point.size() != n)
            throw EvalError("expected " + std::to_string(n) + " argument(s), got " + std::to_string(point.size()));
        SemEnv env;
        for (std::size_t i = 0; i < n; ++i)
            env.insert_or_assign(names[i], Value::real(point[i]));
        return eval(env, t, prims).as_real();
    };
}

} // namespace rlam
