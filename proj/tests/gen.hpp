#ifndef RLAM_TESTS_GEN_HPP
#define RLAM_TESTS_GEN_HPP

#include "rlam/rational.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rlam::gen {

struct Options {
    std::vector<std::string> unary{"neg", "sin", "cos"};
    std::vector<std::string> binary{"add", "sub", "mul"};
    bool higher_order = true; // lambdas, applications, pairs and projections
    bool conditionals = false;
    int type_depth = 2;
    int max_literal = 4; // literals are p/q with |p| <= max_literal, q in {1, 2, 4}
};

// Type-directed generator of well-typed terms. Binder names are unique across
// one generator's lifetime.
class TermGen {
public:
    TermGen(std::uint64_t seed, Options opt = {}) : rng_(seed), opt_(std::move(opt)) {}

    std::mt19937_64& rng() { return rng_; }

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    SimpleType type(int depth)
    {
        if (depth <= 0 || chance(0.5))
            return SimpleType::real();
        if (chance(0.5))
            return SimpleType::prod(type(depth - 1), type(depth - 1));
        return SimpleType::arrow(type(depth - 1), type(depth - 1));
    }

    Rational literal()
    {
        static const int dens[] = {1, 2, 4};
        int p = std::uniform_int_distribution<int>(-opt_.max_literal, opt_.max_literal)(rng_);
        Rational q(p, dens[below(3)]);
        q.canonicalize();
        return q;
    }

    std::string fresh() { return "v" + std::to_string(counter_++); }

    // n real variables x0..x(n-1).
    static TypingContext real_context(std::size_t n)
    {
        TypingContext ctx;
        for (std::size_t i = 0; i < n; ++i)
            ctx = ctx.extended("x" + std::to_string(i), SimpleType::real());
        return ctx;
    }

    TypingContext context(std::size_t n)
    {
        TypingContext ctx;
        for (std::size_t i = 0; i < n; ++i)
            ctx = ctx.extended("x" + std::to_string(i), opt_.higher_order ? type(opt_.type_depth) : SimpleType::real());
        return ctx;
    }

    Term term(const TypingContext& ctx, const SimpleType& t, int depth)
    {
        std::vector<std::string> vars;
        for (const auto& e : ctx.entries())
            if (e.type == t)
                vars.push_back(e.name);
        if (!vars.empty() && (depth <= 0 || chance(0.25)))
            return Term::var(vars[below(static_cast<int>(vars.size()))]);
        if (depth <= 0)
            return leaf(ctx, t);
        switch (t.kind()) {
        case SimpleType::Kind::Real:
            return real_term(ctx, depth);
        case SimpleType::Kind::Prod:
            if (opt_.higher_order && chance(0.3))
                return eliminate(ctx, t, depth);
            return Term::pair(term(ctx, t.left(), depth - 1), term(ctx, t.right(), depth - 1));
        case SimpleType::Kind::Arrow:
            if (opt_.higher_order && chance(0.2))
                return eliminate(ctx, t, depth);
            return lambda(ctx, t, depth);
        }
        return leaf(ctx, t);
    }

private:
    Term leaf(const TypingContext& ctx, const SimpleType& t)
    {
        switch (t.kind()) {
        case SimpleType::Kind::Real:
            return Term::lit(literal());
        case SimpleType::Kind::Prod:
            return Term::pair(term(ctx, t.left(), 0), term(ctx, t.right(), 0));
        case SimpleType::Kind::Arrow:
            return lambda(ctx, t, 0);
        }
        return Term::lit(0);
    }

    Term lambda(const TypingContext& ctx, const SimpleType& t, int depth)
    {
        std::vector<SimpleType> comps = tuple_components(t.domain());
        std::vector<Param> params;
        TypingContext inner = ctx;
        if (comps.size() > 1 && chance(0.5)) {
            for (const auto& c : comps) {
                params.push_back({fresh(), c, {}});
                inner = inner.extended(params.back().name, c);
            }
        } else {
            params.push_back({fresh(), t.domain(), {}});
            inner = inner.extended(params.back().name, t.domain());
        }
        return Term::lam(std::move(params), term(inner, t.codomain(), depth - 1));
    }

    // A term of type t built by application or projection.
    Term eliminate(const TypingContext& ctx, const SimpleType& t, int depth)
    {
        if (chance(0.5)) {
            SimpleType other = type(1);
            bool first = chance(0.5);
            SimpleType p = first ? SimpleType::prod(t, other) : SimpleType::prod(other, t);
            return Term::proj(first ? 1 : 2, term(ctx, p, depth - 1));
        }
        SimpleType arg = type(1);
        Term fn = term(ctx, SimpleType::arrow(arg, t), depth - 1);
        std::vector<SimpleType> comps = tuple_components(arg);
        std::vector<Term> args;
        if (comps.size() > 1 && chance(0.5)) {
            for (const auto& c : comps)
                args.push_back(term(ctx, c, depth - 1));
        } else {
            args.push_back(term(ctx, arg, depth - 1));
        }
        return Term::app(std::move(fn), std::move(args));
    }

    Term real_term(const TypingContext& ctx, int depth)
    {
        const SimpleType r = SimpleType::real();
        for (;;) {
            switch (below(7)) {
            case 0:
                return Term::lit(literal());
            case 1:
                if (opt_.unary.empty())
                    break;
                return Term::prim(opt_.unary[below(static_cast<int>(opt_.unary.size()))], {term(ctx, r, depth - 1)});
            case 2:
            case 3:
                if (opt_.binary.empty())
                    break;
                return Term::prim(opt_.binary[below(static_cast<int>(opt_.binary.size()))],
                                  {term(ctx, r, depth - 1), term(ctx, r, depth - 1)});
            case 4:
            case 5:
                if (!opt_.higher_order)
                    break;
                return eliminate(ctx, r, depth);
            case 6:
                if (!opt_.conditionals)
                    break;
                {
                    static const char* cmp[] = {"lt", "le", "eq", "gt", "ge"};
                    Term guard = chance(0.7) ? Term::prim(cmp[below(5)], {term(ctx, r, depth - 1), term(ctx, r, depth - 1)})
                                             : term(ctx, r, depth - 1);
                    return Term::ite(std::move(guard), term(ctx, r, depth - 1), term(ctx, r, depth - 1));
                }
            }
        }
    }

    std::mt19937_64 rng_;
    Options opt_;
    int counter_ = 0;
};

} // namespace rlam::gen

#endif
