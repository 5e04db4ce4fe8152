#include "gen.hpp"

#include "rlam/errors.hpp"
#include "rlam/subst.hpp"
#include "rlam/syntax.hpp"
#include "rlam/typing.hpp"

#include <doctest.h>

using namespace rlam;

namespace {

const SimpleType R = SimpleType::real();

SimpleType arrow(SimpleType a, SimpleType b) { return SimpleType::arrow(std::move(a), std::move(b)); }
SimpleType prod(SimpleType a, SimpleType b) { return SimpleType::prod(std::move(a), std::move(b)); }

} // namespace

TEST_SUITE("typing")
{
    TEST_CASE("typecheck examples")
    {
        CHECK(typecheck({}, parse_term("\\x:R. x")) == arrow(R, R));
        CHECK(typecheck({{"x", R}}, parse_term("add(x, 1.0)")) == R);
        CHECK(typecheck({}, parse_term("\\x:R, y:R. x * y")) == arrow(prod(R, R), R));
        CHECK(typecheck({}, parse_term("(\\f:R -> R. \\x:R. f (f x)) (\\y:R. y * y)")) == arrow(R, R));
        CHECK(typecheck({}, parse_term("if 1.0 < 2.0 then (1.0, 2.0) else (3.0, 4.0)")) == prod(R, R));
    }

    TEST_CASE("type errors name the rule and subterm")
    {
        try {
            typecheck({}, parse_term("fst 1.0"));
            FAIL("expected a type error");
        } catch (const TypeError& e) {
            CHECK(e.rule() == "proj");
            CHECK(e.subterm() == "fst 1.0");
            CHECK(std::string(e.what()).find("projection of non-product") != std::string::npos);
        }
        CHECK_THROWS_AS(typecheck({}, parse_term("x")), UnboundVariable);
        CHECK_THROWS_AS(typecheck({}, parse_term("sin(1.0, 2.0)")), ArityMismatch);
        CHECK_THROWS_AS(typecheck({}, parse_term("1.0 2.0")), TypeError);
        CHECK_THROWS_AS(typecheck({}, parse_term("(\\x:R. x) (1.0, 2.0)")), TypeError);
        CHECK_THROWS_AS(typecheck({}, parse_term("if (1.0, 2.0) then 1.0 else 2.0")), TypeError);
        CHECK_THROWS_AS(typecheck({}, parse_term("if 1.0 then 1.0 else (1.0, 2.0)")), TypeError);
        CHECK_THROWS_AS(typecheck({}, parse_term("sin(\\x:R. x)")), TypeError);
    }

    TEST_CASE("check_restricted")
    {
        CHECK(check_restricted(R));
        CHECK(check_restricted(arrow(prod(R, R), R)));
        CHECK(check_restricted(arrow(R, arrow(R, R))));
        CHECK(check_restricted(arrow(prod(arrow(R, R), R), R)));
        CHECK_FALSE(check_restricted(prod(R, R)));
        CHECK_FALSE(check_restricted(arrow(prod(R, arrow(R, R)), R)));
        CHECK_FALSE(check_restricted(arrow(R, prod(R, R))));
        CHECK_FALSE(check_restricted(arrow(prod(prod(R, R), R), R)));
    }

    TEST_CASE("check_first_order")
    {
        CHECK(check_first_order({{"x", R}, {"y", R}}, parse_term("x * y")) == 2);
        CHECK(check_first_order({}, parse_term("5.0")) == 0);
        CHECK_THROWS_AS(check_first_order({}, parse_term("\\x:R. x")), NotFirstOrder);
        CHECK_THROWS_AS(check_first_order({{"f", arrow(R, R)}}, parse_term("f 1.0")), NotFirstOrder);
    }

    TEST_CASE("weakening on generated terms")
    {
        gen::Options opt;
        opt.conditionals = true;
        gen::TermGen g(21, opt);
        for (int i = 0; i < 500; ++i) {
            TypingContext ctx = g.context(static_cast<std::size_t>(g.below(4)));
            SimpleType tau = g.type(2);
            Term t = g.term(ctx, tau, 5);
            REQUIRE(typecheck(ctx, t) == tau);
            CHECK(typecheck(ctx.extended("fresh_y", g.type(2)), t) == tau);
        }
    }

    TEST_CASE("substitution preserves typing on generated terms")
    {
        gen::Options opt;
        opt.conditionals = true;
        gen::TermGen g(22, opt);
        for (int i = 0; i < 500; ++i) {
            TypingContext ctx = g.context(2);
            SimpleType sigma = g.type(2);
            SimpleType tau = g.type(2);
            TypingContext ext = ctx.extended("sub_x", sigma);
            Term s = g.term(ext, tau, 5);
            Term t = g.term(ctx, sigma, 3);
            REQUIRE(typecheck(ext, s) == tau);
            CHECK(typecheck(ctx, substitute(s, "sub_x", t)) == tau);
        }
    }
}
