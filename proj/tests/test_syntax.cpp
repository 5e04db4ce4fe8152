#include "gen.hpp"

#include "rlam/errors.hpp"
#include "rlam/subst.hpp"
#include "rlam/syntax.hpp"

#include <doctest.h>

#include <algorithm>

using namespace rlam;

namespace {

Term lam1(const std::string& x, Term body) { return Term::lam({Param{x, SimpleType::real(), {}}}, std::move(body)); }

} // namespace

TEST_SUITE("syntax")
{
    TEST_CASE("parse builds the expected trees")
    {
        CHECK(parse_term("\\x:R. x") == lam1("x", Term::var("x")));
        CHECK(parse_term("fst (1.0, 2.0)") == Term::proj(1, Term::pair(Term::lit(1), Term::lit(2))));
        Term glued_if = parse_term("if x < 0 then 1 else x + 1");
        CHECK(glued_if == Term::ite(Term::prim("lt", {Term::var("x"), Term::lit(0)}), Term::lit(1),
                                 Term::prim("add", {Term::var("x"), Term::lit(1)})));
    }

    TEST_CASE("literals are exact")
    {
        Term t = parse_term("0.1");
        REQUIRE(t.is<ast::Lit>());
        CHECK(t.as<ast::Lit>()->value == Rational(1, 10));
        CHECK(parse_rational("2/3") == Rational(2, 3));
        CHECK(parse_rational("1e-6") == Rational(1, 1000000));
        CHECK(parse_rational("-3.25") == Rational(-13, 4));
        CHECK_FALSE(parse_rational("1.2.3"));
        CHECK(format_rational(Rational(5)) == "5.0");
        CHECK(format_rational(Rational(-3, 2)) == "-1.5");
        CHECK(format_rational(Rational(1, 3)) == "1/3");
    }

    TEST_CASE("infix operators resolve to prims with the usual precedence")
    {
        CHECK(parse_term("x + y * z") ==
              Term::prim("add", {Term::var("x"), Term::prim("mul", {Term::var("y"), Term::var("z")})}));
        CHECK(parse_term("x - y - z") ==
              Term::prim("sub", {Term::prim("sub", {Term::var("x"), Term::var("y")}), Term::var("z")}));
        CHECK(parse_term("-x") == Term::prim("neg", {Term::var("x")}));
        CHECK(parse_term("f x y") == Term::app(Term::app(Term::var("f"), {Term::var("x")}), {Term::var("y")}));
    }

    TEST_CASE("pretty")
    {
        CHECK(pretty(Term::lit(0)) == "0.0");
        CHECK(pretty(lam1("x", Term::var("x"))) == "\\x:R. x");
        CHECK(pretty(Term::pair(Term::lit(1), Term::lit(0))) == "(1.0, 0.0)");
        CHECK(pretty(Term::lit(Rational(1, 3))) == "1/3");
    }

    TEST_CASE("multi-argument lambdas and applications print unambiguously")
    {
        for (const char* src : {"\\x:R, y:R. x * y", "(\\x:R, y:R. x) (1.0, 2.0)", "(\\p:R * R. fst p) (1.0, 2.0)",
                                "\\f:R -> R, x:R. f (f x)"}) {
            Term t = parse_term(src);
            CHECK_MESSAGE(alpha_equiv(parse_term(pretty(t)), t), src);
        }
        Term multi = parse_term("(\\x:R, y:R. x) (1.0, 2.0)");
        REQUIRE(multi.is<ast::App>());
        CHECK(multi.as<ast::App>()->args.size() == 2);
        Term tupled = parse_term("(\\p:R * R. fst p) ((1.0, 2.0))");
        REQUIRE(tupled.is<ast::App>());
        CHECK(tupled.as<ast::App>()->args.size() == 1);
    }

    TEST_CASE("comments and line endings")
    {
        CHECK(parse_term("-- leading comment\r\nx -- trailing\r\n") == Term::var("x"));
    }

    TEST_CASE("parse errors carry a location and the expected tokens")
    {
        try {
            parse_term("\\x:R. (x +\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.where().line == 2);
            CHECK_FALSE(e.expected().empty());
        }
        CHECK_THROWS_AS(parse_term("\\x. x"), ParseError);
        CHECK_THROWS_AS(parse_term("x )"), ParseError);
    }

    TEST_CASE("free_vars")
    {
        CHECK(free_vars(Term::var("x")) == std::set<std::string>{"x"});
        CHECK(free_vars(lam1("x", Term::var("x"))).empty());
        CHECK(free_vars(Term::prim("mul", {Term::var("x"), Term::var("y")})) == std::set<std::string>{"x", "y"});
        CHECK(free_vars_ordered(parse_term("y * x + y")) == std::vector<std::string>{"y", "x"});
    }

    TEST_CASE("substitute")
    {
        CHECK(substitute(Term::var("x"), "x", Term::lit(3)) == Term::lit(3));
        Term shadow = lam1("x", Term::var("x"));
        CHECK(substitute(shadow, "x", Term::lit(3)) == shadow);

        Term captured = substitute(lam1("y", Term::var("x")), "x", Term::var("y"));
        const auto* lam = captured.as<ast::Lam>();
        REQUIRE(lam);
        CHECK(lam->params[0].name != "y");
        CHECK(lam->body == Term::var("y"));
    }

    TEST_CASE("alpha_equiv")
    {
        CHECK(alpha_equiv(parse_term("\\x:R. x"), parse_term("\\y:R. y")));
        CHECK_FALSE(alpha_equiv(parse_term("\\x:R. x"), parse_term("\\x:R. x + 1")));
        CHECK(alpha_equiv(parse_term("\\x:R. \\y:R. x"), parse_term("\\a:R. \\b:R. a")));
        CHECK_FALSE(alpha_equiv(parse_term("\\x:R. \\y:R. x"), parse_term("\\a:R. \\b:R. b")));
        CHECK_FALSE(alpha_equiv(parse_term("\\x:R. y"), parse_term("\\x:R. z")));
        CHECK_FALSE(alpha_equiv(parse_term("\\x:R. x"), parse_term("\\x:R * R. x")));
    }

    TEST_CASE("fresh names")
    {
        std::string n = fresh_name("y", {"y"});
        CHECK(n != "y");
        CHECK(n.rfind("y'", 0) == 0);
        CHECK(fresh_name(n).rfind("y'", 0) == 0);
    }

    TEST_CASE("types and formulas parse and print back")
    {
        CHECK(parse_type("R * R -> R") == SimpleType::arrow(SimpleType::prod(SimpleType::real(), SimpleType::real()),
                                                             SimpleType::real()));
        CHECK(to_string(parse_type("(R -> R) -> R")) == "(R -> R) -> R");
        for (const char* src : {"a >= 0 /\\ b >= 0", "~(a = 0)", "a < 1 \\/ b <= 2 * a", "T", "a <= 0 => b <= 3"}) {
            Formula p = parse_formula(src);
            CHECK_MESSAGE(parse_formula(to_string(p)) == p, src);
        }
        Formula f = parse_formula("a >= 0 /\\ b >= 0 => a + b >= 0");
        CHECK(parse_formula(to_string(f)) == f);
        CHECK(parse_formula("a < 1") == Formula::negate(Formula::leq(Expr::constant(1), Expr::var("a"))));
        RefType rt = parse_ref_type("({a}, {b}) -[a >= 0 /\\ b >= 0 | g >= 1]-> {g}");
        CHECK(erase(rt) == parse_type("R * R -> R"));
        CHECK(ref_equiv(parse_ref_type(to_string(rt)), rt));
        CHECK_THROWS_AS(parse_ref_type("{a} -[b >= 0]-> {c}"), Error);
    }

    TEST_CASE("round trip on generated terms")
    {
        gen::Options opt;
        opt.conditionals = true;
        gen::TermGen g(11, opt);
        for (int i = 0; i < 500; ++i) {
            TypingContext ctx = g.context(static_cast<std::size_t>(g.below(4)));
            Term t = g.term(ctx, g.type(2), 5);
            std::string text = pretty(t);
            Term back = parse_term(text);
            INFO(text);
            CHECK(alpha_equiv(back, t));
        }
    }

    TEST_CASE("substitution changes free variables only as expected")
    {
        gen::TermGen g(12);
        for (int i = 0; i < 300; ++i) {
            TypingContext ctx = gen::TermGen::real_context(3);
            Term s = g.term(ctx, SimpleType::real(), 4);
            Term t = g.term(ctx, SimpleType::real(), 2);
            std::set<std::string> expected = free_vars(s);
            bool occurs = expected.erase("x0") > 0;
            if (occurs) {
                auto ft = free_vars(t);
                expected.insert(ft.begin(), ft.end());
            }
            CHECK(free_vars(substitute(s, "x0", t)) == expected);
        }
    }

    TEST_CASE("freshening is idempotent and restores unique binders")
    {
        Term dup = Term::app(lam1("x", lam1("x", Term::var("x"))), {Term::var("x")});
        Term once = freshen(dup);
        CHECK(alpha_equiv(once, dup));
        CHECK(freshen(once) == once);

        gen::TermGen g(13);
        for (int i = 0; i < 200; ++i) {
            Term t = g.term(g.context(2), g.type(2), 4);
            Term f = freshen(t);
            CHECK(freshen(f) == f);
            CHECK(alpha_equiv(f, t));
        }
    }
}
