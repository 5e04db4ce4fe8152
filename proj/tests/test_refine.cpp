#include "gen.hpp"
#include "cond_fixtures.hpp"

#include "rlam/errors.hpp"
#include "rlam/logic.hpp"
#include "rlam/oracles.hpp"
#include "rlam/refine.hpp"
#include "rlam/semantics.hpp"
#include "rlam/syntax.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace rlam;

namespace {

RefJudgment judgment(const std::string& source) { return judgment_of(parse_source(source)); }

Verdict check(const std::string& source, const CheckConfig& cfg = {}) { return refine_check(judgment(source), cfg); }

std::string corpus(const std::string& name)
{
    std::ifstream in(std::string(RLAM_CORPUS_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool mentions(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

RefType R(const std::string& var) { return RefType::real(var); }

} // namespace

TEST_SUITE("refine")
{
    TEST_CASE("contexts")
    {
        RefContext ctx({{"x", R("a")}, {"f", parse_ref_type("{c} -> {d}")}});
        CHECK(ctx.ground().size() == 1);
        CHECK(ctx.higher().size() == 1);
        CHECK(ctx.erase().size() == 2);
        CHECK_THROWS(RefContext({{"x", R("a")}, {"x", R("b")}}));
        CHECK_THROWS(RefContext({{"x", R("a")}, {"y", R("a")}}));
    }

    TEST_CASE("erase")
    {
        CHECK(erase(R("a")) == SimpleType::real());
        CHECK(to_string(erase(parse_ref_type("{a} -[T | T]-> {b}"))) == "R -> R");
        CHECK(to_string(erase(parse_ref_type("({c} -> {d}, {a}) -[a >= 0]-> {c} -> {d}"))) ==
              "(R -> R) * R -> R -> R");
    }

    TEST_CASE("display (1): var-F")
    {
        Verdict v = check(corpus("proj_nonneg.rlam"));
        CHECK(v.kind == Verdict::Kind::Accepted);
        REQUIRE_FALSE(v.trace.empty());
        CHECK(v.trace[0].rfind("var-F", 0) == 0);
    }

    TEST_CASE("display (2): Rf with the fact registered for min")
    {
        Verdict v = check(corpus("min_nonneg.rlam"));
        CHECK(v.kind == Verdict::Kind::Accepted);
        REQUIRE_FALSE(v.trace.empty());
        CHECK(v.trace[0].rfind("Rf[min", 0) == 0);
    }

    TEST_CASE("f(min(x, y)) at (a >= 0 /\\ b >= 0) ~> g >= 1")
    {
        CHECK(check(corpus("jump_min.rlam")).kind == Verdict::Kind::Accepted);
        // Without the nonnegative domain the image is out of reach.
        Verdict v = check("@type ({a}, {b}) -[T | g >= 1]-> {g}\n\\x:R, y:R. jump(min(x, y))");
        CHECK(v.kind == Verdict::Kind::Rejected);
    }

    TEST_CASE("Figure (b) program is accepted at T/T")
    {
        Verdict v = check(corpus("glued_if.rlam"));
        CHECK(v.kind == Verdict::Kind::Accepted);
        CHECK(check(corpus("glued_if_annotated.rlam")).kind == Verdict::Kind::Accepted);
    }

    TEST_CASE("Figure (a) program is rejected at the guard boundary")
    {
        Verdict v = check(corpus("jump_if.rlam"));
        REQUIRE(v.kind == Verdict::Kind::Rejected);
        CHECK(v.rule == "If");
        CHECK(mentions(v.condition, "side condition (2)"));
        REQUIRE(v.witness);
        CHECK(v.witness->at("a") == 0);
        CHECK(v.subterm == "if x < 0.0 then -x else x + 1.0");
    }

    TEST_CASE("nested conditional continuous on R")
    {
        CHECK(check(corpus("nested_if.rlam")).kind == Verdict::Kind::Accepted);
    }

    TEST_CASE("var-F failures report a witness")
    {
        Verdict v = check("@context x : {a}\n@domain a >= 0\n@image a >= 1\n@type {a}\nx");
        REQUIRE(v.kind == Verdict::Kind::Rejected);
        CHECK(v.rule == "var-F");
        REQUIRE(v.witness);
        CHECK(v.witness->at("a") == 0);
    }

    TEST_CASE("Rf needs a fact covering the argument domains")
    {
        // wdiv is only known continuous where its second argument is below 1.
        CHECK(check("@context w : {a}, s : {b}\n@domain b < 1\n@type {c}\nwdiv(w, s)").kind == Verdict::Kind::Accepted);
        Verdict v = check("@context w : {a}, s : {b}\n@domain b <= 1\n@type {c}\nwdiv(w, s)");
        REQUIRE(v.kind == Verdict::Kind::Rejected);
        // The deepest failing premise is reported: the argument cannot reach the fact's domain.
        CHECK(v.rule == "var-F");
        CHECK(v.subterm == "s");
        CHECK(v.witness->at("b") == 1);
    }

    TEST_CASE("abs and app")
    {
        CHECK(check("@type {a} -[a >= 0 | b >= 0]-> {b}\n\\x:R. x").kind == Verdict::Kind::Accepted);
        CHECK(check("@type {a} -[T | b >= 0]-> {b}\n\\x:R. x").kind == Verdict::Kind::Rejected);
        CHECK(check("@type {b}\n(\\x:R. x * x) 3.0").kind == Verdict::Kind::Accepted);
        CHECK(check("@context f : {a} -[a >= 0 | b >= 0]-> {b}, y : {c}\n@domain c >= 1\n@type {d}\nf y").kind ==
              Verdict::Kind::Accepted);
        Verdict v = check("@context f : {a} -[a >= 0 | b >= 0]-> {b}, y : {c}\n@type {d}\nf y");
        REQUIRE(v.kind == Verdict::Kind::Rejected);
        CHECK(v.rule == "var-F");
        CHECK(v.subterm == "y");
        CHECK(v.witness->at("c") < 0);
    }

    TEST_CASE("higher-order variables come from var-H")
    {
        Verdict v = check("@context f : {a} -> {b}\n@type {a} -> {b}\nf");
        CHECK(v.kind == Verdict::Kind::Accepted);
        REQUIRE_FALSE(v.trace.empty());
        CHECK(v.trace[0].rfind("var-H", 0) == 0);
    }

    TEST_CASE("non-linear entailments are Unknown, not Accepted")
    {
        Verdict v = check("@context x : {a}\n@domain a * a * a >= 0\n@image a >= 0\n@type {a}\nx");
        CHECK(v.kind == Verdict::Kind::Unknown);
        CHECK_FALSE(v.gaps.empty());
    }

    TEST_CASE("conditionals without usable guard facts need annotations")
    {
        CHECK_THROWS_AS(check("@type {a} -[T | T]-> {b}\n\\x:R. if sin(x) < 0 then 1 else 0"), MissingAnnotation);
    }

    TEST_CASE("guard formulas are synthesized from registered guard facts")
    {
        RefContext ctx({{"x", R("a")}});
        auto lt = synthesize_guard_formulas(parse_term("x < 0"), ctx);
        REQUIRE(lt);
        CHECK(*lt->guard_one == parse_formula("a < 0"));
        CHECK(*lt->guard_zero == parse_formula("a >= 0"));
        CHECK(*lt->guard_continuity == parse_formula("~(a = 0)"));
        auto eq = synthesize_guard_formulas(parse_term("x = 4"), ctx);
        REQUIRE(eq);
        CHECK(*eq->guard_one == parse_formula("a = 4"));
        CHECK(*eq->guard_zero == parse_formula("~(a = 4)"));
        CHECK(*eq->guard_continuity == parse_formula("~(a = 4)"));
        CHECK_FALSE(synthesize_guard_formulas(parse_term("sin(x) < 0"), ctx));
        auto two = synthesize_guard_formulas(parse_term("2 * x + 1 <= x"), ctx);
        REQUIRE(two);
        CHECK(entails(*two->guard_one, parse_formula("a <= -1")).valid());
        CHECK(entails(parse_formula("a <= -1"), *two->guard_one).valid());
    }

    TEST_CASE("ctx_equiv_probe")
    {
        RefContext ctx({{"x", R("a")}});
        Formula boundary = parse_formula("a = 0");
        CHECK(ctx_equiv_probe(parse_term("1"), parse_term("x + 1"), ctx, boundary).kind == EquivResult::Kind::Equiv);
        Term s = parse_term("x * x + sin(x)");
        CHECK(ctx_equiv_probe(s, s, ctx, parse_formula("T")).kind == EquivResult::Kind::Equiv);
        EquivResult ne = ctx_equiv_probe(parse_term("-x"), parse_term("x + 1"), ctx, boundary);
        REQUIRE(ne.kind == EquivResult::Kind::NotEquiv);
        CHECK(ne.witness.at("a") == 0);
        CHECK(ctx_equiv_probe(parse_term("x"), parse_term("-x"), ctx, parse_formula("a < 0 /\\ a > 0")).kind ==
              EquivResult::Kind::Equiv);

        CheckConfig strict;
        strict.strict_equiv = true;
        CHECK(ctx_equiv_probe(parse_term("1"), parse_term("x + 1"), ctx, boundary, strict).kind ==
              EquivResult::Kind::Unknown);
    }

    TEST_CASE("higher-order branches compare by alpha-equivalence unless semantic")
    {
        RefContext ctx({{"x", R("a")}});
        Formula boundary = parse_formula("a = 0");
        Term s = parse_term("\\y:R. y + x");
        Term p = parse_term("\\y:R. y");
        CHECK(ctx_equiv_probe(s, p, ctx, boundary).kind == EquivResult::Kind::Unknown);
        CheckConfig sem;
        sem.semantic_ho = true;
        CHECK(ctx_equiv_probe(s, p, ctx, boundary, sem).kind == EquivResult::Kind::Equiv);
        Term q = parse_term("\\y:R. y + 1");
        CHECK(ctx_equiv_probe(s, q, ctx, boundary, sem).kind == EquivResult::Kind::NotEquiv);
    }

    TEST_CASE("strict equivalence rejects Figure (b) soundly")
    {
        CheckConfig strict;
        strict.strict_equiv = true;
        CHECK(check(corpus("glued_if.rlam"), strict).kind != Verdict::Kind::Accepted);
    }

    TEST_CASE("image widening and domain narrowing preserve acceptance")
    {
        struct Case {
            std::string ctx, domain, var, image, term, wider, narrower;
        };
        std::vector<Case> cases{
            {"x : {a}, y : {b}", "a >= 0 /\\ b >= 0", "g", "g >= 0", "min(x, y)", "g >= -1", "a >= 1 /\\ b >= 2"},
            {"x : {a}, y : {b}", "a >= 0 /\\ b >= 0", "a", "a >= 0", "x", "a > -1 \\/ a = 7", "a = 3 /\\ b = 1"},
            {"x : {a}", "a >= 0", "g", "g >= 1", "jump(x)", "g >= 0", "a >= 5"},
            {"x : {a}", "T", "r", "T", "if x < 0 then 1 else x + 1", "r = r", "a <= 10"},
        };
        for (const auto& c : cases) {
            auto src = [&](const std::string& dom, const std::string& img) {
                return "@context " + c.ctx + "\n@domain " + dom + "\n@image " + img + "\n@type {" + c.var + "}\n" + c.term;
            };
            INFO(c.term);
            REQUIRE(check(src(c.domain, c.image)).kind == Verdict::Kind::Accepted);
            REQUIRE(entails(parse_formula(c.image), parse_formula(c.wider)).valid());
            CHECK(check(src(c.domain, c.wider)).kind == Verdict::Kind::Accepted);
            REQUIRE(entails(parse_formula(c.narrower), parse_formula(c.domain)).valid());
            CHECK(check(src(c.narrower, c.image)).kind == Verdict::Kind::Accepted);
        }
    }

    TEST_CASE("accepted generated judgments pass the probe and the image check")
    {
        gen::Options opt;
        opt.higher_order = false;
        opt.conditionals = true;
        opt.unary = {"neg", "abs", "sin"};
        opt.binary = {"add", "sub", "mul", "min", "max"};
        gen::TermGen g(81, opt);
        int accepted = 0, rejected = 0;
        for (int i = 0; i < 150; ++i) {
            Term t = g.term(gen::TermGen::real_context(2), SimpleType::real(), 3);
            RefJudgment j{RefContext({{"x0", R("a0")}, {"x1", R("a1")}}), t, R("r"), Formula::top(), Formula::top()};
            Verdict v;
            try {
                v = refine_check(j);
            } catch (const MissingAnnotation&) {
                continue;
            }
            if (v.kind != Verdict::Kind::Accepted) {
                ++rejected;
                continue;
            }
            ++accepted;
            auto view = first_order_view(j);
            REQUIRE(view);
            RealFn f = denote_first_order(view->body, view->theta);
            DomainFn everywhere = [](std::span<const double>) { return true; };
            std::vector<std::vector<double>> seeds;
            for (const auto& s : sample_truth_domain(view->domain, 50, 82, {"a0", "a1"}))
                seeds.push_back({to_double(s.at("a0")), to_double(s.at("a1"))});
            ContinuityVerdict c = continuity_probe(f, everywhere, seeds);
            INFO(pretty(t), ": ", to_string(c));
            CHECK(c.kind != ContinuityVerdict::Kind::SuspectDiscontinuity);
        }
        CHECK(accepted >= 20);
        CHECK(rejected >= 5);
    }

    TEST_CASE("conditional continuity fixtures")
    {
        for (const auto& fx : condfix::fixtures()) {
            condfix::Report r = condfix::Checker(fx).run();
            INFO(fx.name, ": ", r.detail, to_string(r.verdict));
            CHECK(r.cond1);
            CHECK(r.cond3);
            if (fx.witness) {
                CHECK_FALSE(r.cond2);
                CHECK(r.verdict.kind == ContinuityVerdict::Kind::SuspectDiscontinuity);
                REQUIRE(r.at_witness);
                CHECK(r.at_witness->kind == ContinuityVerdict::Kind::SuspectDiscontinuity);
                CHECK(r.at_witness->point == *fx.witness);
            } else {
                CHECK(r.cond2);
                CHECK(r.verdict.kind == ContinuityVerdict::Kind::Continuous);
            }
        }
    }
}
