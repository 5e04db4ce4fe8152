#include "gen.hpp"

#include "rlam/autodiff.hpp"
#include "rlam/errors.hpp"
#include "rlam/logic.hpp"
#include "rlam/oracles.hpp"
#include "rlam/polynomial.hpp"
#include "rlam/semantics.hpp"
#include "rlam/syntax.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rlam;

namespace {

const SimpleType R = SimpleType::real();

std::vector<Rational> random_rationals(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
    std::vector<Rational> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

const DomainFn everywhere = [](std::span<const double>) { return true; };

} // namespace

TEST_SUITE("oracles")
{
    TEST_CASE("finite_diff")
    {
        RealFn sq = [](std::span<const double> x) { return x[0] * x[0]; };
        std::vector<double> three{3.0};
        CHECK(std::fabs(finite_diff(sq, three, 0) - 6.0) <= 1e-6);
        RealFn id = [](std::span<const double> x) { return x[0]; };
        std::vector<double> p{0.37};
        CHECK(std::fabs(finite_diff(id, p, 0) - 1.0) <= 1e-9);
        RealFn c = [](std::span<const double>) { return 4.0; };
        CHECK(finite_diff(c, p, 0) == 0.0);
    }

    TEST_CASE("finite differences converge toward the AD value")
    {
        gen::Options opt;
        opt.higher_order = false;
        opt.unary = {"sin", "cos"};
        opt.binary = {"add", "mul"};
        gen::TermGen g(51, opt);
        std::mt19937_64 rng(52);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        TypingContext theta = gen::TermGen::real_context(2);
        int checked = 0;
        for (int i = 0; i < 50; ++i) {
            Term t = g.term(theta, R, 4);
            RealFn f = denote_first_order(t, theta);
            std::vector<double> p{u(rng), u(rng)};
            double ad = grad_at(t, theta, p)[0];
            // Rounding error of the quotient bounds how far monotonicity can be observed.
            double noise = 1e-16 * std::max(1.0, std::fabs(f(p))) / 1e-6 * 8;
            double prev = std::fabs(finite_diff(f, p, 0, 1e-4) - ad);
            for (double h = 5e-5; h >= 1e-6; h /= 2) {
                double err = std::fabs(finite_diff(f, p, 0, h) - ad);
                CHECK(err <= prev + noise);
                prev = err;
            }
            ++checked;
        }
        CHECK(checked == 50);
    }

    TEST_CASE("polynomial arithmetic and printing")
    {
        Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
        Polynomial p = x * y + x;
        CHECK(p.terms().size() == 2);
        CHECK(p.terms().at({1, 1}) == 1);
        CHECK(p.terms().at({1, 0}) == 1);
        CHECK(to_string(p, {"x", "y"}) == "x*y + x");
        CHECK(to_string(x * x - Polynomial::constant(2, Rational(1, 2)) * y, {"x", "y"}) == "x^2 - 1/2*y");
        CHECK((x - x).is_zero());
        CHECK(to_string(Polynomial(2), {"x", "y"}) == "0");
        CHECK((x + y) * (x - y) == x * x - y * y);
        CHECK(((x + y) * (x + y)).degree() == 2);
    }

    TEST_CASE("poly_normalize")
    {
        TypingContext xy{{"x", R}, {"y", R}};
        Polynomial p = poly_normalize(parse_term("x * y + x"), xy);
        CHECK(p == Polynomial::variable(2, 0) * Polynomial::variable(2, 1) + Polynomial::variable(2, 0));

        TypingContext x{{"x", R}};
        Polynomial four = poly_normalize(parse_term("(\\f:R -> R. \\z:R. f (f z)) (\\y:R. y * y) x"), x);
        Polynomial v = Polynomial::variable(1, 0);
        CHECK(four == v * v * v * v);
        CHECK(to_string(four, {"x"}) == "x^4");

        CHECK(poly_normalize(parse_term("2.0"), {}) == Polynomial::constant(0, 2));
        CHECK_THROWS_AS(poly_normalize(parse_term("sin(x)"), x), UnsupportedPrim);
        CHECK_THROWS_AS(poly_normalize(parse_term("if x then 1.0 else 2.0"), x), UnsupportedPrim);
        CHECK_THROWS_AS(poly_normalize(parse_term("\\y:R. y"), x), NotFirstOrder);
    }

    TEST_CASE("polynomials agree with exact evaluation")
    {
        gen::Options opt;
        opt.unary = {"neg"};
        opt.binary = {"add", "sub", "mul"};
        gen::TermGen g(53, opt);
        std::mt19937_64 rng(54);
        for (int i = 0; i < 200; ++i) {
            TypingContext theta = gen::TermGen::real_context(static_cast<std::size_t>(g.below(4)));
            Term t = g.term(theta, R, 5);
            Polynomial p = poly_normalize(t, theta);
            for (int k = 0; k < 20; ++k) {
                auto point = random_rationals(rng, theta.size());
                CHECK(p.evaluate(point) == eval_exact_at(t, theta, point));
            }
        }
    }

    TEST_CASE("continuity_probe examples")
    {
        std::vector<std::vector<double>> origin{{0.0}};
        RealFn abs = [](std::span<const double> x) { return std::fabs(x[0]); };
        CHECK(continuity_probe(abs, everywhere, origin).kind == ContinuityVerdict::Kind::Continuous);

        RealFn step = [](std::span<const double> x) { return x[0] < 0 ? 0.0 : 1.0; };
        ContinuityVerdict v = continuity_probe(step, everywhere, origin);
        REQUIRE(v.kind == ContinuityVerdict::Kind::SuspectDiscontinuity);
        CHECK(v.point == std::vector<double>{0.0});
        CHECK(v.left == 0.0);
        CHECK(v.right == 1.0);
        CHECK(to_string(v) == "SuspectDiscontinuity(0, 0, 1)");

        RealFn jump_if = [](std::span<const double> x) { return x[0] < 0 ? -x[0] : x[0] + 1; };
        ContinuityVerdict a = continuity_probe(jump_if, everywhere, origin);
        REQUIRE(a.kind == ContinuityVerdict::Kind::SuspectDiscontinuity);
        CHECK(a.point == std::vector<double>{0.0});
        CHECK(a.left == doctest::Approx(0.0));
        CHECK(a.right == 1.0);
    }

    TEST_CASE("the probe respects the domain")
    {
        RealFn step = [](std::span<const double> x) { return x[0] < 0 ? 0.0 : 1.0; };
        DomainFn right = [](std::span<const double> x) { return x[0] >= 0; };
        std::vector<std::vector<double>> origin{{0.0}};
        CHECK(continuity_probe(step, right, origin).kind == ContinuityVerdict::Kind::Continuous);

        DomainFn nowhere = [](std::span<const double>) { return false; };
        ContinuityVerdict v = continuity_probe(step, nowhere, origin);
        CHECK(v.kind == ContinuityVerdict::Kind::Inconclusive);
        CHECK_FALSE(v.reason.empty());
    }

    TEST_CASE("registered prims are probe-continuous on their continuity domains")
    {
        const PrimRegistry& prims = PrimRegistry::standard();
        int seeds_used = 0;
        for (const auto& name : prims.names()) {
            const PrimFn& f = prims.at(name);
            if (f.arity == 0)
                continue;
            std::set<std::string> args;
            for (std::size_t i = 1; i <= f.arity; ++i)
                args.insert(fact_arg(i));
            for (const auto& fact : f.facts) {
                auto sample = sample_truth_domain(fact.domain, 40, default_seed, args);
                std::vector<std::vector<double>> seeds;
                for (const auto& sigma : sample) {
                    std::vector<double> p;
                    for (std::size_t i = 1; i <= f.arity; ++i)
                        p.push_back(to_double(sigma.at(fact_arg(i))));
                    seeds.push_back(std::move(p));
                }
                DomainFn domain = [&](std::span<const double> x) {
                    RealAssignment s;
                    for (std::size_t i = 0; i < x.size(); ++i)
                        s[fact_arg(i + 1)] = x[i];
                    return truth_domain_member(fact.domain, s);
                };
                RealFn fn = [&](std::span<const double> x) { return f(x); };
                ContinuityVerdict v = continuity_probe(fn, domain, seeds);
                INFO(name, " on ", to_string(fact.domain), ": ", to_string(v));
                CHECK(v.kind != ContinuityVerdict::Kind::SuspectDiscontinuity);
                seeds_used += static_cast<int>(seeds.size());
            }
        }
        CHECK(seeds_used >= 1000);
    }
}
