#ifndef RLAM_TESTS_COND_FIXTURES_HPP
#define RLAM_TESTS_COND_FIXTURES_HPP

#include "rlam/logic.hpp"
#include "rlam/oracles.hpp"
#include "rlam/registry.hpp"
#include "rlam/semantics.hpp"
#include "rlam/syntax.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rlam::condfix {

// cond(f, g1, g0) = g1 where f is 1, g0 elsewhere, over x1..xn with logical
// variables a1..an.
struct Fixture {
    std::string name;
    std::size_t n;
    std::string f, g0, g1;
    std::string theta, theta_f, theta_f0, theta_f1, phi_g0, phi_g1;
    // A point of theta /\ ~theta_f where g0 and g1 differ, for fixtures that
    // break the agreement condition.
    std::optional<std::vector<double>> witness;
};

inline std::vector<Fixture> fixtures()
{
    return {
        {"step guard with a constant branch", 1, "lt(x1, 0)", "x1 + 1", "1", "T", "~(a1 = 0)", "a1 >= 0", "a1 < 0",
         "a1 >= 0", "a1 <= 0", std::nullopt},
        {"diagonal guard", 2, "le(x1, x2)", "x2", "x1", "T", "~(a1 = a2)", "a1 > a2", "a1 <= a2", "a1 >= a2",
         "a1 <= a2", std::nullopt},
        {"guarded division", 2, "ge(x2, 0)", "x1", "wdiv(x1, x2)", "a2 < 1", "~(a2 = 0)", "a2 < 0", "a2 >= 0",
         "a2 <= 0", "a2 < 1", std::nullopt},
        // Branches differ by 1 on the whole diagonal; (1/2, 1/2) is one such point.
        {"diagonal guard with disagreeing branches", 2, "le(x1, x2)", "x2 + 1", "x1", "T", "~(a1 = a2)", "a1 > a2",
         "a1 <= a2", "a1 >= a2", "a1 <= a2", std::vector<double>{0.5, 0.5}},
    };
}

struct Report {
    bool cond1 = true; // f is {0,1}-valued and continuous on theta_f, b on theta_(f,b)
    bool cond2 = true; // g0, g1 continuous on their domains and equal on theta /\ ~theta_f
    bool cond3 = true; // the covering entailment
    ContinuityVerdict verdict;                // cond over theta
    std::optional<ContinuityVerdict> at_witness;
    std::string detail;
};

class Checker {
public:
    explicit Checker(const Fixture& fx, std::uint64_t seed = default_seed) : fx_(fx), seed_(seed)
    {
        for (std::size_t i = 1; i <= fx.n; ++i) {
            ctx_ = ctx_.extended("x" + std::to_string(i), SimpleType::real());
            logical_.insert(fact_arg(i));
        }
        f_ = parse_term(fx.f);
        g0_ = parse_term(fx.g0);
        g1_ = parse_term(fx.g1);
    }

    Report run() const
    {
        Report r;
        Formula theta = parse_formula(fx_.theta), tf = parse_formula(fx_.theta_f);
        Formula tf0 = parse_formula(fx_.theta_f0), tf1 = parse_formula(fx_.theta_f1);
        Formula pg0 = parse_formula(fx_.phi_g0), pg1 = parse_formula(fx_.phi_g1);
        RealFn f = denote_first_order(f_, ctx_), g0 = denote_first_order(g0_, ctx_), g1 = denote_first_order(g1_, ctx_);

        auto values_in = [&](const Formula& dom, const RealFn& fn, auto pred) {
            for (const auto& p : points(dom, 100))
                if (!pred(fn(p)))
                    return false;
            return true;
        };
        r.cond1 = values_in(tf, f, [](double v) { return v == 0.0 || v == 1.0; }) &&
                  values_in(tf0, f, [](double v) { return v == 0.0; }) &&
                  values_in(tf1, f, [](double v) { return v == 1.0; }) && continuous(f, tf);
        if (!r.cond1)
            r.detail += "condition (1) fails; ";

        Formula boundary = Formula::conj(theta, Formula::negate(tf));
        bool agree = true;
        for (const auto& p : points(boundary, 100)) {
            double a = g0(p), b = g1(p);
            if (std::fabs(a - b) > 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}))
                agree = false;
        }
        if (fx_.witness) {
            double a = g0(*fx_.witness), b = g1(*fx_.witness);
            agree = agree && a == b;
        }
        r.cond2 = agree && continuous(g0, pg0) && continuous(g1, pg1);
        if (!r.cond2)
            r.detail += "condition (2) fails; ";

        Formula cover = Formula::conj_all({Formula::disj(pg1, pg0), Formula::disj(tf0, pg1), Formula::disj(tf1, pg0),
                                           Formula::disj(tf, Formula::conj(pg0, pg1))});
        r.cond3 = entails(theta, cover).valid();
        if (!r.cond3)
            r.detail += "condition (3) fails; ";

        RealFn cond = denote_first_order(Term::ite(f_, g1_, g0_), ctx_);
        std::vector<std::vector<double>> seeds = points(theta, 40);
        for (auto& p : points(boundary, 20))
            seeds.push_back(std::move(p));
        r.verdict = continuity_probe(cond, member(theta), seeds, config());
        if (fx_.witness)
            r.at_witness = continuity_probe(cond, member(theta), {*fx_.witness}, config());
        return r;
    }

private:
    ProbeConfig config() const
    {
        ProbeConfig cfg;
        cfg.seed = seed_;
        return cfg;
    }

    DomainFn member(const Formula& dom) const
    {
        return [dom](std::span<const double> x) {
            RealAssignment s;
            for (std::size_t i = 0; i < x.size(); ++i)
                s[fact_arg(i + 1)] = x[i];
            return truth_domain_member(dom, s);
        };
    }

    std::vector<std::vector<double>> points(const Formula& dom, std::size_t count) const
    {
        std::vector<std::vector<double>> out;
        for (const auto& sigma : sample_truth_domain(dom, count, seed_, logical_)) {
            std::vector<double> p;
            for (std::size_t i = 1; i <= fx_.n; ++i)
                p.push_back(to_double(sigma.at(fact_arg(i))));
            out.push_back(std::move(p));
        }
        return out;
    }

    bool continuous(const RealFn& fn, const Formula& dom) const
    {
        auto seeds = points(dom, 30);
        return continuity_probe(fn, member(dom), seeds, config()).kind != ContinuityVerdict::Kind::SuspectDiscontinuity;
    }

    Fixture fx_;
    std::uint64_t seed_;
    TypingContext ctx_;
    std::set<std::string> logical_;
    Term f_ = Term::lit(0), g0_ = Term::lit(0), g1_ = Term::lit(0);
};

} // namespace rlam::condfix

#endif
