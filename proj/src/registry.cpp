#include "rlam/registry.hpp"

#include "rlam/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace rlam {

std::string fact_arg(std::size_t i) { return "a" + std::to_string(i); }

void PrimRegistry::add(PrimFn fn)
{
    if (fn.name.empty())
        throw std::invalid_argument("prim needs a name");
    aliases_.erase(fn.name);
    std::string key = fn.name;
    prims_.insert_or_assign(std::move(key), std::move(fn));
}

void PrimRegistry::add_alias(const std::string& alias, const std::string& target)
{
    if (prims_.count(alias))
        throw std::invalid_argument("alias '" + alias + "' would shadow a registered prim");
    const PrimFn* fn = find(target);
    if (!fn)
        throw std::invalid_argument("alias target '" + target + "' is not a registered prim");
    aliases_[alias] = fn->name;
}

const PrimFn* PrimRegistry::find(std::string_view name) const
{
    if (auto it = prims_.find(name); it != prims_.end())
        return &it->second;
    if (auto it = aliases_.find(name); it != aliases_.end())
        return find(it->second);
    return nullptr;
}

const PrimFn& PrimRegistry::at(std::string_view name) const
{
    if (const PrimFn* fn = find(name))
        return *fn;
    throw UnsupportedPrim("unknown primitive '" + std::string(name) + "'");
}

std::string PrimRegistry::canonical(std::string_view name) const { return at(name).name; }

std::vector<std::string> PrimRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [name, _] : prims_)
        out.push_back(name);
    for (const auto& [name, _] : aliases_)
        out.push_back(name);
    return out;
}

void PrimRegistry::validate() const
{
    for (const auto& [name, fn] : prims_) {
        if (!fn.eval)
            throw std::logic_error("prim '" + name + "' has no evaluator");
        if (!fn.partials.empty() && fn.partials.size() != fn.arity)
            throw std::logic_error("prim '" + name + "' lists the wrong number of partial derivatives");
        for (const auto& d : fn.partials) {
            const PrimFn* df = find(d);
            if (!df)
                throw std::logic_error("partial '" + d + "' of prim '" + name + "' is not registered");
            if (df->arity != fn.arity)
                throw std::logic_error("partial '" + d + "' of prim '" + name + "' has a different arity");
        }
        std::set<std::string> args;
        for (std::size_t i = 1; i <= fn.arity; ++i)
            args.insert(fact_arg(i));
        auto check_scope = [&](const Formula& f, const std::set<std::string>& allowed) {
            for (const auto& v : vars(f))
                if (!allowed.count(v))
                    throw std::logic_error("fact of prim '" + name + "' mentions '" + v + "'");
        };
        for (const auto& fact : fn.facts) {
            check_scope(fact.domain, args);
            check_scope(fact.image, {fact_result});
        }
        if (fn.guard) {
            check_scope(fn.guard->zero, args);
            check_scope(fn.guard->one, args);
            check_scope(fn.guard->continuity, args);
        }
    }
}

namespace {

using Args = std::span<const double>;
using QArgs = std::span<const Rational>;

Expr a(std::size_t i) { return Expr::var(fact_arg(i)); }
Expr b() { return Expr::var(fact_result); }
Expr c(long v) { return Expr::constant(Rational(v)); }

ContinuityFact everywhere() { return {Formula::top(), Formula::top()}; }

Formula zero_or_one() { return Formula::disj(Formula::eq(b(), c(0)), Formula::eq(b(), c(1))); }

Formula both_nonneg() { return Formula::conj(Formula::geq(a(1), c(0)), Formula::geq(a(2), c(0))); }

PrimFn make(std::string name, std::size_t arity, std::function<double(Args)> eval,
            std::function<Rational(QArgs)> exact, std::vector<std::string> partials,
            std::vector<ContinuityFact> facts)
{
    PrimFn fn;
    fn.name = std::move(name);
    fn.arity = arity;
    fn.eval = std::move(eval);
    fn.exact = std::move(exact);
    fn.partials = std::move(partials);
    fn.facts = std::move(facts);
    return fn;
}

PrimFn constant_prim(std::string name, std::size_t arity, long value)
{
    std::vector<std::string> zeros(arity, "zero" + std::to_string(arity));
    return make(
        std::move(name), arity, [value](Args) { return static_cast<double>(value); },
        [value](QArgs) { return Rational(value); }, std::move(zeros),
        {{Formula::top(), Formula::eq(b(), c(value))}});
}

// Comparison prims: value 1 where `one` holds and 0 elsewhere.
PrimFn comparison(std::string name, std::function<bool(double, double)> test,
                  std::function<bool(const Rational&, const Rational&)> exact_test, Formula one, Formula zero)
{
    Formula boundary = Formula::negate(Formula::eq(a(1), a(2)));
    PrimFn fn = make(
        std::move(name), 2, [test](Args x) { return test(x[0], x[1]) ? 1.0 : 0.0; },
        [exact_test](QArgs x) { return Rational(exact_test(x[0], x[1]) ? 1 : 0); }, {},
        {{boundary, zero_or_one()}, {one, Formula::eq(b(), c(1))}, {zero, Formula::eq(b(), c(0))}});
    fn.guard = GuardFacts{zero, one, boundary};
    return fn;
}

PrimRegistry build_standard()
{
    PrimRegistry r;
    const auto nonneg_image = Formula::geq(b(), c(0));
    const auto unit_image = Formula::conj(Formula::leq(c(-1), b()), Formula::leq(b(), c(1)));

    r.add(make(
        "add", 2, [](Args x) { return x[0] + x[1]; }, [](QArgs x) { return Rational(x[0] + x[1]); },
        {"one2", "one2"}, {everywhere(), {both_nonneg(), nonneg_image}}));
    r.add(make(
        "sub", 2, [](Args x) { return x[0] - x[1]; }, [](QArgs x) { return Rational(x[0] - x[1]); },
        {"one2", "mone2"}, {everywhere()}));
    r.add(make(
        "mul", 2, [](Args x) { return x[0] * x[1]; }, [](QArgs x) { return Rational(x[0] * x[1]); },
        {"pick2", "pick1"}, {everywhere(), {both_nonneg(), nonneg_image}}));
    r.add(make(
        "neg", 1, [](Args x) { return -x[0]; }, [](QArgs x) { return Rational(-x[0]); }, {"mone1"},
        {everywhere()}));
    r.add(make(
        "min", 2, [](Args x) { return std::min(x[0], x[1]); }, [](QArgs x) { return std::min(x[0], x[1]); },
        {"min_d1", "min_d2"}, {everywhere(), {both_nonneg(), nonneg_image}}));
    r.add(make(
        "max", 2, [](Args x) { return std::max(x[0], x[1]); }, [](QArgs x) { return std::max(x[0], x[1]); },
        {"max_d1", "max_d2"}, {everywhere()}));
    r.add(make(
        "abs", 1, [](Args x) { return std::fabs(x[0]); }, [](QArgs x) { return Rational(abs(x[0])); }, {"sgn"},
        {{Formula::top(), nonneg_image}}));

    r.add(make(
        "sin", 1, [](Args x) { return std::sin(x[0]); }, {}, {"cos"}, {{Formula::top(), unit_image}}));
    r.add(make(
        "cos", 1, [](Args x) { return std::cos(x[0]); }, {}, {"nsin"}, {{Formula::top(), unit_image}}));
    r.add(make(
        "nsin", 1, [](Args x) { return -std::sin(x[0]); }, {}, {"ncos"}, {{Formula::top(), unit_image}}));
    r.add(make(
        "ncos", 1, [](Args x) { return -std::cos(x[0]); }, {}, {"sin"}, {{Formula::top(), unit_image}}));
    r.add(make(
        "exp", 1, [](Args x) { return std::exp(x[0]); }, {}, {"exp"}, {{Formula::top(), Formula::gt(b(), c(0))}}));
    r.add(make(
        "pi", 0, [](Args) { return std::numbers::pi; }, {}, {},
        {{Formula::top(), Formula::conj(Formula::leq(c(3), b()), Formula::leq(b(), c(4)))}}));

    r.add(comparison(
        "lt", [](double x, double y) { return x < y; }, [](const Rational& x, const Rational& y) { return x < y; },
        Formula::lt(a(1), a(2)), Formula::geq(a(1), a(2))));
    r.add(comparison(
        "le", [](double x, double y) { return x <= y; }, [](const Rational& x, const Rational& y) { return x <= y; },
        Formula::leq(a(1), a(2)), Formula::gt(a(1), a(2))));
    r.add(comparison(
        "gt", [](double x, double y) { return x > y; }, [](const Rational& x, const Rational& y) { return x > y; },
        Formula::gt(a(1), a(2)), Formula::leq(a(1), a(2))));
    r.add(comparison(
        "ge", [](double x, double y) { return x >= y; }, [](const Rational& x, const Rational& y) { return x >= y; },
        Formula::geq(a(1), a(2)), Formula::lt(a(1), a(2))));
    {
        // eq is continuous off the diagonal (value 0) and on it (value 1).
        Formula on = Formula::eq(a(1), a(2));
        Formula off = Formula::negate(on);
        PrimFn fn = make(
            "eq", 2, [](Args x) { return x[0] == x[1] ? 1.0 : 0.0; },
            [](QArgs x) { return Rational(x[0] == x[1] ? 1 : 0); }, {},
            {{off, Formula::eq(b(), c(0))}, {on, Formula::eq(b(), c(1))}});
        fn.guard = GuardFacts{off, on, off};
        r.add(std::move(fn));
    }

    // jump(x) = -x for x < 0, x + 1 otherwise
    r.add(make(
        "jump", 1, [](Args x) { return x[0] < 0 ? -x[0] : x[0] + 1; },
        [](QArgs x) { return x[0] < 0 ? Rational(-x[0]) : Rational(x[0] + 1); }, {"jump_d"},
        {{Formula::geq(a(1), c(0)), Formula::geq(b(), c(1))}, {Formula::lt(a(1), c(0)), Formula::gt(b(), c(0))}}));
    r.add(make(
        "jump_d", 1, [](Args x) { return x[0] < 0 ? -1.0 : 1.0; },
        [](QArgs x) { return Rational(x[0] < 0 ? -1 : 1); }, {"zero1"},
        {{Formula::lt(a(1), c(0)), Formula::eq(b(), c(-1))}, {Formula::geq(a(1), c(0)), Formula::eq(b(), c(1))}}));
    // wdiv(w, a) = w / (1 - a) for a < 1, 0 otherwise
    r.add(make(
        "wdiv", 2, [](Args x) { return x[1] < 1 ? x[0] / (1 - x[1]) : 0.0; },
        [](QArgs x) { return x[1] < 1 ? Rational(x[0] / (1 - x[1])) : Rational(0); }, {},
        {{Formula::lt(a(2), c(1)), Formula::top()}}));

    for (std::size_t n : {1u, 2u}) {
        r.add(constant_prim("one" + std::to_string(n), n, 1));
        r.add(constant_prim("zero" + std::to_string(n), n, 0));
        r.add(constant_prim("mone" + std::to_string(n), n, -1));
    }
    r.add(make(
        "pick1", 2, [](Args x) { return x[0]; }, [](QArgs x) { return x[0]; }, {"one2", "zero2"}, {everywhere()}));
    r.add(make(
        "pick2", 2, [](Args x) { return x[1]; }, [](QArgs x) { return x[1]; }, {"zero2", "one2"}, {everywhere()}));
    r.add(make(
        "sgn", 1, [](Args x) { return x[0] > 0 ? 1.0 : x[0] < 0 ? -1.0 : 0.0; },
        [](QArgs x) { return Rational(sgn(x[0])); }, {"zero1"},
        {{Formula::gt(a(1), c(0)), Formula::eq(b(), c(1))}, {Formula::lt(a(1), c(0)), Formula::eq(b(), c(-1))}}));

    // Derivatives of min/max; at ties the first argument is selected.
    auto sel = [](bool first_wins) {
        return std::pair{first_wins ? 1.0 : 0.0, Rational(first_wins ? 1 : 0)};
    };
    r.add(make(
        "min_d1", 2, [sel](Args x) { return sel(x[0] <= x[1]).first; },
        [sel](QArgs x) { return sel(x[0] <= x[1]).second; }, {"zero2", "zero2"},
        {{Formula::lt(a(1), a(2)), Formula::eq(b(), c(1))}, {Formula::gt(a(1), a(2)), Formula::eq(b(), c(0))}}));
    r.add(make(
        "min_d2", 2, [sel](Args x) { return sel(x[1] < x[0]).first; },
        [sel](QArgs x) { return sel(x[1] < x[0]).second; }, {"zero2", "zero2"},
        {{Formula::lt(a(1), a(2)), Formula::eq(b(), c(0))}, {Formula::gt(a(1), a(2)), Formula::eq(b(), c(1))}}));
    r.add(make(
        "max_d1", 2, [sel](Args x) { return sel(x[0] >= x[1]).first; },
        [sel](QArgs x) { return sel(x[0] >= x[1]).second; }, {"zero2", "zero2"},
        {{Formula::gt(a(1), a(2)), Formula::eq(b(), c(1))}, {Formula::lt(a(1), a(2)), Formula::eq(b(), c(0))}}));
    r.add(make(
        "max_d2", 2, [sel](Args x) { return sel(x[1] > x[0]).first; },
        [sel](QArgs x) { return sel(x[1] > x[0]).second; }, {"zero2", "zero2"},
        {{Formula::gt(a(1), a(2)), Formula::eq(b(), c(0))}, {Formula::lt(a(1), a(2)), Formula::eq(b(), c(1))}}));

    r.validate();
    return r;
}

} // namespace

const PrimRegistry& PrimRegistry::standard()
{
    static const PrimRegistry registry = build_standard();
    return registry;
}

PrimRegistry PrimRegistry::with_aliases(const PrimRegistry& base, const std::filesystem::path& manifest)
{
    std::ifstream in(manifest);
    if (!in)
        throw Error("cannot open alias manifest '" + manifest.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error("alias manifest '" + manifest.string() + "': " + e.what());
    }
    PrimRegistry out = base;
    if (!doc.is_object() || !doc.contains("aliases") || !doc["aliases"].is_object())
        throw Error("alias manifest must be an object with an \"aliases\" object");
    for (const auto& [alias, target] : doc["aliases"].items()) {
        if (!target.is_string())
            throw Error("alias '" + alias + "' must map to a prim name");
        try {
            out.add_alias(alias, target.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw Error(e.what());
        }
    }
    return out;
}

} // namespace rlam
