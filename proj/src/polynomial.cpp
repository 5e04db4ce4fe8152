#include "rlam/polynomial.hpp"

#include "rlam/errors.hpp"
#include "rlam/semantics.hpp"
#include "rlam/typing.hpp"

#include <algorithm>
#include <numeric>

namespace rlam {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c)
{
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i)
{
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m.at(i) = 1;
    p.add_term(m, 1);
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

unsigned Polynomial::degree() const
{
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max(d, std::accumulate(m.begin(), m.end(), 0u));
    return d;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const
{
    if (point.size() != nvars_)
        throw EvalError("polynomial in " + std::to_string(nvars_) + " variable(s) evaluated at a point of size " +
                        std::to_string(point.size()));
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < m[i]; ++k)
                term *= point[i];
        sum += term;
    }
    return sum;
}

namespace {

std::size_t common_arity(const Polynomial& a, const Polynomial& b)
{
    // Constants built without a context have zero variables.
    if (a.nvars() != b.nvars() && a.nvars() != 0 && b.nvars() != 0)
        throw EvalError("polynomials over different variable sets");
    return std::max(a.nvars(), b.nvars());
}

Polynomial::Monomial pad(const Polynomial::Monomial& m, std::size_t n)
{
    Polynomial::Monomial out = m;
    out.resize(n, 0);
    return out;
}

} // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    Polynomial out(common_arity(a, b));
    for (const auto& [m, c] : a.terms_)
        out.add_term(pad(m, out.nvars_), c);
    for (const auto& [m, c] : b.terms_)
        out.add_term(pad(m, out.nvars_), c);
    return out;
}

Polynomial operator-(const Polynomial& a) { return Polynomial::constant(a.nvars_, -1) * a; }

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    Polynomial out(common_arity(a, b));
    for (const auto& [ma, ca] : a.terms_) {
        Polynomial::Monomial pa = pad(ma, out.nvars_);
        for (const auto& [mb, cb] : b.terms_) {
            Polynomial::Monomial m = pad(mb, out.nvars_);
            for (std::size_t i = 0; i < m.size(); ++i)
                m[i] += pa[i];
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& names)
{
    if (p.is_zero())
        return "0";
    std::vector<std::pair<Polynomial::Monomial, Rational>> ordered(p.terms().begin(), p.terms().end());
    auto total = [](const Polynomial::Monomial& m) { return std::accumulate(m.begin(), m.end(), 0u); };
    std::stable_sort(ordered.begin(), ordered.end(), [&](const auto& x, const auto& y) {
        if (total(x.first) != total(y.first))
            return total(x.first) > total(y.first);
        return x.first > y.first;
    });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : ordered) {
        Rational mag = abs(c);
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        std::string factors;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (!factors.empty())
                factors += "*";
            factors += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
            if (m[i] > 1)
                factors += "^" + std::to_string(m[i]);
        }
        if (factors.empty())
            out += mag.get_str();
        else if (mag == 1)
            out += factors;
        else
            out += mag.get_str() + "*" + factors;
    }
    return out;
}

Polynomial PolyModel::apply(const PrimFn& f, std::span<const Polynomial> args) const
{
    if (f.name == "add")
        return args[0] + args[1];
    if (f.name == "sub")
        return args[0] - args[1];
    if (f.name == "mul")
        return args[0] * args[1];
    if (f.name == "neg")
        return -args[0];
    throw UnsupportedPrim("primitive '" + f.name + "' is outside the polynomial fragment");
}

bool PolyModel::is_zero(const Polynomial&) const
{
    throw UnsupportedPrim("conditionals are outside the polynomial fragment");
}

Polynomial poly_normalize(const Term& t, const TypingContext& theta, const PrimRegistry& prims)
{
    std::size_t n = check_first_order(theta, t, prims);
    BasicEnv<Polynomial> env;
    for (std::size_t i = 0; i < n; ++i)
        env.insert_or_assign(theta.entries()[i].name, BasicValue<Polynomial>::real(Polynomial::variable(n, i)));
    Polynomial p = evaluate(env, t, PolyModel{n}, prims).as_real();
    return p.nvars() == n ? p : p + Polynomial(n);
}

Rational eval_exact_at(const Term& t, const TypingContext& theta, std::span<const Rational> point,
                       const PrimRegistry& prims)
{
    std::size_t n = check_first_order(theta, t, prims);
    if (point.size() != n)
        throw EvalError("expected " + std::to_string(n) + " coordinate(s), got " + std::to_string(point.size()));
    BasicEnv<Rational> env;
    for (std::size_t i = 0; i < n; ++i)
        env.insert_or_assign(theta.entries()[i].name, BasicValue<Rational>::real(point[i]));
    return eval_exact(env, t, prims).as_real();
}

} // namespace rlam
