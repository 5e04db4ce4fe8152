#ifndef RLAM_POLYNOMIAL_HPP
#define RLAM_POLYNOMIAL_HPP

#include "rlam/rational.hpp"
#include "rlam/registry.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace rlam {

// Sparse multivariate polynomial with rational coefficients in a fixed number
// of variables. Zero coefficients are never stored.
class Polynomial {
public:
    using Monomial = std::vector<unsigned>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t i);

    std::size_t nvars() const { return nvars_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const;

    Rational evaluate(std::span<const Rational> point) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

private:
    void add_term(const Monomial& m, const Rational& c);

    std::size_t nvars_;
    std::map<Monomial, Rational> terms_;
};

// Highest total degree first, e.g. "x^2*y - 3*y + 1/2".
std::string to_string(const Polynomial& p, const std::vector<std::string>& names);

// Scalar model for the generic evaluator over polynomials. Only add, sub, mul
// and neg are interpreted.
struct PolyModel {
    using Scalar = Polynomial;
    std::size_t nvars = 0;

    Polynomial literal(const Rational& r) const { return Polynomial::constant(nvars, r); }
    Polynomial apply(const PrimFn& f, std::span<const Polynomial> args) const;
    bool is_zero(const Polynomial& p) const;
};

// Normal form of a first-order term in the polynomial fragment. Throws
// NotFirstOrder or UnsupportedPrim.
Polynomial poly_normalize(const Term& t, const TypingContext& theta,
                          const PrimRegistry& prims = PrimRegistry::standard());

// eval(t) at a rational point, computed exactly. Throws UnsupportedPrim for
// prims without an exact evaluator.
Rational eval_exact_at(const Term& t, const TypingContext& theta, std::span<const Rational> point,
                       const PrimRegistry& prims = PrimRegistry::standard());

} // namespace rlam

#endif
