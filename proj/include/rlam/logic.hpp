#ifndef RLAM_LOGIC_HPP
#define RLAM_LOGIC_HPP

#include "rlam/formula.hpp"
#include "rlam/rational.hpp"
#include "rlam/registry.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rlam {

using Assignment = std::map<std::string, Rational>;
using RealAssignment = std::map<std::string, double>;

// sigma |= phi. Prims with an exact evaluator are applied exactly; an atom
// involving any other prim is decided in double precision. Throws
// UndefinedVariable.
bool truth_domain_member(const Formula& phi, const Assignment& sigma,
                         const PrimRegistry& prims = PrimRegistry::standard());
bool truth_domain_member(const Formula& phi, const RealAssignment& sigma,
                         const PrimRegistry& prims = PrimRegistry::standard());

std::string to_string(const Assignment& sigma);

// sum(coeffs[x] * x) + constant < 0 (strict) or <= 0.
struct LinearConstraint {
    std::map<std::string, Rational> coeffs;
    Rational constant;
    bool strict = false;

    bool holds(const Assignment& sigma) const;
};

// e as a rational-linear combination of variables, if it is one.
struct LinearExpr {
    std::map<std::string, Rational> coeffs;
    Rational constant;
};
std::optional<LinearExpr> linearize(const Expr& e, const PrimRegistry& prims = PrimRegistry::standard());

// Picks a value for one variable given its bounds after back-substitution.
// Bounds are nullopt when absent; the bool marks strictness.
struct Bound {
    Rational value;
    bool strict = false;
};
using ValueChooser = std::function<Rational(const std::optional<Bound>& lower, const std::optional<Bound>& upper)>;

// 0 when allowed, else the midpoint of a two-sided interval, else the bound
// itself (or one unit inside a strict bound).
Rational canonical_choice(const std::optional<Bound>& lower, const std::optional<Bound>& upper);

// Fourier-Motzkin over exact rationals. Returns a satisfying assignment for
// every variable mentioned, or nullopt if the system is infeasible. Throws
// std::length_error past `max_constraints` intermediate constraints.
std::optional<Assignment> fm_solve(const std::vector<LinearConstraint>& system,
                                   const ValueChooser& choose = canonical_choice,
                                   std::size_t max_constraints = 20000);

struct SatResult {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    Assignment witness;
    std::string reason;
};

SatResult satisfiable(const Formula& f, const PrimRegistry& prims = PrimRegistry::standard());

struct Entailment {
    enum class Kind { Valid, Invalid, Unknown };
    Kind kind = Kind::Unknown;
    Assignment witness; // for Invalid; defined on vars(psi) and vars(phi)
    std::string reason; // for Unknown

    bool valid() const { return kind == Kind::Valid; }
};

// |= psi => phi, decided by DNF and Fourier-Motzkin for linear formulas.
// Non-linear subterms are treated as opaque variables when refuting the
// negation and sampled when searching for a counterexample.
Entailment entails(const Formula& psi, const Formula& phi, const PrimRegistry& prims = PrimRegistry::standard());

std::string to_string(const Entailment& e);

// Points of the truth domain of f, defined on vars(f) and `extra`: canonical
// and boundary points of each linear disjunct first, then random points. May
// return fewer than `count` (none if f looks unsatisfiable).
std::vector<Assignment> sample_truth_domain(const Formula& f, std::size_t count, std::uint64_t seed,
                                            const std::set<std::string>& extra = {},
                                            const PrimRegistry& prims = PrimRegistry::standard());

} // namespace rlam

#endif
