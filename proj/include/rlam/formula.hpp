#ifndef RLAM_FORMULA_HPP
#define RLAM_FORMULA_HPP

#include "rlam/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace rlam {

// Expressions over logical variables: variables, exact constants and
// applications of registered primitives. Arithmetic is add/sub/mul/neg.
class Expr {
public:
    enum class Kind { Var, Const, App };

    static Expr var(std::string name);
    static Expr constant(Rational value);
    static Expr app(std::string fn, std::vector<Expr> args);

    Kind kind() const;
    bool is_var() const { return kind() == Kind::Var; }
    bool is_const() const { return kind() == Kind::Const; }
    bool is_app() const { return kind() == Kind::App; }

    // Variable name for Var, function name for App.
    const std::string& name() const;
    const Rational& value() const;
    const std::vector<Expr>& args() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Core logic: T | e <= e | p /\ q | ~p. Everything else is sugar over these
// four constructors and is expanded on construction.
class Formula {
public:
    enum class Kind { Top, Leq, And, Not };

    static Formula top();
    static Formula leq(Expr lhs, Expr rhs);
    static Formula conj(Formula a, Formula b);
    static Formula negate(Formula a);

    static Formula bottom();
    static Formula lt(Expr lhs, Expr rhs);
    static Formula eq(Expr lhs, Expr rhs);
    static Formula geq(Expr lhs, Expr rhs);
    static Formula gt(Expr lhs, Expr rhs);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    // Drops T conjuncts; an empty list is T.
    static Formula conj_all(const std::vector<Formula>& parts);

    Kind kind() const;
    bool is_top() const { return kind() == Kind::Top; }

    const Expr& lhs() const;
    const Expr& rhs() const;
    const Formula& left() const;
    const Formula& right() const;
    const Formula& operand() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

std::set<std::string> vars(const Expr& e);
std::set<std::string> vars(const Formula& f);

// Simultaneous substitution of expressions for logical variables.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& sub);
Formula substitute(const Formula& f, const std::map<std::string, Expr>& sub);
Formula rename(const Formula& f, const std::map<std::string, std::string>& renaming);

// Flattens nested conjunctions; T contributes nothing.
std::vector<Formula> conjuncts(const Formula& f);

// Concrete syntax; derived forms (<, =, \/, ...) are re-sugared so the
// output parses back to the same core formula.
std::string to_string(const Expr& e);
std::string to_string(const Formula& f);

} // namespace rlam

#endif
