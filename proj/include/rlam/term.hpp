#ifndef RLAM_TERM_HPP
#define RLAM_TERM_HPP

#include "rlam/formula.hpp"
#include "rlam/rational.hpp"
#include "rlam/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rlam {

struct TermNode;

struct Param {
    std::string name;
    SimpleType type;
    std::optional<RefType> ref; // refinement annotation; erases to type
};

// Formulas for the conditional rule; any may be omitted.
struct IfAnnotation {
    std::optional<Formula> guard_continuity; // theta_t
    std::optional<Formula> guard_zero;       // theta_(t,0)
    std::optional<Formula> guard_one;        // theta_(t,1)
    std::optional<Formula> then_domain;      // theta_s
    std::optional<Formula> else_domain;      // theta_p

    bool empty() const
    {
        return !guard_continuity && !guard_zero && !guard_one && !then_domain && !else_domain;
    }
};

bool operator==(const Param& a, const Param& b);
bool operator==(const IfAnnotation& a, const IfAnnotation& b);

// Immutable, shared AST node handle.
class Term {
public:
    static Term var(std::string name);
    static Term lit(Rational value);
    static Term prim(std::string name, std::vector<Term> args);
    static Term lam(std::vector<Param> params, Term body);
    static Term app(Term fn, std::vector<Term> args);
    static Term pair(Term left, Term right);
    static Term proj(int index, Term arg);
    static Term ite(Term guard, Term then_branch, Term else_branch, std::optional<IfAnnotation> ann = {});

    const TermNode& node() const { return *node_; }

    template <class T>
    const T* as() const;
    template <class T>
    bool is() const { return as<T>() != nullptr; }

    friend bool operator==(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const TermNode> node_;
};


namespace ast {

struct Var {
    std::string name;
};
struct Lit {
    Rational value;
};
struct PrimApp {
    std::string prim;
    std::vector<Term> args;
};
struct Lam {
    std::vector<Param> params;
    Term body;
};
struct App {
    Term fn;
    std::vector<Term> args;
};
struct Pair {
    Term left;
    Term right;
};
struct Proj {
    int index; // 1 or 2
    Term arg;
};
struct If {
    Term guard;
    Term then_branch;
    Term else_branch;
    std::optional<IfAnnotation> ann;
};

} // namespace ast

struct TermNode {
    std::variant<ast::Var, ast::Lit, ast::PrimApp, ast::Lam, ast::App, ast::Pair, ast::Proj, ast::If> v;
};

template <class T>
const T* Term::as() const
{
    return std::get_if<T>(&node_->v);
}

} // namespace rlam

#endif
