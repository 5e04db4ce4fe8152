#ifndef RLAM_TYPES_HPP
#define RLAM_TYPES_HPP

#include "rlam/formula.hpp"

#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rlam {

// R | t * t | t -> t
class SimpleType {
public:
    enum class Kind { Real, Prod, Arrow };

    SimpleType() = default; // R

    static SimpleType real() { return {}; }
    static SimpleType prod(SimpleType left, SimpleType right);
    static SimpleType arrow(SimpleType domain, SimpleType codomain);
    // Right-nested product t1 * (t2 * (... * tn)); a single component is itself.
    static SimpleType tuple(std::span<const SimpleType> components);

    Kind kind() const { return kind_; }
    bool is_real() const { return kind_ == Kind::Real; }
    bool is_prod() const { return kind_ == Kind::Prod; }
    bool is_arrow() const { return kind_ == Kind::Arrow; }

    // Product components, or arrow domain/codomain.
    const SimpleType& left() const;
    const SimpleType& right() const;
    const SimpleType& domain() const { return left(); }
    const SimpleType& codomain() const { return right(); }

    friend bool operator==(const SimpleType& a, const SimpleType& b);

private:
    SimpleType(Kind kind, SimpleType left, SimpleType right);

    Kind kind_ = Kind::Real;
    std::shared_ptr<const std::pair<SimpleType, SimpleType>> children_;
};

std::string to_string(const SimpleType& t);

// Components of a right-nested product; a non-product is a single component.
std::vector<SimpleType> tuple_components(const SimpleType& t);

class TypingContext {
public:
    struct Entry {
        std::string name;
        SimpleType type;
    };

    TypingContext() = default;
    TypingContext(std::initializer_list<Entry> entries);

    // Appends a binding; an existing binding of the same name is dropped so
    // names stay pairwise distinct.
    TypingContext extended(std::string name, SimpleType type) const;

    const SimpleType* find(std::string_view name) const;
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<Entry> entries_;
};

std::string to_string(const TypingContext& ctx);

// Refinement types over the restricted grammar:
//   F ::= {a in R}
//   H ::= (H1..Hm, F1..Fn) -[psi]-> H  |  (H1..Hm, F1..Fn) -[psi | phi]-> F
// psi constrains the real-argument variables, phi the result variable.
class RefType {
public:
    static RefType real(std::string var);
    // Validates ordering (higher-order arguments first), distinct argument
    // variables and the variable scopes of both formulas.
    static RefType arrow(std::vector<RefType> args, Formula domain, std::optional<Formula> image, RefType result);

    bool is_real() const;
    bool is_higher() const { return !is_real(); }

    const std::string& var() const;
    const std::vector<RefType>& args() const;
    const Formula& domain() const;
    const std::optional<Formula>& image() const;
    const RefType& result() const;

    std::size_t higher_arity() const;
    // Logical variables of the real arguments, in order.
    std::vector<std::string> real_arg_vars() const;

private:
    struct Node;
    explicit RefType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

std::string to_string(const RefType& t);

SimpleType erase(const RefType& t);

// Equality up to renaming of bound logical variables. Formulas are compared
// structurally after renaming.
bool ref_equiv(const RefType& a, const RefType& b);

// Renames the variables bound by an arrow's real arguments and result.
RefType rename_vars(const RefType& t, const std::map<std::string, std::string>& renaming);

} // namespace rlam

#endif
