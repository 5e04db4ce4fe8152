#ifndef RLAM_SYNTAX_HPP
#define RLAM_SYNTAX_HPP

#include "rlam/formula.hpp"
#include "rlam/registry.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rlam {

// Parsers. Terms are freshened so that every binder is unique and distinct
// from the free variables. Infix + - * < <= = > >= resolve to add, sub, mul,
// lt, le, eq, gt, ge; prim names (and registry aliases) are reserved.
Term parse_term(std::string_view source, const PrimRegistry& prims = PrimRegistry::standard());
SimpleType parse_type(std::string_view source);
RefType parse_ref_type(std::string_view source, const PrimRegistry& prims = PrimRegistry::standard());
Formula parse_formula(std::string_view source, const PrimRegistry& prims = PrimRegistry::standard());

std::string pretty(const Term& t);

struct RefBinding {
    std::string name;
    RefType type;
};

// A .rlam file: one term plus optional judgment pragmas
//   @context x : {a}, y : R, f : {a} -> {b}
//   @domain <formula>
//   @image <formula>
//   @type <refinement type>
struct SourceFile {
    Term term;
    std::optional<std::vector<RefBinding>> context;
    std::optional<Formula> domain;
    std::optional<Formula> image;
    std::optional<RefType> type;

    // Context used for simple typing. Without a @context pragma the free
    // variables are real, in order of first occurrence.
    TypingContext typing_context() const;
    std::vector<RefBinding> ref_context() const;
};

SourceFile parse_source(std::string_view source, const PrimRegistry& prims = PrimRegistry::standard());

// Refinement of a simple type with all formulas T. Ground variables are named
// after `hint`, with a numeric suffix for arrow components. Throws
// InvalidRefType when the type falls outside the restricted grammar.
RefType trivial_refinement(const SimpleType& t, const std::string& hint);

} // namespace rlam

#endif
