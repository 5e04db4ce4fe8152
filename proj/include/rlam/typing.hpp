#ifndef RLAM_TYPING_HPP
#define RLAM_TYPING_HPP

#include "rlam/registry.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

namespace rlam {

// Syntax-directed simple typing; throws TypeError (or a subclass).
SimpleType typecheck(const TypingContext& ctx, const Term& t, const PrimRegistry& prims = PrimRegistry::standard());

// R, or an arrow whose argument tuple lists restricted higher-order types
// before reals and whose result is restricted. Bare products are rejected.
bool check_restricted(const SimpleType& t);

// Number of context variables when ctx is all-real and t : R; throws
// NotFirstOrder otherwise.
std::size_t check_first_order(const TypingContext& ctx, const Term& t,
                              const PrimRegistry& prims = PrimRegistry::standard());

} // namespace rlam

#endif
