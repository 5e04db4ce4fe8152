#ifndef RLAM_SUBST_HPP
#define RLAM_SUBST_HPP

#include "rlam/term.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rlam {

std::set<std::string> free_vars(const Term& t);
// Free variables in order of first occurrence (left to right).
std::vector<std::string> free_vars_ordered(const Term& t);
// Every variable name occurring in t, bound or free.
std::set<std::string> all_names(const Term& t);

// s[t/x], renaming binders of s that would capture free variables of t.
Term substitute(const Term& s, const std::string& x, const Term& t);
// Simultaneous substitution.
Term substitute(const Term& s, const std::map<std::string, Term>& sub);

bool alpha_equiv(const Term& s, const Term& t);

// Renames binders that repeat an earlier binder or a free variable. A term
// whose binders are already unique is returned unchanged.
Term freshen(const Term& t);

// "base'N" from a process-wide counter; any "'N" suffix on base is replaced.
// The result avoids every name in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid = {});

} // namespace rlam

#endif
