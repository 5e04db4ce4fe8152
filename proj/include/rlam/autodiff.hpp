#ifndef RLAM_AUTODIFF_HPP
#define RLAM_AUTODIFF_HPP

#include "rlam/registry.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace rlam {

// Injective map x |-> dx. Dual names are "d%x", freshened when they would
// collide with a source name.
class DualNaming {
public:
    DualNaming() = default;
    explicit DualNaming(const std::set<std::string>& sources);

    const std::string& operator()(const std::string& x) const;
    const std::map<std::string, std::string>& entries() const { return map_; }

private:
    std::map<std::string, std::string> map_;
};

SimpleType ad_type(const SimpleType& t);

TypingContext ad_ctx(const TypingContext& ctx, const DualNaming& naming);
TypingContext ad_ctx(const TypingContext& ctx);

struct AdResult {
    Term term;
    DualNaming naming;
};

// Forward-mode transformation. Names are drawn from t and from ctx.
// Throws AdError for conditionals and for prims without registered partials.
AdResult ad_term(const Term& t, const TypingContext& ctx = {}, const PrimRegistry& prims = PrimRegistry::standard());
Term ad_term(const Term& t, const DualNaming& naming, const PrimRegistry& prims = PrimRegistry::standard());

// (y, 1.0) if x = y, else (y, 0.0)
Term dual_of(const std::string& x, const std::string& y);

// snd (Dt[dual_x(x1)/dx1, ..., dual_x(xn)/dxn])
Term derive(const TypingContext& theta, const Term& t, const std::string& x,
            const PrimRegistry& prims = PrimRegistry::standard());

std::vector<double> grad_at(const Term& t, const TypingContext& theta, std::span<const double> point,
                            const PrimRegistry& prims = PrimRegistry::standard());

} // namespace rlam

#endif
