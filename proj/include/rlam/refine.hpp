#ifndef RLAM_REFINE_HPP
#define RLAM_REFINE_HPP

#include "rlam/logic.hpp"
#include "rlam/oracles.hpp"
#include "rlam/registry.hpp"
#include "rlam/syntax.hpp"
#include "rlam/term.hpp"
#include "rlam/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlam {

// Ordered refined bindings. Names are distinct, and so are the logical
// variables of the ground entries.
class RefContext {
public:
    RefContext() = default;
    explicit RefContext(std::vector<RefBinding> entries);

    // Appends a binding, dropping an earlier one of the same name.
    RefContext extended(const std::string& name, const RefType& type) const;

    const RefType* find(const std::string& name) const;
    const std::vector<RefBinding>& entries() const { return entries_; }
    std::vector<RefBinding> ground() const;
    std::vector<RefBinding> higher() const;

    TypingContext erase() const;

private:
    std::vector<RefBinding> entries_;
};

std::string to_string(const RefContext& ctx);

// Gamma |-[domain ~> image] term : target. The image is present exactly when
// the target is ground; it defaults to T there.
struct RefJudgment {
    RefContext context;
    Term term;
    RefType target;
    Formula domain = Formula::top();
    std::optional<Formula> image;
};

std::string to_string(const RefJudgment& j);

// The judgment described by a source file's pragmas. A file without @type
// gets the trivial refinement of its simple type.
RefJudgment judgment_of(const SourceFile& file, const PrimRegistry& prims = PrimRegistry::standard());

struct CheckConfig {
    bool strict_equiv = false; // side condition (2) only by alpha-equivalence
    bool semantic_ho = false;  // compare higher-order branches by application
    std::uint64_t seed = default_seed;
    std::size_t equiv_samples = 64;
};

struct Verdict {
    enum class Kind { Accepted, Rejected, Unknown };
    Kind kind = Kind::Accepted;
    // Derivation, one rule instance per line, premises indented.
    std::vector<std::string> trace;
    // For Rejected and Unknown: the rule, the side condition that failed and
    // the subterm it was checked at.
    std::string rule;
    std::string condition;
    std::string subterm;
    std::optional<Assignment> witness;
    std::vector<std::string> gaps;
};

std::string to_string(Verdict::Kind k);

// Throws MissingAnnotation when a conditional has neither formulas nor a
// guard from which they can be synthesized; TypeError if the erased judgment
// does not typecheck; InvalidRefType for a target outside the restricted
// grammar.
Verdict refine_check(const RefJudgment& j, const CheckConfig& cfg = {},
                     const PrimRegistry& prims = PrimRegistry::standard());

struct EquivResult {
    enum class Kind { Equiv, NotEquiv, Unknown };
    Kind kind = Kind::Equiv;
    Assignment witness;
    std::string detail;
};

// Semi-decision for s sigma ==ctx p sigma over the assignments sigma of the
// ground context that satisfy `boundary`. NotEquiv is definitive.
EquivResult ctx_equiv_probe(const Term& s, const Term& p, const RefContext& ctx, const Formula& boundary,
                            const CheckConfig& cfg = {}, const PrimRegistry& prims = PrimRegistry::standard());

// A judgment read as a function R^n -> R: a closed lambda over reals through
// its parameters and its arrow formulas, a ground target through its context.
struct FirstOrderView {
    Term body;
    TypingContext theta;
    std::vector<std::string> logical; // logical variable per coordinate
    Formula domain = Formula::top();
    Formula image = Formula::top();
    std::string result; // logical variable of the image
};

std::optional<FirstOrderView> first_order_view(const RefJudgment& j);

// Guard formulas from the registered guard facts of a comparison prim whose
// arguments are linear in the ground context. Branch domains are left unset.
std::optional<IfAnnotation> synthesize_guard_formulas(const Term& guard, const RefContext& ctx,
                                                      const PrimRegistry& prims = PrimRegistry::standard());

} // namespace rlam

#endif
