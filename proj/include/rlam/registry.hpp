#ifndef RLAM_REGISTRY_HPP
#define RLAM_REGISTRY_HPP

#include "rlam/formula.hpp"
#include "rlam/rational.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rlam {

// A continuity fact for an n-ary prim: f is continuous on the truth domain of
// `domain` (over a1..an) and maps it into the truth domain of `image` (over b).
struct ContinuityFact {
    Formula domain;
    Formula image;
};

// For {0,1}-valued prims: where the value is 0, where it is 1, and where the
// prim is continuous. Formulas range over a1..an.
struct GuardFacts {
    Formula zero;
    Formula one;
    Formula continuity;
};

struct PrimFn {
    std::string name;
    std::size_t arity = 0;
    std::function<double(std::span<const double>)> eval;
    // Exact evaluator; empty for prims with irrational values.
    std::function<Rational(std::span<const Rational>)> exact;
    // Names of the partial derivative prims, one per argument, or empty.
    std::vector<std::string> partials;
    std::vector<ContinuityFact> facts;
    std::optional<GuardFacts> guard;

    double operator()(std::span<const double> args) const { return eval(args); }
};

// Template variable names used in facts.
std::string fact_arg(std::size_t i); // "a1", "a2", ...
inline const std::string fact_result = "b";

class PrimRegistry {
public:
    // Adds or replaces a prim. Validation of cross references happens in
    // validate().
    void add(PrimFn fn);
    void add_alias(const std::string& alias, const std::string& target);

    // Resolves aliases; nullptr if unknown.
    const PrimFn* find(std::string_view name) const;
    const PrimFn& at(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }
    std::string canonical(std::string_view name) const;

    std::vector<std::string> names() const;
    const std::map<std::string, std::string, std::less<>>& aliases() const { return aliases_; }

    // Throws std::logic_error if a partial names a missing prim or one of a
    // different arity, or if a fact mentions variables outside a1..an, b.
    void validate() const;

    static const PrimRegistry& standard();

    // Copy of `base` with aliases read from a JSON manifest of the form
    // {"aliases": {"name": "target", ...}}.
    static PrimRegistry with_aliases(const PrimRegistry& base, const std::filesystem::path& manifest);

private:
    std::map<std::string, PrimFn, std::less<>> prims_;
    std::map<std::string, std::string, std::less<>> aliases_;
};

} // namespace rlam

#endif
