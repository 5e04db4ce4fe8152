#ifndef RLAM_ORACLES_HPP
#define RLAM_ORACLES_HPP

#include "rlam/semantics.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rlam {

inline constexpr std::uint64_t default_seed = 0xC0FFEE;

// Central difference (f(x + h e_i) - f(x - h e_i)) / 2h.
double finite_diff(const RealFn& f, std::span<const double> point, std::size_t i, double h = 1e-6);

struct ProbeConfig {
    int depth = 40;         // radii r0 * 2^-k for k = 0..depth
    int cutoff = 30;        // radii past this index must agree with f(x)
    double r0 = 1.0;
    int random_directions = 8;
    double tolerance = 1e-6; // scaled by max(1, |f(x)|)
    std::uint64_t seed = default_seed;
};

struct ContinuityVerdict {
    enum class Kind { Continuous, SuspectDiscontinuity, Inconclusive };
    Kind kind = Kind::Continuous;
    std::vector<double> point;
    // Limits approached from the negative and positive side of the failing
    // direction; one of them is f(point).
    double left = 0;
    double right = 0;
    std::string reason;
};

using DomainFn = std::function<bool(std::span<const double>)>;

// Approaches each seed along axis and random directions. A seed with no
// in-domain sequence is skipped; if more than half are skipped the verdict is
// Inconclusive.
ContinuityVerdict continuity_probe(const RealFn& f, const DomainFn& domain,
                                   const std::vector<std::vector<double>>& seeds, const ProbeConfig& cfg = {});

std::string to_string(const ContinuityVerdict& v);

} // namespace rlam

#endif
