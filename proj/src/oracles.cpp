#include "rlam/oracles.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>

namespace rlam {

double finite_diff(const RealFn& f, std::span<const double> point, std::size_t i, double h)
{
    std::vector<double> plus(point.begin(), point.end());
    std::vector<double> minus = plus;
    plus.at(i) += h;
    minus.at(i) -= h;
    return (f(plus) - f(minus)) / (2 * h);
}

namespace {

std::vector<std::vector<double>> directions(std::size_t n, const ProbeConfig& cfg, std::uint64_t seed)
{
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d(n, 0.0);
        d[i] = 1.0;
        out.push_back(d);
        d[i] = -1.0;
        out.push_back(d);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < cfg.random_directions && n > 0; ++k) {
        std::vector<double> d(n);
        double norm = 0;
        while (norm == 0) {
            norm = 0;
            for (auto& c : d) {
                c = gauss(rng);
                norm += c * c;
            }
        }
        norm = std::sqrt(norm);
        for (auto& c : d)
            c /= norm;
        out.push_back(d);
    }
    return out;
}

bool negative(const std::vector<double>& d)
{
    for (double c : d)
        if (c != 0)
            return c < 0;
    return false;
}

} // namespace

ContinuityVerdict continuity_probe(const RealFn& f, const DomainFn& domain,
                                   const std::vector<std::vector<double>>& seeds, const ProbeConfig& cfg)
{
    std::size_t skipped = 0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const auto& x = seeds[s];
        if (!domain(x)) {
            ++skipped;
            continue;
        }
        double fx = f(x);
        double tol = cfg.tolerance * std::max(1.0, std::abs(fx));
        bool usable = false;
        // Seeded per point so the verdict does not depend on seed order.
        for (const auto& d : directions(x.size(), cfg, cfg.seed + s)) {
            std::vector<double> y(x.size());
            bool failed = false;
            double limit = 0;
            for (int k = cfg.cutoff; k <= cfg.depth; ++k) {
                double r = std::ldexp(cfg.r0, -k);
                for (std::size_t i = 0; i < x.size(); ++i)
                    y[i] = x[i] + r * d[i];
                if (!domain(y))
                    continue;
                usable = true;
                double fy = f(y);
                if (!(std::abs(fy - fx) <= tol)) {
                    failed = true;
                    limit = fy;
                }
            }
            if (failed) {
                ContinuityVerdict v;
                v.kind = ContinuityVerdict::Kind::SuspectDiscontinuity;
                v.point = x;
                v.left = negative(d) ? limit : fx;
                v.right = negative(d) ? fx : limit;
                return v;
            }
        }
        if (!usable)
            ++skipped;
    }
    ContinuityVerdict v;
    if (seeds.empty()) {
        v.kind = ContinuityVerdict::Kind::Inconclusive;
        v.reason = "no seed points";
    } else if (2 * skipped > seeds.size()) {
        v.kind = ContinuityVerdict::Kind::Inconclusive;
        v.reason = fmt::format("{} of {} seed(s) had no in-domain approach", skipped, seeds.size());
    }
    return v;
}

std::string to_string(const ContinuityVerdict& v)
{
    switch (v.kind) {
    case ContinuityVerdict::Kind::Continuous:
        return "Continuous";
    case ContinuityVerdict::Kind::Inconclusive:
        return "Inconclusive(" + v.reason + ")";
    case ContinuityVerdict::Kind::SuspectDiscontinuity: {
        std::string pt = v.point.size() == 1 ? fmt::format("{}", v.point[0])
                                              : fmt::format("({})", fmt::join(v.point, ", "));
        return fmt::format("SuspectDiscontinuity({}, {}, {})", pt, v.left, v.right);
    }
    }
    return {};
}

} // namespace rlam
