#include "rlam/logic.hpp"

#include "rlam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace rlam {

namespace {

// Value of an expression: exact while every step is exact.
struct Num {
    bool exact = true;
    Rational q;
    double d = 0;
};

Num eval_expr(const Expr& e, const std::function<Num(const std::string&)>& lookup, const PrimRegistry& prims)
{
    switch (e.kind()) {
    case Expr::Kind::Var:
        return lookup(e.name());
    case Expr::Kind::Const:
        return Num{true, e.value(), to_double(e.value())};
    case Expr::Kind::App:
        break;
    }
    const PrimFn& fn = prims.at(e.name());
    if (fn.arity != e.args().size())
        throw EvalError("arity mismatch for primitive '" + e.name() + "' in formula");
    std::vector<Num> args;
    bool exact = static_cast<bool>(fn.exact);
    for (const auto& a : e.args()) {
        args.push_back(eval_expr(a, lookup, prims));
        exact = exact && args.back().exact;
    }
    if (exact) {
        std::vector<Rational> qs;
        for (const auto& a : args)
            qs.push_back(a.q);
        Rational q = fn.exact(qs);
        return Num{true, q, to_double(q)};
    }
    std::vector<double> ds;
    for (const auto& a : args)
        ds.push_back(a.d);
    return Num{false, 0, fn.eval(ds)};
}

bool member(const Formula& f, const std::function<Num(const std::string&)>& lookup, const PrimRegistry& prims)
{
    switch (f.kind()) {
    case Formula::Kind::Top:
        return true;
    case Formula::Kind::Leq: {
        Num a = eval_expr(f.lhs(), lookup, prims);
        Num b = eval_expr(f.rhs(), lookup, prims);
        return a.exact && b.exact ? a.q <= b.q : a.d <= b.d;
    }
    case Formula::Kind::And:
        return member(f.left(), lookup, prims) && member(f.right(), lookup, prims);
    case Formula::Kind::Not:
        return !member(f.operand(), lookup, prims);
    }
    return false;
}

} // namespace

bool truth_domain_member(const Formula& phi, const Assignment& sigma, const PrimRegistry& prims)
{
    return member(
        phi,
        [&](const std::string& x) {
            auto it = sigma.find(x);
            if (it == sigma.end())
                throw UndefinedVariable(x);
            return Num{true, it->second, to_double(it->second)};
        },
        prims);
}

bool truth_domain_member(const Formula& phi, const RealAssignment& sigma, const PrimRegistry& prims)
{
    return member(
        phi,
        [&](const std::string& x) {
            auto it = sigma.find(x);
            if (it == sigma.end())
                throw UndefinedVariable(x);
            return Num{false, 0, it->second};
        },
        prims);
}

std::string to_string(const Assignment& sigma)
{
    std::vector<std::string> parts;
    for (const auto& [x, v] : sigma)
        parts.push_back(x + " = " + v.get_str());
    return fmt::format("{}", fmt::join(parts, ", "));
}

bool LinearConstraint::holds(const Assignment& sigma) const
{
    Rational sum = constant;
    for (const auto& [x, c] : coeffs) {
        auto it = sigma.find(x);
        if (it == sigma.end())
            throw UndefinedVariable(x);
        sum += c * it->second;
    }
    return strict ? sum < 0 : sum <= 0;
}

namespace {

void add_scaled(LinearExpr& acc, const LinearExpr& e, const Rational& k)
{
    for (const auto& [x, c] : e.coeffs) {
        Rational& slot = acc.coeffs[x];
        slot += k * c;
        if (slot == 0)
            acc.coeffs.erase(x);
    }
    acc.constant += k * e.constant;
}

// Non-linear subterms become opaque variables when `opaque` is given.
std::optional<LinearExpr> linearize_impl(const Expr& e, const PrimRegistry& prims,
                                         std::map<std::string, Expr>* opaque)
{
    auto as_opaque = [&]() -> std::optional<LinearExpr> {
        if (!opaque)
            return std::nullopt;
        std::string key = "[" + to_string(e) + "]";
        opaque->insert_or_assign(key, e);
        LinearExpr out;
        out.coeffs[key] = 1;
        return out;
    };
    switch (e.kind()) {
    case Expr::Kind::Var: {
        LinearExpr out;
        out.coeffs[e.name()] = 1;
        return out;
    }
    case Expr::Kind::Const: {
        LinearExpr out;
        out.constant = e.value();
        return out;
    }
    case Expr::Kind::App:
        break;
    }
    const PrimFn& fn = prims.at(e.name());
    std::string name = fn.name;
    std::vector<LinearExpr> args;
    for (const auto& a : e.args()) {
        auto l = linearize_impl(a, prims, opaque);
        if (!l)
            return std::nullopt;
        args.push_back(std::move(*l));
    }
    LinearExpr out;
    if (name == "add" || name == "sub") {
        add_scaled(out, args[0], 1);
        add_scaled(out, args[1], name == "add" ? 1 : -1);
        return out;
    }
    if (name == "neg") {
        add_scaled(out, args[0], -1);
        return out;
    }
    if (name == "mul") {
        if (args[0].coeffs.empty()) {
            add_scaled(out, args[1], args[0].constant);
            return out;
        }
        if (args[1].coeffs.empty()) {
            add_scaled(out, args[0], args[1].constant);
            return out;
        }
        return as_opaque();
    }
    bool ground = std::all_of(args.begin(), args.end(), [](const LinearExpr& a) { return a.coeffs.empty(); });
    if (ground && fn.exact) {
        std::vector<Rational> qs;
        for (const auto& a : args)
            qs.push_back(a.constant);
        out.constant = fn.exact(qs);
        return out;
    }
    return as_opaque();
}

LinearConstraint normalized(LinearConstraint c)
{
    for (auto it = c.coeffs.begin(); it != c.coeffs.end();)
        it = it->second == 0 ? c.coeffs.erase(it) : std::next(it);
    Rational scale = 0;
    for (const auto& [x, k] : c.coeffs)
        scale = std::max<Rational>(scale, abs(k));
    if (scale != 0) {
        for (auto& [x, k] : c.coeffs)
            k /= scale;
        c.constant /= scale;
    }
    return c;
}

auto key(const LinearConstraint& c) { return std::tie(c.coeffs, c.constant, c.strict); }

struct ConstraintLess {
    bool operator()(const LinearConstraint& a, const LinearConstraint& b) const { return key(a) < key(b); }
};

bool trivially_true(const LinearConstraint& c) { return c.coeffs.empty() && (c.strict ? c.constant < 0 : c.constant <= 0); }
bool trivially_false(const LinearConstraint& c) { return c.coeffs.empty() && !trivially_true(c); }

} // namespace

std::optional<LinearExpr> linearize(const Expr& e, const PrimRegistry& prims)
{
    return linearize_impl(e, prims, nullptr);
}

Rational canonical_choice(const std::optional<Bound>& lower, const std::optional<Bound>& upper)
{
    bool zero_ok = (!lower || lower->value < 0 || (lower->value == 0 && !lower->strict)) &&
                   (!upper || upper->value > 0 || (upper->value == 0 && !upper->strict));
    if (zero_ok)
        return 0;
    if (lower && upper)
        return lower->value == upper->value ? lower->value : Rational((lower->value + upper->value) / 2);
    if (lower)
        return lower->strict ? Rational(lower->value + 1) : lower->value;
    return upper->strict ? Rational(upper->value - 1) : upper->value;
}

std::optional<Assignment> fm_solve(const std::vector<LinearConstraint>& system, const ValueChooser& choose,
                                   std::size_t max_constraints)
{
    std::set<std::string> var_set;
    std::set<LinearConstraint, ConstraintLess> current;
    for (const auto& c0 : system) {
        LinearConstraint c = normalized(c0);
        if (trivially_false(c))
            return std::nullopt;
        if (trivially_true(c))
            continue;
        for (const auto& [x, k] : c.coeffs)
            var_set.insert(x);
        current.insert(std::move(c));
    }
    std::vector<std::string> order(var_set.begin(), var_set.end());
    std::vector<std::vector<LinearConstraint>> stages;
    for (const auto& x : order) {
        stages.emplace_back(current.begin(), current.end());
        std::vector<const LinearConstraint*> upper, lower;
        std::set<LinearConstraint, ConstraintLess> next;
        for (const auto& c : current) {
            auto it = c.coeffs.find(x);
            if (it == c.coeffs.end())
                next.insert(c);
            else if (it->second > 0)
                upper.push_back(&c);
            else
                lower.push_back(&c);
        }
        for (const auto* u : upper) {
            for (const auto* l : lower) {
                Rational au = u->coeffs.at(x);
                Rational al = -l->coeffs.at(x);
                LinearConstraint c;
                c.coeffs = u->coeffs;
                for (auto& [y, k] : c.coeffs)
                    k *= al;
                for (const auto& [y, k] : l->coeffs)
                    c.coeffs[y] += au * k;
                c.coeffs.erase(x);
                c.constant = al * u->constant + au * l->constant;
                c.strict = u->strict || l->strict;
                c = normalized(std::move(c));
                if (trivially_false(c))
                    return std::nullopt;
                if (!trivially_true(c))
                    next.insert(std::move(c));
                if (next.size() > max_constraints)
                    throw std::length_error("Fourier-Motzkin elimination exceeded its constraint budget");
            }
        }
        current = std::move(next);
    }
    Assignment sigma;
    for (std::size_t k = order.size(); k-- > 0;) {
        const std::string& x = order[k];
        std::optional<Bound> lo, hi;
        for (const auto& c : stages[k]) {
            auto it = c.coeffs.find(x);
            if (it == c.coeffs.end())
                continue;
            Rational rest = c.constant;
            for (const auto& [y, a] : c.coeffs)
                if (y != x)
                    rest += a * sigma.at(y);
            Rational v = -rest / it->second;
            if (it->second > 0) {
                if (!hi || v < hi->value || (v == hi->value && c.strict))
                    hi = Bound{v, c.strict};
            } else {
                if (!lo || v > lo->value || (v == lo->value && c.strict))
                    lo = Bound{v, c.strict};
            }
        }
        sigma[x] = choose(lo, hi);
    }
    return sigma;
}

namespace {

struct Literal {
    Formula atom; // a Leq
    bool positive;

    Formula formula() const { return positive ? atom : Formula::negate(atom); }
};

struct DnfBudgetExceeded {};

// Depth-first enumeration of the DNF clauses of f. `visit` returns true to
// stop early.
class ClauseWalker {
public:
    ClauseWalker(std::function<bool(const std::vector<Literal>&)> visit, std::size_t budget)
        : visit_(std::move(visit)), budget_(budget) {}

    bool run(const Formula& f) { return go({{f, true}}, {}); }

private:
    bool go(std::vector<std::pair<Formula, bool>> pending, std::vector<Literal> lits)
    {
        while (!pending.empty()) {
            auto [f, pos] = pending.back();
            pending.pop_back();
            switch (f.kind()) {
            case Formula::Kind::Top:
                if (!pos)
                    return false;
                break;
            case Formula::Kind::Leq:
                lits.push_back({f, pos});
                break;
            case Formula::Kind::Not:
                pending.emplace_back(f.operand(), !pos);
                break;
            case Formula::Kind::And:
                if (pos) {
                    pending.emplace_back(f.right(), true);
                    pending.emplace_back(f.left(), true);
                } else {
                    auto alt = pending;
                    alt.emplace_back(f.right(), false);
                    pending.emplace_back(f.left(), false);
                    if (go(std::move(pending), lits))
                        return true;
                    return go(std::move(alt), std::move(lits));
                }
                break;
            }
        }
        if (++count_ > budget_)
            throw DnfBudgetExceeded{};
        return visit_(lits);
    }

    std::function<bool(const std::vector<Literal>&)> visit_;
    std::size_t budget_;
    std::size_t count_ = 0;
};

constexpr std::size_t dnf_budget = 4096;

struct Clause {
    std::vector<Literal> literals;
    std::vector<LinearConstraint> constraints;
    std::map<std::string, Expr> opaque;
    std::set<std::string> vars; // logical variables, opaque keys excluded
};

Clause make_clause(const std::vector<Literal>& lits, const PrimRegistry& prims)
{
    Clause c;
    c.literals = lits;
    for (const auto& l : lits) {
        for (const auto& v : vars(l.atom))
            c.vars.insert(v);
        auto e = linearize_impl(l.atom.lhs() - l.atom.rhs(), prims, &c.opaque);
        LinearConstraint lc;
        if (l.positive) {
            lc.coeffs = e->coeffs;
            lc.constant = e->constant;
        } else {
            for (const auto& [x, k] : e->coeffs)
                lc.coeffs[x] = -k;
            lc.constant = -e->constant;
            lc.strict = true;
        }
        c.constraints.push_back(std::move(lc));
    }
    return c;
}

bool clause_holds(const Clause& c, const Assignment& sigma, const PrimRegistry& prims)
{
    for (const auto& l : c.literals)
        if (truth_domain_member(l.atom, sigma, prims) != l.positive)
            return false;
    return true;
}

Assignment restrict_to(const Assignment& sigma, const std::set<std::string>& keep)
{
    Assignment out;
    for (const auto& x : keep) {
        auto it = sigma.find(x);
        out[x] = it == sigma.end() ? Rational(0) : it->second;
    }
    return out;
}

// Grid over [-10, 10] in steps of 1/10, nearest the origin first.
std::vector<Rational> grid_axis()
{
    std::vector<Rational> out{0};
    for (int k = 1; k <= 100; ++k) {
        out.emplace_back(k, 10);
        out.emplace_back(-k, 10);
    }
    for (auto& q : out)
        q.canonicalize();
    return out;
}

Rational random_rational(std::mt19937_64& rng, int lo, int hi, int den)
{
    std::uniform_int_distribution<int> d(lo * den, hi * den);
    Rational q(d(rng), den);
    q.canonicalize();
    return q;
}

ValueChooser random_chooser(std::mt19937_64& rng)
{
    return [&rng](const std::optional<Bound>& lo, const std::optional<Bound>& hi) -> Rational {
        if (lo && hi) {
            if (lo->value == hi->value)
                return lo->value;
            std::uniform_int_distribution<int> d(1, 63);
            Rational t(d(rng), 64);
            t.canonicalize();
            return lo->value + (hi->value - lo->value) * t;
        }
        std::uniform_int_distribution<int> d(lo || hi ? 1 : -1280, 1280);
        Rational step(d(rng), 128);
        step.canonicalize();
        if (lo)
            return lo->value + step;
        if (hi)
            return hi->value - step;
        return step;
    };
}

// Search for a point satisfying a clause with non-linear atoms.
std::optional<Assignment> search_clause(const Clause& c, const PrimRegistry& prims)
{
    std::vector<std::string> xs(c.vars.begin(), c.vars.end());
    auto try_point = [&](const Assignment& sigma) {
        try {
            return clause_holds(c, sigma, prims);
        } catch (const EvalError&) {
            return false;
        }
    };
    if (xs.empty()) {
        Assignment empty;
        if (try_point(empty))
            return empty;
        return std::nullopt;
    }
    if (xs.size() <= 2) {
        auto axis = grid_axis();
        Assignment sigma;
        for (const auto& a : axis) {
            sigma[xs[0]] = a;
            if (xs.size() == 1) {
                if (try_point(sigma))
                    return sigma;
                continue;
            }
            for (const auto& b : axis) {
                sigma[xs[1]] = b;
                if (try_point(sigma))
                    return sigma;
            }
        }
        return std::nullopt;
    }
    std::mt19937_64 rng(0x5EED);
    auto chooser = random_chooser(rng);
    for (int attempt = 0; attempt < 4000; ++attempt) {
        Assignment sigma;
        if (attempt % 2 == 0) {
            std::optional<Assignment> guided;
            try {
                guided = fm_solve(c.constraints, chooser);
            } catch (const std::length_error&) {
            }
            if (!guided)
                continue;
            sigma = restrict_to(*guided, c.vars);
        } else {
            for (const auto& x : xs)
                sigma[x] = random_rational(rng, -10, 10, 10);
        }
        if (try_point(sigma))
            return sigma;
    }
    return std::nullopt;
}

} // namespace

SatResult satisfiable(const Formula& f, const PrimRegistry& prims)
{
    SatResult result;
    result.kind = SatResult::Kind::Unsat;
    std::string unknown_reason;
    try {
        ClauseWalker walker(
            [&](const std::vector<Literal>& lits) {
                Clause c = make_clause(lits, prims);
                std::optional<Assignment> sol;
                try {
                    sol = fm_solve(c.constraints);
                } catch (const std::length_error& e) {
                    unknown_reason = e.what();
                    return false;
                }
                if (!sol)
                    return false;
                if (c.opaque.empty()) {
                    result.kind = SatResult::Kind::Sat;
                    result.witness = restrict_to(*sol, c.vars);
                    return true;
                }
                if (auto found = search_clause(c, prims)) {
                    result.kind = SatResult::Kind::Sat;
                    result.witness = restrict_to(*found, c.vars);
                    return true;
                }
                unknown_reason = "non-linear constraint could not be refuted or satisfied: " +
                                 to_string(Formula::conj_all([&] {
                                     std::vector<Formula> fs;
                                     for (const auto& l : c.literals)
                                         fs.push_back(l.formula());
                                     return fs;
                                 }()));
                return false;
            },
            dnf_budget);
        walker.run(f);
    } catch (const DnfBudgetExceeded&) {
        result.kind = SatResult::Kind::Unknown;
        result.reason = "disjunctive normal form exceeds " + std::to_string(dnf_budget) + " clauses";
        return result;
    }
    if (result.kind == SatResult::Kind::Unsat && !unknown_reason.empty()) {
        result.kind = SatResult::Kind::Unknown;
        result.reason = unknown_reason;
    }
    return result;
}

Entailment entails(const Formula& psi, const Formula& phi, const PrimRegistry& prims)
{
    Entailment out;
    if (phi.is_top()) {
        out.kind = Entailment::Kind::Valid;
        return out;
    }
    SatResult r = satisfiable(Formula::conj(psi, Formula::negate(phi)), prims);
    switch (r.kind) {
    case SatResult::Kind::Unsat:
        out.kind = Entailment::Kind::Valid;
        break;
    case SatResult::Kind::Unknown:
        out.kind = Entailment::Kind::Unknown;
        out.reason = r.reason;
        break;
    case SatResult::Kind::Sat: {
        std::set<std::string> all = vars(psi);
        for (const auto& v : vars(phi))
            all.insert(v);
        out.witness = restrict_to(r.witness, all);
        if (truth_domain_member(Formula::implies(psi, phi), out.witness, prims)) {
            // Only possible through double rounding in a non-linear atom.
            out.kind = Entailment::Kind::Unknown;
            out.reason = "counterexample " + to_string(out.witness) + " did not verify";
        } else {
            out.kind = Entailment::Kind::Invalid;
        }
        break;
    }
    }
    return out;
}

std::string to_string(const Entailment& e)
{
    switch (e.kind) {
    case Entailment::Kind::Valid:
        return "Valid";
    case Entailment::Kind::Invalid:
        return "Invalid(" + to_string(e.witness) + ")";
    case Entailment::Kind::Unknown:
        return "Unknown(" + e.reason + ")";
    }
    return {};
}

std::vector<Assignment> sample_truth_domain(const Formula& f, std::size_t count, std::uint64_t seed,
                                            const std::set<std::string>& extra, const PrimRegistry& prims)
{
    std::vector<Assignment> out;
    std::set<Assignment> seen;
    std::set<std::string> all = vars(f);
    all.insert(extra.begin(), extra.end());
    std::mt19937_64 rng(seed);
    auto accept = [&](const Assignment& partial, bool random_fill) {
        if (out.size() >= count)
            return;
        Assignment sigma = partial;
        for (const auto& x : all)
            if (!sigma.count(x))
                sigma[x] = random_fill ? random_rational(rng, -10, 10, 128) : Rational(0);
        sigma = restrict_to(sigma, all);
        bool ok = false;
        try {
            ok = truth_domain_member(f, sigma, prims);
        } catch (const EvalError&) {
        }
        if (ok && seen.insert(sigma).second)
            out.push_back(std::move(sigma));
    };

    std::vector<Clause> clauses;
    try {
        ClauseWalker walker(
            [&](const std::vector<Literal>& lits) {
                clauses.push_back(make_clause(lits, prims));
                return clauses.size() >= 64;
            },
            dnf_budget);
        walker.run(f);
    } catch (const DnfBudgetExceeded&) {
    }

    auto solve = [](const std::vector<LinearConstraint>& sys, const ValueChooser& ch) -> std::optional<Assignment> {
        try {
            return fm_solve(sys, ch);
        } catch (const std::length_error&) {
            return std::nullopt;
        }
    };
    // Canonical points, then points on each non-strict boundary.
    std::vector<const Clause*> feasible;
    for (const auto& c : clauses) {
        auto sol = solve(c.constraints, canonical_choice);
        if (!sol)
            continue;
        feasible.push_back(&c);
        accept(*sol, false);
        for (std::size_t i = 0; i < c.constraints.size(); ++i) {
            if (c.constraints[i].strict || c.constraints[i].coeffs.empty())
                continue;
            auto sys = c.constraints;
            LinearConstraint rev;
            for (const auto& [x, k] : sys[i].coeffs)
                rev.coeffs[x] = -k;
            rev.constant = -sys[i].constant;
            sys.push_back(std::move(rev));
            if (auto b = solve(sys, canonical_choice))
                accept(*b, false);
        }
    }
    auto chooser = random_chooser(rng);
    for (std::size_t attempt = 0; out.size() < count && attempt < 8 * count && !feasible.empty(); ++attempt) {
        const Clause& c = *feasible[attempt % feasible.size()];
        if (auto sol = solve(c.constraints, chooser))
            accept(*sol, true);
    }
    // Non-linear formulas: plain rejection sampling.
    for (std::size_t attempt = 0; out.size() < count && attempt < 64 * count; ++attempt) {
        Assignment sigma;
        for (const auto& x : all)
            sigma[x] = random_rational(rng, -10, 10, 128);
        accept(sigma, true);
        if (all.empty())
            break;
    }
    return out;
}

} // namespace rlam
