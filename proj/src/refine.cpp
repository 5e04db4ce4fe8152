#include "rlam/refine.hpp"

#include "rlam/errors.hpp"
#include "rlam/semantics.hpp"
#include "rlam/subst.hpp"
#include "rlam/typing.hpp"

#include <fmt/format.h>

#include <cmath>
#include <set>

namespace rlam {

RefContext::RefContext(std::vector<RefBinding> entries)
{
    std::set<std::string> names, logical;
    for (auto& e : entries) {
        if (!names.insert(e.name).second)
            throw InvalidRefType("context binds '" + e.name + "' twice");
        if (e.type.is_real() && !logical.insert(e.type.var()).second)
            throw InvalidRefType("logical variable '" + e.type.var() + "' is used by two context entries");
        entries_.push_back(std::move(e));
    }
}

RefContext RefContext::extended(const std::string& name, const RefType& type) const
{
    RefContext out;
    for (const auto& e : entries_)
        if (e.name != name)
            out.entries_.push_back(e);
    out.entries_.push_back({name, type});
    return out;
}

const RefType* RefContext::find(const std::string& name) const
{
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->name == name)
            return &it->type;
    return nullptr;
}

std::vector<RefBinding> RefContext::ground() const
{
    std::vector<RefBinding> out;
    for (const auto& e : entries_)
        if (e.type.is_real())
            out.push_back(e);
    return out;
}

std::vector<RefBinding> RefContext::higher() const
{
    std::vector<RefBinding> out;
    for (const auto& e : entries_)
        if (e.type.is_higher())
            out.push_back(e);
    return out;
}

TypingContext RefContext::erase() const
{
    TypingContext out;
    for (const auto& e : entries_)
        out = out.extended(e.name, rlam::erase(e.type));
    return out;
}

std::string to_string(const RefContext& ctx)
{
    std::vector<std::string> parts;
    for (const auto& e : ctx.entries())
        parts.push_back(e.name + " : " + to_string(e.type));
    return fmt::format("{}", fmt::join(parts, ", "));
}

namespace {

std::string judgment_text(const Term& t, const RefType& target, const Formula& theta,
                          const std::optional<Formula>& eta)
{
    std::string ann = to_string(theta);
    if (eta)
        ann += " ~> " + to_string(*eta);
    return "|-[" + ann + "] " + pretty(t) + " : " + to_string(target);
}

std::string operand_text(const Formula& f)
{
    bool compound = f.kind() == Formula::Kind::And ||
                    (f.kind() == Formula::Kind::Not && f.operand().kind() == Formula::Kind::And);
    return compound ? "(" + to_string(f) + ")" : to_string(f);
}

std::string implication_text(const Formula& psi, const Formula& phi)
{
    return operand_text(psi) + " => " + operand_text(phi);
}

// ~f without stacking negations.
Formula negation(const Formula& f) { return f.kind() == Formula::Kind::Not ? f.operand() : Formula::negate(f); }

void collect_vars(const RefType& t, std::set<std::string>& out)
{
    if (t.is_real()) {
        out.insert(t.var());
        return;
    }
    for (const auto& a : t.args())
        collect_vars(a, out);
    for (const auto& v : vars(t.domain()))
        out.insert(v);
    if (t.image())
        for (const auto& v : vars(*t.image()))
            out.insert(v);
    collect_vars(t.result(), out);
}

} // namespace

std::string to_string(const RefJudgment& j)
{
    std::string ctx = to_string(j.context);
    return (ctx.empty() ? "" : ctx + " ") + judgment_text(j.term, j.target, j.domain, j.image);
}

RefJudgment judgment_of(const SourceFile& file, const PrimRegistry& prims)
{
    RefJudgment j{RefContext(file.ref_context()), file.term, RefType::real("r"), file.domain.value_or(Formula::top()),
                  file.image};
    if (file.type) {
        j.target = *file.type;
    } else {
        SimpleType ty = typecheck(j.context.erase(), file.term, prims);
        std::string hint = "r";
        if (file.image) {
            std::set<std::string> taken;
            for (const auto& e : j.context.ground())
                taken.insert(e.type.var());
            std::vector<std::string> free;
            for (const auto& v : vars(*file.image))
                if (!taken.count(v))
                    free.push_back(v);
            if (free.size() == 1)
                hint = free[0];
        }
        j.target = trivial_refinement(ty, hint);
    }
    if (j.target.is_real() && !j.image)
        j.image = Formula::top();
    if (j.target.is_higher() && j.image)
        throw InvalidRefType("@image is only meaningful for a ground target type");
    return j;
}

std::string to_string(Verdict::Kind k)
{
    switch (k) {
    case Verdict::Kind::Accepted:
        return "Accepted";
    case Verdict::Kind::Rejected:
        return "Rejected";
    case Verdict::Kind::Unknown:
        return "Unknown";
    }
    return {};
}

namespace {

Verdict accepted(std::string line)
{
    Verdict v;
    v.trace.push_back(std::move(line));
    return v;
}

Verdict failed(Verdict::Kind kind, std::string rule, std::string condition, const Term& at,
               std::optional<Assignment> witness = {})
{
    Verdict v;
    v.kind = kind;
    v.rule = std::move(rule);
    v.condition = std::move(condition);
    v.subterm = pretty(at);
    v.witness = std::move(witness);
    if (kind == Verdict::Kind::Unknown)
        v.gaps.push_back(v.rule + ": " + v.condition);
    return v;
}

// Collects premises; the conclusion is Accepted only if all premises are.
class Premises {
public:
    explicit Premises(std::string conclusion) : conclusion_(std::move(conclusion)) {}

    // Returns false once a premise is rejected.
    bool add(Verdict v)
    {
        if (rejected_)
            return false;
        switch (v.kind) {
        case Verdict::Kind::Rejected:
            rejected_ = std::move(v);
            return false;
        case Verdict::Kind::Unknown:
            if (!unknown_)
                unknown_ = v;
            else
                unknown_->gaps.insert(unknown_->gaps.end(), v.gaps.begin(), v.gaps.end());
            break;
        case Verdict::Kind::Accepted:
            break;
        }
        for (auto& line : v.trace)
            body_.push_back("  " + line);
        return true;
    }

    Verdict result() const
    {
        if (rejected_)
            return *rejected_;
        if (unknown_)
            return *unknown_;
        Verdict v;
        v.trace.push_back(conclusion_);
        v.trace.insert(v.trace.end(), body_.begin(), body_.end());
        return v;
    }

private:
    std::string conclusion_;
    std::vector<std::string> body_;
    std::optional<Verdict> rejected_;
    std::optional<Verdict> unknown_;
};

// The first accepted alternative wins; otherwise Unknown beats Rejected.
Verdict best_of(std::vector<Verdict> alternatives, Verdict fallback)
{
    std::optional<Verdict> unknown, rejected;
    for (auto& v : alternatives) {
        if (v.kind == Verdict::Kind::Accepted)
            return v;
        if (v.kind == Verdict::Kind::Unknown && !unknown)
            unknown = std::move(v);
        else if (v.kind == Verdict::Kind::Rejected && !rejected)
            rejected = std::move(v);
    }
    if (unknown)
        return *unknown;
    if (rejected)
        return *rejected;
    return fallback;
}

// Per-variable split of the conjuncts of f. Conjuncts over several of the
// given variables are reported through `coupled`.
std::map<std::string, std::vector<Formula>> split_by_var(const Formula& f, const std::vector<std::string>& xs,
                                                         std::vector<Formula>* coupled)
{
    std::map<std::string, std::vector<Formula>> out;
    std::set<std::string> wanted(xs.begin(), xs.end());
    for (const auto& c : conjuncts(f)) {
        std::vector<std::string> hit;
        for (const auto& v : vars(c))
            if (wanted.count(v))
                hit.push_back(v);
        if (hit.size() == 1)
            out[hit[0]].push_back(c);
        else if (coupled && hit.size() > 1)
            coupled->push_back(c);
    }
    return out;
}

// Term -> formula expression over the logical variables of the ground
// context; only for linear arithmetic.
std::optional<Expr> term_to_expr(const Term& t, const RefContext& ctx, const PrimRegistry& prims)
{
    if (const auto* x = t.as<ast::Var>()) {
        const RefType* r = ctx.find(x->name);
        if (!r || !r->is_real())
            return std::nullopt;
        return Expr::var(r->var());
    }
    if (const auto* x = t.as<ast::Lit>())
        return Expr::constant(x->value);
    if (const auto* x = t.as<ast::PrimApp>()) {
        const PrimFn* fn = prims.find(x->prim);
        if (!fn)
            return std::nullopt;
        std::vector<Expr> args;
        for (const auto& a : x->args) {
            auto e = term_to_expr(a, ctx, prims);
            if (!e)
                return std::nullopt;
            args.push_back(std::move(*e));
        }
        if (fn->name != "add" && fn->name != "sub" && fn->name != "mul" && fn->name != "neg")
            return std::nullopt;
        Expr e = Expr::app(fn->name, std::move(args));
        if (!linearize(e, prims))
            return std::nullopt;
        return e;
    }
    return std::nullopt;
}

class Checker {
public:
    Checker(const CheckConfig& cfg, const PrimRegistry& prims, std::set<std::string> used)
        : cfg_(cfg), prims_(prims), used_(std::move(used))
    {
    }

    Verdict check(const RefContext& ctx, const Term& t, const RefType& target, const Formula& theta,
                  const std::optional<Formula>& eta)
    {
        if (target.is_real())
            return ground(ctx, t, target.var(), theta, eta.value_or(Formula::top()));
        return higher(ctx, t, target, theta);
    }

private:
    std::string fresh(const std::string& base)
    {
        std::string stem = base.substr(0, base.find('\''));
        std::string name = stem;
        while (used_.count(name))
            name = stem + "'" + std::to_string(++counter_);
        used_.insert(name);
        return name;
    }

    void note(const Formula& f)
    {
        for (const auto& v : vars(f))
            used_.insert(v);
    }

    // Renames the arrow's own logical variables apart from the ground
    // context and the formula in force.
    RefType freshen(const RefType& t, const RefContext& ctx, const Formula& theta)
    {
        if (t.is_real())
            return t;
        std::set<std::string> avoid = vars(theta);
        for (const auto& g : ctx.ground())
            avoid.insert(g.type.var());
        std::vector<std::string> own = t.real_arg_vars();
        if (t.result().is_real())
            own.push_back(t.result().var());
        std::map<std::string, std::string> ren;
        for (const auto& v : own) {
            used_.insert(v);
            if (avoid.count(v))
                ren[v] = fresh(v);
        }
        return ren.empty() ? t : rename_vars(t, ren);
    }

    // |= psi => phi as a premise of `rule`.
    Verdict entail(const std::string& rule, const std::string& what, const Formula& psi, const Formula& phi,
                   const Term& at)
    {
        Entailment e = entails(psi, phi, prims_);
        std::string cond = what + ": |= " + implication_text(psi, phi);
        switch (e.kind) {
        case Entailment::Kind::Valid:
            return accepted(rule + " " + cond);
        case Entailment::Kind::Invalid:
            return failed(Verdict::Kind::Rejected, rule, cond + " fails", at, e.witness);
        case Entailment::Kind::Unknown:
            return failed(Verdict::Kind::Unknown, rule, cond + " undecided (" + e.reason + ")", at);
        }
        return {};
    }

    Verdict ground(const RefContext& ctx, const Term& t, const std::string& gamma, const Formula& theta,
                   const Formula& eta)
    {
        RefType target = RefType::real(gamma);
        std::string head = judgment_text(t, target, theta, eta);
        if (const auto* x = t.as<ast::Var>()) {
            const RefType* r = ctx.find(x->name);
            if (!r)
                return failed(Verdict::Kind::Rejected, "var-F", "unbound variable '" + x->name + "'", t);
            if (!r->is_real())
                return failed(Verdict::Kind::Rejected, "var-F",
                              "'" + x->name + "' has higher-order type " + to_string(*r), t);
            Premises p("var-F " + head);
            p.add(entail("var-F", "image", theta, rename(eta, {{gamma, r->var()}}), t));
            return p.result();
        }
        if (const auto* x = t.as<ast::Lit>()) {
            Premises p("lit " + head);
            p.add(entail("lit", "image", theta, substitute(eta, {{gamma, Expr::constant(x->value)}}), t));
            return p.result();
        }
        if (const auto* x = t.as<ast::PrimApp>())
            return rule_rf(ctx, t, *x, gamma, theta, eta);
        if (t.is<ast::App>())
            return rule_app(ctx, t, target, theta, eta);
        if (t.is<ast::If>())
            return rule_if(ctx, t, target, theta, eta);
        return failed(Verdict::Kind::Rejected, "ground", "no refinement rule applies to this construct", t);
    }

    Verdict higher(const RefContext& ctx, const Term& t, const RefType& target, const Formula& theta)
    {
        std::string head = judgment_text(t, target, theta, std::nullopt);
        if (const auto* x = t.as<ast::Var>()) {
            const RefType* r = ctx.find(x->name);
            if (!r)
                return failed(Verdict::Kind::Rejected, "var-H", "unbound variable '" + x->name + "'", t);
            if (!ref_equiv(*r, target))
                return failed(Verdict::Kind::Rejected, "var-H",
                              "'" + x->name + "' has type " + to_string(*r) + ", not " + to_string(target), t);
            return accepted("var-H " + head);
        }
        if (const auto* x = t.as<ast::Lam>())
            return rule_abs(ctx, t, *x, target, theta);
        if (t.is<ast::App>())
            return rule_app(ctx, t, target, theta, std::nullopt);
        if (t.is<ast::If>())
            return rule_if(ctx, t, target, theta, std::nullopt);
        return failed(Verdict::Kind::Rejected, "higher", "no refinement rule applies to this construct", t);
    }

    Verdict rule_rf(const RefContext& ctx, const Term& t, const ast::PrimApp& app, const std::string& gamma,
                    const Formula& theta, const Formula& eta)
    {
        const PrimFn* fn = prims_.find(app.prim);
        if (!fn)
            return failed(Verdict::Kind::Rejected, "Rf", "unknown primitive '" + app.prim + "'", t);
        std::string head = judgment_text(t, RefType::real(gamma), theta, eta);
        std::vector<Verdict> tries;
        for (const auto& fact : fn->facts)
            tries.push_back(rule_rf_fact(ctx, t, app, *fn, fact, gamma, theta, eta, head));
        return best_of(std::move(tries),
                       failed(Verdict::Kind::Rejected, "Rf", "no continuity fact is registered for '" + fn->name + "'",
                              t));
    }

    Verdict rule_rf_fact(const RefContext& ctx, const Term& t, const ast::PrimApp& app, const PrimFn& fn,
                         const ContinuityFact& fact, const std::string& gamma, const Formula& theta,
                         const Formula& eta, const std::string& head)
    {
        std::size_t n = app.args.size();
        std::map<std::string, std::string> ren;
        std::vector<std::string> alphas;
        for (std::size_t i = 1; i <= n; ++i) {
            alphas.push_back(fresh(fact_arg(i)));
            ren[fact_arg(i)] = alphas.back();
        }
        Formula psi = rename(fact.domain, ren);
        Formula phi = rename(fact.image, {{fact_result, gamma}});
        // Literal arguments are pinned to their value.
        std::map<std::string, Expr> pinned;
        std::vector<Formula> theta_i(n, Formula::top());
        for (std::size_t i = 0; i < n; ++i) {
            if (const auto* lit = app.args[i].as<ast::Lit>()) {
                pinned.insert_or_assign(alphas[i], Expr::constant(lit->value));
                theta_i[i] = Formula::eq(Expr::var(alphas[i]), Expr::constant(lit->value));
            }
        }
        std::vector<Formula> coupled;
        auto split = split_by_var(substitute(psi, pinned), alphas, &coupled);
        if (!coupled.empty())
            return failed(Verdict::Kind::Rejected, "Rf",
                          "continuity fact domain " + to_string(psi) + " couples several arguments", t);
        for (std::size_t i = 0; i < n; ++i)
            if (!pinned.count(alphas[i]))
                theta_i[i] = Formula::conj_all(split[alphas[i]]);

        Premises p("Rf[" + fn.name + ": " + to_string(fact.domain) + " ~> " + to_string(fact.image) + "] " + head);
        p.add(entail("Rf", "fact domain", Formula::conj_all(theta_i), psi, t)) &&
            p.add(entail("Rf", "fact image", phi, eta, t));
        for (std::size_t i = 0; i < n; ++i)
            if (!p.add(ground(ctx, app.args[i], alphas[i], theta, theta_i[i])))
                break;
        return p.result();
    }

    Verdict rule_abs(const RefContext& ctx, const Term& t, const ast::Lam& lam, const RefType& target,
                     const Formula& theta)
    {
        std::string head = judgment_text(t, target, theta, std::nullopt);
        if (target.is_real())
            return failed(Verdict::Kind::Rejected, "abs", "abstraction checked against ground type", t);
        if (lam.params.size() != target.args().size())
            return failed(Verdict::Kind::Rejected, "abs",
                          fmt::format("abstraction has {} parameter(s), type expects {}", lam.params.size(),
                                      target.args().size()),
                          t);
        RefType arrow = freshen(target, ctx, theta);
        RefContext inner = ctx;
        for (std::size_t i = 0; i < lam.params.size(); ++i) {
            const Param& prm = lam.params[i];
            if (prm.ref && !ref_equiv(*prm.ref, arrow.args()[i]))
                return failed(Verdict::Kind::Rejected, "abs",
                              "parameter '" + prm.name + "' is annotated " + to_string(*prm.ref) + ", type gives " +
                                  to_string(arrow.args()[i]),
                              t);
            inner = inner.extended(prm.name, arrow.args()[i]);
        }
        Formula body_domain = Formula::conj_all({arrow.domain(), theta});
        Premises p("abs " + head);
        if (arrow.result().is_real())
            p.add(ground(inner, lam.body, arrow.result().var(), body_domain, arrow.image().value_or(Formula::top())));
        else
            p.add(higher(inner, lam.body, arrow.result(), body_domain));
        return p.result();
    }

    struct Head {
        Verdict premise;
        std::optional<RefType> type;
    };

    Head synth_head(const RefContext& ctx, const Term& fn, const Formula& phi)
    {
        if (const auto* x = fn.as<ast::Var>()) {
            const RefType* r = ctx.find(x->name);
            if (!r || r->is_real())
                return {failed(Verdict::Kind::Rejected, "app", "head '" + x->name + "' is not a function in context",
                               fn),
                        std::nullopt};
            return {accepted("var-H " + judgment_text(fn, *r, phi, std::nullopt)), *r};
        }
        if (fn.is<ast::App>()) {
            auto [v, result, image] = app_core(ctx, fn, phi);
            if (v.kind != Verdict::Kind::Accepted || !result)
                return {v, std::nullopt};
            if (result->is_real())
                return {failed(Verdict::Kind::Rejected, "app", "head application has ground type", fn), std::nullopt};
            return {v, result};
        }
        if (const auto* lam = fn.as<ast::Lam>()) {
            // A literal abstraction in head position gets its trivial type.
            try {
                TypingContext tctx = ctx.erase();
                std::vector<RefType> args;
                for (const auto& prm : lam->params) {
                    args.push_back(prm.ref ? *prm.ref : trivial_refinement(prm.type, fresh("h")));
                    tctx = tctx.extended(prm.name, prm.type);
                }
                RefType result = trivial_refinement(typecheck(tctx, lam->body, prims_), fresh("h"));
                RefType type = RefType::arrow(std::move(args), Formula::top(), std::nullopt, std::move(result));
                return {higher(ctx, fn, type, phi), type};
            } catch (const InvalidRefType& e) {
                return {failed(Verdict::Kind::Rejected, "app", e.what(), fn), std::nullopt};
            }
        }
        return {failed(Verdict::Kind::Rejected, "app", "cannot synthesize a refinement type for the head", fn),
                std::nullopt};
    }

    struct Core {
        Verdict verdict;
        std::optional<RefType> result;
        std::optional<Formula> image;
    };

    // Premises of the app rule up to, but excluding, the result type.
    Core app_core(const RefContext& ctx, const Term& t, const Formula& phi)
    {
        const auto& app = *t.as<ast::App>();
        Head h = synth_head(ctx, app.fn, phi);
        if (!h.type)
            return {h.premise, std::nullopt, std::nullopt};
        RefType arrow = freshen(*h.type, ctx, phi);
        std::size_t m = arrow.higher_arity();
        if (app.args.size() != arrow.args().size())
            return {failed(Verdict::Kind::Rejected, "app",
                           fmt::format("{} argument(s) passed to function of type {}", app.args.size(),
                                       to_string(arrow)),
                           t),
                    std::nullopt, std::nullopt};
        std::vector<std::string> alphas = arrow.real_arg_vars();
        auto split = split_by_var(arrow.domain(), alphas, nullptr);
        std::vector<Formula> theta_j;
        for (const auto& a : alphas)
            theta_j.push_back(Formula::conj_all(split[a]));

        Premises p("app " + judgment_text(t, arrow.result(), phi, arrow.image()));
        p.add(h.premise);
        for (std::size_t i = 0; i < m; ++i)
            if (!p.add(higher(ctx, app.args[i], arrow.args()[i], phi)))
                return {p.result(), std::nullopt, std::nullopt};
        p.add(entail("app", "argument domains", Formula::conj_all(theta_j), arrow.domain(), t));
        for (std::size_t j = 0; j < alphas.size(); ++j)
            if (!p.add(ground(ctx, app.args[m + j], alphas[j], phi, theta_j[j])))
                break;
        return {p.result(), arrow.result(), arrow.image()};
    }

    Verdict rule_app(const RefContext& ctx, const Term& t, const RefType& target, const Formula& phi,
                     const std::optional<Formula>& eta)
    {
        auto [v, result, image] = app_core(ctx, t, phi);
        if (v.kind == Verdict::Kind::Rejected || !result)
            return v;
        Premises p("result " + judgment_text(t, target, phi, eta));
        p.add(std::move(v));
        if (target.is_real()) {
            if (!result->is_real())
                return failed(Verdict::Kind::Rejected, "app", "application has higher-order type", t);
            Formula widened = rename(image.value_or(Formula::top()), {{result->var(), target.var()}});
            p.add(entail("app", "image", widened, eta.value_or(Formula::top()), t));
        } else if (!ref_equiv(*result, target)) {
            return failed(Verdict::Kind::Rejected, "app",
                          "application has type " + to_string(*result) + ", not " + to_string(target), t);
        }
        return p.result();
    }

    Verdict rule_if(const RefContext& ctx, const Term& t, const RefType& target, const Formula& theta,
                    const std::optional<Formula>& eta)
    {
        const auto& x = *t.as<ast::If>();
        IfAnnotation ann = x.ann.value_or(IfAnnotation{});
        if (!ann.guard_continuity || !ann.guard_zero || !ann.guard_one) {
            auto syn = synthesize_guard_formulas(x.guard, ctx, prims_);
            if (!syn)
                throw MissingAnnotation("conditional '" + pretty(t) + "' needs guard, zero and one formulas; none " +
                                        "can be synthesized from guard '" + pretty(x.guard) + "'");
            if (!ann.guard_continuity)
                ann.guard_continuity = syn->guard_continuity;
            if (!ann.guard_zero)
                ann.guard_zero = syn->guard_zero;
            if (!ann.guard_one)
                ann.guard_one = syn->guard_one;
        }
        const Formula& th_t = *ann.guard_continuity;
        const Formula& th_0 = *ann.guard_zero;
        const Formula& th_1 = *ann.guard_one;
        note(th_t);
        note(th_0);
        note(th_1);
        Formula th_s = ann.then_domain.value_or(
            Formula::conj_all({theta, Formula::disj(negation(th_0), negation(th_t))}));
        Formula th_p = ann.else_domain.value_or(
            Formula::conj_all({theta, Formula::disj(negation(th_1), negation(th_t))}));
        note(th_s);
        note(th_p);

        std::string beta = fresh("b");
        Expr b = Expr::var(beta);
        Formula cover = Formula::conj_all(
            {Formula::disj(th_s, th_p), Formula::disj(th_1, th_p), Formula::disj(th_0, th_s),
             Formula::disj(th_t, Formula::conj(th_s, th_p))});

        Premises p(fmt::format("If[guard: {}; zero: {}; one: {}; then: {}; else: {}] {}", to_string(th_t),
                               to_string(th_0), to_string(th_1), to_string(th_s), to_string(th_p),
                               judgment_text(t, target, theta, eta)));
        bool ok = p.add(entail("If", "side condition (1)", theta, cover, t)) &&
                  p.add(ground(ctx, x.guard, beta, th_t,
                               Formula::disj(Formula::eq(b, Expr::constant(0)), Formula::eq(b, Expr::constant(1))))) &&
                  p.add(ground(ctx, x.guard, beta, th_0, Formula::eq(b, Expr::constant(0)))) &&
                  p.add(ground(ctx, x.guard, beta, th_1, Formula::eq(b, Expr::constant(1)))) &&
                  p.add(check(ctx, x.then_branch, target, th_s, eta)) &&
                  p.add(check(ctx, x.else_branch, target, th_p, eta));
        if (ok) {
            Formula boundary = Formula::conj_all({theta, negation(th_t)});
            EquivResult eq = ctx_equiv_probe(x.then_branch, x.else_branch, ctx, boundary, cfg_, prims_);
            std::string cond = "side condition (2): branches agree where " + to_string(boundary);
            switch (eq.kind) {
            case EquivResult::Kind::Equiv:
                p.add(accepted("If " + cond + (eq.detail.empty() ? "" : " (" + eq.detail + ")")));
                break;
            case EquivResult::Kind::NotEquiv:
                p.add(failed(Verdict::Kind::Rejected, "If", cond + " fails: " + eq.detail, t, eq.witness));
                break;
            case EquivResult::Kind::Unknown:
                p.add(failed(Verdict::Kind::Unknown, "If", cond + " undecided (" + eq.detail + ")", t));
                break;
            }
        }
        return p.result();
    }

    const CheckConfig& cfg_;
    const PrimRegistry& prims_;
    std::set<std::string> used_;
    int counter_ = 0;
};

} // namespace

Verdict refine_check(const RefJudgment& j, const CheckConfig& cfg, const PrimRegistry& prims)
{
    if (!check_restricted(erase(j.target)))
        throw InvalidRefType("target type " + to_string(j.target) + " is outside the restricted grammar");
    SimpleType ty = typecheck(j.context.erase(), j.term, prims);
    if (!(ty == erase(j.target)))
        throw TypeError("refine", pretty(j.term),
                        "term has type " + to_string(ty) + " but the judgment expects " + to_string(erase(j.target)));
    std::set<std::string> used;
    for (const auto& e : j.context.entries())
        collect_vars(e.type, used);
    collect_vars(j.target, used);
    for (const auto& v : vars(j.domain))
        used.insert(v);
    if (j.image)
        for (const auto& v : vars(*j.image))
            used.insert(v);
    Checker checker(cfg, prims, std::move(used));
    return checker.check(j.context, j.term, j.target, j.domain, j.target.is_real() ? j.image : std::nullopt);
}

namespace {

// Pool of closed functions of type (R, ..., R) -> R used to instantiate
// higher-order context variables and arguments.
std::optional<std::vector<Term>> function_pool(const SimpleType& t)
{
    if (!t.is_arrow() || !t.codomain().is_real())
        return std::nullopt;
    std::vector<Param> params;
    std::size_t i = 0;
    for (const auto& c : tuple_components(t.domain())) {
        if (!c.is_real())
            return std::nullopt;
        params.push_back(Param{"y'" + std::to_string(++i), c, std::nullopt});
    }
    Term y = Term::var(params[0].name);
    std::vector<Term> bodies{y, Term::lit(0), Term::prim("mul", {y, y}), Term::prim("sin", {y})};
    std::vector<Term> out;
    for (auto& b : bodies)
        out.push_back(Term::lam(params, b));
    return out;
}

bool close_enough(double a, double b)
{
    if (std::isnan(a) || std::isnan(b))
        return std::isnan(a) && std::isnan(b);
    if (a == b)
        return true;
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

EquivResult ctx_equiv_probe(const Term& s, const Term& p, const RefContext& ctx, const Formula& boundary,
                            const CheckConfig& cfg, const PrimRegistry& prims)
{
    EquivResult out;
    if (alpha_equiv(s, p)) {
        out.detail = "alpha-equivalent";
        return out;
    }
    SatResult sat = satisfiable(boundary, prims);
    if (sat.kind == SatResult::Kind::Unsat) {
        out.detail = "boundary is empty";
        return out;
    }
    if (cfg.strict_equiv) {
        out.kind = EquivResult::Kind::Unknown;
        out.detail = "branches are not alpha-equivalent";
        return out;
    }
    SimpleType ty = typecheck(ctx.erase(), s, prims);

    // Higher-order context variables are instantiated from the pool, all
    // with the same pool index.
    std::vector<std::map<std::string, Term>> instances{{}};
    auto higher = ctx.higher();
    if (!higher.empty()) {
        instances.clear();
        std::vector<std::vector<Term>> pools;
        for (const auto& h : higher) {
            auto pool = function_pool(erase(h.type));
            if (!pool) {
                out.kind = EquivResult::Kind::Unknown;
                out.detail = "no test functions for context variable '" + h.name + "'";
                return out;
            }
            pools.push_back(std::move(*pool));
        }
        for (std::size_t k = 0; k < pools[0].size(); ++k) {
            std::map<std::string, Term> inst;
            for (std::size_t i = 0; i < higher.size(); ++i)
                inst.insert_or_assign(higher[i].name, pools[i][k]);
            instances.push_back(std::move(inst));
        }
    }

    // Observations: closed ground terms built from s (resp. p).
    std::vector<std::vector<Term>> probes; // argument lists for higher-order s
    if (!ty.is_real()) {
        std::vector<SimpleType> comps = tuple_components(ty.domain());
        if (cfg.semantic_ho) {
            const std::vector<Rational> reals{0, 1, -1, Rational(1, 2)};
            for (std::size_t k = 0; k < 4; ++k) {
                std::vector<Term> args;
                bool ok = ty.codomain().is_real();
                for (const auto& c : comps) {
                    if (c.is_real()) {
                        args.push_back(Term::lit(reals[k]));
                    } else if (auto fp = function_pool(c)) {
                        args.push_back((*fp)[k]);
                    } else {
                        ok = false;
                    }
                }
                if (ok)
                    probes.push_back(std::move(args));
            }
        }
    }

    std::set<std::string> ground_vars;
    for (const auto& g : ctx.ground())
        ground_vars.insert(g.type.var());
    std::vector<Assignment> samples = sample_truth_domain(boundary, cfg.equiv_samples, cfg.seed, ground_vars, prims);
    if (samples.empty()) {
        out.kind = EquivResult::Kind::Unknown;
        out.detail = sat.kind == SatResult::Kind::Unknown ? sat.reason : "no sample points found";
        return out;
    }
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const Assignment& sigma = samples[n];
        std::map<std::string, Term> sub;
        for (const auto& g : ctx.ground())
            sub.insert_or_assign(g.name, Term::lit(sigma.at(g.type.var())));
        Term s1 = substitute(s, sub);
        Term p1 = substitute(p, sub);
        Assignment shown;
        for (const auto& v : ground_vars)
            shown[v] = sigma.at(v);
        if (!ty.is_real()) {
            if (alpha_equiv(s1, p1))
                continue;
            if (!cfg.semantic_ho || probes.empty()) {
                out.kind = EquivResult::Kind::Unknown;
                out.detail = "higher-order branches are not alpha-equivalent at " + to_string(shown);
                return out;
            }
        }
        for (const auto& inst : instances) {
            Term s2 = substitute(s1, inst);
            Term p2 = substitute(p1, inst);
            std::vector<std::pair<Term, Term>> obs;
            if (ty.is_real()) {
                obs.emplace_back(s2, p2);
            } else {
                for (const auto& args : probes)
                    obs.emplace_back(Term::app(s2, args), Term::app(p2, args));
            }
            for (const auto& [a, b] : obs) {
                double va = 0, vb = 0;
                try {
                    va = eval({}, a, prims).as_real();
                    vb = eval({}, b, prims).as_real();
                } catch (const Error& e) {
                    out.kind = EquivResult::Kind::Unknown;
                    out.detail = std::string("evaluation failed: ") + e.what();
                    return out;
                }
                if (!close_enough(va, vb)) {
                    out.kind = EquivResult::Kind::NotEquiv;
                    out.witness = shown;
                    out.detail = fmt::format("at {}: {} evaluates to {} but {} evaluates to {}", to_string(shown),
                                             pretty(a), va, pretty(b), vb);
                    return out;
                }
            }
        }
    }
    out.detail = fmt::format("agree at {} sample point(s)", samples.size());
    return out;
}

std::optional<IfAnnotation> synthesize_guard_formulas(const Term& guard, const RefContext& ctx,
                                                      const PrimRegistry& prims)
{
    const auto* app = guard.as<ast::PrimApp>();
    if (!app)
        return std::nullopt;
    const PrimFn* fn = prims.find(app->prim);
    if (!fn || !fn->guard)
        return std::nullopt;
    std::map<std::string, Expr> sub;
    for (std::size_t i = 0; i < app->args.size(); ++i) {
        auto e = term_to_expr(app->args[i], ctx, prims);
        if (!e)
            return std::nullopt;
        sub.insert_or_assign(fact_arg(i + 1), *e);
    }
    IfAnnotation ann;
    ann.guard_continuity = substitute(fn->guard->continuity, sub);
    ann.guard_zero = substitute(fn->guard->zero, sub);
    ann.guard_one = substitute(fn->guard->one, sub);
    return ann;
}

std::optional<FirstOrderView> first_order_view(const RefJudgment& j)
{
    const RefType& target = j.target;
    if (const auto* lam = j.term.as<ast::Lam>()) {
        if (!free_vars(j.term).empty() || target.is_real() || target.higher_arity() != 0 ||
            !target.result().is_real() || target.args().size() != lam->params.size())
            return std::nullopt;
        FirstOrderView v{lam->body, {}, target.real_arg_vars(), target.domain(),
                         target.image().value_or(Formula::top()), target.result().var()};
        for (const auto& p : lam->params) {
            if (!p.type.is_real())
                return std::nullopt;
            v.theta = v.theta.extended(p.name, SimpleType::real());
        }
        return v;
    }
    if (!target.is_real() || !j.context.higher().empty())
        return std::nullopt;
    FirstOrderView v{j.term, j.context.erase(), {}, j.domain, j.image.value_or(Formula::top()), target.var()};
    for (const auto& g : j.context.ground())
        v.logical.push_back(g.type.var());
    return v;
}

} // namespace rlam
