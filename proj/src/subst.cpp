#include "rlam/subst.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>

namespace rlam {

namespace {

template <class... Fs>
struct Overload : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

void collect_free(const Term& t, std::set<std::string>& bound, std::vector<std::string>& out,
                  std::set<std::string>& seen)
{
    std::visit(Overload{
                   [&](const ast::Var& x) {
                       if (!bound.count(x.name) && seen.insert(x.name).second)
                           out.push_back(x.name);
                   },
                   [&](const ast::Lit&) {},
                   [&](const ast::PrimApp& x) {
                       for (const auto& a : x.args)
                           collect_free(a, bound, out, seen);
                   },
                   [&](const ast::Lam& x) {
                       std::vector<std::string> added;
                       for (const auto& p : x.params)
                           if (bound.insert(p.name).second)
                               added.push_back(p.name);
                       collect_free(x.body, bound, out, seen);
                       for (const auto& n : added)
                           bound.erase(n);
                   },
                   [&](const ast::App& x) {
                       collect_free(x.fn, bound, out, seen);
                       for (const auto& a : x.args)
                           collect_free(a, bound, out, seen);
                   },
                   [&](const ast::Pair& x) {
                       collect_free(x.left, bound, out, seen);
                       collect_free(x.right, bound, out, seen);
                   },
                   [&](const ast::Proj& x) { collect_free(x.arg, bound, out, seen); },
                   [&](const ast::If& x) {
                       collect_free(x.guard, bound, out, seen);
                       collect_free(x.then_branch, bound, out, seen);
                       collect_free(x.else_branch, bound, out, seen);
                   },
               },
               t.node().v);
}

void collect_names(const Term& t, std::set<std::string>& out)
{
    std::visit(Overload{
                   [&](const ast::Var& x) { out.insert(x.name); },
                   [&](const ast::Lit&) {},
                   [&](const ast::PrimApp& x) {
                       for (const auto& a : x.args)
                           collect_names(a, out);
                   },
                   [&](const ast::Lam& x) {
                       for (const auto& p : x.params)
                           out.insert(p.name);
                       collect_names(x.body, out);
                   },
                   [&](const ast::App& x) {
                       collect_names(x.fn, out);
                       for (const auto& a : x.args)
                           collect_names(a, out);
                   },
                   [&](const ast::Pair& x) {
                       collect_names(x.left, out);
                       collect_names(x.right, out);
                   },
                   [&](const ast::Proj& x) { collect_names(x.arg, out); },
                   [&](const ast::If& x) {
                       collect_names(x.guard, out);
                       collect_names(x.then_branch, out);
                       collect_names(x.else_branch, out);
                   },
               },
               t.node().v);
}

std::vector<Term> map_terms(const std::vector<Term>& ts, const auto& f)
{
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const auto& t : ts)
        out.push_back(f(t));
    return out;
}

} // namespace

std::set<std::string> free_vars(const Term& t)
{
    auto ordered = free_vars_ordered(t);
    return {ordered.begin(), ordered.end()};
}

std::vector<std::string> free_vars_ordered(const Term& t)
{
    std::set<std::string> bound, seen;
    std::vector<std::string> out;
    collect_free(t, bound, out, seen);
    return out;
}

std::set<std::string> all_names(const Term& t)
{
    std::set<std::string> out;
    collect_names(t, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid)
{
    static std::atomic<unsigned long> counter{0};
    std::string stem = base;
    if (auto q = stem.rfind('\''); q != std::string::npos && q + 1 < stem.size() &&
                                   std::all_of(stem.begin() + static_cast<long>(q) + 1, stem.end(),
                                               [](unsigned char c) { return std::isdigit(c); }))
        stem.resize(q);
    if (stem.empty())
        stem = "v";
    for (;;) {
        std::string candidate = stem + "'" + std::to_string(++counter);
        if (!avoid.count(candidate))
            return candidate;
    }
}

Term substitute(const Term& s, const std::string& x, const Term& t) { return substitute(s, {{x, t}}); }

Term substitute(const Term& s, const std::map<std::string, Term>& sub)
{
    if (sub.empty())
        return s;
    return std::visit(
        Overload{
            [&](const ast::Var& v) -> Term {
                auto it = sub.find(v.name);
                return it == sub.end() ? s : it->second;
            },
            [&](const ast::Lit&) -> Term { return s; },
            [&](const ast::PrimApp& v) -> Term {
                return Term::prim(v.prim, map_terms(v.args, [&](const Term& a) { return substitute(a, sub); }));
            },
            [&](const ast::Lam& v) -> Term {
                std::map<std::string, Term> inner = sub;
                for (const auto& p : v.params)
                    inner.erase(p.name);
                std::set<std::string> body_free = free_vars(v.body);
                std::set<std::string> incoming;
                for (auto it = inner.begin(); it != inner.end();) {
                    if (!body_free.count(it->first)) {
                        it = inner.erase(it);
                        continue;
                    }
                    auto fv = free_vars(it->second);
                    incoming.insert(fv.begin(), fv.end());
                    ++it;
                }
                if (inner.empty())
                    return s;
                std::set<std::string> avoid = incoming;
                avoid.insert(body_free.begin(), body_free.end());
                for (const auto& p : v.params)
                    avoid.insert(p.name);
                std::vector<Param> params = v.params;
                for (auto& p : params) {
                    if (!incoming.count(p.name))
                        continue;
                    std::string renamed = fresh_name(p.name, avoid);
                    avoid.insert(renamed);
                    inner.insert_or_assign(p.name, Term::var(renamed));
                    p.name = renamed;
                }
                return Term::lam(std::move(params), substitute(v.body, inner));
            },
            [&](const ast::App& v) -> Term {
                return Term::app(substitute(v.fn, sub),
                                 map_terms(v.args, [&](const Term& a) { return substitute(a, sub); }));
            },
            [&](const ast::Pair& v) -> Term { return Term::pair(substitute(v.left, sub), substitute(v.right, sub)); },
            [&](const ast::Proj& v) -> Term { return Term::proj(v.index, substitute(v.arg, sub)); },
            [&](const ast::If& v) -> Term {
                return Term::ite(substitute(v.guard, sub), substitute(v.then_branch, sub),
                                 substitute(v.else_branch, sub), v.ann);
            },
        },
        s.node().v);
}

namespace {

struct AlphaEnv {
    std::map<std::string, int> left;
    std::map<std::string, int> right;
    int next = 0;
};

bool alpha(const Term& s, const Term& t, AlphaEnv& env)
{
    if (s.node().v.index() != t.node().v.index())
        return false;
    return std::visit(
        Overload{
            [&](const ast::Var& x) {
                const auto& y = *t.as<ast::Var>();
                auto lx = env.left.find(x.name);
                auto ry = env.right.find(y.name);
                if (lx == env.left.end() || ry == env.right.end())
                    return lx == env.left.end() && ry == env.right.end() && x.name == y.name;
                return lx->second == ry->second;
            },
            [&](const ast::Lit& x) { return x.value == t.as<ast::Lit>()->value; },
            [&](const ast::PrimApp& x) {
                const auto& y = *t.as<ast::PrimApp>();
                if (x.prim != y.prim || x.args.size() != y.args.size())
                    return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!alpha(x.args[i], y.args[i], env))
                        return false;
                return true;
            },
            [&](const ast::Lam& x) {
                const auto& y = *t.as<ast::Lam>();
                if (x.params.size() != y.params.size())
                    return false;
                for (std::size_t i = 0; i < x.params.size(); ++i) {
                    const auto& p = x.params[i];
                    const auto& q = y.params[i];
                    if (!(p.type == q.type) || p.ref.has_value() != q.ref.has_value())
                        return false;
                    if (p.ref && !ref_equiv(*p.ref, *q.ref))
                        return false;
                }
                AlphaEnv inner = env;
                for (std::size_t i = 0; i < x.params.size(); ++i) {
                    int id = inner.next++;
                    inner.left[x.params[i].name] = id;
                    inner.right[y.params[i].name] = id;
                }
                return alpha(x.body, y.body, inner);
            },
            [&](const ast::App& x) {
                const auto& y = *t.as<ast::App>();
                if (x.args.size() != y.args.size() || !alpha(x.fn, y.fn, env))
                    return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!alpha(x.args[i], y.args[i], env))
                        return false;
                return true;
            },
            [&](const ast::Pair& x) {
                const auto& y = *t.as<ast::Pair>();
                return alpha(x.left, y.left, env) && alpha(x.right, y.right, env);
            },
            [&](const ast::Proj& x) {
                const auto& y = *t.as<ast::Proj>();
                return x.index == y.index && alpha(x.arg, y.arg, env);
            },
            [&](const ast::If& x) {
                const auto& y = *t.as<ast::If>();
                return x.ann == y.ann && alpha(x.guard, y.guard, env) && alpha(x.then_branch, y.then_branch, env) &&
                       alpha(x.else_branch, y.else_branch, env);
            },
        },
        s.node().v);
}

Term freshen_rec(const Term& t, const std::map<std::string, std::string>& scope, std::set<std::string>& used,
                 const std::set<std::string>& avoid)
{
    auto rec = [&](const Term& u) { return freshen_rec(u, scope, used, avoid); };
    return std::visit(
        Overload{
            [&](const ast::Var& x) -> Term {
                auto it = scope.find(x.name);
                return it == scope.end() || it->second == x.name ? t : Term::var(it->second);
            },
            [&](const ast::Lit&) -> Term { return t; },
            [&](const ast::PrimApp& x) -> Term { return Term::prim(x.prim, map_terms(x.args, rec)); },
            [&](const ast::Lam& x) -> Term {
                std::map<std::string, std::string> inner = scope;
                std::vector<Param> params = x.params;
                for (auto& p : params) {
                    std::string name = p.name;
                    if (used.count(name)) {
                        std::set<std::string> block = avoid;
                        block.insert(used.begin(), used.end());
                        name = fresh_name(name, block);
                    }
                    used.insert(name);
                    inner[p.name] = name;
                    p.name = name;
                }
                Term body = freshen_rec(x.body, inner, used, avoid);
                return Term::lam(std::move(params), std::move(body));
            },
            [&](const ast::App& x) -> Term { return Term::app(rec(x.fn), map_terms(x.args, rec)); },
            [&](const ast::Pair& x) -> Term { return Term::pair(rec(x.left), rec(x.right)); },
            [&](const ast::Proj& x) -> Term { return Term::proj(x.index, rec(x.arg)); },
            [&](const ast::If& x) -> Term {
                Term g = rec(x.guard);
                Term a = rec(x.then_branch);
                Term b = rec(x.else_branch);
                return Term::ite(std::move(g), std::move(a), std::move(b), x.ann);
            },
        },
        t.node().v);
}

} // namespace

bool alpha_equiv(const Term& s, const Term& t)
{
    AlphaEnv env;
    return alpha(s, t, env);
}

Term freshen(const Term& t)
{
    std::set<std::string> used = free_vars(t);
    std::set<std::string> avoid = all_names(t);
    Term out = freshen_rec(t, {}, used, avoid);
    // Keep the original handle when nothing was renamed.
    return out == t ? t : out;
}

} // namespace rlam
