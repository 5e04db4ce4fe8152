#include "lexer.hpp"

#include "rlam/subst.hpp"
#include "rlam/syntax.hpp"

#include <map>
#include <set>

namespace rlam {

using detail::Token;
using detail::TokKind;

namespace {

const std::set<std::string, std::less<>> term_keywords = {"if", "then", "else", "fst", "snd"};

const std::map<std::string, std::string, std::less<>> infix_prims = {
    {"+", "add"}, {"-", "sub"}, {"*", "mul"}, {"<", "lt"}, {"<=", "le"}, {"=", "eq"}, {">", "gt"}, {">=", "ge"},
};

class Parser {
public:
    Parser(std::vector<Token> tokens, const PrimRegistry& prims) : toks_(std::move(tokens)), prims_(prims) {}

    // ---- driver helpers
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == TokKind::End; }
    bool is_punct(std::string_view p, std::size_t k = 0) const
    {
        return peek(k).kind == TokKind::Punct && peek(k).text == p;
    }
    bool is_ident(std::string_view w, std::size_t k = 0) const
    {
        return peek(k).kind == TokKind::Ident && peek(k).text == w;
    }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(std::string message, std::vector<std::string> expected = {}) const
    {
        throw ParseError(peek().where, std::move(message), std::move(expected));
    }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case TokKind::End:
            return "end of input";
        case TokKind::Number:
            return "number " + t.text;
        default:
            return "'" + t.text + "'";
        }
    }

    void expect(std::string_view p)
    {
        if (!is_punct(p))
            fail("unexpected " + describe(peek()), {"'" + std::string(p) + "'"});
        take();
    }

    void expect_keyword(std::string_view w)
    {
        if (!is_ident(w))
            fail("unexpected " + describe(peek()), {"'" + std::string(w) + "'"});
        take();
    }

    void expect_end()
    {
        if (!at_end())
            fail("unexpected " + describe(peek()), {"end of input"});
    }

    std::string expect_name(const char* what)
    {
        if (peek().kind != TokKind::Ident || term_keywords.count(peek().text) || is_prim(peek()))
            fail("unexpected " + describe(peek()), {what});
        return take().text;
    }

    bool is_prim(const Token& t) const { return t.kind == TokKind::Ident && prims_.contains(t.text); }

    // ---- simple types
    SimpleType type()
    {
        SimpleType left = prod_type();
        if (is_punct("->")) {
            take();
            return SimpleType::arrow(left, type());
        }
        return left;
    }

    SimpleType prod_type()
    {
        SimpleType left = atom_type();
        if (is_punct("*")) {
            take();
            return SimpleType::prod(left, prod_type());
        }
        return left;
    }

    SimpleType atom_type()
    {
        if (is_ident("R")) {
            take();
            return SimpleType::real();
        }
        if (is_punct("(")) {
            take();
            SimpleType t = type();
            expect(")");
            return t;
        }
        fail("unexpected " + describe(peek()), {"'R'", "'('"});
    }

    // ---- formulas
    Formula formula()
    {
        Formula left = disjunction();
        if (is_punct("=>")) {
            take();
            return Formula::implies(left, formula());
        }
        return left;
    }

    Formula disjunction()
    {
        Formula left = conjunction();
        if (is_punct("\\/")) {
            take();
            return Formula::disj(left, disjunction());
        }
        return left;
    }

    Formula conjunction()
    {
        Formula left = negation();
        if (is_punct("/\\")) {
            take();
            return Formula::conj(left, conjunction());
        }
        return left;
    }

    Formula negation()
    {
        if (is_punct("~")) {
            take();
            return Formula::negate(negation());
        }
        return formula_atom();
    }

    Formula formula_atom()
    {
        if (is_ident("T")) {
            take();
            return Formula::top();
        }
        if (is_punct("(")) {
            std::size_t save = pos_;
            try {
                return comparison();
            } catch (const ParseError&) {
                pos_ = save;
            }
            take();
            Formula f = formula();
            expect(")");
            return f;
        }
        return comparison();
    }

    Formula comparison()
    {
        Expr lhs = expr();
        static const std::vector<std::string> ops = {"'<='", "'<'", "'='", "'>='", "'>'"};
        if (peek().kind != TokKind::Punct)
            fail("unexpected " + describe(peek()), ops);
        std::string op = peek().text;
        if (op != "<=" && op != "<" && op != "=" && op != ">=" && op != ">")
            fail("unexpected " + describe(peek()), ops);
        take();
        Expr rhs = expr();
        if (op == "<=")
            return Formula::leq(lhs, rhs);
        if (op == "<")
            return Formula::lt(lhs, rhs);
        if (op == "=")
            return Formula::eq(lhs, rhs);
        if (op == ">=")
            return Formula::geq(lhs, rhs);
        return Formula::gt(lhs, rhs);
    }

    Expr expr()
    {
        Expr acc = expr_term();
        while (is_punct("+") || is_punct("-")) {
            bool plus = take().text == "+";
            Expr rhs = expr_term();
            acc = plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    Expr expr_term()
    {
        Expr acc = expr_unary();
        while (is_punct("*")) {
            take();
            acc = acc * expr_unary();
        }
        return acc;
    }

    Expr expr_unary()
    {
        if (is_punct("-")) {
            take();
            if (peek().kind == TokKind::Number)
                return Expr::constant(-number());
            return -expr_unary();
        }
        return expr_atom();
    }

    Rational number()
    {
        const Token& t = take();
        auto value = parse_rational(t.text);
        if (!value)
            throw ParseError(t.where, "malformed number '" + t.text + "'");
        return *value;
    }

    Expr expr_atom()
    {
        if (peek().kind == TokKind::Number)
            return Expr::constant(number());
        if (is_punct("(")) {
            take();
            Expr e = expr();
            expect(")");
            return e;
        }
        if (peek().kind == TokKind::Ident && !is_ident("T")) {
            const Token& t = take();
            if (is_prim(t)) {
                const PrimFn& fn = prims_.at(t.text);
                std::vector<Expr> args;
                if (is_punct("(")) {
                    take();
                    if (!is_punct(")")) {
                        args.push_back(expr());
                        while (is_punct(",")) {
                            take();
                            args.push_back(expr());
                        }
                    }
                    expect(")");
                } else if (fn.arity != 0) {
                    fail("unexpected " + describe(peek()), {"'('"});
                }
                if (args.size() != fn.arity)
                    throw ParseError(t.where, "primitive '" + t.text + "' expects " + std::to_string(fn.arity) +
                                                  " argument(s), got " + std::to_string(args.size()));
                return Expr::app(fn.name, std::move(args));
            }
            return Expr::var(t.text);
        }
        fail("unexpected " + describe(peek()), {"logical variable", "number", "'('"});
    }

    // ---- refinement types
    RefType ref_type()
    {
        std::vector<RefType> group;
        bool parenthesized = false;
        if (is_punct("{")) {
            group.push_back(real_ref());
        } else if (is_punct("(")) {
            parenthesized = true;
            take();
            group.push_back(ref_type());
            while (is_punct(",")) {
                take();
                group.push_back(ref_type());
            }
            expect(")");
        } else {
            fail("unexpected " + describe(peek()), {"'{'", "'('"});
        }
        if (!is_punct("->") && !is_punct("-[")) {
            if (group.size() == 1 && (parenthesized || group.front().is_real()))
                return group.front();
            fail("unexpected " + describe(peek()), {"'->'", "'-['"});
        }
        Formula domain = Formula::top();
        std::optional<Formula> image;
        SourceLocation arrow_at = peek().where;
        if (take().text == "-[") {
            domain = formula();
            if (is_punct("|")) {
                take();
                image = formula();
            }
            expect("]->");
        }
        RefType result = ref_type();
        try {
            return RefType::arrow(std::move(group), std::move(domain), std::move(image), std::move(result));
        } catch (const InvalidRefType& e) {
            throw ParseError(arrow_at, e.what());
        }
    }

    RefType real_ref()
    {
        expect("{");
        if (peek().kind != TokKind::Ident)
            fail("unexpected " + describe(peek()), {"logical variable"});
        std::string var = take().text;
        if (is_ident("in")) {
            take();
            expect_keyword("R");
        }
        expect("}");
        return RefType::real(var);
    }

    // A simple type followed by one of `stops`, or else a refinement type.
    std::pair<SimpleType, std::optional<RefType>> param_type(std::initializer_list<std::string_view> stops)
    {
        std::size_t save = pos_;
        try {
            SimpleType t = type();
            for (auto s : stops)
                if ((s.empty() && at_end()) || (!s.empty() && is_punct(s)))
                    return {t, std::nullopt};
        } catch (const ParseError&) {
        }
        pos_ = save;
        RefType r = ref_type();
        return {erase(r), r};
    }

    // ---- terms
    Term term()
    {
        if (is_punct("\\"))
            return lambda();
        if (is_ident("if"))
            return conditional();
        return compare();
    }

    Term lambda()
    {
        take();
        std::vector<Param> params;
        for (;;) {
            std::string name = expect_name("parameter name");
            expect(":");
            auto [type, ref] = param_type({",", "."});
            params.push_back(Param{std::move(name), std::move(type), std::move(ref)});
            if (is_punct(",")) {
                take();
                continue;
            }
            break;
        }
        expect(".");
        return Term::lam(std::move(params), term());
    }

    Term conditional()
    {
        take();
        Term guard = term();
        std::optional<IfAnnotation> ann;
        if (is_punct("{"))
            ann = annotation();
        expect_keyword("then");
        Term then_branch = term();
        expect_keyword("else");
        Term else_branch = term();
        return Term::ite(std::move(guard), std::move(then_branch), std::move(else_branch), std::move(ann));
    }

    IfAnnotation annotation()
    {
        expect("{");
        IfAnnotation ann;
        static const std::vector<std::string> keys = {"'guard'", "'zero'", "'one'", "'then'", "'else'"};
        while (!is_punct("}")) {
            if (peek().kind != TokKind::Ident)
                fail("unexpected " + describe(peek()), keys);
            const Token& key = take();
            std::optional<Formula>* slot = nullptr;
            if (key.text == "guard")
                slot = &ann.guard_continuity;
            else if (key.text == "zero")
                slot = &ann.guard_zero;
            else if (key.text == "one")
                slot = &ann.guard_one;
            else if (key.text == "then")
                slot = &ann.then_domain;
            else if (key.text == "else")
                slot = &ann.else_domain;
            else
                throw ParseError(key.where, "unknown annotation key '" + key.text + "'", keys);
            if (slot->has_value())
                throw ParseError(key.where, "duplicate annotation key '" + key.text + "'");
            expect(":");
            *slot = formula();
            if (is_punct(";"))
                take();
            else if (!is_punct("}"))
                fail("unexpected " + describe(peek()), {"';'", "'}'"});
        }
        take();
        return ann;
    }

    Term compare()
    {
        Term left = additive();
        for (std::string_view op : {"<=", "<", "=", ">=", ">"}) {
            if (is_punct(op)) {
                take();
                Term right = additive();
                return Term::prim(infix_prims.find(op)->second, {left, right});
            }
        }
        return left;
    }

    Term additive()
    {
        Term acc = multiplicative();
        while (is_punct("+") || is_punct("-")) {
            std::string op = take().text;
            Term rhs = multiplicative();
            acc = Term::prim(infix_prims.find(op)->second, {acc, rhs});
        }
        return acc;
    }

    Term multiplicative()
    {
        Term acc = unary();
        while (is_punct("*")) {
            take();
            Term rhs = unary();
            acc = Term::prim("mul", {acc, rhs});
        }
        return acc;
    }

    Term unary()
    {
        if (is_punct("-")) {
            take();
            if (peek().kind == TokKind::Number)
                return Term::lit(-number());
            return Term::prim("neg", {unary()});
        }
        return application();
    }

    bool starts_atom() const
    {
        const Token& t = peek();
        if (t.kind == TokKind::Number)
            return true;
        if (t.kind == TokKind::Ident)
            return !term_keywords.count(t.text);
        return is_punct("(");
    }

    Term application()
    {
        Term head = [&] {
            if (is_ident("fst") || is_ident("snd")) {
                int index = take().text == "fst" ? 1 : 2;
                if (!starts_atom())
                    fail("unexpected " + describe(peek()), {"operand of projection"});
                return Term::proj(index, atom());
            }
            return atom();
        }();
        while (starts_atom()) {
            std::vector<Term> args;
            if (is_punct("(")) {
                take();
                args.push_back(term());
                while (is_punct(",")) {
                    take();
                    args.push_back(term());
                }
                expect(")");
            } else {
                args.push_back(atom());
            }
            head = Term::app(std::move(head), std::move(args));
        }
        return head;
    }

    Term atom()
    {
        const Token& t = peek();
        if (t.kind == TokKind::Number)
            return Term::lit(number());
        if (t.kind == TokKind::Ident && !term_keywords.count(t.text)) {
            take();
            if (is_prim(t)) {
                const PrimFn& fn = prims_.at(t.text);
                std::vector<Term> args;
                if (is_punct("(")) {
                    take();
                    if (!is_punct(")")) {
                        args.push_back(term());
                        while (is_punct(",")) {
                            take();
                            args.push_back(term());
                        }
                    }
                    expect(")");
                } else if (fn.arity != 0) {
                    fail("unexpected " + describe(peek()), {"'(' after primitive '" + t.text + "'"});
                }
                return Term::prim(fn.name, std::move(args));
            }
            return Term::var(t.text);
        }
        if (is_punct("(")) {
            take();
            Term first = term();
            if (is_punct(",")) {
                take();
                Term second = term();
                if (is_punct(","))
                    fail("tuples have exactly two components", {"')'"});
                expect(")");
                return Term::pair(std::move(first), std::move(second));
            }
            expect(")");
            return first;
        }
        fail("unexpected " + describe(t), {"variable", "number", "primitive", "'('"});
    }

    // ---- pragmas
    std::vector<RefBinding> context_entries()
    {
        std::vector<RefBinding> out;
        if (at_end())
            return out;
        for (;;) {
            std::string name = expect_name("variable name");
            expect(":");
            SourceLocation where = peek().where;
            auto [type, ref] = param_type({",", ""});
            if (!ref) {
                try {
                    ref = trivial_refinement(type, name);
                } catch (const InvalidRefType& e) {
                    throw ParseError(where, e.what());
                }
            }
            out.push_back({std::move(name), std::move(*ref)});
            if (!is_punct(","))
                break;
            take();
        }
        return out;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const PrimRegistry& prims_;
};

template <class F>
auto parse_whole(std::string_view source, const PrimRegistry& prims, F&& f, SourceLocation start = {})
{
    Parser p(detail::lex(source, start), prims);
    auto result = f(p);
    p.expect_end();
    return result;
}

RefType trivial_rec(const SimpleType& t, const std::string& hint, int& counter)
{
    if (t.is_real())
        return RefType::real(hint + std::to_string(counter++));
    if (t.is_prod())
        throw InvalidRefType("product type " + to_string(t) + " is only allowed as an argument tuple");
    std::vector<RefType> args;
    for (const auto& c : tuple_components(t.domain())) {
        if (c.is_prod())
            throw InvalidRefType("nested product in argument tuple of " + to_string(t));
        args.push_back(trivial_rec(c, hint, counter));
    }
    RefType result = trivial_rec(t.codomain(), hint, counter);
    return RefType::arrow(std::move(args), Formula::top(), std::nullopt, std::move(result));
}

} // namespace

RefType trivial_refinement(const SimpleType& t, const std::string& hint)
{
    if (t.is_real())
        return RefType::real(hint);
    int counter = 1;
    return trivial_rec(t, hint, counter);
}

Term parse_term(std::string_view source, const PrimRegistry& prims)
{
    return freshen(parse_whole(source, prims, [](Parser& p) { return p.term(); }));
}

SimpleType parse_type(std::string_view source)
{
    return parse_whole(source, PrimRegistry::standard(), [](Parser& p) { return p.type(); });
}

RefType parse_ref_type(std::string_view source, const PrimRegistry& prims)
{
    return parse_whole(source, prims, [](Parser& p) { return p.ref_type(); });
}

Formula parse_formula(std::string_view source, const PrimRegistry& prims)
{
    return parse_whole(source, prims, [](Parser& p) { return p.formula(); });
}

TypingContext SourceFile::typing_context() const
{
    TypingContext ctx;
    if (context) {
        for (const auto& b : *context)
            ctx = ctx.extended(b.name, erase(b.type));
    } else {
        for (const auto& x : free_vars_ordered(term))
            ctx = ctx.extended(x, SimpleType::real());
    }
    return ctx;
}

std::vector<RefBinding> SourceFile::ref_context() const
{
    if (context)
        return *context;
    std::vector<RefBinding> out;
    for (const auto& x : free_vars_ordered(term))
        out.push_back({x, RefType::real(x)});
    return out;
}

SourceFile parse_source(std::string_view source, const PrimRegistry& prims)
{
    std::string body;
    body.reserve(source.size());
    struct Pragma {
        std::string key;
        std::string text;
        SourceLocation where;
    };
    std::vector<Pragma> pragmas;
    int line = 1;
    std::size_t i = 0;
    while (i <= source.size()) {
        std::size_t end = source.find('\n', i);
        if (end == std::string_view::npos)
            end = source.size();
        std::string_view row = source.substr(i, end - i);
        std::size_t lead = row.find_first_not_of(" \t");
        if (lead != std::string_view::npos && row[lead] == '@') {
            std::size_t k = lead + 1;
            while (k < row.size() && std::isalpha(static_cast<unsigned char>(row[k])))
                ++k;
            pragmas.push_back({std::string(row.substr(lead + 1, k - lead - 1)), std::string(row.substr(k)),
                               SourceLocation{line, static_cast<int>(k) + 1}});
            body.append(row.size(), ' ');
        } else {
            body.append(row);
        }
        if (end < source.size())
            body.push_back('\n');
        i = end + 1;
        ++line;
    }

    SourceFile file{parse_term(body, prims), std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    auto once = [](auto& slot, const Pragma& p) {
        if (slot)
            throw ParseError(p.where, "duplicate @" + p.key + " pragma");
    };
    for (const auto& p : pragmas) {
        if (p.key == "context") {
            once(file.context, p);
            file.context = parse_whole(p.text, prims, [](Parser& q) { return q.context_entries(); }, p.where);
        } else if (p.key == "domain") {
            once(file.domain, p);
            file.domain = parse_whole(p.text, prims, [](Parser& q) { return q.formula(); }, p.where);
        } else if (p.key == "image") {
            once(file.image, p);
            file.image = parse_whole(p.text, prims, [](Parser& q) { return q.formula(); }, p.where);
        } else if (p.key == "type") {
            once(file.type, p);
            file.type = parse_whole(p.text, prims, [](Parser& q) { return q.ref_type(); }, p.where);
        } else {
            throw ParseError(p.where, "unknown pragma '@" + p.key + "'", {"@context", "@domain", "@image", "@type"});
        }
    }
    return file;
}

} // namespace rlam
