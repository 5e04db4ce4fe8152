#include "rlam/types.hpp"

#include "rlam/errors.hpp"

#include <algorithm>
#include <set>

namespace rlam {

SimpleType::SimpleType(Kind kind, SimpleType left, SimpleType right)
    : kind_(kind), children_(std::make_shared<const std::pair<SimpleType, SimpleType>>(std::move(left), std::move(right)))
{
}

SimpleType SimpleType::prod(SimpleType left, SimpleType right)
{
    return SimpleType(Kind::Prod, std::move(left), std::move(right));
}

SimpleType SimpleType::arrow(SimpleType domain, SimpleType codomain)
{
    return SimpleType(Kind::Arrow, std::move(domain), std::move(codomain));
}

SimpleType SimpleType::tuple(std::span<const SimpleType> components)
{
    if (components.empty())
        throw std::invalid_argument("empty tuple type");
    SimpleType acc = components.back();
    for (std::size_t i = components.size() - 1; i-- > 0;)
        acc = prod(components[i], acc);
    return acc;
}

const SimpleType& SimpleType::left() const
{
    if (!children_)
        throw std::logic_error("R has no components");
    return children_->first;
}

const SimpleType& SimpleType::right() const
{
    if (!children_)
        throw std::logic_error("R has no components");
    return children_->second;
}

bool operator==(const SimpleType& a, const SimpleType& b)
{
    if (a.kind_ != b.kind_)
        return false;
    if (a.is_real() || a.children_ == b.children_)
        return true;
    return a.left() == b.left() && a.right() == b.right();
}

namespace {

// 0 arrow, 1 product, 2 atom
std::string print_type(const SimpleType& t, int ctx)
{
    std::string s;
    int prec = 2;
    switch (t.kind()) {
    case SimpleType::Kind::Real:
        s = "R";
        break;
    case SimpleType::Kind::Prod:
        prec = 1;
        s = print_type(t.left(), 2) + " * " + print_type(t.right(), 1);
        break;
    case SimpleType::Kind::Arrow:
        prec = 0;
        s = print_type(t.domain(), 1) + " -> " + print_type(t.codomain(), 0);
        break;
    }
    return prec < ctx ? "(" + s + ")" : s;
}

} // namespace

std::string to_string(const SimpleType& t) { return print_type(t, 0); }

std::vector<SimpleType> tuple_components(const SimpleType& t)
{
    std::vector<SimpleType> out;
    const SimpleType* cur = &t;
    while (cur->is_prod()) {
        out.push_back(cur->left());
        cur = &cur->right();
    }
    out.push_back(*cur);
    return out;
}

TypingContext::TypingContext(std::initializer_list<Entry> entries)
{
    for (const auto& e : entries)
        *this = extended(e.name, e.type);
}

TypingContext TypingContext::extended(std::string name, SimpleType type) const
{
    TypingContext out;
    out.entries_.reserve(entries_.size() + 1);
    for (const auto& e : entries_)
        if (e.name != name)
            out.entries_.push_back(e);
    out.entries_.push_back({std::move(name), std::move(type)});
    return out;
}

const SimpleType* TypingContext::find(std::string_view name) const
{
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->name == name)
            return &it->type;
    return nullptr;
}

std::string to_string(const TypingContext& ctx)
{
    std::string s;
    for (const auto& e : ctx.entries())
        s += (s.empty() ? "" : ", ") + e.name + " : " + to_string(e.type);
    return s;
}

struct RefType::Node {
    bool real = true;
    std::string var;
    std::vector<RefType> args;
    Formula domain = Formula::top();
    std::optional<Formula> image;
    std::vector<RefType> result; // zero or one element
};

RefType RefType::real(std::string var)
{
    if (var.empty())
        throw InvalidRefType("refinement variable must be nonempty");
    auto node = std::make_shared<Node>();
    node->var = std::move(var);
    return RefType(std::move(node));
}

RefType RefType::arrow(std::vector<RefType> args, Formula domain, std::optional<Formula> image, RefType result)
{
    if (args.empty())
        throw InvalidRefType("refined arrow needs at least one argument");
    bool seen_real = false;
    std::set<std::string> arg_vars;
    for (const auto& a : args) {
        if (a.is_real()) {
            seen_real = true;
            if (!arg_vars.insert(a.var()).second)
                throw InvalidRefType("argument variables of a refined arrow must be distinct ('" + a.var() + "')");
        } else if (seen_real) {
            throw InvalidRefType("higher-order arguments must precede real arguments");
        }
    }
    for (const auto& v : vars(domain))
        if (!arg_vars.count(v))
            throw InvalidRefType("domain formula mentions '" + v + "', which is not a real argument variable");
    if (result.is_real()) {
        if (!image)
            image = Formula::top();
        for (const auto& v : vars(*image))
            if (v != result.var())
                throw InvalidRefType("image formula may only mention the result variable '" + result.var() + "'");
    } else if (image) {
        throw InvalidRefType("an image formula is only allowed when the result is real");
    }
    auto node = std::make_shared<Node>();
    node->real = false;
    node->args = std::move(args);
    node->domain = std::move(domain);
    node->image = std::move(image);
    node->result.push_back(std::move(result));
    return RefType(std::move(node));
}

bool RefType::is_real() const { return node_->real; }

const std::string& RefType::var() const
{
    if (!is_real())
        throw std::logic_error("arrow refinement has no variable");
    return node_->var;
}

const std::vector<RefType>& RefType::args() const { return node_->args; }
const Formula& RefType::domain() const { return node_->domain; }
const std::optional<Formula>& RefType::image() const { return node_->image; }

const RefType& RefType::result() const
{
    if (is_real())
        throw std::logic_error("real refinement has no result");
    return node_->result.front();
}

std::size_t RefType::higher_arity() const
{
    return static_cast<std::size_t>(
        std::count_if(args().begin(), args().end(), [](const RefType& a) { return a.is_higher(); }));
}

std::vector<std::string> RefType::real_arg_vars() const
{
    std::vector<std::string> out;
    for (const auto& a : args())
        if (a.is_real())
            out.push_back(a.var());
    return out;
}

std::string to_string(const RefType& t)
{
    if (t.is_real())
        return "{" + t.var() + "}";
    std::string s;
    if (t.args().size() == 1 && t.args()[0].is_real()) {
        s = to_string(t.args()[0]);
    } else {
        s = "(";
        for (std::size_t i = 0; i < t.args().size(); ++i)
            s += (i ? ", " : "") + to_string(t.args()[i]);
        s += ")";
    }
    s += " -[" + to_string(t.domain());
    if (t.image())
        s += " | " + to_string(*t.image());
    s += "]-> " + to_string(t.result());
    return s;
}

SimpleType erase(const RefType& t)
{
    if (t.is_real())
        return SimpleType::real();
    std::vector<SimpleType> args;
    for (const auto& a : t.args())
        args.push_back(erase(a));
    return SimpleType::arrow(SimpleType::tuple(args), erase(t.result()));
}

namespace {

bool equiv(const RefType& a, const RefType& b, std::map<std::string, std::string>& renaming)
{
    if (a.is_real() != b.is_real())
        return false;
    if (a.is_real()) {
        renaming[b.var()] = a.var();
        return true;
    }
    if (a.args().size() != b.args().size())
        return false;
    // Argument and result binders are local to each arrow.
    std::map<std::string, std::string> local;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!equiv(a.args()[i], b.args()[i], local))
            return false;
    if (!(rename(b.domain(), local) == a.domain()))
        return false;
    std::map<std::string, std::string> res;
    if (!equiv(a.result(), b.result(), res))
        return false;
    if (a.image().has_value() != b.image().has_value())
        return false;
    return !a.image() || rename(*b.image(), res) == *a.image();
}

} // namespace

bool ref_equiv(const RefType& a, const RefType& b)
{
    std::map<std::string, std::string> renaming;
    return equiv(a, b, renaming);
}

RefType rename_vars(const RefType& t, const std::map<std::string, std::string>& renaming)
{
    auto renamed = [&](const std::string& v) {
        auto it = renaming.find(v);
        return it == renaming.end() ? v : it->second;
    };
    if (t.is_real())
        return RefType::real(renamed(t.var()));
    std::vector<RefType> args;
    std::map<std::string, std::string> arg_map;
    for (const auto& a : t.args()) {
        if (a.is_real()) {
            args.push_back(RefType::real(renamed(a.var())));
            arg_map[a.var()] = renamed(a.var());
        } else {
            args.push_back(a);
        }
    }
    RefType result = t.result().is_real() ? RefType::real(renamed(t.result().var())) : t.result();
    std::optional<Formula> image;
    if (t.image())
        image = rename(*t.image(), {{t.result().var(), renamed(t.result().var())}});
    return RefType::arrow(std::move(args), rename(t.domain(), arg_map), std::move(image), std::move(result));
}

} // namespace rlam
