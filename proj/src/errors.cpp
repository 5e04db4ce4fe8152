#include "rlam/errors.hpp"

namespace rlam {

namespace {

std::string located(const SourceLocation& where, const std::string& message, const std::vector<std::string>& expected)
{
    std::string text = std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message;
    if (!expected.empty()) {
        text += " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i > 0)
                text += i + 1 == expected.size() ? " or " : ", ";
            text += expected[i];
        }
        text += ")";
    }
    return text;
}

} // namespace

ParseError::ParseError(SourceLocation where, std::string message, std::vector<std::string> expected)
    : Error(located(where, message, expected)), where_(where), expected_(std::move(expected))
{
}

TypeError::TypeError(std::string rule, std::string subterm, std::string message)
    : Error(message), rule_(std::move(rule)), subterm_(std::move(subterm))
{
}

UnboundVariable::UnboundVariable(const std::string& name)
    : TypeError("var", name, "unbound variable '" + name + "'")
{
}

ArityMismatch::ArityMismatch(const std::string& prim, std::size_t expected, std::size_t got, std::string subterm)
    : TypeError("prim", std::move(subterm),
                "primitive '" + prim + "' expects " + std::to_string(expected) + " argument(s), got " +
                    std::to_string(got))
{
}

} // namespace rlam
