#include "lexer.hpp"

#include <array>
#include <cctype>

namespace rlam::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool ident_continue(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '%';
}

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Longest match first.
constexpr std::array<std::string_view, 29> puncts = {
    "]->", "-[", "->", "<=", ">=", "/\\", "\\/", "=>", "\\", ".", ",", "(", ")", "{", "}",
    ":",   ";",  "+",  "-",  "*",  "<",   ">",   "=",  "~", "|", "[", "]", "@", "/",
};

} // namespace

std::vector<Token> lex(std::string_view src, SourceLocation start)
{
    std::vector<Token> out;
    std::size_t i = 0;
    int line = start.line;
    int col = start.column;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "--") {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        SourceLocation here{line, col};
        if (src.substr(i, 2) == "\xCE\xBB") { // λ
            out.push_back({TokKind::Punct, "\\", here});
            i += 2;
            ++col;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < src.size() && ident_continue(src[j]))
                ++j;
            out.push_back({TokKind::Ident, std::string(src.substr(i, j - i)), here});
            advance(j - i);
            continue;
        }
        if (digit(c)) {
            std::size_t j = i;
            while (j < src.size() && digit(src[j]))
                ++j;
            if (j + 1 < src.size() && src[j] == '/' && digit(src[j + 1])) {
                ++j;
                while (j < src.size() && digit(src[j]))
                    ++j;
            } else {
                if (j + 1 < src.size() && src[j] == '.' && digit(src[j + 1])) {
                    ++j;
                    while (j < src.size() && digit(src[j]))
                        ++j;
                }
                if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < src.size() && (src[k] == '+' || src[k] == '-'))
                        ++k;
                    if (k < src.size() && digit(src[k])) {
                        while (k < src.size() && digit(src[k]))
                            ++k;
                        j = k;
                    }
                }
            }
            out.push_back({TokKind::Number, std::string(src.substr(i, j - i)), here});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (auto p : puncts) {
            if (src.substr(i, p.size()) == p) {
                out.push_back({TokKind::Punct, std::string(p), here});
                advance(p.size());
                matched = true;
                break;
            }
        }
        if (!matched)
            throw ParseError(here, std::string("unexpected character '") + c + "'");
    }
    out.push_back({TokKind::End, "", {line, col}});
    return out;
}

} // namespace rlam::detail
