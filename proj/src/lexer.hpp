#ifndef RLAM_SRC_LEXER_HPP
#define RLAM_SRC_LEXER_HPP

#include "rlam/errors.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rlam::detail {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
    TokKind kind;
    std::string text;
    SourceLocation where;
};

// Splits source into tokens. `--` starts a comment; "λ" is read as "\".
std::vector<Token> lex(std::string_view source, SourceLocation start = {});

} // namespace rlam::detail

#endif
