#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ucutlass/diagnostics.hpp"

namespace ucutlass {

enum class TokenKind {
    Ident,
    Int,
    String,  // single-quoted, used by custom('...') epilogues
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Equals,
    Dot,
    Chain,  // >>
    End,
};

const char* to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string text;      // raw spelling; for String the unescaped payload
    std::int64_t value = 0;  // valid when kind == Int
    Span span;

    bool is(TokenKind k) const { return kind == k; }
};

// Splits `source` into tokens. `//` starts a comment running to end of line.
// Throws LexError (with a span inside the input) on any character outside the
// grammar's alphabet, an unterminated string, or a malformed integer.
std::vector<Token> tokenize(const std::string& source);

}  // namespace ucutlass
