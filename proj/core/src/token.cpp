#include "ucutlass/token.hpp"

#include <cctype>
#include <limits>

namespace ucutlass {

std::string to_string(const Span& span) {
    return std::to_string(span.line) + ":" + std::to_string(span.column);
}

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::Int: return "integer";
        case TokenKind::String: return "string";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::Comma: return "','";
        case TokenKind::Equals: return "'='";
        case TokenKind::Dot: return "'.'";
        case TokenKind::Chain: return "'>>'";
        case TokenKind::End: return "end of input";
    }
    return "?";
}

namespace {

class Lexer {
  public:
    explicit Lexer(const std::string& source) : src_(source) {}

    std::vector<Token> Run() {
        std::vector<Token> tokens;
        for (;;) {
            SkipSpaceAndComments();
            if (AtEnd()) break;
            tokens.push_back(Next());
        }
        tokens.push_back(Token{TokenKind::End, "", 0, Here(0)});
        return tokens;
    }

  private:
    bool AtEnd() const { return pos_ >= src_.size(); }
    char Peek() const { return AtEnd() ? '\0' : src_[pos_]; }
    char PeekAt(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char Advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    Span Here(std::size_t length) const {
        return Span{line_, column_, pos_, length};
    }

    void SkipSpaceAndComments() {
        for (;;) {
            while (!AtEnd() && std::isspace(static_cast<unsigned char>(Peek()))) Advance();
            if (Peek() == '/' && PeekAt(1) == '/') {
                while (!AtEnd() && Peek() != '\n') Advance();
                continue;
            }
            break;
        }
    }

    Token Simple(TokenKind kind, std::size_t chars) {
        Span span = Here(chars);
        std::string text;
        for (std::size_t i = 0; i < chars; ++i) text.push_back(Advance());
        return Token{kind, text, 0, span};
    }

    Token Next() {
        char c = Peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return LexIdent();
        if (std::isdigit(static_cast<unsigned char>(c))) return LexInt(false);
        if (c == '-' && std::isdigit(static_cast<unsigned char>(PeekAt(1)))) return LexInt(true);
        if (c == '\'') return LexString();
        switch (c) {
            case '(': return Simple(TokenKind::LParen, 1);
            case ')': return Simple(TokenKind::RParen, 1);
            case '{': return Simple(TokenKind::LBrace, 1);
            case '}': return Simple(TokenKind::RBrace, 1);
            case ',': return Simple(TokenKind::Comma, 1);
            case '=': return Simple(TokenKind::Equals, 1);
            case '.': return Simple(TokenKind::Dot, 1);
            case '>':
                if (PeekAt(1) == '>') return Simple(TokenKind::Chain, 2);
                throw LexError("stray '>'; the only chain operator is '>>'", Here(1));
            default:
                throw LexError(std::string("unexpected character '") + c + "'", Here(1));
        }
    }

    Token LexIdent() {
        Span span = Here(0);
        std::string text;
        while (!AtEnd()) {
            char c = Peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                text.push_back(Advance());
            } else {
                break;
            }
        }
        span.length = text.size();
        return Token{TokenKind::Ident, text, 0, span};
    }

    Token LexInt(bool negative) {
        Span span = Here(0);
        std::string text;
        if (negative) text.push_back(Advance());
        while (!AtEnd() && std::isdigit(static_cast<unsigned char>(Peek()))) {
            text.push_back(Advance());
        }
        // A digit run flowing straight into an identifier character (e.g. 12ab)
        // is a malformed literal, not two tokens.
        if (!AtEnd()) {
            char c = Peek();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                span.length = text.size() + 1;
                throw LexError("malformed integer literal '" + text + c + "...'", span);
            }
        }
        span.length = text.size();
        std::int64_t value = 0;
        try {
            value = std::stoll(text);
        } catch (const std::out_of_range&) {
            throw LexError("integer literal out of range: " + text, span);
        }
        return Token{TokenKind::Int, text, value, span};
    }

    Token LexString() {
        Span span = Here(0);
        Advance();  // opening quote
        std::string payload;
        for (;;) {
            if (AtEnd()) throw LexError("unterminated string literal", span);
            char c = Advance();
            if (c == '\'') break;
            if (c == '\\') {
                if (AtEnd()) throw LexError("unterminated escape in string literal", span);
                char esc = Advance();
                if (esc == '\'' || esc == '\\') {
                    payload.push_back(esc);
                } else {
                    payload.push_back('\\');
                    payload.push_back(esc);
                }
                continue;
            }
            if (c == '\n') throw LexError("newline inside string literal", span);
            payload.push_back(c);
        }
        span.length = pos_ - span.offset;
        return Token{TokenKind::String, payload, 0, span};
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    return Lexer(source).Run();
}

}  // namespace ucutlass
