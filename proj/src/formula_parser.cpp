#include <cctype>
#include <charconv>
#include <sstream>

#include "stlreach/error.hpp"
#include "stlreach/formula.hpp"

namespace stlreach {

namespace {

enum class Tok { End, Ident, Number, Not, And, Or, Arrow, LParen, RParen, LBracket, RBracket, Comma };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    double number = 0.0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.pos = pos_;
        if (i_ >= src_.size()) {
            return t;
        }
        const char c = src_[i_];
        auto single = [&](Tok k) {
            t.kind = k;
            t.text = src_.substr(i_, 1);
            advance(1);
            return t;
        };
        switch (c) {
            case '!':
                return single(Tok::Not);
            case '&':
                return single(Tok::And);
            case '|':
                return single(Tok::Or);
            case '(':
                return single(Tok::LParen);
            case ')':
                return single(Tok::RParen);
            case '[':
                return single(Tok::LBracket);
            case ']':
                return single(Tok::RBracket);
            case ',':
                return single(Tok::Comma);
            case '-':
                if (i_ + 1 < src_.size() && src_[i_ + 1] == '>') {
                    t.kind = Tok::Arrow;
                    t.text = src_.substr(i_, 2);
                    advance(2);
                    return t;
                }
                break;
            default:
                break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
                ++j;
            }
            t.kind = Tok::Ident;
            t.text = src_.substr(i_, j - i_);
            advance(j - i_);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* first = src_.data() + i_;
            const char* last = src_.data() + src_.size();
            auto res = std::from_chars(first, last, t.number);
            if (res.ec != std::errc{}) {
                throw ParseError("malformed number", pos_.line, pos_.column);
            }
            t.kind = Tok::Number;
            t.text = std::string_view(first, static_cast<std::size_t>(res.ptr - first));
            advance(t.text.size());
            return t;
        }
        std::string msg = "unexpected character '";
        msg += c;
        msg += "'";
        throw ParseError(msg, pos_.line, pos_.column);
    }

private:
    void skip_space() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) {
            advance(1);
        }
    }

    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i_) {
            if (src_[i_] == '\n') {
                ++pos_.line;
                pos_.column = 1;
            } else {
                ++pos_.column;
            }
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    SourcePos pos_;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    Formula parse() {
        Formula f = implies();
        if (cur_.kind != Tok::End) {
            fail("unexpected '" + std::string(cur_.text) + "' after formula");
        }
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, cur_.pos); }
    [[noreturn]] static void fail_at(const std::string& msg, SourcePos pos) {
        throw ParseError(msg, pos.line, pos.column);
    }

    bool is_keyword(std::string_view kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }

    Token take() {
        Token t = cur_;
        cur_ = lex_.next();
        return t;
    }

    void expect(Tok kind, const char* what) {
        if (cur_.kind != kind) {
            fail(std::string("expected ") + what +
                 (cur_.kind == Tok::End ? std::string(" at end of input") : ", found '" + std::string(cur_.text) + "'"));
        }
        take();
    }

    Formula implies() {
        Formula lhs = disjunction();
        if (cur_.kind == Tok::Arrow) {
            const SourcePos pos = take().pos;
            Formula f = Formula::implication(std::move(lhs), implies());
            f.pos = pos;
            return f;
        }
        return lhs;
    }

    Formula disjunction() {
        Formula lhs = conjunction();
        while (cur_.kind == Tok::Or) {
            const SourcePos pos = take().pos;
            lhs = Formula::disjunction(std::move(lhs), conjunction());
            lhs.pos = pos;
        }
        return lhs;
    }

    Formula conjunction() {
        Formula lhs = until();
        while (cur_.kind == Tok::And) {
            const SourcePos pos = take().pos;
            lhs = Formula::conjunction(std::move(lhs), until());
            lhs.pos = pos;
        }
        return lhs;
    }

    Formula until() {
        Formula lhs = unary();
        if (is_keyword("U")) {
            const SourcePos pos = take().pos;
            auto [a, b] = bound();
            Formula f = Formula::until(a, b, std::move(lhs), unary());
            f.pos = pos;
            return f;
        }
        return lhs;
    }

    Formula unary() {
        if (cur_.kind == Tok::Not) {
            const SourcePos pos = take().pos;
            Formula f = Formula::negation(unary());
            f.pos = pos;
            return f;
        }
        if (is_keyword("G") || is_keyword("F")) {
            const bool globally = cur_.text == "G";
            const SourcePos pos = take().pos;
            auto [a, b] = bound();
            Formula body = unary();
            Formula f = globally ? Formula::globally(a, b, std::move(body)) : Formula::finally(a, b, std::move(body));
            f.pos = pos;
            return f;
        }
        return atom();
    }

    Formula atom() {
        if (cur_.kind == Tok::LParen) {
            take();
            Formula f = implies();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (cur_.kind == Tok::Ident) {
            if (cur_.text == "U" || cur_.text == "G" || cur_.text == "F") {
                fail("keyword '" + std::string(cur_.text) + "' cannot be used as a predicate name");
            }
            const Token t = take();
            Formula f = t.text == "T" ? Formula::tautology() : Formula::pred(std::string(t.text));
            f.pos = t.pos;
            return f;
        }
        if (cur_.kind == Tok::End) {
            fail("unexpected end of input");
        }
        fail("unexpected '" + std::string(cur_.text) + "'");
    }

    double number() {
        if (cur_.kind != Tok::Number) {
            fail("expected a number in temporal bound");
        }
        return take().number;
    }

    std::pair<double, double> bound() {
        const SourcePos pos = cur_.pos;
        expect(Tok::LBracket, "'['");
        const double a = number();
        expect(Tok::Comma, "','");
        const double b = number();
        expect(Tok::RBracket, "']'");
        if (a > b) {
            std::ostringstream msg;
            msg << "empty temporal bound [" << a << ", " << b << "]";
            fail_at(msg.str(), pos);
        }
        return {a, b};
    }

    Lexer lex_;
    Token cur_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace stlreach
