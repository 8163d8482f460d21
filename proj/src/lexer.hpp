#pragma once

#include "nnml/formula.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nnml::detail {

enum class Tok {
    Ident, True, False, LParen, RParen, Not, Box, Dia, And, Or, Imp, Iff,
    Comma, Langle, Rangle, Arrow, End
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(std::string_view text);
std::string describe(const Token& t);

// Recursive-descent parser over a token stream. At nesting depth zero a
// bar can be told to act as a separator instead of disjunction; this is
// how hypersequent succedents end.
class FormulaParser {
public:
    explicit FormulaParser(const std::vector<Token>& toks) : toks_(toks) {}

    Formula formula(bool bar_is_or = true);

    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_++]; }
    bool accept(Tok k);
    void expect(Tok k, const char* what);
    [[noreturn]] void fail(const std::string& msg) const;

private:
    Formula iff();
    Formula imp();
    Formula disj();
    Formula conj();
    Formula unary();

    const std::vector<Token>& toks_;
    std::size_t i_ = 0;
    int depth_ = 0;
    bool bar_is_or_ = true;
};

}  // namespace nnml::detail
