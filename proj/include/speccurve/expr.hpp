#ifndef SPECCURVE_EXPR_HPP
#define SPECCURVE_EXPR_HPP

// Recursive-descent parser for exact rational-function expressions in z over
// Q(i). Grammar (whitespace ignored):
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | primary
//   primary := base ('^' digits)?
//   base    := digits ('/' digits)? | 'i' | 'z' | '(' expr ')'
// "1/2" is the exact rational; write "1/(z-1)" for division by a polynomial.
// No decimals.

#include <cctype>
#include <string>
#include <string_view>

#include "speccurve/ratfunc.hpp"

namespace speccurve {

namespace detail_expr {

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    Int digits() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw parse_error("expected digits at position " + std::to_string(pos) +
                                            " in '" + std::string(s) + "'");
        return Int(std::string(s.substr(start, pos - start)), 10);
    }

    RatFunc expr() {
        RatFunc v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }
    RatFunc term() {
        RatFunc v = unary();
        for (;;) {
            if (eat('*'))
                v *= unary();
            else if (eat('/'))
                v /= unary();
            else
                return v;
        }
    }
    RatFunc unary() {
        if (eat('-')) return -unary();
        return primary();
    }
    RatFunc primary() {
        RatFunc b = base();
        if (eat('^')) {
            Int e = digits();
            if (e < 0 || e > 512) throw parse_error("exponent out of range");
            unsigned long n = e.get_ui();
            RatFunc acc(1);
            for (unsigned long k = 0; k < n; ++k) acc *= b;
            return acc;
        }
        return b;
    }
    RatFunc base() {
        char c = peek();
        if (c == '(') {
            eat('(');
            RatFunc v = expr();
            if (!eat(')')) throw parse_error("missing ')' in '" + std::string(s) + "'");
            return v;
        }
        if (c == 'i') {
            ++pos;
            return RatFunc(GaussRat::I());
        }
        if (c == 'z') {
            ++pos;
            return RatFunc::var();
        }
        if (c == '.') throw parse_error("decimals are not accepted; use exact p/q rationals");
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int num = digits();
            // '/' binds as an exact rational only when followed by digits
            std::size_t save = pos;
            if (eat('/')) {
                skip();
                if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    Int den = digits();
                    if (den == 0) throw parse_error("zero denominator");
                    Rat r(num, den);
                    r.canonicalize();
                    return RatFunc(GaussRat(r));
                }
                pos = save;  // leave '/' for the term level
            }
            return RatFunc(GaussRat(Rat(num)));
        }
        throw parse_error("unexpected character '" + std::string(1, c) + "' in '" + std::string(s) + "'");
    }
};

} // namespace detail_expr

inline RatFunc parse_ratfunc(std::string_view text) {
    detail_expr::Parser p{text};
    RatFunc v = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw parse_error("trailing characters in expression '" + std::string(text) + "'");
    return v;
}

} // namespace speccurve

#endif
