#pragma once

// Text mini-language for entire-function symbols.
//
//   poly:c0,c1,...          polynomial with the listed coefficients
//   exp:a,b,c               exp(a z^2 + b z + c)
//   kernel:w                kernel exponential exp(r z conj(w))
//   shift:k:(expr)          coefficients of expr moved up k slots
//   prod:(expr)*(expr)      product
//   sum:(expr)+(expr)       sum
//
// Complex literals are written a+bi / a-bi with a mandatory sign before the
// imaginary part and no interior whitespace; a bare real a is allowed.
// Errors carry the offending position, and format_parse_error renders a
// caret diagnostic.

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "symbol.hpp"
#include "weight.hpp"

namespace fock {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos) : std::runtime_error(msg), position(pos) {}
};

inline std::string format_parse_error(const std::string& input, const ParseError& e) {
    std::string out = "error: ";
    out += e.what();
    out += "\n  ";
    out += input;
    out += "\n  ";
    out.append(std::min(e.position, input.size()), ' ');
    out += "^";
    return out;
}

namespace detail {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    void expect(char c, const char* what) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "' " + what, pos);
        ++pos;
    }
};

inline double parse_real(Cursor& c, const char* what) {
    if (!c.done() && std::isspace(static_cast<unsigned char>(c.peek())))
        throw ParseError(std::string("whitespace is not allowed inside ") + what, c.pos);
    const char* begin = c.s.c_str() + c.pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError(std::string("expected a number for ") + what, c.pos);
    c.pos += std::size_t(end - begin);
    return v;
}

// a | a+bi | a-bi   (sign before the imaginary part is mandatory)
inline cplx parse_complex(Cursor& c) {
    const double re = parse_real(c, "a complex literal");
    const char nxt = c.peek();
    if (nxt == 'i')
        throw ParseError("pure imaginary values need an explicit real part with sign (write 0+1i, not 1i)",
                         c.pos);
    if (nxt != '+' && nxt != '-') return cplx{re, 0.0};
    const std::size_t sign_pos = c.pos;
    const double im = parse_real(c, "the imaginary part");
    if (c.peek() != 'i')
        throw ParseError("expected 'i' to close the imaginary part started here", sign_pos);
    ++c.pos;
    return cplx{re, im};
}

inline long parse_uint(Cursor& c, const char* what) {
    if (!std::isdigit(static_cast<unsigned char>(c.peek())))
        throw ParseError(std::string("expected a nonnegative integer for ") + what, c.pos);
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        v = v * 10 + (c.peek() - '0');
        if (v > 1000000L) throw ParseError(std::string("integer too large for ") + what, c.pos);
        ++c.pos;
    }
    return v;
}

inline EntireSymbol parse_expr(Cursor& c, const GaussWeight& gw);

inline EntireSymbol parse_parenthesized(Cursor& c, const GaussWeight& gw) {
    c.expect('(', "to open a sub-expression");
    EntireSymbol s = parse_expr(c, gw);
    c.expect(')', "to close the sub-expression");
    return s;
}

inline EntireSymbol parse_expr(Cursor& c, const GaussWeight& gw) {
    const std::size_t head_pos = c.pos;
    std::string head;
    while (std::isalpha(static_cast<unsigned char>(c.peek()))) head += c.s[c.pos++];
    if (head.empty()) throw ParseError("expected a symbol kind (poly, exp, kernel, shift, prod, sum)", head_pos);

    if (head == "poly") {
        c.expect(':', "after 'poly'");
        std::vector<cplx> coeffs;
        coeffs.push_back(parse_complex(c));
        while (c.peek() == ',') {
            ++c.pos;
            coeffs.push_back(parse_complex(c));
        }
        return EntireSymbol::polynomial(std::move(coeffs));
    }
    if (head == "exp") {
        c.expect(':', "after 'exp'");
        const cplx a = parse_complex(c);
        c.expect(',', "between exp coefficients (exp:a,b,c)");
        const cplx b = parse_complex(c);
        c.expect(',', "between exp coefficients (exp:a,b,c)");
        const cplx g = parse_complex(c);
        return EntireSymbol::exp_quadratic(a, b, g);
    }
    if (head == "kernel") {
        c.expect(':', "after 'kernel'");
        return EntireSymbol::kernel(parse_complex(c), gw);
    }
    if (head == "shift") {
        c.expect(':', "after 'shift'");
        const long k = parse_uint(c, "the shift amount");
        c.expect(':', "after the shift amount");
        return EntireSymbol::shifted(parse_parenthesized(c, gw), k);
    }
    if (head == "prod") {
        c.expect(':', "after 'prod'");
        EntireSymbol lhs = parse_parenthesized(c, gw);
        c.expect('*', "between product factors");
        EntireSymbol rhs = parse_parenthesized(c, gw);
        return EntireSymbol::product({std::move(lhs), std::move(rhs)});
    }
    if (head == "sum") {
        c.expect(':', "after 'sum'");
        EntireSymbol lhs = parse_parenthesized(c, gw);
        c.expect('+', "between sum terms");
        EntireSymbol rhs = parse_parenthesized(c, gw);
        return EntireSymbol::sum({std::move(lhs), std::move(rhs)});
    }
    throw ParseError("unknown symbol kind '" + head + "' (expected poly, exp, kernel, shift, prod, sum)",
                     head_pos);
}

}  // namespace detail

inline EntireSymbol parse_symbol(const std::string& text, const GaussWeight& gw) {
    detail::Cursor c{text};
    EntireSymbol s = detail::parse_expr(c, gw);
    if (!c.done()) throw ParseError("unexpected trailing characters", c.pos);
    return s;
}

// Whole-string complex literal (used for grid/point flags).
inline cplx parse_complex_literal(const std::string& text) {
    detail::Cursor c{text};
    const cplx v = detail::parse_complex(c);
    if (!c.done()) throw ParseError("unexpected trailing characters after the complex literal", c.pos);
    return v;
}

// Comma-separated complex literals.
inline std::vector<cplx> parse_complex_list(const std::string& text) {
    detail::Cursor c{text};
    std::vector<cplx> out;
    out.push_back(detail::parse_complex(c));
    while (c.peek() == ',') {
        ++c.pos;
        out.push_back(detail::parse_complex(c));
    }
    if (!c.done()) throw ParseError("unexpected trailing characters in the point list", c.pos);
    return out;
}

}  // namespace fock
