#pragma once

// Scalar fields over x1..xn: parsing, exact symbolic differentiation and
// pointwise evaluation.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' INT)?
//   atom   := NUMBER | 'x' INT | '(' expr ')'
//
// Variables are written 1-based in text (x1, x2, ...) and stored 0-based.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dircurv/error.hpp"

namespace dircurv {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg };

// Immutable expression tree handle. Copies share structure.
class Expr {
    struct Node {
        ExprKind kind;
        double value;  // Constant
        int param;     // Variable index or Pow exponent
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

public:
    Expr() : Expr(0.0) {}
    // Implicit so that `2.0 * x` reads naturally when building fields in code.
    Expr(double value) : node_(make(ExprKind::Constant, value, 0, nullptr, nullptr)) {}

    static Expr constant(double value) { return Expr(value); }
    static Expr variable(int index) { return Expr(make(ExprKind::Variable, 0.0, index, nullptr, nullptr)); }
    static Expr power(const Expr& base, int exponent) {
        return Expr(make(ExprKind::Pow, 0.0, exponent, base.node_, nullptr));
    }

    ExprKind kind() const { return node_->kind; }
    double value() const { return node_->value; }
    int index() const { return node_->param; }
    int exponent() const { return node_->param; }
    // Left operand of binary nodes; the operand of Pow and Neg.
    Expr lhs() const { return Expr(node_->a); }
    Expr rhs() const { return Expr(node_->b); }

    bool is_constant(double v) const { return kind() == ExprKind::Constant && value() == v; }
    bool same_node(const Expr& other) const { return node_ == other.node_; }

    friend Expr operator+(const Expr& a, const Expr& b) { return binary(ExprKind::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return binary(ExprKind::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return binary(ExprKind::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return binary(ExprKind::Div, a, b); }
    friend Expr operator-(const Expr& a) { return Expr(make(ExprKind::Neg, 0.0, 0, a.node_, nullptr)); }

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const Node> make(ExprKind kind, double value, int param,
                                            std::shared_ptr<const Node> a,
                                            std::shared_ptr<const Node> b) {
        return std::make_shared<const Node>(Node{kind, value, param, std::move(a), std::move(b)});
    }
    static Expr binary(ExprKind kind, const Expr& a, const Expr& b) {
        return Expr(make(kind, 0.0, 0, a.node_, b.node_));
    }

    std::shared_ptr<const Node> node_;
};

inline Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }

// ---------------------------------------------------------------------------
// Printing

inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fully parenthesized text that parses back to an equivalent tree.
inline std::string print(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant: {
            const double v = e.value();
            if (v < 0 || (v == 0 && std::signbit(v))) return "(-" + format_number(-v) + ")";
            return format_number(v);
        }
        case ExprKind::Variable: return "x" + std::to_string(e.index() + 1);
        case ExprKind::Add: return "(" + print(e.lhs()) + " + " + print(e.rhs()) + ")";
        case ExprKind::Sub: return "(" + print(e.lhs()) + " - " + print(e.rhs()) + ")";
        case ExprKind::Mul: return "(" + print(e.lhs()) + " * " + print(e.rhs()) + ")";
        case ExprKind::Div: return "(" + print(e.lhs()) + " / " + print(e.rhs()) + ")";
        case ExprKind::Pow: return "(" + print(e.lhs()) + "^" + std::to_string(e.exponent()) + ")";
        case ExprKind::Neg: return "(-" + print(e.lhs()) + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Evaluation

// Children are evaluated left to right; integer powers by repeated
// multiplication, so results are reproducible bit for bit.
inline double evaluate(const Expr& e, std::span<const double> x) {
    switch (e.kind()) {
        case ExprKind::Constant: return e.value();
        case ExprKind::Variable:
            if (e.index() < 0 || static_cast<std::size_t>(e.index()) >= x.size())
                throw Error(ErrorCode::DimensionMismatch,
                            "point has " + std::to_string(x.size()) + " coordinates",
                            "x" + std::to_string(e.index() + 1));
            return x[static_cast<std::size_t>(e.index())];
        case ExprKind::Add: {
            const double a = evaluate(e.lhs(), x);
            return a + evaluate(e.rhs(), x);
        }
        case ExprKind::Sub: {
            const double a = evaluate(e.lhs(), x);
            return a - evaluate(e.rhs(), x);
        }
        case ExprKind::Mul: {
            const double a = evaluate(e.lhs(), x);
            return a * evaluate(e.rhs(), x);
        }
        case ExprKind::Div: {
            const double a = evaluate(e.lhs(), x);
            const double b = evaluate(e.rhs(), x);
            if (b == 0.0) throw Error(ErrorCode::DivisionByZero, "divisor evaluates to zero", print(e.rhs()));
            return a / b;
        }
        case ExprKind::Pow: {
            const double base = evaluate(e.lhs(), x);
            double acc = 1.0;
            for (int k = 0; k < e.exponent(); ++k) acc *= base;
            return acc;
        }
        case ExprKind::Neg: return -evaluate(e.lhs(), x);
    }
    return 0.0;
}

// Largest variable index used, or -1 for a constant expression.
inline int max_variable_index(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant: return -1;
        case ExprKind::Variable: return e.index();
        case ExprKind::Pow:
        case ExprKind::Neg: return max_variable_index(e.lhs());
        default: return std::max(max_variable_index(e.lhs()), max_variable_index(e.rhs()));
    }
}

// ---------------------------------------------------------------------------
// Differentiation

namespace detail {

// Zero/one folding keeps derivative trees from filling up with dead terms.
// Folding x*1, x+0 and 0*x never changes a finite result.
inline Expr fold_add(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return a + b;
}
inline Expr fold_sub(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return a - b;
}
inline Expr fold_mul(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    return a * b;
}
inline Expr fold_neg(const Expr& a) {
    if (a.is_constant(0.0)) return Expr(0.0);
    return -a;
}

}  // namespace detail

// Exact partial derivative with respect to variable k (0-based).
inline Expr differentiate(const Expr& e, int k) {
    using namespace detail;
    switch (e.kind()) {
        case ExprKind::Constant: return Expr(0.0);
        case ExprKind::Variable: return Expr(e.index() == k ? 1.0 : 0.0);
        case ExprKind::Add: return fold_add(differentiate(e.lhs(), k), differentiate(e.rhs(), k));
        case ExprKind::Sub: return fold_sub(differentiate(e.lhs(), k), differentiate(e.rhs(), k));
        case ExprKind::Mul: {
            const Expr a = e.lhs(), b = e.rhs();
            return fold_add(fold_mul(differentiate(a, k), b), fold_mul(a, differentiate(b, k)));
        }
        case ExprKind::Div: {
            const Expr a = e.lhs(), b = e.rhs();
            const Expr da = differentiate(a, k), db = differentiate(b, k);
            if (db.is_constant(0.0)) return da.is_constant(0.0) ? Expr(0.0) : da / b;
            return fold_sub(fold_mul(da, b), fold_mul(a, db)) / (b * b);
        }
        case ExprKind::Pow: {
            const int p = e.exponent();
            const Expr base = e.lhs();
            const Expr db = differentiate(base, k);
            if (p == 0 || db.is_constant(0.0)) return Expr(0.0);
            if (p == 1) return db;
            const Expr lowered = p == 2 ? base : pow(base, p - 1);
            return fold_mul(fold_mul(Expr(static_cast<double>(p)), lowered), db);
        }
        case ExprKind::Neg: return fold_neg(differentiate(e.lhs(), k));
    }
    return Expr(0.0);
}

// Replaces every variable k by replacements[k].
inline Expr substitute(const Expr& e, std::span<const Expr> replacements) {
    switch (e.kind()) {
        case ExprKind::Constant: return e;
        case ExprKind::Variable:
            if (static_cast<std::size_t>(e.index()) >= replacements.size())
                throw Error(ErrorCode::DimensionMismatch, "no replacement for variable",
                            "x" + std::to_string(e.index() + 1));
            return replacements[static_cast<std::size_t>(e.index())];
        case ExprKind::Add: return substitute(e.lhs(), replacements) + substitute(e.rhs(), replacements);
        case ExprKind::Sub: return substitute(e.lhs(), replacements) - substitute(e.rhs(), replacements);
        case ExprKind::Mul: return substitute(e.lhs(), replacements) * substitute(e.rhs(), replacements);
        case ExprKind::Div: return substitute(e.lhs(), replacements) / substitute(e.rhs(), replacements);
        case ExprKind::Pow: return pow(substitute(e.lhs(), replacements), e.exponent());
        case ExprKind::Neg: return -substitute(e.lhs(), replacements);
    }
    return e;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
    Parser(std::string_view text, int dimension) : text_(text), n_(dimension) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ < text_.size()) fail_syntax("end of input");
        return e;
    }

private:
    static constexpr int kMaxExponent = 1000;

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) lhs = lhs + term();
            else if (accept('-')) lhs = lhs - term();
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) lhs = lhs * factor();
            else if (accept('/')) lhs = lhs / factor();
            else return lhs;
        }
    }

    Expr factor() {
        skip_ws();
        if (accept('-')) return -factor();
        Expr base = atom();
        skip_ws();
        if (!accept('^')) return base;
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == '.'))
            throw Error(ErrorCode::NonIntegerExponent, "exponent must be a non-negative integer literal",
                        position(start));
        if (!digit_at(pos_)) fail_syntax("integer exponent");
        while (digit_at(pos_)) ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
            throw Error(ErrorCode::NonIntegerExponent, "exponent must be a non-negative integer literal",
                        position(start));
        int exponent = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
        (void)ptr;
        if (ec != std::errc{} || exponent > kMaxExponent)
            throw Error(ErrorCode::SyntaxError, "exponent larger than " + std::to_string(kMaxExponent),
                        position(start));
        return pow(base, exponent);
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail_syntax("number, variable or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            skip_ws();
            if (!accept(')')) fail_syntax("')'");
            return inner;
        }
        if (c == 'x') {
            const std::size_t start = pos_;
            ++pos_;
            if (!digit_at(pos_)) fail_syntax("variable index");
            const std::size_t digits = pos_;
            while (digit_at(pos_)) ++pos_;
            int index = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, index);
            (void)ptr;
            if (ec != std::errc{} || index < 1 || index > n_)
                throw Error(ErrorCode::UnknownVariable,
                            "variable " + std::string(text_.substr(start, pos_ - start)) +
                                " outside x1..x" + std::to_string(n_),
                            position(start));
            return Expr::variable(index - 1);
        }
        if (digit_at(pos_) || c == '.') return number();
        fail_syntax("number, variable or '('");
    }

    Expr number() {
        const std::size_t start = pos_;
        while (digit_at(pos_)) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (digit_at(pos_)) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (digit_at(p)) {
                pos_ = p;
                while (digit_at(pos_)) ++pos_;
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc{} || ptr != text_.data() + pos_) {
            pos_ = start;
            fail_syntax("number");
        }
        return Expr(value);
    }

    bool digit_at(std::size_t p) const {
        return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]));
    }
    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    static std::string position(std::size_t zero_based) { return std::to_string(zero_based + 1); }

    [[noreturn]] void fail_syntax(std::string_view expected) const {
        std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
        throw Error(ErrorCode::SyntaxError,
                    "expected " + std::string(expected) + " at position " + position(pos_) + ", found " + found,
                    position(pos_));
    }

    std::string_view text_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a field over x1..xn. Error locations are 1-based character positions.
inline Expr parse(std::string_view text, int dimension) { return detail::Parser(text, dimension).parse(); }

}  // namespace dircurv
