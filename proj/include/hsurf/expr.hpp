#pragma once

/**
 * @file expr.hpp
 * @brief Holomorphic expressions in one complex variable z.
 *
 * Grammar (whitespace-insensitive):
 * @code
 *   expr   := term (('+'|'-') term)*
 *   term   := factor (('*'|'/') factor)*
 *   factor := unary ('^' unary)?          exponent must fold to a real constant
 *   unary  := '-'? atom
 *   atom   := number | 'i' | 'z' | func '(' expr ')' | func unary
 *           | 'e' '^' unary | '(' expr ')'
 *   func   := exp | log | sin | cos | sinh | cosh | sqrt
 * @endcode
 *
 * The parser folds arithmetic whose operands are all constants, so "(1+i)"
 * becomes a single Const node. A tree is *canonical* when it contains no such
 * foldable subtree; format_expr followed by parse_expr is the identity on
 * canonical trees.
 */

#include "taylor_jet.hpp"

#include <charconv>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hsurf {

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string &what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };

inline constexpr bool is_unary_function(Op op) noexcept
{
    return op == Op::Exp || op == Op::Log || op == Op::Sin || op == Op::Cos || op == Op::Sinh || op == Op::Cosh
           || op == Op::Sqrt;
}

inline constexpr bool is_binary(Op op) noexcept { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div; }

inline constexpr std::string_view function_name(Op op) noexcept
{
    switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Sqrt: return "sqrt";
    default: return "";
    }
}

/**
 * Immutable expression tree with shared structure. Copies are cheap and
 * safe to use from several threads at once.
 */
class HoloExpr {
    struct Node {
        Op op;
        Complex value{};   // Const
        double exponent{}; // Pow
        std::vector<HoloExpr> args;
    };

public:
    HoloExpr() : HoloExpr(constant(Complex(0.0))) {}

    static HoloExpr constant(Complex v) { return HoloExpr(Node{Op::Const, v, 0.0, {}}); }
    static HoloExpr var() { return HoloExpr(Node{Op::Var, {}, 0.0, {}}); }
    static HoloExpr binary(Op op, HoloExpr a, HoloExpr b) { return HoloExpr(Node{op, {}, 0.0, {std::move(a), std::move(b)}}); }
    static HoloExpr unary(Op op, HoloExpr a) { return HoloExpr(Node{op, {}, 0.0, {std::move(a)}}); }
    static HoloExpr pow(HoloExpr base, double exponent) { return HoloExpr(Node{Op::Pow, {}, exponent, {std::move(base)}}); }

    Op op() const noexcept { return node_->op; }
    const Complex &value() const noexcept { return node_->value; }
    double exponent() const noexcept { return node_->exponent; }
    const HoloExpr &arg(std::size_t k) const { return node_->args.at(k); }
    std::size_t arity() const noexcept { return node_->args.size(); }

    bool is_const() const noexcept { return op() == Op::Const; }

    friend bool operator==(const HoloExpr &a, const HoloExpr &b)
    {
        if (a.node_ == b.node_) return true;
        if (a.op() != b.op() || a.arity() != b.arity()) return false;
        if (a.op() == Op::Const && a.value() != b.value()) return false;
        if (a.op() == Op::Pow && a.exponent() != b.exponent()) return false;
        for (std::size_t k = 0; k < a.arity(); ++k)
            if (!(a.arg(k) == b.arg(k))) return false;
        return true;
    }

    std::size_t depth() const
    {
        std::size_t d = 0;
        for (const auto &a : node_->args) d = std::max(d, a.depth());
        return d + 1;
    }

private:
    explicit HoloExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

inline HoloExpr operator+(HoloExpr a, HoloExpr b) { return HoloExpr::binary(Op::Add, std::move(a), std::move(b)); }
inline HoloExpr operator-(HoloExpr a, HoloExpr b) { return HoloExpr::binary(Op::Sub, std::move(a), std::move(b)); }
inline HoloExpr operator*(HoloExpr a, HoloExpr b) { return HoloExpr::binary(Op::Mul, std::move(a), std::move(b)); }
inline HoloExpr operator/(HoloExpr a, HoloExpr b) { return HoloExpr::binary(Op::Div, std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluates the tree with the variable bound to the jet `x`.
template <std::size_t N>
TaylorJet<Complex, N> eval_taylor(const HoloExpr &e, const TaylorJet<Complex, N> &x)
{
    using J = TaylorJet<Complex, N>;
    J r;
    switch (e.op()) {
    case Op::Const: r = J(e.value()); break;
    case Op::Var: r = x; break;
    case Op::Add: r = eval_taylor(e.arg(0), x) + eval_taylor(e.arg(1), x); break;
    case Op::Sub: r = eval_taylor(e.arg(0), x) - eval_taylor(e.arg(1), x); break;
    case Op::Mul: r = eval_taylor(e.arg(0), x) * eval_taylor(e.arg(1), x); break;
    case Op::Div: r = eval_taylor(e.arg(0), x) / eval_taylor(e.arg(1), x); break;
    case Op::Neg: r = -eval_taylor(e.arg(0), x); break;
    case Op::Pow: r = hsurf::pow(eval_taylor(e.arg(0), x), e.exponent()); break;
    case Op::Exp: r = hsurf::exp(eval_taylor(e.arg(0), x)); break;
    case Op::Log: r = hsurf::log(eval_taylor(e.arg(0), x)); break;
    case Op::Sin: r = hsurf::sin(eval_taylor(e.arg(0), x)); break;
    case Op::Cos: r = hsurf::cos(eval_taylor(e.arg(0), x)); break;
    case Op::Sinh: r = hsurf::sinh(eval_taylor(e.arg(0), x)); break;
    case Op::Cosh: r = hsurf::cosh(eval_taylor(e.arg(0), x)); break;
    case Op::Sqrt: r = hsurf::sqrt(eval_taylor(e.arg(0), x)); break;
    }
    if (!r.finite()) throw domain_error("non-finite value (overflow or pole)");
    return r;
}

/// Taylor jet of order N of the expression around z.
template <std::size_t N>
TaylorJet<Complex, N> eval_taylor(const HoloExpr &e, Complex z)
{
    return eval_taylor(e, TaylorJet<Complex, N>::variable(z));
}

/// (f, f', f'') at z, propagated through jet arithmetic.
inline Jet2 eval_jet(const HoloExpr &e, Complex z) { return Jet2::from(eval_taylor<2>(e, z)); }

inline Complex eval(const HoloExpr &e, Complex z) { return eval_taylor<0>(e, z).value(); }

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// Precedence of the printed form: 1 sum, 2 product, 3 power, 4 unary minus, 5 atom.
enum : int { kSum = 1, kProduct = 2, kPower = 3, kUnary = 4, kAtom = 5 };

inline std::pair<std::string, int> format_const(Complex v)
{
    const double re = v.real(), im = v.imag();
    if (im == 0.0) {
        if (std::signbit(re)) return {format_real(re), kUnary};
        return {format_real(re), kAtom};
    }
    if (re == 0.0 && !std::signbit(re)) {
        if (im == 1.0) return {"i", kAtom};
        if (im == -1.0) return {"-i", kUnary};
        return {"(" + format_real(im) + "*i)", kAtom};
    }
    std::string s = "(" + format_real(re);
    if (std::signbit(im))
        s += "-" + format_real(-im) + "*i)";
    else
        s += "+" + format_real(im) + "*i)";
    return {s, kAtom};
}

inline std::pair<std::string, int> format_node(const HoloExpr &e);

inline std::string wrap(const HoloExpr &e, int min_prec)
{
    auto [s, p] = format_node(e);
    return p >= min_prec ? s : "(" + s + ")";
}

inline std::pair<std::string, int> format_node(const HoloExpr &e)
{
    switch (e.op()) {
    case Op::Const: return format_const(e.value());
    case Op::Var: return {"z", kAtom};
    case Op::Add: return {wrap(e.arg(0), kSum) + "+" + wrap(e.arg(1), kProduct), kSum};
    case Op::Sub: return {wrap(e.arg(0), kSum) + "-" + wrap(e.arg(1), kProduct), kSum};
    case Op::Mul: return {wrap(e.arg(0), kProduct) + "*" + wrap(e.arg(1), kPower), kProduct};
    case Op::Div: return {wrap(e.arg(0), kProduct) + "/" + wrap(e.arg(1), kPower), kProduct};
    case Op::Neg: return {"-" + wrap(e.arg(0), kAtom), kUnary};
    case Op::Pow: return {wrap(e.arg(0), kUnary) + "^" + format_real(e.exponent()), kPower};
    case Op::Exp:
        if (e.arg(0).op() == Op::Var) return {"e^z", kPower};
        [[fallthrough]];
    default: return {std::string(function_name(e.op())) + "(" + format_node(e.arg(0)).first + ")", kAtom};
    }
}

} // namespace detail

inline std::string format_expr(const HoloExpr &e) { return detail::format_node(e).first; }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    HoloExpr parse()
    {
        skip_ws();
        if (pos_ >= src_.size()) throw parse_error("empty expression", pos_);
        HoloExpr e = expr();
        skip_ws();
        if (pos_ < src_.size()) throw parse_error(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char ch)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char ch)
    {
        skip_ws();
        if (pos_ >= src_.size()) throw parse_error(std::string("unexpected end of input, expected '") + ch + "'", pos_);
        if (src_[pos_] != ch) throw parse_error(std::string("expected '") + ch + "'", pos_);
        ++pos_;
    }

    static HoloExpr fold(Op op, HoloExpr a, HoloExpr b)
    {
        if (a.is_const() && b.is_const()) {
            const Complex x = a.value(), y = b.value();
            switch (op) {
            case Op::Add: return HoloExpr::constant(x + y);
            case Op::Sub: return HoloExpr::constant(x - y);
            case Op::Mul: return HoloExpr::constant(x * y);
            case Op::Div:
                if (y != Complex(0.0)) return HoloExpr::constant(x / y);
                break;
            default: break;
            }
        }
        return HoloExpr::binary(op, std::move(a), std::move(b));
    }

    HoloExpr expr()
    {
        HoloExpr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = fold(Op::Add, std::move(lhs), term());
            else if (accept('-'))
                lhs = fold(Op::Sub, std::move(lhs), term());
            else
                return lhs;
        }
    }

    HoloExpr term()
    {
        HoloExpr lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = fold(Op::Mul, std::move(lhs), factor());
            else if (accept('/'))
                lhs = fold(Op::Div, std::move(lhs), factor());
            else
                return lhs;
        }
    }

    HoloExpr factor()
    {
        HoloExpr base = unary();
        skip_ws();
        const std::size_t at = pos_;
        if (!accept('^')) return base;
        skip_ws();
        const std::size_t exp_at = pos_;
        if (pos_ >= src_.size()) throw parse_error("unexpected end of input after '^'", at);
        HoloExpr ex = unary();
        if (!ex.is_const() || ex.value().imag() != 0.0) throw parse_error("non-real exponent in '^'", exp_at);
        return HoloExpr::pow(std::move(base), ex.value().real());
    }

    HoloExpr unary()
    {
        if (accept('-')) {
            HoloExpr a = atom();
            if (a.is_const()) return HoloExpr::constant(-a.value());
            return HoloExpr::unary(Op::Neg, std::move(a));
        }
        return atom();
    }

    HoloExpr atom()
    {
        skip_ws();
        if (pos_ >= src_.size()) throw parse_error("unexpected end of input", pos_);
        const char ch = src_[pos_];
        if (ch == '(') {
            ++pos_;
            HoloExpr e = expr();
            expect(')');
            return e;
        }
        if ((ch >= '0' && ch <= '9') || ch == '.') return number();
        if ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z')) return identifier();
        throw parse_error(std::string("unexpected '") + ch + "'", pos_);
    }

    HoloExpr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_, ++n;
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) throw parse_error("malformed number", start);
        // An exponent marker only counts when digits follow; "2e^z" is 2 * e^z territory.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && src_[look] >= '0' && src_[look] <= '9') {
                pos_ = look;
                digits();
            }
        }
        double v = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw parse_error("malformed number", start);
        return HoloExpr::constant(Complex(v, 0.0));
    }

    HoloExpr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ((src_[pos_] >= 'a' && src_[pos_] <= 'z') || (src_[pos_] >= 'A' && src_[pos_] <= 'Z')))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "z") return HoloExpr::var();
        if (name == "i") return HoloExpr::constant(Complex(0.0, 1.0));
        if (name == "e") {
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '^') {
                ++pos_;
                return HoloExpr::unary(Op::Exp, unary());
            }
            throw parse_error("'e' must be followed by '^'", start);
        }
        static constexpr Op funcs[] = {Op::Exp, Op::Log, Op::Sin, Op::Cos, Op::Sinh, Op::Cosh, Op::Sqrt};
        for (Op f : funcs) {
            if (name == function_name(f)) {
                skip_ws();
                if (pos_ >= src_.size()) throw parse_error("unexpected end of input", pos_);
                if (src_[pos_] == '(') {
                    ++pos_;
                    HoloExpr a = expr();
                    expect(')');
                    return HoloExpr::unary(f, std::move(a));
                }
                return HoloExpr::unary(f, unary());
            }
        }
        throw parse_error("unknown identifier '" + std::string(name) + "'", start);
    }
};

} // namespace detail

inline HoloExpr parse_expr(std::string_view source) { return detail::Parser(source).parse(); }

} // namespace hsurf
