#include "pzx/expression.hpp"

#include "pzx/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace pzx {

namespace {

using Kind = ExpressionError::Kind;

struct CodePoint {
    char32_t value;
    std::size_t length;
};

CodePoint decode(std::string_view text, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
        return {b0, 1};
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (i + len > text.size()) {
        return {0xFFFD, 1};
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(text[i + k]);
        if ((b & 0xC0) != 0x80) {
            return {0xFFFD, 1};
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len};
}

bool is_greek(char32_t cp) { return cp >= 0x0370 && cp <= 0x03FF; }
bool is_ascii_alpha(char32_t cp) { return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z'); }
bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }
bool symbol_start(char32_t cp) { return is_ascii_alpha(cp) || cp == '_' || is_greek(cp); }
bool symbol_part(char32_t cp) { return symbol_start(cp) || is_digit(cp); }

struct GreekAlias {
    char32_t cp;
    const char* ascii;
};

constexpr std::array<GreekAlias, 16> kGreek{{
    {U'α', "alpha"}, {U'β', "beta"}, {U'γ', "gamma"}, {U'δ', "delta"},
    {U'ζ', "zeta"},  {U'η', "eta"},  {U'θ', "theta"}, {U'κ', "kappa"},
    {U'λ', "lambda"}, {U'μ', "mu"},  {U'ξ', "xi"},    {U'ρ', "rho"},
    {U'σ', "sigma"}, {U'τ', "tau"},  {U'φ', "phi"},   {U'ω', "omega"},
}};

std::string describe(const Token& t) {
    switch (t.kind) {
    case TokenKind::end:
        return "end of input";
    case TokenKind::number:
    case TokenKind::symbol:
        return "'" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    ExprPtr parse_all() {
        ExprPtr e = parse_expr();
        const Token& t = peek();
        if (t.kind == TokenKind::rparen) {
            throw ExpressionError(Kind::syntax, t.offset, "unbalanced parenthesis: unexpected ')'");
        }
        if (t.kind != TokenKind::end) {
            std::string msg = "unexpected " + describe(t);
            if (t.kind == TokenKind::symbol || t.kind == TokenKind::number || t.kind == TokenKind::lparen) {
                msg += "; implicit multiplication is not supported, use '*'";
            }
            throw ExpressionError(Kind::syntax, t.offset, msg);
        }
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    static ExprPtr make(std::size_t offset, auto node) {
        auto e = std::make_shared<Expr>();
        e->node = std::move(node);
        e->offset = offset;
        return e;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (peek().kind == TokenKind::plus || peek().kind == TokenKind::minus) {
            const Token& op = take();
            ExprPtr rhs = parse_term();
            lhs = make(op.offset, BinaryNode{op.kind == TokenKind::plus ? BinaryOp::add : BinaryOp::sub, lhs, rhs});
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (peek().kind == TokenKind::star || peek().kind == TokenKind::slash) {
            const Token& op = take();
            ExprPtr rhs = parse_unary();
            lhs = make(op.offset, BinaryNode{op.kind == TokenKind::star ? BinaryOp::mul : BinaryOp::div, lhs, rhs});
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (peek().kind == TokenKind::minus) {
            const Token& op = take();
            return make(op.offset, NegateNode{parse_unary()});
        }
        if (peek().kind == TokenKind::plus) {
            take();
            return parse_unary();
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (peek().kind == TokenKind::caret) {
            const Token& op = take();
            ExprPtr exponent = parse_unary();
            return make(op.offset, BinaryNode{BinaryOp::pow, base, exponent});
        }
        return base;
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::number:
            take();
            return make(t.offset, NumberNode{t.value});
        case TokenKind::symbol: {
            take();
            if (peek().kind == TokenKind::lparen) {
                take();
                CallNode call{t.text, {}};
                call.args.push_back(parse_expr());
                while (peek().kind == TokenKind::comma) {
                    take();
                    call.args.push_back(parse_expr());
                }
                expect_rparen();
                return make(t.offset, std::move(call));
            }
            if (t.text == "s") {
                return make(t.offset, VariableNode{});
            }
            return make(t.offset, SymbolNode{t.text});
        }
        case TokenKind::lparen: {
            take();
            ExprPtr inner = parse_expr();
            expect_rparen();
            return inner;
        }
        case TokenKind::end:
            throw ExpressionError(Kind::syntax, t.offset, "expected operand, found end of input");
        case TokenKind::rparen:
            throw ExpressionError(Kind::syntax, t.offset, "expected operand before ')'");
        default:
            throw ExpressionError(Kind::syntax, t.offset, "dangling operator: expected operand, found " + describe(t));
        }
    }

    void expect_rparen() {
        const Token& t = peek();
        if (t.kind != TokenKind::rparen) {
            if (t.kind == TokenKind::end) {
                throw ExpressionError(Kind::syntax, t.offset, "unbalanced parenthesis: expected ')'");
            }
            throw ExpressionError(Kind::syntax, t.offset, "expected ')', found " + describe(t));
        }
        take();
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
};

// Rational function times a delay factor; the working value of normalization.
struct Rational {
    Polynomial num;
    Polynomial den;
    double delay = 0.0;

    bool has_s() const { return num.degree() > 0 || den.degree() > 0; }
    bool is_constant() const { return !has_s() && delay == 0.0; }
    double value() const { return num[0] / den[0]; }
};

Rational constant(double v, std::size_t offset) {
    if (!std::isfinite(v)) {
        throw ExpressionError(Kind::non_rational, offset, "expression produces a non-finite constant");
    }
    return {Polynomial::constant(v), Polynomial::constant(1.0), 0.0};
}

bool is_integer(double v) { return std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v)); }

class Normalizer {
public:
    explicit Normalizer(const ParameterEnv& env) : env_(env) {}

    Rational eval(const Expr& e) const {
        return std::visit([&](const auto& node) { return eval_node(node, e.offset); }, e.node);
    }

private:
    Rational eval_node(const NumberNode& n, std::size_t offset) const { return constant(n.value, offset); }

    Rational eval_node(const SymbolNode& n, std::size_t offset) const {
        if (auto it = env_.find(n.name); it != env_.end()) {
            return constant(it->second, offset);
        }
        if (n.name == "e") {
            return constant(std::numbers::e, offset);
        }
        throw ExpressionError(Kind::unbound_symbol, offset, "unbound symbol '" + n.name + "'");
    }

    Rational eval_node(const VariableNode&, std::size_t) const {
        return {Polynomial{0.0, 1.0}, Polynomial::constant(1.0), 0.0};
    }

    Rational eval_node(const NegateNode& n, std::size_t) const {
        Rational r = eval(*n.operand);
        r.num = scale(r.num, -1.0);
        return r;
    }

    Rational eval_node(const CallNode& call, std::size_t offset) const {
        if (call.function != "exp") {
            throw ExpressionError(Kind::non_rational, offset, "unsupported function '" + call.function + "'");
        }
        if (call.args.size() != 1) {
            throw ExpressionError(Kind::syntax, offset, "exp takes exactly one argument");
        }
        return exponential(*call.args[0]);
    }

    Rational eval_node(const BinaryNode& b, std::size_t offset) const {
        if (b.op == BinaryOp::pow) {
            return power_node(b, offset);
        }
        Rational lhs = eval(*b.lhs);
        Rational rhs = eval(*b.rhs);
        switch (b.op) {
        case BinaryOp::add:
            return sum(std::move(lhs), std::move(rhs), offset);
        case BinaryOp::sub:
            rhs.num = scale(rhs.num, -1.0);
            return sum(std::move(lhs), std::move(rhs), offset);
        case BinaryOp::mul:
            return {multiply(lhs.num, rhs.num), multiply(lhs.den, rhs.den), lhs.delay + rhs.delay};
        case BinaryOp::div:
            if (rhs.num.is_zero()) {
                throw ExpressionError(Kind::zero_denominator, offset, "division by zero");
            }
            return {multiply(lhs.num, rhs.den), multiply(lhs.den, rhs.num), lhs.delay - rhs.delay};
        case BinaryOp::pow:
            break;
        }
        return lhs;
    }

    static Rational sum(Rational a, Rational b, std::size_t offset) {
        if (a.num.is_zero()) {
            return b;
        }
        if (b.num.is_zero()) {
            return a;
        }
        if (a.delay != b.delay) {
            throw ExpressionError(Kind::unsupported_delay, offset,
                                  "unsupported delay term: summands carry different delays");
        }
        if (a.den == b.den) {
            return {add(a.num, b.num), a.den, a.delay};
        }
        return {add(multiply(a.num, b.den), multiply(b.num, a.den)), multiply(a.den, b.den), a.delay};
    }

    Rational exponential(const Expr& arg) const {
        const Rational a = eval(arg);
        if (a.delay != 0.0) {
            throw ExpressionError(Kind::unsupported_delay, arg.offset, "unsupported delay term: nested delay factor");
        }
        if (!a.has_s()) {
            return constant(std::exp(a.value()), arg.offset);
        }
        if (a.den.degree() == 0 && a.num.degree() == 1 && a.num[0] == 0.0) {
            const double delay = -a.num[1] / a.den[0];
            if (!(delay >= 0.0) || !std::isfinite(delay)) {
                throw ExpressionError(Kind::unsupported_delay, arg.offset,
                                      "unsupported delay term: exp argument must be -L*s with L >= 0");
            }
            return {Polynomial::constant(1.0), Polynomial::constant(1.0), delay};
        }
        throw ExpressionError(Kind::unsupported_delay, arg.offset,
                              "unsupported delay term: exp argument must be of the form -L*s");
    }

    Rational power_node(const BinaryNode& b, std::size_t offset) const {
        if (const auto* sym = std::get_if<SymbolNode>(&b.lhs->node); sym && sym->name == "e" && !env_.contains("e")) {
            return exponential(*b.rhs);
        }
        const Rational exponent = eval(*b.rhs);
        if (!exponent.is_constant()) {
            throw ExpressionError(Kind::non_rational, b.rhs->offset, "non-rational expression: s in an exponent");
        }
        const double ev = exponent.value();
        const Rational base = eval(*b.lhs);
        if (!base.is_constant()) {
            if (!is_integer(ev) || ev < 0.0 || ev > 64.0) {
                throw ExpressionError(Kind::non_rational, b.rhs->offset,
                                      "non-rational expression: powers of terms containing s must be integers >= 0");
            }
            const auto n = static_cast<unsigned>(std::lround(ev));
            return {power(base.num, n), power(base.den, n), base.delay * n};
        }
        const double bv = base.value();
        if (is_integer(ev) && std::abs(ev) <= 64.0) {
            const long n = std::lround(ev);
            const double magnitude = power(Polynomial::constant(bv), static_cast<unsigned>(std::labs(n)))[0];
            if (n < 0) {
                if (magnitude == 0.0) {
                    throw ExpressionError(Kind::zero_denominator, offset, "division by zero");
                }
                return constant(1.0 / magnitude, offset);
            }
            return constant(magnitude, offset);
        }
        return constant(std::pow(bv, ev), offset);
    }

    const ParameterEnv& env_;
};

void collect_symbols(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SymbolNode>) {
                if (node.name != "e") {
                    out.insert(node.name);
                }
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                collect_symbols(*node.operand, out);
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                collect_symbols(*node.lhs, out);
                collect_symbols(*node.rhs, out);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                for (const auto& a : node.args) {
                    collect_symbols(*a, out);
                }
            }
        },
        e.node);
}

std::string render_polynomial(const Polynomial& p) {
    const auto& c = p.coefficients();
    std::string out;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0 && c.size() > 1) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        out += format_number(c[k]);
        if (k == 1) {
            out += "*s";
        } else if (k > 1) {
            out += "*s^" + std::to_string(k);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace

std::string canonical_symbol(std::string_view name) {
    std::string out;
    std::size_t i = 0;
    while (i < name.size()) {
        const CodePoint cp = decode(name, i);
        bool replaced = false;
        for (const auto& g : kGreek) {
            if (g.cp == cp.value) {
                out += g.ascii;
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            out.append(name.substr(i, cp.length));
        }
        i += cp.length;
    }
    return out;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    std::size_t chars = 0;
    bool any = false;
    while (i < text.size()) {
        const CodePoint cp = decode(text, i);
        const std::size_t start_char = chars;
        if (cp.value == ' ' || cp.value == '\t' || cp.value == '\n' || cp.value == '\r') {
            i += cp.length;
            ++chars;
            continue;
        }
        any = true;
        if (is_digit(cp.value) || (cp.value == '.' && i + 1 < text.size() && is_digit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i;
            while (j < text.size() && is_digit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            if (j < text.size() && text[j] == '.') {
                ++j;
                while (j < text.size() && is_digit(static_cast<unsigned char>(text[j]))) {
                    ++j;
                }
            }
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
                    ++k;
                }
                if (k < text.size() && is_digit(static_cast<unsigned char>(text[k]))) {
                    while (k < text.size() && is_digit(static_cast<unsigned char>(text[k]))) {
                        ++k;
                    }
                    j = k;
                }
            }
            const std::string_view lexeme = text.substr(i, j - i);
            double value = 0.0;
            const auto res = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
            if (res.ec != std::errc{} || !std::isfinite(value)) {
                throw ExpressionError(Kind::syntax, start_char, "invalid number '" + std::string(lexeme) + "'");
            }
            tokens.push_back({TokenKind::number, std::string(lexeme), value, start_char});
            chars += j - i;
            i = j;
            continue;
        }
        if (symbol_start(cp.value)) {
            std::size_t j = i;
            std::size_t n = 0;
            while (j < text.size()) {
                const CodePoint c = decode(text, j);
                if (!symbol_part(c.value)) {
                    break;
                }
                j += c.length;
                ++n;
            }
            tokens.push_back({TokenKind::symbol, canonical_symbol(text.substr(i, j - i)), 0.0, start_char});
            chars += n;
            i = j;
            continue;
        }
        TokenKind kind;
        switch (cp.value) {
        case '+': kind = TokenKind::plus; break;
        case '-': kind = TokenKind::minus; break;
        case '*': kind = TokenKind::star; break;
        case '/': kind = TokenKind::slash; break;
        case '^': kind = TokenKind::caret; break;
        case '(': kind = TokenKind::lparen; break;
        case ')': kind = TokenKind::rparen; break;
        case ',': kind = TokenKind::comma; break;
        default:
            throw ExpressionError(Kind::syntax, start_char,
                                  "illegal character '" + std::string(text.substr(i, cp.length)) + "'");
        }
        tokens.push_back({kind, std::string(text.substr(i, 1)), 0.0, start_char});
        i += cp.length;
        ++chars;
    }
    if (!any) {
        throw ExpressionError(Kind::syntax, 0, "empty expression");
    }
    tokens.push_back({TokenKind::end, "", 0.0, chars});
    return tokens;
}

ExprPtr parse(const std::vector<Token>& tokens) {
    if (tokens.empty() || tokens.back().kind != TokenKind::end) {
        throw ExpressionError(Kind::syntax, 0, "token stream must end with an end token");
    }
    return Parser(tokens).parse_all();
}

ExprPtr parse(std::string_view text) { return parse(tokenize(text)); }

std::string to_debug_string(const Expr& e) {
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NumberNode>) {
                return format_number(node.value);
            } else if constexpr (std::is_same_v<T, SymbolNode>) {
                return node.name;
            } else if constexpr (std::is_same_v<T, VariableNode>) {
                return "s";
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                return "Neg(" + to_debug_string(*node.operand) + ")";
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                static constexpr std::array<const char*, 5> names{"Add", "Sub", "Mul", "Div", "Pow"};
                return std::string(names[static_cast<std::size_t>(node.op)]) + "(" + to_debug_string(*node.lhs) +
                       ", " + to_debug_string(*node.rhs) + ")";
            } else {
                std::string out = "Call(" + node.function;
                for (const auto& a : node.args) {
                    out += ", " + to_debug_string(*a);
                }
                return out + ")";
            }
        },
        e.node);
}

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_symbols(e, out);
    return out;
}

TransferFunction normalize(const Expr& e, const ParameterEnv& env) {
    ParameterEnv canonical;
    for (const auto& [name, value] : env) {
        canonical[canonical_symbol(name)] = value;
    }
    const Rational r = Normalizer(canonical).eval(e);
    if (r.den.is_zero()) {
        throw ExpressionError(Kind::zero_denominator, e.offset, "denominator is identically zero");
    }
    if (r.delay < 0.0) {
        throw ExpressionError(Kind::unsupported_delay, e.offset, "unsupported delay term: net delay is negative");
    }
    return TransferFunction{r.num, r.den, r.delay};
}

TransferFunction parse_transfer_function(std::string_view text, const ParameterEnv& env) {
    return normalize(*parse(text), env);
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string to_expression(const TransferFunction& tf) {
    std::string out = "(" + render_polynomial(tf.num) + ")/(" + render_polynomial(tf.den) + ")";
    if (tf.delay > 0.0) {
        out += "*exp(-" + format_number(tf.delay) + "*s)";
    }
    return out;
}

} // namespace pzx
