#include "hardy/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace hardy {

namespace ast {

NodeRef constant(double c) { return std::make_shared<ExprNode>(ExprNode{NodeKind::constant, c, nullptr, nullptr}); }
NodeRef variable() { return std::make_shared<ExprNode>(ExprNode{NodeKind::variable, 0.0, nullptr, nullptr}); }

static bool const_val(const NodeRef& n, double* out) {
    if (n->kind == NodeKind::constant) {
        *out = n->value;
        return true;
    }
    return false;
}

static NodeRef make(NodeKind k, NodeRef a, NodeRef b = nullptr, double v = 0.0) {
    return std::make_shared<ExprNode>(ExprNode{k, v, std::move(a), std::move(b)});
}

NodeRef add(NodeRef a, NodeRef b) {
    double ca, cb;
    if (const_val(a, &ca) && const_val(b, &cb)) return constant(ca + cb);
    if (const_val(a, &ca) && ca == 0.0) return b;
    if (const_val(b, &cb) && cb == 0.0) return a;
    return make(NodeKind::add, std::move(a), std::move(b));
}

NodeRef sub(NodeRef a, NodeRef b) {
    double ca, cb;
    if (const_val(a, &ca) && const_val(b, &cb)) return constant(ca - cb);
    if (const_val(b, &cb) && cb == 0.0) return a;
    if (const_val(a, &ca) && ca == 0.0) return neg(b);
    return make(NodeKind::sub, std::move(a), std::move(b));
}

NodeRef mul(NodeRef a, NodeRef b) {
    double ca, cb;
    if (const_val(a, &ca) && const_val(b, &cb)) return constant(ca * cb);
    if (const_val(a, &ca)) {
        if (ca == 0.0) return constant(0.0);
        if (ca == 1.0) return b;
    }
    if (const_val(b, &cb)) {
        if (cb == 0.0) return constant(0.0);
        if (cb == 1.0) return a;
    }
    return make(NodeKind::mul, std::move(a), std::move(b));
}

NodeRef div(NodeRef a, NodeRef b) {
    double ca, cb;
    if (const_val(b, &cb) && cb != 0.0) {
        if (const_val(a, &ca)) return constant(ca / cb);
        if (cb == 1.0) return a;
    }
    return make(NodeKind::div, std::move(a), std::move(b));
}

NodeRef pow(NodeRef base, double exponent) {
    double cb;
    if (exponent == 1.0) return base;
    if (exponent == 0.0) return constant(1.0);
    if (const_val(base, &cb) && cb > 0.0) return constant(std::pow(cb, exponent));
    return make(NodeKind::pow, std::move(base), nullptr, exponent);
}

NodeRef neg(NodeRef a) {
    double ca;
    if (const_val(a, &ca)) return constant(-ca);
    if (a->kind == NodeKind::neg) return a->a;
    return make(NodeKind::neg, std::move(a));
}

NodeRef exp(NodeRef a) {
    double ca;
    if (const_val(a, &ca)) return constant(std::exp(ca));
    return make(NodeKind::exp_fn, std::move(a));
}

NodeRef ln(NodeRef a) {
    double ca;
    if (const_val(a, &ca) && ca > 0.0) return constant(std::log(ca));
    // ln(1+x) written literally is routed through log1p, which keeps the
    // logarithmic weights evaluable down to the smallest positive doubles
    if (a->kind == NodeKind::add && a->a && a->a->kind == NodeKind::constant && a->a->value == 1.0)
        return make(NodeKind::ln1p_fn, a->b);
    return make(NodeKind::ln_fn, std::move(a));
}

NodeRef abs(NodeRef a) {
    double ca;
    if (const_val(a, &ca)) return constant(std::fabs(ca));
    return make(NodeKind::abs_fn, std::move(a));
}

NodeRef min(NodeRef a, NodeRef b) {
    double ca, cb;
    if (const_val(a, &ca) && const_val(b, &cb)) return constant(std::fmin(ca, cb));
    return make(NodeKind::min_fn, std::move(a), std::move(b));
}

NodeRef max(NodeRef a, NodeRef b) {
    double ca, cb;
    if (const_val(a, &ca) && const_val(b, &cb)) return constant(std::fmax(ca, cb));
    return make(NodeKind::max_fn, std::move(a), std::move(b));
}

}  // namespace ast

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (!consume(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos);
    }

    // number := digits ["." digits] [("e"|"E") [+-] digits]
    // The exponent marker is consumed only when followed by a digit (with an
    // optional sign), so "2*e" still lexes as constant 2, '*', identifier e.
    std::optional<double> number() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return std::nullopt;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            } else {
                pos = mark;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(text.data() + start, text.data() + pos, v);
        if (res.ec != std::errc()) throw ParseError("malformed number", start);
        return v;
    }

    std::optional<std::string> ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos]))) return std::nullopt;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

struct Parser {
    Lexer lex;

    NodeRef parse_expr() {
        NodeRef n = parse_term();
        for (;;) {
            if (lex.consume('+'))
                n = ast::add(n, parse_term());
            else if (lex.consume('-'))
                n = ast::sub(n, parse_term());
            else
                return n;
        }
    }

    NodeRef parse_term() {
        NodeRef n = parse_factor();
        for (;;) {
            if (lex.consume('*'))
                n = ast::mul(n, parse_factor());
            else if (lex.consume('/'))
                n = ast::div(n, parse_factor());
            else
                return n;
        }
    }

    NodeRef parse_factor() {
        NodeRef base = parse_base();
        if (lex.consume('^')) {
            std::size_t at = lex.pos;
            NodeRef e = parse_factor();
            double c = 0.0;
            if (!fold_constant(e, &c)) throw ParseError("non-constant exponent in power", at);
            if (std::isnan(c)) throw ParseError("exponent does not evaluate to a finite constant", at);
            return ast::pow(base, c);
        }
        return base;
    }

    NodeRef parse_base() {
        lex.skip_ws();
        std::size_t at = lex.pos;
        if (lex.consume('-')) return ast::neg(parse_factor());
        if (lex.consume('(')) {
            NodeRef n = parse_expr();
            lex.expect(')', "to close parenthesis");
            return n;
        }
        if (auto num = lex.number()) return ast::constant(*num);
        if (auto id = lex.ident()) {
            if (*id == "r") return ast::variable();
            if (*id == "e") return ast::constant(std::exp(1.0));
            if (*id == "exp" || *id == "ln" || *id == "abs") {
                lex.expect('(', "after function name");
                NodeRef arg = parse_expr();
                lex.expect(')', "to close argument list");
                if (*id == "exp") return ast::exp(arg);
                if (*id == "ln") return ast::ln(arg);
                return ast::abs(arg);
            }
            if (*id == "min" || *id == "max") {
                lex.expect('(', "after function name");
                NodeRef a = parse_expr();
                lex.expect(',', "between arguments");
                NodeRef b = parse_expr();
                lex.expect(')', "to close argument list");
                return *id == "min" ? ast::min(a, b) : ast::max(a, b);
            }
            throw ParseError("unknown identifier '" + *id + "'", at);
        }
        throw ParseError("expected a number, 'r', 'e', a function call, or '('", at);
    }

    static bool fold_constant(const NodeRef& n, double* out) {
        switch (n->kind) {
            case NodeKind::constant:
                *out = n->value;
                return true;
            case NodeKind::variable:
                return false;
            default: {
                double a = 0.0, b = 0.0;
                if (n->a && !fold_constant(n->a, &a)) return false;
                if (n->b && !fold_constant(n->b, &b)) return false;
                switch (n->kind) {
                    case NodeKind::add: *out = a + b; return true;
                    case NodeKind::sub: *out = a - b; return true;
                    case NodeKind::mul: *out = a * b; return true;
                    case NodeKind::div: *out = b != 0.0 ? a / b : std::nan(""); return true;
                    case NodeKind::pow: *out = std::pow(a, n->value); return true;
                    case NodeKind::neg: *out = -a; return true;
                    case NodeKind::exp_fn: *out = std::exp(a); return true;
                    case NodeKind::ln_fn: *out = a > 0.0 ? std::log(a) : std::nan(""); return true;
                    case NodeKind::ln1p_fn: *out = a > -1.0 ? std::log1p(a) : std::nan(""); return true;
                    case NodeKind::abs_fn: *out = std::fabs(a); return true;
                    case NodeKind::min_fn: *out = std::fmin(a, b); return true;
                    case NodeKind::max_fn: *out = std::fmax(a, b); return true;
                    default: return false;
                }
            }
        }
    }
};

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double eval_node(const ExprNode& n, double r) noexcept {
    switch (n.kind) {
        case NodeKind::constant: return n.value;
        case NodeKind::variable: return r;
        case NodeKind::add: return eval_node(*n.a, r) + eval_node(*n.b, r);
        case NodeKind::sub: return eval_node(*n.a, r) - eval_node(*n.b, r);
        case NodeKind::mul: return eval_node(*n.a, r) * eval_node(*n.b, r);
        case NodeKind::div: {
            double den = eval_node(*n.b, r);
            if (den == 0.0) return kNan;
            return eval_node(*n.a, r) / den;
        }
        case NodeKind::pow: {
            double base = eval_node(*n.a, r);
            if (std::isnan(base)) return kNan;
            if (base > 0.0) return std::pow(base, n.value);
            if (base == 0.0) {
                if (n.value > 0.0) return 0.0;
                if (n.value == 0.0) return 1.0;
                return kNan;
            }
            // negative base: integer exponents only
            if (std::nearbyint(n.value) == n.value) return std::pow(base, n.value);
            return kNan;
        }
        case NodeKind::neg: return -eval_node(*n.a, r);
        case NodeKind::exp_fn: return std::exp(eval_node(*n.a, r));
        case NodeKind::ln_fn: {
            double v = eval_node(*n.a, r);
            return v > 0.0 ? std::log(v) : kNan;
        }
        case NodeKind::ln1p_fn: {
            double v = eval_node(*n.a, r);
            return v > -1.0 ? std::log1p(v) : kNan;
        }
        case NodeKind::abs_fn: return std::fabs(eval_node(*n.a, r));
        case NodeKind::min_fn: {
            double a = eval_node(*n.a, r), b = eval_node(*n.b, r);
            if (std::isnan(a) || std::isnan(b)) return kNan;
            return a < b ? a : b;
        }
        case NodeKind::max_fn: {
            double a = eval_node(*n.a, r), b = eval_node(*n.b, r);
            if (std::isnan(a) || std::isnan(b)) return kNan;
            return a > b ? a : b;
        }
    }
    return kNan;
}

double eval_node_checked(const ExprNode& n, double r) {
    switch (n.kind) {
        case NodeKind::constant: return n.value;
        case NodeKind::variable: return r;
        case NodeKind::add: return eval_node_checked(*n.a, r) + eval_node_checked(*n.b, r);
        case NodeKind::sub: return eval_node_checked(*n.a, r) - eval_node_checked(*n.b, r);
        case NodeKind::mul: return eval_node_checked(*n.a, r) * eval_node_checked(*n.b, r);
        case NodeKind::div: {
            double den = eval_node_checked(*n.b, r);
            if (den == 0.0) throw EvalDomainError("division by zero", r);
            return eval_node_checked(*n.a, r) / den;
        }
        case NodeKind::pow: {
            double base = eval_node_checked(*n.a, r);
            if (base > 0.0) return std::pow(base, n.value);
            if (base == 0.0) {
                if (n.value > 0.0) return 0.0;
                if (n.value == 0.0) return 1.0;
                throw EvalDomainError("negative power of zero", r);
            }
            if (std::nearbyint(n.value) == n.value) return std::pow(base, n.value);
            throw EvalDomainError("fractional power of negative base", r);
        }
        case NodeKind::neg: return -eval_node_checked(*n.a, r);
        case NodeKind::exp_fn: return std::exp(eval_node_checked(*n.a, r));
        case NodeKind::ln_fn: {
            double v = eval_node_checked(*n.a, r);
            if (v <= 0.0) throw EvalDomainError("ln of non-positive value", r);
            return std::log(v);
        }
        case NodeKind::ln1p_fn: {
            double v = eval_node_checked(*n.a, r);
            if (v <= -1.0) throw EvalDomainError("ln of non-positive value", r);
            return std::log1p(v);
        }
        case NodeKind::abs_fn: return std::fabs(eval_node_checked(*n.a, r));
        case NodeKind::min_fn: return std::fmin(eval_node_checked(*n.a, r), eval_node_checked(*n.b, r));
        case NodeKind::max_fn: return std::fmax(eval_node_checked(*n.a, r), eval_node_checked(*n.b, r));
    }
    throw EvalDomainError("invalid node", r);
}

NodeRef diff_node(const NodeRef& n) {
    using namespace ast;
    switch (n->kind) {
        case NodeKind::constant: return constant(0.0);
        case NodeKind::variable: return constant(1.0);
        case NodeKind::add: return add(diff_node(n->a), diff_node(n->b));
        case NodeKind::sub: return sub(diff_node(n->a), diff_node(n->b));
        case NodeKind::mul: return add(mul(diff_node(n->a), n->b), mul(n->a, diff_node(n->b)));
        case NodeKind::div:
            return div(sub(mul(diff_node(n->a), n->b), mul(n->a, diff_node(n->b))), pow(n->b, 2.0));
        case NodeKind::pow:
            return mul(constant(n->value), mul(pow(n->a, n->value - 1.0), diff_node(n->a)));
        case NodeKind::neg: return neg(diff_node(n->a));
        case NodeKind::exp_fn: return mul(exp(n->a), diff_node(n->a));
        case NodeKind::ln_fn: return div(diff_node(n->a), n->a);
        case NodeKind::ln1p_fn: return div(diff_node(n->a), add(constant(1.0), n->a));
        case NodeKind::abs_fn:
            // sign(f) * f'; sign is abs(f)/f, NaN exactly at the kink f=0
            return mul(div(abs(n->a), n->a), diff_node(n->a));
        case NodeKind::min_fn:
        case NodeKind::max_fn: {
            // min = (f+g)/2 - |f-g|/2, max = (f+g)/2 + |f-g|/2; the sign
            // factor abs(d)/d makes the derivative NaN at crossings f=g.
            NodeRef d = sub(n->a, n->b);
            NodeRef sign = div(abs(d), d);
            NodeRef sym = div(add(diff_node(n->a), diff_node(n->b)), constant(2.0));
            NodeRef anti = mul(sign, div(sub(diff_node(n->a), diff_node(n->b)), constant(2.0)));
            return n->kind == NodeKind::min_fn ? sub(sym, anti) : add(sym, anti);
        }
    }
    return constant(kNan);
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::add:
        case NodeKind::sub: return 1;
        case NodeKind::mul:
        case NodeKind::div: return 2;
        case NodeKind::neg: return 3;
        case NodeKind::pow: return 4;
        default: return 5;
    }
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_node(const NodeRef& n, std::string& out, int parent_prec) {
    int prec = precedence(n->kind);
    if (n->kind == NodeKind::constant && n->value < 0.0) prec = precedence(NodeKind::neg);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n->kind) {
        case NodeKind::constant: out += format_double(n->value); break;
        case NodeKind::variable: out += 'r'; break;
        case NodeKind::add:
            print_node(n->a, out, prec);
            out += '+';
            print_node(n->b, out, prec + 1);
            break;
        case NodeKind::sub:
            print_node(n->a, out, prec);
            out += '-';
            print_node(n->b, out, prec + 1);
            break;
        case NodeKind::mul:
            print_node(n->a, out, prec);
            out += '*';
            print_node(n->b, out, prec + 1);
            break;
        case NodeKind::div:
            print_node(n->a, out, prec);
            out += '/';
            print_node(n->b, out, prec + 1);
            break;
        case NodeKind::pow:
            print_node(n->a, out, prec + 1);
            out += '^';
            if (n->value < 0.0) {
                out += '(';
                out += format_double(n->value);
                out += ')';
            } else {
                out += format_double(n->value);
            }
            break;
        case NodeKind::neg:
            out += '-';
            print_node(n->a, out, prec + 1);
            break;
        case NodeKind::exp_fn:
        case NodeKind::ln_fn:
        case NodeKind::abs_fn:
            out += n->kind == NodeKind::exp_fn ? "exp(" : (n->kind == NodeKind::ln_fn ? "ln(" : "abs(");
            print_node(n->a, out, 0);
            out += ')';
            break;
        case NodeKind::ln1p_fn:
            out += "ln(1+";
            print_node(n->a, out, 2);
            out += ')';
            break;
        case NodeKind::min_fn:
        case NodeKind::max_fn:
            out += n->kind == NodeKind::min_fn ? "min(" : "max(";
            print_node(n->a, out, 0);
            out += ',';
            print_node(n->b, out, 0);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

bool nodes_equal(const NodeRef& x, const NodeRef& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    if (x->kind == NodeKind::constant || x->kind == NodeKind::pow) {
        // bit-exact constants; str() uses shortest round-trip formatting
        if (!(x->value == y->value || (std::isnan(x->value) && std::isnan(y->value)))) return false;
    }
    if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
    if (x->a && !nodes_equal(x->a, y->a)) return false;
    if (x->b && !nodes_equal(x->b, y->b)) return false;
    return true;
}

bool node_has_variable(const NodeRef& n) {
    if (!n) return false;
    if (n->kind == NodeKind::variable) return true;
    return node_has_variable(n->a) || node_has_variable(n->b);
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser p{Lexer{text}};
    NodeRef root = p.parse_expr();
    p.lex.skip_ws();
    if (p.lex.pos != text.size()) throw ParseError("unexpected trailing input", p.lex.pos);
    return Expression(std::move(root));
}

Expression Expression::from_tree(NodeRef root) { return Expression(std::move(root)); }
Expression Expression::constant(double c) { return Expression(ast::constant(c)); }
Expression Expression::variable() { return Expression(ast::variable()); }

double Expression::operator()(double r) const noexcept { return eval_node(*root_, r); }
double Expression::eval_checked(double r) const { return eval_node_checked(*root_, r); }

Expression Expression::derivative() const { return Expression(diff_node(root_)); }

std::string Expression::str() const {
    std::string out;
    print_node(root_, out, 0);
    return out;
}

bool Expression::structurally_equal(const Expression& other) const {
    return nodes_equal(root_, other.root_);
}

bool Expression::is_constant(double* out) const {
    if (node_has_variable(root_)) return false;
    if (out) *out = (*this)(1.0);
    return true;
}

}  // namespace hardy
