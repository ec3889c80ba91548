#include "blochlab/expr.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace blochlab {

namespace {

using Node = SymbolExpr::Node;
using Kind = SymbolExpr::Kind;

std::shared_ptr<const Node> leaf(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

std::shared_ptr<const Node> unary(Kind k, const SymbolExpr& a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = a.root();
    return n;
}

std::shared_ptr<const Node> binary(Kind k, const SymbolExpr& a, const SymbolExpr& b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = a.root();
    n->rhs = b.root();
    return n;
}

}  // namespace

SymbolExpr SymbolExpr::constant(Complex c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->constant = c;
    return SymbolExpr(n);
}

SymbolExpr SymbolExpr::variable(int k) {
    if (k < 1) throw std::invalid_argument("variable index must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var_index = k;
    return SymbolExpr(n);
}

SymbolExpr SymbolExpr::negate(SymbolExpr e) { return SymbolExpr(unary(Kind::negate, e)); }
SymbolExpr SymbolExpr::add(SymbolExpr a, SymbolExpr b) { return SymbolExpr(binary(Kind::add, a, b)); }
SymbolExpr SymbolExpr::sub(SymbolExpr a, SymbolExpr b) { return SymbolExpr(binary(Kind::sub, a, b)); }
SymbolExpr SymbolExpr::mul(SymbolExpr a, SymbolExpr b) { return SymbolExpr(binary(Kind::mul, a, b)); }
SymbolExpr SymbolExpr::div(SymbolExpr a, SymbolExpr b) { return SymbolExpr(binary(Kind::div, a, b)); }

SymbolExpr SymbolExpr::int_pow(SymbolExpr base, int exponent) {
    if (exponent < 0) throw std::invalid_argument("integer power exponent must be >= 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::int_pow;
    n->int_exponent = exponent;
    n->lhs = base.root();
    return SymbolExpr(n);
}

SymbolExpr SymbolExpr::real_pow(SymbolExpr base, double exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::real_pow;
    n->real_exponent = exponent;
    n->lhs = base.root();
    return SymbolExpr(n);
}

SymbolExpr SymbolExpr::log(SymbolExpr e) { return SymbolExpr(unary(Kind::log, e)); }

namespace {

int max_variable_rec(const Node* n) {
    if (!n) return 0;
    int m = n->kind == Kind::variable ? n->var_index : 0;
    m = std::max(m, max_variable_rec(n->lhs.get()));
    m = std::max(m, max_variable_rec(n->rhs.get()));
    return m;
}

size_t count_rec(const Node* n) {
    if (!n) return 0;
    return 1 + count_rec(n->lhs.get()) + count_rec(n->rhs.get());
}

bool equal_rec(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::constant:
            if (a->constant != b->constant) return false;
            break;
        case Kind::variable:
            if (a->var_index != b->var_index) return false;
            break;
        case Kind::int_pow:
            if (a->int_exponent != b->int_exponent) return false;
            break;
        case Kind::real_pow:
            if (a->real_exponent != b->real_exponent) return false;
            break;
        default:
            break;
    }
    return equal_rec(a->lhs.get(), b->lhs.get()) && equal_rec(a->rhs.get(), b->rhs.get());
}

}  // namespace

int SymbolExpr::max_variable() const { return max_variable_rec(root_.get()); }
size_t SymbolExpr::node_count() const { return count_rec(root_.get()); }
bool SymbolExpr::structurally_equal(const SymbolExpr& other) const {
    return equal_rec(root_.get(), other.root_.get());
}

// ---------------------------------------------------------------------------
// Unparser
// ---------------------------------------------------------------------------

namespace {

// Shortest decimal that round-trips through strtod.
std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Precedence levels: 1 add/sub, 2 mul/div, 3 power, 4 atom.
int precedence(const Node* n) {
    switch (n->kind) {
        case Kind::add:
        case Kind::sub:
            return 1;
        case Kind::mul:
        case Kind::div:
            return 2;
        case Kind::int_pow:
        case Kind::real_pow:
            return 3;
        case Kind::negate:
            return 3;  // '-' base binds like a power base
        default:
            return 4;
    }
}

void print_rec(const Node* n, std::string& out, int parent_prec, bool rhs_of_same);

void print_child(const Node* n, std::string& out, int parent_prec, bool rhs_of_same) {
    bool parens = precedence(n) < parent_prec || (rhs_of_same && precedence(n) == parent_prec);
    if (parens) out += '(';
    print_rec(n, out, 0, false);
    if (parens) out += ')';
}

void print_constant(const Node* n, std::string& out) {
    const Complex c = n->constant;
    if (c.imag() == 0.0 && c.real() >= 0.0) {
        out += format_double(c.real());
    } else if (c.real() == 0.0 && c.imag() > 0.0) {
        if (c.imag() == 1.0) {
            out += 'i';
        } else {
            out += format_double(c.imag());
            out += 'i';
        }
    } else {
        // General constants print as a composite literal; it reparses to an
        // equivalent sum/difference of plain literals.
        out += '(';
        out += format_double(c.real());
        out += c.imag() < 0.0 ? " - " : " + ";
        out += format_double(std::abs(c.imag()));
        out += "i)";
    }
}

void print_rec(const Node* n, std::string& out, int, bool) {
    switch (n->kind) {
        case Kind::constant:
            print_constant(n, out);
            break;
        case Kind::variable:
            out += 'z';
            out += std::to_string(n->var_index);
            break;
        case Kind::negate:
            out += '-';
            print_child(n->lhs.get(), out, 4, false);
            break;
        case Kind::add:
            print_child(n->lhs.get(), out, 1, false);
            out += " + ";
            print_child(n->rhs.get(), out, 1, true);
            break;
        case Kind::sub:
            print_child(n->lhs.get(), out, 1, false);
            out += " - ";
            print_child(n->rhs.get(), out, 1, true);
            break;
        case Kind::mul:
            print_child(n->lhs.get(), out, 2, false);
            out += '*';
            print_child(n->rhs.get(), out, 2, true);
            break;
        case Kind::div:
            print_child(n->lhs.get(), out, 2, false);
            out += '/';
            print_child(n->rhs.get(), out, 2, true);
            break;
        case Kind::int_pow:
            print_child(n->lhs.get(), out, 4, false);
            out += '^';
            out += std::to_string(n->int_exponent);
            break;
        case Kind::real_pow: {
            print_child(n->lhs.get(), out, 4, false);
            out += '^';
            std::string exp = format_double(n->real_exponent);
            // A bare integer would reparse as an integer power node.
            if (exp.find_first_of(".eE") == std::string::npos) exp += ".0";
            out += exp;
            break;
        }
        case Kind::log:
            out += "ln(";
            print_rec(n->lhs.get(), out, 0, false);
            out += ')';
            break;
    }
}

}  // namespace

std::string unparse(const SymbolExpr& e) {
    if (e.empty()) return "";
    std::string out;
    print_rec(e.root().get(), out, 0, false);
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(const std::string& text, int n) : text_(text), n_(n) {}

    SymbolExpr run() {
        skip_ws();
        SymbolExpr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& text_;
    int n_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool consume(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!consume(c)) fail(std::string("expected '") + c + "' " + what);
    }

    SymbolExpr parse_expr() {
        SymbolExpr e = parse_term();
        for (;;) {
            skip_ws();
            if (consume('+')) {
                e = SymbolExpr::add(e, parse_term());
            } else if (consume('-')) {
                e = SymbolExpr::sub(e, parse_term());
            } else {
                return e;
            }
        }
    }

    SymbolExpr parse_term() {
        SymbolExpr e = parse_factor();
        for (;;) {
            skip_ws();
            if (consume('*')) {
                e = SymbolExpr::mul(e, parse_factor());
            } else if (consume('/')) {
                e = SymbolExpr::div(e, parse_factor());
            } else {
                return e;
            }
        }
    }

    SymbolExpr parse_factor() {
        SymbolExpr base = parse_base();
        skip_ws();
        if (!consume('^')) return base;
        skip_ws();
        bool negative = false;
        if (consume('-')) {
            negative = true;
        } else {
            consume('+');
        }
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())) && peek() != '.') {
            fail("expected numeric exponent after '^'");
        }
        bool is_integer = false;
        double value = lex_number(&is_integer);
        if (negative) value = -value;
        if (is_integer && !negative && value <= 2147483647.0) {
            return SymbolExpr::int_pow(base, static_cast<int>(value));
        }
        return SymbolExpr::real_pow(base, value);
    }

    SymbolExpr parse_base() {
        skip_ws();
        char c = peek();
        if (c == '\0') fail("unexpected end of input");
        if (c == '-') {
            ++pos_;
            return SymbolExpr::negate(parse_base());
        }
        if (c == '(') {
            ++pos_;
            SymbolExpr e = parse_expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = lex_number(nullptr);
            // A number immediately followed by 'i' is an imaginary literal.
            if (peek() == 'i' && !is_ident_char(pos_ + 1)) {
                ++pos_;
                return SymbolExpr::constant(Complex(0.0, v));
            }
            return SymbolExpr::constant(Complex(v, 0.0));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_word();
        fail(std::string("unexpected character '") + c + "'");
    }

    bool is_ident_char(size_t at) const {
        if (at >= text_.size()) return false;
        return std::isalnum(static_cast<unsigned char>(text_[at]));
    }

    SymbolExpr parse_word() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string word = text_.substr(start, pos_ - start);

        if (word == "i") return SymbolExpr::constant(Complex(0.0, 1.0));

        if (word == "z") {
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = start;
                fail("variable requires an index, e.g. z1");
            }
            size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            int index = 0;
            auto res = std::from_chars(text_.data() + dstart, text_.data() + pos_, index);
            if (res.ec != std::errc{}) {
                pos_ = dstart;
                fail("bad variable index");
            }
            if (index < 1 || index > n_) {
                pos_ = start;
                fail("variable index out of range: z" + std::to_string(index) +
                     " with n=" + std::to_string(n_));
            }
            return SymbolExpr::variable(index);
        }

        if (word == "ln") {
            expect('(', "after ln");
            SymbolExpr arg = parse_expr();
            expect(')', "to close ln(");
            return SymbolExpr::log(arg);
        }

        skip_ws();
        pos_ = start;
        if (peek() == '\0') fail("unknown name '" + word + "'");
        fail("unknown function name '" + word + "'");
    }

    double lex_number(bool* is_integer) {
        skip_ws();
        size_t start = pos_;
        bool saw_dot = false, saw_exp = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' && !saw_dot && !saw_exp) {
                saw_dot = true;
                ++pos_;
            } else if ((c == 'e' || c == 'E') && !saw_exp && pos_ > start) {
                // exponent part; require a digit (after optional sign)
                size_t look = pos_ + 1;
                if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
                if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                    saw_exp = true;
                    pos_ = look + 1;
                    while (pos_ < text_.size() &&
                           std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        ++pos_;
                    break;
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        if (pos_ == start || (pos_ == start + 1 && saw_dot)) fail("expected a number");
        std::string tok = text_.substr(start, pos_ - start);
        double value = 0.0;
        try {
            value = std::stod(tok);
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number '" + tok + "'");
        }
        if (is_integer) {
            *is_integer = !saw_dot && !saw_exp;
        }
        return value;
    }
};

}  // namespace

SymbolExpr parse_expression(const std::string& text, int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    return Parser(text, n).run();
}

}  // namespace blochlab
