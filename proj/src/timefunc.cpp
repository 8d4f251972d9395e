#include "g3ix/timefunc.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace g3ix {

namespace {

enum class Op { Neg, Sin, Cos, Exp, Sqrt, Add, Sub, Mul, Div };

DualValue make_dual(double v, double d) { return DualValue{v, d}; }

DualValue dual_add(DualValue a, DualValue b) { return make_dual(a.value + b.value, a.deriv + b.deriv); }
DualValue dual_sub(DualValue a, DualValue b) { return make_dual(a.value - b.value, a.deriv - b.deriv); }
DualValue dual_mul(DualValue a, DualValue b) {
    return make_dual(a.value * b.value, a.deriv * b.value + a.value * b.deriv);
}
DualValue dual_div(DualValue a, DualValue b) {
    if (b.value == 0.0) throw DomainError("division by zero");
    const double q = a.value / b.value;
    return make_dual(q, (a.deriv - q * b.deriv) / b.value);
}
DualValue dual_pow_int(DualValue a, long n) {
    if (n == 0) return make_dual(1.0, 0.0);
    if (a.value == 0.0 && n < 0) throw DomainError("zero raised to a negative power");
    const double v = std::pow(a.value, static_cast<double>(n));
    const double d = static_cast<double>(n) * std::pow(a.value, static_cast<double>(n - 1)) * a.deriv;
    return make_dual(v, d);
}

}  // namespace

struct Expr::Node {
    enum class Kind { Const, Var, Param, Unary, Binary, PowInt } kind;
    double value = 0.0;                 // Const
    std::string name;                   // Param
    Op op = Op::Neg;                    // Unary/Binary
    long exponent = 0;                  // PowInt
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr node_const(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Const;
    n->value = v;
    return n;
}
NodePtr node_var() {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Var;
    return n;
}
NodePtr node_param(std::string name) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Param;
    n->name = std::move(name);
    return n;
}
NodePtr node_unary(Op op, NodePtr a) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Unary;
    n->op = op;
    n->a = std::move(a);
    return n;
}
NodePtr node_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}
NodePtr node_pow(NodePtr a, long e) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::PowInt;
    n->a = std::move(a);
    n->exponent = e;
    return n;
}

// ---- recursive descent parser ----------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail({"end of input", "'+'", "'-'", "'*'", "'/'", "'^'"});
        return e;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::ostringstream os;
        os << "syntax error at byte " << pos_ << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            os << (i ? " or " : "") << expected[i];
        throw SyntaxError(os.str(), pos_, std::move(expected));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (consume('+'))
                e = node_binary(Op::Add, e, term());
            else if (consume('-'))
                e = node_binary(Op::Sub, e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (consume('*'))
                e = node_binary(Op::Mul, e, factor());
            else if (consume('/'))
                e = node_binary(Op::Div, e, factor());
            else
                return e;
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (consume('^')) return node_pow(b, integer());
        return b;
    }

    long integer() {
        skip_ws();
        std::size_t start = pos_;
        bool neg = false;
        if (pos_ < src_.size() && src_[pos_] == '-') {
            neg = true;
            ++pos_;
        }
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            pos_ = start;
            fail({"integer exponent"});
        }
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            v = v * 10 + (src_[pos_++] - '0');
        return neg ? -v : v;
    }

    NodePtr base() {
        skip_ws();
        if (pos_ >= src_.size()) fail({"number", "'t'", "identifier", "'('", "'-'"});
        const char c = src_[pos_];
        if (c == '-') {
            ++pos_;
            return node_unary(Op::Neg, base());
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!consume(')')) fail({"')'"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        fail({"number", "'t'", "identifier", "'('", "'-'"});
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e'/'E' belongs to a following identifier, not this number
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        if (text == ".") {
            pos_ = start;
            fail({"number"});
        }
        return node_const(std::stod(text));
    }

    NodePtr ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "t") return node_var();
        if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
            if (!consume('(')) fail({"'('"});
            NodePtr arg = expr();
            if (!consume(')')) fail({"')'"});
            if (name == "sin") return node_unary(Op::Sin, arg);
            if (name == "cos") return node_unary(Op::Cos, arg);
            if (name == "exp") return node_unary(Op::Exp, arg);
            return node_unary(Op::Sqrt, arg);
        }
        return node_param(name);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

DualValue eval_node(const Expr::Node& n, double t, const ParamMap& params) {
    using Kind = Expr::Node::Kind;
    switch (n.kind) {
        case Kind::Const:
            return make_dual(n.value, 0.0);
        case Kind::Var:
            return make_dual(t, 1.0);
        case Kind::Param: {
            auto it = params.find(n.name);
            if (it == params.end())
                throw UnboundParameterError("unbound parameter '" + n.name + "'", n.name);
            return make_dual(it->second, 0.0);
        }
        case Kind::PowInt:
            return dual_pow_int(eval_node(*n.a, t, params), n.exponent);
        case Kind::Unary: {
            const DualValue a = eval_node(*n.a, t, params);
            switch (n.op) {
                case Op::Neg:
                    return make_dual(-a.value, -a.deriv);
                case Op::Sin:
                    return make_dual(std::sin(a.value), std::cos(a.value) * a.deriv);
                case Op::Cos:
                    return make_dual(std::cos(a.value), -std::sin(a.value) * a.deriv);
                case Op::Exp: {
                    const double e = std::exp(a.value);
                    return make_dual(e, e * a.deriv);
                }
                case Op::Sqrt: {
                    if (a.value < 0.0) throw DomainError("sqrt of a negative value");
                    const double s = std::sqrt(a.value);
                    return make_dual(s, a.deriv == 0.0 ? 0.0 : 0.5 * a.deriv / s);
                }
                default:
                    break;
            }
            throw Error("malformed unary node");
        }
        case Kind::Binary: {
            const DualValue a = eval_node(*n.a, t, params);
            const DualValue b = eval_node(*n.b, t, params);
            switch (n.op) {
                case Op::Add: return dual_add(a, b);
                case Op::Sub: return dual_sub(a, b);
                case Op::Mul: return dual_mul(a, b);
                case Op::Div: return dual_div(a, b);
                default: break;
            }
            throw Error("malformed binary node");
        }
    }
    throw Error("malformed expression node");
}

void print_node(const Expr::Node& n, std::ostream& os) {
    using Kind = Expr::Node::Kind;
    switch (n.kind) {
        case Kind::Const: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.value;
            std::string s = tmp.str();
            if (n.value < 0.0) {
                os << "(" << s << ")";  // keep unary structure out of it: reparse as neg const?
            } else {
                os << s;
            }
            return;
        }
        case Kind::Var:
            os << "t";
            return;
        case Kind::Param:
            os << n.name;
            return;
        case Kind::PowInt:
            os << "(";
            print_node(*n.a, os);
            os << "^" << n.exponent << ")";
            return;
        case Kind::Unary:
            switch (n.op) {
                case Op::Neg:
                    os << "(-";
                    print_node(*n.a, os);
                    os << ")";
                    return;
                case Op::Sin: os << "sin("; break;
                case Op::Cos: os << "cos("; break;
                case Op::Exp: os << "exp("; break;
                case Op::Sqrt: os << "sqrt("; break;
                default: throw Error("malformed unary node");
            }
            print_node(*n.a, os);
            os << ")";
            return;
        case Kind::Binary: {
            const char* sym = nullptr;
            switch (n.op) {
                case Op::Add: sym = "+"; break;
                case Op::Sub: sym = "-"; break;
                case Op::Mul: sym = "*"; break;
                case Op::Div: sym = "/"; break;
                default: throw Error("malformed binary node");
            }
            os << "(";
            print_node(*n.a, os);
            os << sym;
            print_node(*n.b, os);
            os << ")";
            return;
        }
    }
}

bool same_node(const Expr::Node* a, const Expr::Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    using Kind = Expr::Node::Kind;
    switch (a->kind) {
        case Kind::Const: return a->value == b->value;
        case Kind::Var: return true;
        case Kind::Param: return a->name == b->name;
        case Kind::PowInt:
            return a->exponent == b->exponent && same_node(a->a.get(), b->a.get());
        case Kind::Unary: return a->op == b->op && same_node(a->a.get(), b->a.get());
        case Kind::Binary:
            return a->op == b->op && same_node(a->a.get(), b->a.get()) &&
                   same_node(a->b.get(), b->b.get());
    }
    return false;
}

}  // namespace

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).run()); }

Expr Expr::constant(double v) { return Expr(node_const(v)); }
Expr Expr::variable() { return Expr(node_var()); }
Expr Expr::parameter(std::string name) { return Expr(node_param(std::move(name))); }
Expr Expr::sin(Expr x) { return Expr(node_unary(Op::Sin, x.root_)); }
Expr Expr::cos(Expr x) { return Expr(node_unary(Op::Cos, x.root_)); }
Expr Expr::times(Expr a, Expr b) { return Expr(node_binary(Op::Mul, a.root_, b.root_)); }

DualValue Expr::eval_dual(double t, const ParamMap& params) const {
    if (!root_) throw Error("evaluating an empty expression");
    return eval_node(*root_, t, params);
}

double Expr::value(double t, const ParamMap& params) const { return eval_dual(t, params).value; }

std::string Expr::to_string() const {
    if (!root_) return "";
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
}

bool Expr::same_tree(const Expr& other) const { return same_node(root_.get(), other.root_.get()); }

}  // namespace g3ix
