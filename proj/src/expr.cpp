#include "genconvex/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "genconvex/errors.hpp"

namespace genconvex {

struct Expr::Node {
    NodeKind kind;
    double value = 0.0;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

bool is_unary(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Neg:
        case NodeKind::Sqrt:
        case NodeKind::Exp:
        case NodeKind::Ln:
        case NodeKind::Abs:
            return true;
        default:
            return false;
    }
}

bool is_binary(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow:
            return true;
        default:
            return false;
    }
}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::unary(NodeKind kind, Expr operand) {
    if (!is_unary(kind)) throw std::invalid_argument("Expr::unary: not a unary kind");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(operand.node_);
    return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
    if (!is_binary(kind)) throw std::invalid_argument("Expr::binary: not a binary kind");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs.node_);
    n->rhs = std::move(rhs.node_);
    return Expr(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }

double Expr::value() const {
    if (node_->kind != NodeKind::Constant) throw std::logic_error("Expr::value on non-constant");
    return node_->value;
}

const std::string& Expr::name() const {
    if (node_->kind != NodeKind::Variable) throw std::logic_error("Expr::name on non-variable");
    return node_->name;
}

Expr Expr::child(std::size_t i) const {
    if (i == 0 && node_->lhs) return Expr(node_->lhs);
    if (i == 1 && node_->rhs) return Expr(node_->rhs);
    throw std::out_of_range("Expr::child");
}

namespace {

bool same(const Expr::Node* a, const Expr::Node* b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Constant:
            return std::bit_cast<std::uint64_t>(a->value) == std::bit_cast<std::uint64_t>(b->value);
        case NodeKind::Variable:
            return a->name == b->name;
        default:
            return same(a->lhs.get(), b->lhs.get()) && same(a->rhs.get(), b->rhs.get());
    }
}

// One step of evaluation shared by the tree walker and the postfix program.
// NaN marks "undefined here".
double apply_unary(NodeKind kind, double a) noexcept {
    switch (kind) {
        case NodeKind::Neg:
            return -a;
        case NodeKind::Sqrt:
            return a < 0.0 ? NAN : std::sqrt(a);
        case NodeKind::Exp:
            return std::exp(a);
        case NodeKind::Ln:
            return a <= 0.0 ? NAN : std::log(a);
        case NodeKind::Abs:
            return std::fabs(a);
        default:
            return NAN;
    }
}

double apply_binary(NodeKind kind, double a, double b) noexcept {
    switch (kind) {
        case NodeKind::Add:
            return a + b;
        case NodeKind::Sub:
            return a - b;
        case NodeKind::Mul:
            return a * b;
        case NodeKind::Div:
            return b == 0.0 ? NAN : a / b;
        case NodeKind::Pow:
            if (a == 0.0 && b < 0.0) return NAN;
            return std::pow(a, b);
        default:
            return NAN;
    }
}

double eval_node(const Expr::Node* n, double u) noexcept {
    switch (n->kind) {
        case NodeKind::Constant:
            return n->value;
        case NodeKind::Variable:
            return u;
        default:
            break;
    }
    const double a = eval_node(n->lhs.get(), u);
    if (!std::isfinite(a)) return NAN;
    const double r = n->rhs ? apply_binary(n->kind, a, eval_node(n->rhs.get(), u))
                            : apply_unary(n->kind, a);
    return std::isfinite(r) ? r : NAN;
}

constexpr std::array<std::pair<std::string_view, NodeKind>, 4> kFunctions{{
    {"sqrt", NodeKind::Sqrt},
    {"exp", NodeKind::Exp},
    {"ln", NodeKind::Ln},
    {"abs", NodeKind::Abs},
}};

std::optional<NodeKind> function_kind(std::string_view name) {
    for (const auto& [fname, kind] : kFunctions)
        if (fname == name) return kind;
    return std::nullopt;
}

std::string_view function_name(NodeKind kind) {
    for (const auto& [fname, k] : kFunctions)
        if (k == kind) return fname;
    return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

    Expr run() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::binary(NodeKind::Add, lhs, term());
            else if (accept('-'))
                lhs = Expr::binary(NodeKind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = Expr::binary(NodeKind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = Expr::binary(NodeKind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    Expr unary() {
        if (accept('-')) return Expr::unary(NodeKind::Neg, unary());
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (accept('^')) return Expr::binary(NodeKind::Pow, base, unary());
        return base;
    }

    Expr atom() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (digit(c) || c == '.') return number();
        if (ident_start(c)) return symbol();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        }
        if (pos_ - start == 1 && text_[start] == '.') throw ParseError("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p >= text_.size() || !digit(text_[p])) throw ParseError("malformed exponent", pos_);
            while (p < text_.size() && digit(text_[p])) ++p;
            pos_ = p;
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value))
            throw ParseError("number out of range", start);
        return Expr::constant(value);
    }

    Expr symbol() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        skip_ws();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';
        if (auto kind = function_kind(name)) {
            if (!call) throw ParseError("function '" + std::string(name) + "' needs an argument", pos_);
            ++pos_;
            Expr arg = expr();
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ',')
                throw ParseError("arity mismatch: '" + std::string(name) + "' takes 1 argument", pos_);
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return Expr::unary(*kind, arg);
        }
        if (call) throw ParseError("unknown function '" + std::string(name) + "'", start);
        if (name != variable_) throw ParseError("unknown symbol '" + std::string(name) + "'", start);
        return Expr::variable(std::string(name));
    }

    std::string_view text_;
    std::string_view variable_;
    std::size_t pos_ = 0;
};

void print_into(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case NodeKind::Constant: {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e.value());
            (void)ec;
            out.append(buf.data(), ptr);
            return;
        }
        case NodeKind::Variable:
            out += e.name();
            return;
        case NodeKind::Neg:
            out += "(-";
            print_into(e.child(0), out);
            out += ')';
            return;
        default:
            break;
    }
    if (is_unary(e.kind())) {
        out += function_name(e.kind());
        out += '(';
        print_into(e.child(0), out);
        out += ')';
        return;
    }
    char op = '?';
    switch (e.kind()) {
        case NodeKind::Add: op = '+'; break;
        case NodeKind::Sub: op = '-'; break;
        case NodeKind::Mul: op = '*'; break;
        case NodeKind::Div: op = '/'; break;
        case NodeKind::Pow: op = '^'; break;
        default: break;
    }
    out += '(';
    print_into(e.child(0), out);
    out += op;
    print_into(e.child(1), out);
    out += ')';
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return same(a.node_.get(), b.node_.get()); }

std::optional<double> Expr::try_eval(double u) const noexcept {
    const double r = eval_node(node_.get(), u);
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

Expr parse(std::string_view text, std::string_view variable) {
    return Parser(text, variable).run();
}

std::vector<std::string> free_symbols(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (digit(text[i]) || text[i] == '.') {
            // skip a number, including an exponent, so "1e5" is not read as symbol "e5"
            while (i < text.size() && (digit(text[i]) || text[i] == '.')) ++i;
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t p = i + 1;
                if (p < text.size() && (text[p] == '+' || text[p] == '-')) ++p;
                if (p < text.size() && digit(text[p])) {
                    while (p < text.size() && digit(text[p])) ++p;
                    i = p;
                }
            }
            continue;
        }
        if (ident_start(text[i])) {
            const std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string name(text.substr(start, i - start));
            if (!function_kind(name) && std::find(out.begin(), out.end(), name) == out.end())
                out.push_back(std::move(name));
            continue;
        }
        ++i;
    }
    return out;
}

std::string print(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

namespace {

std::size_t emit(const Expr& e, std::vector<std::pair<NodeKind, double>>& ops) {
    switch (e.kind()) {
        case NodeKind::Constant:
            ops.emplace_back(NodeKind::Constant, e.value());
            return 1;
        case NodeKind::Variable:
            ops.emplace_back(NodeKind::Variable, 0.0);
            return 1;
        default:
            break;
    }
    if (is_unary(e.kind())) {
        const std::size_t d = emit(e.child(0), ops);
        ops.emplace_back(e.kind(), 0.0);
        return d;
    }
    const std::size_t dl = emit(e.child(0), ops);
    const std::size_t dr = emit(e.child(1), ops);
    ops.emplace_back(e.kind(), 0.0);
    return std::max(dl, dr + 1);
}

}  // namespace

Program::Program(const Expr& e) {
    std::vector<std::pair<NodeKind, double>> ops;
    max_depth_ = emit(e, ops);
    ops_.reserve(ops.size());
    for (auto [kind, value] : ops) ops_.push_back({kind, value});
}

std::optional<double> Program::eval(double u) const noexcept {
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> small{};
    std::vector<double> big;
    double* stack = small.data();
    if (max_depth_ > kInline) {
        big.resize(max_depth_);
        stack = big.data();
    }
    std::size_t top = 0;
    for (const Op& op : ops_) {
        switch (op.kind) {
            case NodeKind::Constant:
                stack[top++] = op.value;
                break;
            case NodeKind::Variable:
                stack[top++] = u;
                break;
            default:
                if (is_unary(op.kind)) {
                    stack[top - 1] = apply_unary(op.kind, stack[top - 1]);
                } else {
                    const double rhs = stack[--top];
                    stack[top - 1] = apply_binary(op.kind, stack[top - 1], rhs);
                }
                if (!std::isfinite(stack[top - 1])) return std::nullopt;
        }
    }
    if (top != 1 || !std::isfinite(stack[0])) return std::nullopt;
    return stack[0];
}

}  // namespace genconvex
