#include <cctype>
#include <charconv>

#include "holoflow/expr.hpp"

namespace holoflow::expr {

const char* func_name(FuncKind f) {
    switch (f) {
        case FuncKind::Exp: return "exp";
        case FuncKind::Log: return "log";
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Sinh: return "sinh";
        case FuncKind::Cosh: return "cosh";
        case FuncKind::Sqrt: return "sqrt";
    }
    return "?";
}

std::optional<FuncKind> func_from_name(std::string_view name) {
    if (name == "exp") return FuncKind::Exp;
    if (name == "log") return FuncKind::Log;
    if (name == "sin") return FuncKind::Sin;
    if (name == "cos") return FuncKind::Cos;
    if (name == "sinh") return FuncKind::Sinh;
    if (name == "cosh") return FuncKind::Cosh;
    if (name == "sqrt") return FuncKind::Sqrt;
    return std::nullopt;
}

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    TokKind kind = TokKind::End;
    Span span;
    double number = 0.0;
    std::string_view text;
};

struct ParseFailure {
    ParseError error;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.span = {pos_, pos_};
        if (pos_ >= src_.size()) {
            t.kind = TokKind::End;
            return t;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': return single(TokKind::Plus);
            case '-': return single(TokKind::Minus);
            case '*': return single(TokKind::Star);
            case '/': return single(TokKind::Slash);
            case '^': return single(TokKind::Caret);
            case '(': return single(TokKind::LParen);
            case ')': return single(TokKind::RParen);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ParseFailure{{std::string("unexpected character '") + c + "'",
                            {pos_, pos_ + 1},
                            {"number", "identifier", "operator"}}};
    }

private:
    Token single(TokKind k) {
        Token t;
        t.kind = k;
        t.span = {pos_, pos_ + 1};
        ++pos_;
        return t;
    }

    Token number() {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // bare 'e' belongs to the next token
            }
        }
        Token t;
        t.kind = TokKind::Number;
        t.span = {begin, pos_};
        t.text = src_.substr(begin, pos_ - begin);
        double v = 0.0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            throw ParseFailure{{"malformed number literal", t.span, {"number"}}};
        t.number = v;
        return t;
    }

    Token ident() {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        Token t;
        t.kind = TokKind::Ident;
        t.span = {begin, pos_};
        t.text = src_.substr(begin, pos_ - begin);
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, int dimension) : lexer_(src), dimension_(dimension) {
        advance();
    }

    Expr parse() {
        Expr e = additive();
        if (cur_.kind != TokKind::End)
            throw ParseFailure{{"unexpected trailing input", cur_.span, {"end of input", "operator"}}};
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool accept(TokKind k) {
        if (cur_.kind != k) return false;
        prev_ = cur_;
        advance();
        return true;
    }

    void expect(TokKind k, const char* what) {
        if (!accept(k))
            throw ParseFailure{{std::string("expected ") + what, cur_.span, {what}}};
    }

    Expr additive() {
        Expr lhs = multiplicative();
        while (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
            const BinaryOp op = cur_.kind == TokKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            Expr rhs = multiplicative();
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr multiplicative() {
        Expr lhs = unary();
        while (cur_.kind == TokKind::Star || cur_.kind == TokKind::Slash) {
            const BinaryOp op = cur_.kind == TokKind::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            Expr rhs = unary();
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    // Unary minus binds below '^': -x1^2 is -(x1^2).
    Expr unary() {
        if (cur_.kind == TokKind::Minus) {
            const Span start = cur_.span;
            advance();
            Expr child = unary();
            Expr e;
            e.kind = NodeKind::Negate;
            e.span = {start.begin, child.span.end};
            e.children.push_back(std::move(child));
            return e;
        }
        return power();
    }

    // Right-associative: x^y^z = x^(y^z); exponent may carry a unary minus.
    Expr power() {
        Expr base = atom();
        if (cur_.kind == TokKind::Caret) {
            advance();
            Expr exponent = unary();
            return binary(BinaryOp::Pow, std::move(base), std::move(exponent));
        }
        return base;
    }

    Expr atom() {
        if (accept(TokKind::Number)) {
            Expr e;
            e.kind = NodeKind::Constant;
            e.value = prev_.number;
            e.span = prev_.span;
            return e;
        }
        if (accept(TokKind::LParen)) {
            const Span open = prev_.span;
            Expr inner = additive();
            expect(TokKind::RParen, "')'");
            inner.span = {open.begin, prev_.span.end};
            return inner;
        }
        if (accept(TokKind::Ident)) {
            const Token name = prev_;
            if (auto f = func_from_name(name.text)) {
                expect(TokKind::LParen, "'('");
                Expr arg = additive();
                expect(TokKind::RParen, "')'");
                Expr e;
                e.kind = NodeKind::Function;
                e.func = *f;
                e.span = {name.span.begin, prev_.span.end};
                e.children.push_back(std::move(arg));
                return e;
            }
            if (name.text.size() >= 2 && name.text[0] == 'x' && all_digits(name.text.substr(1))) {
                int idx = 0;
                std::from_chars(name.text.data() + 1, name.text.data() + name.text.size(), idx);
                if (idx < 1 || idx > dimension_)
                    throw ParseFailure{{"variable index out of range for dimension " +
                                            std::to_string(dimension_),
                                        name.span,
                                        {"x1..x" + std::to_string(dimension_)}}};
                Expr e;
                e.kind = NodeKind::Variable;
                e.var_index = idx;
                e.span = name.span;
                return e;
            }
            Expr e;
            e.kind = NodeKind::Parameter;
            e.param = std::string(name.text);
            e.span = name.span;
            return e;
        }
        throw ParseFailure{{"expected an operand",
                            cur_.span,
                            {"number", "variable", "parameter", "function", "'('", "'-'"}}};
    }

    static bool all_digits(std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    }

    Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
        Expr e;
        e.kind = NodeKind::Binary;
        e.op = op;
        e.span = {lhs.span.begin, rhs.span.end};
        e.children.push_back(std::move(lhs));
        e.children.push_back(std::move(rhs));
        return e;
    }

    Lexer lexer_;
    int dimension_;
    Token cur_;
    Token prev_;
};

int precedence(const Expr& e) {
    switch (e.kind) {
        case NodeKind::Binary:
            switch (e.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
            return 1;
        case NodeKind::Negate: return 3;
        default: return 5;
    }
}

void print_node(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

void print_node(const Expr& e, std::string& out) {
    switch (e.kind) {
        case NodeKind::Constant: {
            char buf[32];
            auto r = std::to_chars(buf, buf + sizeof buf, e.value);
            out.append(buf, r.ptr);
            return;
        }
        case NodeKind::Variable:
            out += 'x';
            out += std::to_string(e.var_index);
            return;
        case NodeKind::Parameter:
            out += e.param;
            return;
        case NodeKind::Negate:
            out += '-';
            print_child(e.children[0], 3, out);
            return;
        case NodeKind::Function:
            out += func_name(e.func);
            out += '(';
            print_node(e.children[0], out);
            out += ')';
            return;
        case NodeKind::Binary: {
            const char* sym = "+";
            int prec = precedence(e);
            switch (e.op) {
                case BinaryOp::Add: sym = "+"; break;
                case BinaryOp::Sub: sym = "-"; break;
                case BinaryOp::Mul: sym = "*"; break;
                case BinaryOp::Div: sym = "/"; break;
                case BinaryOp::Pow: sym = "^"; break;
            }
            if (e.op == BinaryOp::Pow) {
                // right-associative: parenthesize a left child of equal rank
                print_child(e.children[0], prec + 1, out);
                out += sym;
                print_child(e.children[1], 3, out);
            } else {
                print_child(e.children[0], prec, out);
                out += sym;
                print_child(e.children[1], prec + 1, out);
            }
            return;
        }
    }
}

}  // namespace

ParseResult parse_expression(std::string_view source, int dimension) {
    ParseResult result;
    if (dimension < 1) {
        result.error = ParseError{"dimension must be at least 1", {0, 0}, {}};
        return result;
    }
    try {
        Parser p(source, dimension);
        result.ast = p.parse();
    } catch (const ParseFailure& f) {
        result.error = f.error;
    }
    return result;
}

std::string print_expression(const Expr& ast) {
    std::string out;
    print_node(ast, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Constant:
            if (a.value != b.value) return false;
            break;
        case NodeKind::Variable:
            if (a.var_index != b.var_index) return false;
            break;
        case NodeKind::Parameter:
            if (a.param != b.param) return false;
            break;
        case NodeKind::Binary:
            if (a.op != b.op) return false;
            break;
        case NodeKind::Function:
            if (a.func != b.func) return false;
            break;
        case NodeKind::Negate:
            break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    return true;
}

}  // namespace holoflow::expr
