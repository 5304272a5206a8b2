#include <cmath>

#include "holoflow/expr.hpp"

namespace holoflow::expr {

namespace {

bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }

// Integer exponents below this magnitude use repeated multiplication so the
// continued value never picks up a spurious branch.
constexpr double kMaxIntExponent = 9.007199254740992e15;  // 2^53

bool integral_exponent(const Complex& w, long long& n) {
    if (w.imag() != 0.0) return false;
    const double r = w.real();
    if (!(std::abs(r) <= kMaxIntExponent)) return false;
    if (std::trunc(r) != r) return false;
    n = static_cast<long long>(r);
    return true;
}

Complex int_pow(Complex base, long long n) {
    if (n == 0) return Complex(1.0, 0.0);
    const bool negative = n < 0;
    unsigned long long m = negative ? static_cast<unsigned long long>(-(n + 1)) + 1ULL
                                    : static_cast<unsigned long long>(n);
    Complex acc(1.0, 0.0);
    Complex b = base;
    while (m > 0) {
        if (m & 1ULL) acc *= b;
        b *= b;
        m >>= 1;
    }
    if (negative) {
        if (is_zero(acc)) throw PoleOrBranchError("division by zero in negative integer power");
        return Complex(1.0, 0.0) / acc;
    }
    return acc;
}

Complex eval_pow(const Complex& base, const Complex& exponent) {
    long long n = 0;
    if (integral_exponent(exponent, n)) {
        if (is_zero(base)) {
            if (n > 0) return Complex(0.0, 0.0);
            if (n == 0) return Complex(1.0, 0.0);
            throw PoleOrBranchError("0 raised to a negative power");
        }
        return int_pow(base, n);
    }
    if (is_zero(base)) throw PoleOrBranchError("0 raised to a non-integer power is a branch point");
    // principal branch
    return std::exp(exponent * std::log(base));
}

Complex eval_func(FuncKind f, const Complex& a) {
    switch (f) {
        case FuncKind::Exp: return std::exp(a);
        case FuncKind::Log:
            if (is_zero(a)) throw PoleOrBranchError("log evaluated at its branch point 0");
            return std::log(a);
        case FuncKind::Sin: return std::sin(a);
        case FuncKind::Cos: return std::cos(a);
        case FuncKind::Sinh: return std::sinh(a);
        case FuncKind::Cosh: return std::cosh(a);
        case FuncKind::Sqrt:
            if (is_zero(a)) throw PoleOrBranchError("sqrt evaluated at its branch point 0");
            return std::sqrt(a);
    }
    throw InvalidArgumentError("unknown function kind");
}

}  // namespace

Complex eval(const Expr& ast, std::span<const Complex> z, const ParamMap& params) {
    switch (ast.kind) {
        case NodeKind::Constant:
            return Complex(ast.value, 0.0);
        case NodeKind::Variable: {
            const int idx = ast.var_index;
            if (idx < 1 || static_cast<std::size_t>(idx) > z.size())
                throw InvalidArgumentError("variable x" + std::to_string(idx) +
                                           " out of range for point of dimension " +
                                           std::to_string(z.size()));
            return z[static_cast<std::size_t>(idx - 1)];
        }
        case NodeKind::Parameter: {
            auto it = params.find(ast.param);
            if (it == params.end())
                throw InvalidArgumentError("unbound parameter '" + ast.param + "'");
            return Complex(it->second, 0.0);
        }
        case NodeKind::Negate:
            return -eval(ast.children[0], z, params);
        case NodeKind::Function:
            return eval_func(ast.func, eval(ast.children[0], z, params));
        case NodeKind::Binary: {
            const Complex a = eval(ast.children[0], z, params);
            const Complex b = eval(ast.children[1], z, params);
            switch (ast.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (is_zero(b)) throw PoleOrBranchError("division by zero");
                    return a / b;
                case BinaryOp::Pow: return eval_pow(a, b);
            }
            throw InvalidArgumentError("unknown binary operator");
        }
    }
    throw InvalidArgumentError("unknown node kind");
}

}  // namespace holoflow::expr
