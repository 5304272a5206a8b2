#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holoflow/types.hpp"

namespace holoflow::expr {

/// Byte-offset range [begin, end) into the source text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class NodeKind { Constant, Variable, Parameter, Negate, Binary, Function };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class FuncKind { Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };

/// Immutable after construction; safe to share across threads.
struct Expr {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;             // Constant
    int var_index = 0;              // Variable, 1-based
    std::string param;              // Parameter
    BinaryOp op = BinaryOp::Add;    // Binary
    FuncKind func = FuncKind::Exp;  // Function
    std::vector<Expr> children;
    Span span;
};

struct ParseError {
    std::string message;
    Span span;
    std::vector<std::string> expected;
};

struct ParseResult {
    std::optional<Expr> ast;
    std::optional<ParseError> error;
    bool ok() const { return ast.has_value(); }
};

/// Parse `source` against dimension `n`: variables are x1..xn, every other
/// identifier (except function names) is a named parameter.
ParseResult parse_expression(std::string_view source, int dimension);

/// Prints with minimal parentheses; parse(print(ast)) is structurally equal
/// to ast (spans aside).
std::string print_expression(const Expr& ast);

/// Structural equality modulo source spans.
bool structurally_equal(const Expr& a, const Expr& b);

/// Complex evaluation. Integer exponents go through repeated multiplication,
/// everything else through principal branches. Throws PoleOrBranchError on
/// division by exact zero and on log/sqrt/pow branch points; throws
/// InvalidArgumentError for unbound parameters or bad variable indices.
Complex eval(const Expr& ast, std::span<const Complex> z, const ParamMap& params);

const char* func_name(FuncKind f);
std::optional<FuncKind> func_from_name(std::string_view name);

}  // namespace holoflow::expr
