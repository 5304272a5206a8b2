#pragma once

#include <memory>
#include <string>
#include <vector>

#include "holoflow/expr.hpp"
#include "holoflow/types.hpp"

namespace holoflow {

/// An analytic vector field F with Re F = f on real arguments. Evaluation is
/// pure; instances are immutable and shareable across threads.
class VectorField {
public:
    virtual ~VectorField() = default;

    int dimension() const { return dimension_; }
    const std::string& name() const { return name_; }
    const ParamMap& parameters() const { return params_; }

    CVector evaluate(const CVector& z) const {
        if (static_cast<int>(z.size()) != dimension_)
            throw InvalidArgumentError("field '" + name_ + "' expects dimension " +
                                       std::to_string(dimension_) + ", got " +
                                       std::to_string(z.size()));
        return eval_impl(z);
    }

protected:
    VectorField(int dimension, std::string name, ParamMap params)
        : dimension_(dimension), name_(std::move(name)), params_(std::move(params)) {}

    virtual CVector eval_impl(const CVector& z) const = 0;

private:
    int dimension_;
    std::string name_;
    ParamMap params_;
};

using FieldPtr = std::shared_ptr<const VectorField>;

/// f(x1, x2) = (-x1, -gamma*x2); eigenvalues {-1, -gamma}, slow manifold is
/// the x1 axis. Requires gamma > 1 for time scale separation.
FieldPtr linear2d(double gamma);

/// f(x, y) = (-x, -gamma*y + ((gamma-1)*x + gamma*x^2)/(1+x)^2) with exact
/// slow manifold y = x/(1+x) and a pole manifold at x = -1.
/// Requires gamma > 1.
FieldPtr davis_skodje(double gamma);

/// Field defined componentwise by expressions over x1..xn.
/// Throws InvalidArgumentError (carrying the parse message and component
/// index) when a component fails to parse.
FieldPtr expression_field(int dimension, const std::vector<std::string>& components,
                          ParamMap params);

/// Returns a field evaluating to e^{i theta} * F(z): the flow of the rotated
/// field along real parameter s equals the flow of F along the complex-time
/// ray of direction theta. Rotating a rotated field accumulates angles.
FieldPtr rotate_field(FieldPtr field, double theta);

/// Builtin lookup by the names addressable from configs: "linear2d",
/// "davis_skodje". Throws InvalidArgumentError for unknown names.
FieldPtr builtin_field(const std::string& name, double gamma);
bool is_builtin_field(const std::string& name);

}  // namespace holoflow
