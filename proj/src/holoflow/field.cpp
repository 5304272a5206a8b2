#include <cmath>

#include "holoflow/field.hpp"

namespace holoflow {

namespace {

class Linear2dField final : public VectorField {
public:
    explicit Linear2dField(double gamma)
        : VectorField(2, "linear2d", {{"gamma", gamma}}), gamma_(gamma) {}

protected:
    CVector eval_impl(const CVector& z) const override {
        return {-z[0], -gamma_ * z[1]};
    }

private:
    double gamma_;
};

class DavisSkodjeField final : public VectorField {
public:
    explicit DavisSkodjeField(double gamma)
        : VectorField(2, "davis_skodje", {{"gamma", gamma}}), gamma_(gamma) {}

protected:
    CVector eval_impl(const CVector& z) const override {
        const Complex x = z[0];
        const Complex denom = Complex(1.0, 0.0) + x;
        if (denom.real() == 0.0 && denom.imag() == 0.0)
            throw PoleOrBranchError("davis_skodje pole manifold x = -1");
        const Complex coupling = ((gamma_ - 1.0) * x + gamma_ * x * x) / (denom * denom);
        return {-x, -gamma_ * z[1] + coupling};
    }

private:
    double gamma_;
};

class ExpressionField final : public VectorField {
public:
    ExpressionField(int dimension, std::vector<expr::Expr> components, ParamMap params,
                    std::string name)
        : VectorField(dimension, std::move(name), std::move(params)),
          components_(std::move(components)) {}

protected:
    CVector eval_impl(const CVector& z) const override {
        CVector out(components_.size());
        for (std::size_t i = 0; i < components_.size(); ++i)
            out[i] = expr::eval(components_[i], z, parameters());
        return out;
    }

private:
    std::vector<expr::Expr> components_;
};

class RotatedField final : public VectorField {
public:
    RotatedField(FieldPtr inner, double theta)
        : VectorField(inner->dimension(), inner->name() + "@rot", inner->parameters()),
          inner_(std::move(inner)),
          theta_(theta),
          multiplier_(theta == 0.0 ? Complex(1.0, 0.0) : std::polar(1.0, theta)) {}

    double theta() const { return theta_; }
    const FieldPtr& inner() const { return inner_; }

protected:
    CVector eval_impl(const CVector& z) const override {
        CVector out = inner_->evaluate(z);
        for (Complex& c : out) c *= multiplier_;
        return out;
    }

private:
    FieldPtr inner_;
    double theta_;
    Complex multiplier_;
};

void require_separation(double gamma, const char* name) {
    if (!(gamma > 1.0))
        throw InvalidArgumentError(std::string(name) +
                                   " requires gamma > 1 (time scale separation), got " +
                                   std::to_string(gamma));
}

}  // namespace

FieldPtr linear2d(double gamma) {
    require_separation(gamma, "linear2d");
    return std::make_shared<Linear2dField>(gamma);
}

FieldPtr davis_skodje(double gamma) {
    require_separation(gamma, "davis_skodje");
    return std::make_shared<DavisSkodjeField>(gamma);
}

FieldPtr expression_field(int dimension, const std::vector<std::string>& components,
                          ParamMap params) {
    if (dimension < 1) throw InvalidArgumentError("field dimension must be at least 1");
    if (static_cast<int>(components.size()) != dimension)
        throw InvalidArgumentError("expected " + std::to_string(dimension) +
                                   " component expressions, got " +
                                   std::to_string(components.size()));
    std::vector<expr::Expr> parsed;
    parsed.reserve(components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        expr::ParseResult r = expr::parse_expression(components[i], dimension);
        if (!r.ok())
            throw InvalidArgumentError("component " + std::to_string(i + 1) + ": " +
                                       r.error->message + " at byte " +
                                       std::to_string(r.error->span.begin));
        parsed.push_back(std::move(*r.ast));
    }
    return std::make_shared<ExpressionField>(dimension, std::move(parsed), std::move(params),
                                             "expression");
}

FieldPtr rotate_field(FieldPtr field, double theta) {
    if (!field) throw InvalidArgumentError("rotate_field: null field");
    if (auto rotated = std::dynamic_pointer_cast<const RotatedField>(field))
        return std::make_shared<RotatedField>(rotated->inner(), rotated->theta() + theta);
    return std::make_shared<RotatedField>(std::move(field), theta);
}

FieldPtr builtin_field(const std::string& name, double gamma) {
    if (name == "linear2d") return linear2d(gamma);
    if (name == "davis_skodje") return davis_skodje(gamma);
    throw InvalidArgumentError("unknown builtin system '" + name +
                               "' (available: linear2d, davis_skodje)");
}

bool is_builtin_field(const std::string& name) {
    return name == "linear2d" || name == "davis_skodje";
}

}  // namespace holoflow
