#include "mmsde/coefficients.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmsde {

Coefficient::Coefficient(CoefficientSpec spec, Function f, std::optional<double> lipschitz,
                         LocalConstant local_lipschitz)
    : spec_(std::move(spec)),
      f_(std::move(f)),
      lipschitz_(lipschitz),
      local_(std::move(local_lipschitz)),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
    if (spec_.dimension < 1 || !f_) {
        throw std::invalid_argument("Coefficient: need dimension >= 1 and a function");
    }
}

Matrix Coefficient::operator()(const Point& x) const {
    counter_->fetch_add(1, std::memory_order_relaxed);
    return f_(x);
}

double Coefficient::local_lipschitz(double radius) const {
    if (local_) {
        return local_(radius);
    }
    return lipschitz_.value_or(std::numeric_limits<double>::infinity());
}

Coefficient zero_coefficient(int dimension) {
    CoefficientSpec spec{"zero", dimension, Matrix::Zero(dimension, dimension), 0.0, 1.0};
    return Coefficient(
        spec, [dimension](const Point&) -> Matrix { return Matrix::Zero(dimension, dimension); },
        0.0, {});
}

Coefficient constant_coefficient(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0 || !m.allFinite()) {
        throw std::invalid_argument("constant_coefficient: need a finite square matrix");
    }
    CoefficientSpec spec{"constant", static_cast<int>(m.rows()), m, 1.0, 1.0};
    return Coefficient(spec, [m](const Point&) -> Matrix { return m; }, 0.0, {});
}

Coefficient linear_diagonal_coefficient(int dimension, double scale) {
    if (!std::isfinite(scale)) {
        throw std::invalid_argument("linear_diagonal_coefficient: scale must be finite");
    }
    CoefficientSpec spec{"linear_diagonal", dimension, {}, scale, 1.0};
    return Coefficient(
        spec, [scale](const Point& x) -> Matrix { return (scale * x).asDiagonal(); },
        std::abs(scale), {});
}

Coefficient power_diagonal_coefficient(int dimension, double power, double scale) {
    if (!(power >= 1.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("power_diagonal_coefficient: need power >= 1, finite scale");
    }
    CoefficientSpec spec{"power_diagonal", dimension, {}, scale, power};
    auto f = [power, scale](const Point& x) -> Matrix {
        return x.unaryExpr([power, scale](double v) { return scale * std::pow(v, power); })
            .asDiagonal();
    };
    auto local = [power, scale](double radius) {
        return std::abs(scale) * power * std::pow(radius, power - 1.0);
    };
    std::optional<double> global;
    if (power == 1.0) {
        global = std::abs(scale);
    }
    return Coefficient(spec, f, global, local);
}

Coefficient make_coefficient(const CoefficientSpec& spec) {
    if (spec.kind == "zero") {
        return zero_coefficient(spec.dimension);
    }
    if (spec.kind == "constant") {
        return constant_coefficient(spec.matrix);
    }
    if (spec.kind == "linear_diagonal") {
        return linear_diagonal_coefficient(spec.dimension, spec.scale);
    }
    if (spec.kind == "power_diagonal") {
        return power_diagonal_coefficient(spec.dimension, spec.power, spec.scale);
    }
    throw std::invalid_argument("make_coefficient: unknown kind '" + spec.kind + "'");
}

Coefficient truncate(const Coefficient& f, double radius) {
    if (!(radius >= 1.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("truncate: radius N must be >= 1");
    }
    const int d = f.dimension();
    auto inner = f;
    auto fn = [inner, radius, d](const Point& x) -> Matrix {
        const double r = x.norm();
        if (r <= radius) {
            return inner(x);
        }
        if (r >= radius + 1.0) {
            return Matrix::Zero(d, d);
        }
        return (radius + 1.0 - r) * inner(x);
    };
    const double k_outer = f.local_lipschitz(radius + 1.0);
    const double at_origin = f(Point::Zero(d)).norm();
    const double lipschitz = k_outer * (radius + 2.0) + at_origin;
    Coefficient out(f.spec(), fn, lipschitz, {});
    out.truncation_ = radius;
    return out;
}

}  // namespace mmsde
