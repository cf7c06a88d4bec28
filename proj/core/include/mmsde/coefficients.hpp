#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "mmsde/types.hpp"

namespace mmsde {

/// Serializable description of a built-in coefficient.
struct CoefficientSpec {
    std::string kind = "zero";  ///< zero, constant, linear_diagonal, power_diagonal
    int dimension = 1;
    Matrix matrix;              ///< constant
    double scale = 1.0;         ///< linear_diagonal, power_diagonal
    double power = 2.0;         ///< power_diagonal
};

/// Matrix-valued coefficient f : R^d -> R^{d x d} multiplying dZ.
///
/// Either globally Lipschitz with constant L, or locally Lipschitz with
/// constants K_N on balls B(0, N). Copies share one evaluation counter.
class Coefficient {
  public:
    using Function = std::function<Matrix(const Point&)>;
    using LocalConstant = std::function<double(double radius)>;

    Coefficient(CoefficientSpec spec, Function f, std::optional<double> lipschitz,
                LocalConstant local_lipschitz);

    Matrix operator()(const Point& x) const;

    int dimension() const noexcept { return spec_.dimension; }
    const CoefficientSpec& spec() const noexcept { return spec_; }
    /// Global constant L, if the coefficient has one.
    std::optional<double> lipschitz() const noexcept { return lipschitz_; }
    /// K_N: Lipschitz constant on B(0, radius).
    double local_lipschitz(double radius) const;
    bool is_zero() const noexcept { return spec_.kind == "zero"; }
    /// Truncation radius N when this coefficient is a truncated f_N.
    std::optional<double> truncation() const noexcept { return truncation_; }

    std::uint64_t evaluations() const noexcept { return counter_->load(std::memory_order_relaxed); }

  private:
    friend Coefficient truncate(const Coefficient& f, double radius);

    CoefficientSpec spec_;
    Function f_;
    std::optional<double> lipschitz_;
    LocalConstant local_;
    std::optional<double> truncation_;
    std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

Coefficient zero_coefficient(int dimension);
Coefficient constant_coefficient(const Matrix& m);
/// f(x) = scale * diag(x).
Coefficient linear_diagonal_coefficient(int dimension, double scale);
/// f(x) = scale * diag(x_i^power); locally Lipschitz only (power > 1).
Coefficient power_diagonal_coefficient(int dimension, double power, double scale);

Coefficient make_coefficient(const CoefficientSpec& spec);

/// f_N(x) = rho(|x|) f(x) with rho = 1 on B(0, N), 0 outside B(0, N+1) and
/// linear in |x| between. Globally Lipschitz with constant
/// K_{N+1} (N + 2) + |f(0)|.
Coefficient truncate(const Coefficient& f, double radius);

}  // namespace mmsde
