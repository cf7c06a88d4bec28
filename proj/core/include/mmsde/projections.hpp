#pragma once

#include <cstddef>
#include <string>

#include "mmsde/operators.hpp"

namespace mmsde {

enum class ProjectionKind { classical, elastic, elastic_iterated };

/// A generalized projection onto cl D(A): a non-expansive map fixing the
/// domain closure pointwise.
///
/// The elastic map Pi^c(z) = p - c (z - p), p the nearest point, may land
/// outside the domain; `elastic_iterated` composes it until it settles.
struct GeneralizedProjection {
    ProjectionKind kind = ProjectionKind::classical;
    double c = 0.0;
    double tol = 1e-10;
    std::size_t max_iter = 100000;

    Point operator()(const MonotoneOperator& op, const Point& z) const;
    std::string name() const;
};

GeneralizedProjection classical_projection();
GeneralizedProjection elastic_projection(double c);
GeneralizedProjection iterated_elastic_projection(double c, double tol = 1e-10,
                                                  std::size_t max_iter = 100000);

Point project_classical(const MonotoneOperator& op, const Point& z);

/// Throws std::invalid_argument unless 0 <= c <= 1.
Point project_elastic(const MonotoneOperator& op, double c, const Point& z);

/// Iterates the elastic map until the iterate is within `tol` of the domain
/// or moves less than `tol`. Throws NonConvergence after `max_iter` steps.
Point project_elastic_iterated(const MonotoneOperator& op, double c, const Point& z,
                               double tol = 1e-10, std::size_t max_iter = 100000);

namespace detail {
/// p - c (z - p) without validating c. Used by diagnostics that must be able
/// to evaluate a deliberately broken projection.
Point elastic_unchecked(const MonotoneOperator& op, double c, const Point& z);
}  // namespace detail

}  // namespace mmsde
