#include "mmsde/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmsde/errors.hpp"

namespace mmsde {
namespace {

void check_elasticity(double c) {
    if (!(c >= 0.0 && c <= 1.0)) {
        throw std::invalid_argument("elastic projection: c must lie in [0, 1]");
    }
}

}  // namespace

Point detail::elastic_unchecked(const MonotoneOperator& op, double c, const Point& z) {
    const Point p = op.project_domain(z);
    return p - c * (z - p);
}

Point project_classical(const MonotoneOperator& op, const Point& z) {
    return op.project_domain(z);
}

Point project_elastic(const MonotoneOperator& op, double c, const Point& z) {
    check_elasticity(c);
    return detail::elastic_unchecked(op, c, z);
}

Point project_elastic_iterated(const MonotoneOperator& op, double c, const Point& z, double tol,
                               std::size_t max_iter) {
    check_elasticity(c);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("project_elastic_iterated: tol must be > 0");
    }
    Point w = z;
    double step = 0.0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        if (op.distance_to_domain(w) <= tol) {
            return w;
        }
        Point next = detail::elastic_unchecked(op, c, w);
        step = (next - w).norm();
        if (step < tol) {
            return next;
        }
        w = std::move(next);
    }
    const double residual = std::max(step, op.distance_to_domain(w));
    throw NonConvergence("project_elastic_iterated: no stabilization within max_iter", w, residual);
}

Point GeneralizedProjection::operator()(const MonotoneOperator& op, const Point& z) const {
    switch (kind) {
        case ProjectionKind::classical:
            return project_classical(op, z);
        case ProjectionKind::elastic:
            return project_elastic(op, c, z);
        case ProjectionKind::elastic_iterated:
            return project_elastic_iterated(op, c, z, tol, max_iter);
    }
    throw std::logic_error("GeneralizedProjection: unknown kind");
}

std::string GeneralizedProjection::name() const {
    switch (kind) {
        case ProjectionKind::classical:
            return "classical";
        case ProjectionKind::elastic:
            return "elastic";
        case ProjectionKind::elastic_iterated:
            return "elastic_iterated";
    }
    return "unknown";
}

GeneralizedProjection classical_projection() { return {}; }

GeneralizedProjection elastic_projection(double c) {
    check_elasticity(c);
    return {ProjectionKind::elastic, c};
}

GeneralizedProjection iterated_elastic_projection(double c, double tol, std::size_t max_iter) {
    check_elasticity(c);
    if (!(tol > 0.0) || max_iter == 0) {
        throw std::invalid_argument("iterated_elastic_projection: need tol > 0 and max_iter >= 1");
    }
    return {ProjectionKind::elastic_iterated, c, tol, max_iter};
}

}  // namespace mmsde
