#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmsde/types.hpp"

namespace mmsde {

/// Serializable description of a built-in operator. Only the fields relevant
/// to `kind` are meaningful.
struct OperatorSpec {
    std::string kind;  ///< halfspace, halfline, box, ball, polyhedron, linear, zero, prox_l1, prox_quadratic, custom
    int dimension = 1;
    Point normal;      ///< halfspace: {x : <normal, x> <= offset}
    double offset = 0.0;
    Point lo, hi;      ///< box
    Point center;      ///< ball
    double radius = 1.0;
    std::vector<std::pair<Point, double>> halfspaces;  ///< polyhedron rows <a_i, x> <= b_i
    Matrix matrix;     ///< linear
    double weight = 1.0;  ///< prox_l1, prox_quadratic
};

/// Backend of a maximal monotone operator. Implementations are immutable.
class OperatorModel {
  public:
    virtual ~OperatorModel() = default;

    virtual int dimension() const = 0;
    /// (I + lambda A)^{-1}(z). Arguments are already validated.
    virtual Point resolvent(double lambda, const Point& z) const = 0;
    /// Nearest point of the closed convex set cl D(A).
    virtual Point project_domain(const Point& z) const = 0;
    /// True when A is the subdifferential of an indicator, so that 0 is in
    /// A(x) on the whole domain and the resolvent is the domain projection.
    virtual bool is_indicator() const { return false; }
    virtual std::optional<Point> graph_sample(const Point&) const { return std::nullopt; }
    virtual OperatorSpec spec() const = 0;
};

/// A maximal monotone operator on R^d, represented through its resolvent and
/// the geometry of its domain closure. Cheap to copy; safe to share between
/// threads.
class MonotoneOperator {
  public:
    explicit MonotoneOperator(std::shared_ptr<const OperatorModel> model);

    int dimension() const { return model_->dimension(); }
    bool is_indicator() const { return model_->is_indicator(); }
    const std::string& kind() const { return kind_; }
    OperatorSpec spec() const { return model_->spec(); }

    /// Validated resolvent J_lambda(z).
    Point resolve(double lambda, const Point& z) const;
    Point project_domain(const Point& z) const;
    double distance_to_domain(const Point& z) const;
    bool contains(const Point& z, double tol = kMembershipTol) const;
    /// One element of A(z) where A is single valued, for diagnostics.
    std::optional<Point> graph_sample(const Point& z) const;

    /// A point (alpha, beta) of the graph of A built from any z:
    /// alpha = J_lambda(z), beta = (z - alpha) / lambda.
    std::pair<Point, Point> graph_point(double lambda, const Point& z) const;

  private:
    std::shared_ptr<const OperatorModel> model_;
    std::string kind_;
};

Point resolve(const MonotoneOperator& op, double lambda, const Point& z);

/// J_n = (I + A/n)^{-1}. `n` may be any positive real.
Point yosida_j(const MonotoneOperator& op, double n, const Point& z);

/// Yosida approximation A_n(z) = n (z - J_n(z)).
Point yosida_a(const MonotoneOperator& op, double n, const Point& z);

/// (I + mu A_n)^{-1}(x), the implicit step of the Yosida drift, computed as
/// (lambda x + mu J_{lambda + mu}(x)) / (lambda + mu) with lambda = 1/n.
Point yosida_resolvent(const MonotoneOperator& op, double n, double mu, const Point& x);

/// Constant-input Skorokhod flow from alpha over time t, approximated by m
/// implicit resolvent steps x <- J_{t/m}(x).
Point flow(const MonotoneOperator& op, const Point& alpha, double t, int substeps);

/// Same as `flow`, returning every iterate (alpha first). For indicator
/// operators the flow is stationary and only {alpha, end} is returned.
std::vector<Point> flow_trace(const MonotoneOperator& op, const Point& alpha, double t,
                              int substeps);

struct DykstraOptions {
    double tol = 1e-10;
    int max_iter = 10000;
};

MonotoneOperator indicator_halfspace(const Point& normal, double offset);
/// Subdifferential of the indicator of [0, inf) in R^1.
MonotoneOperator indicator_halfline();
MonotoneOperator indicator_box(const Point& lo, const Point& hi);
MonotoneOperator indicator_ball(const Point& center, double radius);
MonotoneOperator indicator_polyhedron(std::vector<std::pair<Point, double>> halfspaces,
                                      DykstraOptions options = {});
/// A(x) = M x with <Mx, x> >= 0.
MonotoneOperator linear_monotone(const Matrix& m);
/// A = {0} on R^d.
MonotoneOperator zero_operator(int dimension);

using ProxMap = std::function<Point(double lambda, const Point& z)>;
using DomainProjector = std::function<Point(const Point& z)>;

/// Subdifferential of a convex function given by its proximal map. The
/// domain projection defaults to the identity (phi finite everywhere).
MonotoneOperator convex_prox(int dimension, ProxMap prox, DomainProjector domain = {},
                             std::string name = "custom");
/// phi(x) = weight * |x|_1, resolvent is soft thresholding.
MonotoneOperator prox_l1(int dimension, double weight);
/// phi(x) = weight/2 * |x|^2.
MonotoneOperator prox_quadratic(int dimension, double weight);

/// Builds an operator from its serialized form. Throws std::invalid_argument.
MonotoneOperator make_operator(const OperatorSpec& spec);

}  // namespace mmsde
