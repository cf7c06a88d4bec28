#include "mmsde/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmsde/errors.hpp"

namespace mmsde {
namespace {

void require_finite(const Point& z, const char* what) {
    if (!z.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite input");
    }
}

void require_dimension(const Point& z, int d, const char* what) {
    if (z.size() != d) {
        throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                    std::to_string(d) + ", got " + std::to_string(z.size()));
    }
}

class HalfspaceIndicator final : public OperatorModel {
  public:
    HalfspaceIndicator(Point normal, double offset, bool halfline)
        : normal_(std::move(normal)), offset_(offset), halfline_(halfline) {
        norm2_ = normal_.squaredNorm();
        if (!(norm2_ > 0.0) || !normal_.allFinite() || !std::isfinite(offset_)) {
            throw std::invalid_argument("indicator_halfspace: normal must be finite and nonzero");
        }
    }

    int dimension() const override { return static_cast<int>(normal_.size()); }
    Point resolvent(double, const Point& z) const override { return project_domain(z); }
    Point project_domain(const Point& z) const override {
        if (halfline_) {
            return z(0) >= 0.0 ? z : Point::Zero(1);
        }
        const double excess = normal_.dot(z) - offset_;
        if (excess <= 0.0) {
            return z;
        }
        return z - (excess / norm2_) * normal_;
    }
    bool is_indicator() const override { return true; }
    std::optional<Point> graph_sample(const Point& z) const override {
        return Point::Zero(z.size());
    }
    OperatorSpec spec() const override {
        OperatorSpec s;
        s.kind = halfline_ ? "halfline" : "halfspace";
        s.dimension = dimension();
        s.normal = normal_;
        s.offset = offset_;
        return s;
    }

  private:
    Point normal_;
    double offset_;
    double norm2_ = 0.0;
    bool halfline_;
};

class BoxIndicator final : public OperatorModel {
  public:
    BoxIndicator(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != hi_.size() || lo_.size() == 0) {
            throw std::invalid_argument("indicator_box: bounds must have equal positive size");
        }
        if (!lo_.allFinite() || !hi_.allFinite() || !(lo_.array() < hi_.array()).all()) {
            throw std::invalid_argument("indicator_box: require lo < hi componentwise");
        }
    }

    int dimension() const override { return static_cast<int>(lo_.size()); }
    Point resolvent(double, const Point& z) const override { return project_domain(z); }
    Point project_domain(const Point& z) const override {
        return z.cwiseMax(lo_).cwiseMin(hi_);
    }
    bool is_indicator() const override { return true; }
    std::optional<Point> graph_sample(const Point& z) const override {
        return Point::Zero(z.size());
    }
    OperatorSpec spec() const override {
        OperatorSpec s;
        s.kind = "box";
        s.dimension = dimension();
        s.lo = lo_;
        s.hi = hi_;
        return s;
    }

  private:
    Point lo_, hi_;
};

class BallIndicator final : public OperatorModel {
  public:
    BallIndicator(Point center, double radius) : center_(std::move(center)), radius_(radius) {
        if (center_.size() == 0 || !center_.allFinite() || !(radius_ > 0.0) ||
            !std::isfinite(radius_)) {
            throw std::invalid_argument("indicator_ball: require finite center and radius > 0");
        }
    }

    int dimension() const override { return static_cast<int>(center_.size()); }
    Point resolvent(double, const Point& z) const override { return project_domain(z); }
    Point project_domain(const Point& z) const override {
        const Point offset = z - center_;
        const double r = offset.norm();
        if (r <= radius_) {
            return z;
        }
        return center_ + (radius_ / r) * offset;
    }
    bool is_indicator() const override { return true; }
    std::optional<Point> graph_sample(const Point& z) const override {
        return Point::Zero(z.size());
    }
    OperatorSpec spec() const override {
        OperatorSpec s;
        s.kind = "ball";
        s.dimension = dimension();
        s.center = center_;
        s.radius = radius_;
        return s;
    }

  private:
    Point center_;
    double radius_;
};

// Dykstra's alternating projections onto an intersection of halfspaces.
Point dykstra(const std::vector<std::pair<Point, double>>& rows, const std::vector<double>& norms2,
              const Point& z, const DykstraOptions& opt) {
    const auto violation = [&](const Point& x) {
        double worst = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            worst = std::max(worst, (rows[i].first.dot(x) - rows[i].second) / std::sqrt(norms2[i]));
        }
        return worst;
    };
    if (violation(z) <= 0.0) {
        return z;
    }
    Point x = z;
    std::vector<Point> increments(rows.size(), Point::Zero(z.size()));
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        const Point cycle_start = x;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Point shifted = x + increments[i];
            const double excess = rows[i].first.dot(shifted) - rows[i].second;
            Point projected = shifted;
            if (excess > 0.0) {
                projected -= (excess / norms2[i]) * rows[i].first;
            }
            increments[i] = shifted - projected;
            x = std::move(projected);
        }
        if ((x - cycle_start).norm() < opt.tol && violation(x) < opt.tol) {
            return x;
        }
    }
    throw NonConvergence("indicator_polyhedron: Dykstra projection did not converge", x,
                         violation(x));
}

class PolyhedronIndicator final : public OperatorModel {
  public:
    PolyhedronIndicator(std::vector<std::pair<Point, double>> rows, DykstraOptions options)
        : rows_(std::move(rows)), options_(options) {
        if (rows_.empty()) {
            throw std::invalid_argument("indicator_polyhedron: need at least one halfspace");
        }
        const auto d = rows_.front().first.size();
        double scale = 1.0;
        for (const auto& [a, b] : rows_) {
            if (a.size() != d || d == 0 || !a.allFinite() || !std::isfinite(b) ||
                !(a.squaredNorm() > 0.0)) {
                throw std::invalid_argument("indicator_polyhedron: malformed halfspace");
            }
            norms2_.push_back(a.squaredNorm());
            scale = std::max(scale, std::abs(b));
        }
        // Nonempty interior: the set shrunk by a small margin must be feasible.
        const double margin = 1e-7 * scale;
        std::vector<std::pair<Point, double>> shrunk;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            shrunk.emplace_back(rows_[i].first, rows_[i].second - margin * std::sqrt(norms2_[i]));
        }
        bool interior = false;
        try {
            const Point x = dykstra(shrunk, norms2_, Point::Zero(d), options_);
            interior = true;
            for (const auto& [a, b] : rows_) {
                interior = interior && a.dot(x) < b;
            }
        } catch (const NonConvergence&) {
            interior = false;
        }
        if (!interior) {
            throw std::invalid_argument("indicator_polyhedron: set is empty or has empty interior");
        }
    }

    int dimension() const override { return static_cast<int>(rows_.front().first.size()); }
    Point resolvent(double, const Point& z) const override { return project_domain(z); }
    Point project_domain(const Point& z) const override {
        return dykstra(rows_, norms2_, z, options_);
    }
    bool is_indicator() const override { return true; }
    std::optional<Point> graph_sample(const Point& z) const override {
        return Point::Zero(z.size());
    }
    OperatorSpec spec() const override {
        OperatorSpec s;
        s.kind = "polyhedron";
        s.dimension = dimension();
        s.halfspaces = rows_;
        return s;
    }

  private:
    std::vector<std::pair<Point, double>> rows_;
    std::vector<double> norms2_;
    DykstraOptions options_;
};

class LinearOperator final : public OperatorModel {
  public:
    explicit LinearOperator(Matrix m, bool zero) : m_(std::move(m)), zero_(zero) {
        if (m_.rows() != m_.cols() || m_.rows() == 0 || !m_.allFinite()) {
            throw std::invalid_argument("linear_monotone: matrix must be square, finite, nonempty");
        }
        const Matrix sym = 0.5 * (m_ + m_.transpose());
        const double smallest = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
        if (smallest < -1e-12 * std::max(1.0, m_.norm())) {
            throw std::invalid_argument("linear_monotone: matrix is not monotone (<Mx,x> < 0)");
        }
    }

    int dimension() const override { return static_cast<int>(m_.rows()); }
    Point resolvent(double lambda, const Point& z) const override {
        if (zero_) {
            return z;
        }
        const Matrix system = Matrix::Identity(m_.rows(), m_.cols()) + lambda * m_;
        return system.partialPivLu().solve(z);
    }
    Point project_domain(const Point& z) const override { return z; }
    std::optional<Point> graph_sample(const Point& z) const override { return Point(m_ * z); }
    OperatorSpec spec() const override {
        OperatorSpec s;
        s.kind = zero_ ? "zero" : "linear";
        s.dimension = dimension();
        s.matrix = m_;
        return s;
    }

  private:
    Matrix m_;
    bool zero_;
};

class ProxOperator final : public OperatorModel {
  public:
    ProxOperator(int dimension, ProxMap prox, DomainProjector domain, std::string kind, double weight)
        : dimension_(dimension),
          prox_(std::move(prox)),
          domain_(std::move(domain)),
          kind_(std::move(kind)),
          weight_(weight) {
        if (dimension_ < 1 || !prox_) {
            throw std::invalid_argument("convex_prox: need dimension >= 1 and a proximal map");
        }
    }

    int dimension() const override { return dimension_; }
    Point resolvent(double lambda, const Point& z) const override { return prox_(lambda, z); }
    Point project_domain(const Point& z) const override { return domain_ ? domain_(z) : z; }
    std::optional<Point> graph_sample(const Point& z) const override {
        if (kind_ == "prox_quadratic") {
            return Point(weight_ * z);
        }
        if (kind_ == "prox_l1" && (z.array() != 0.0).all()) {
            return Point(weight_ * z.array().sign().matrix());
        }
        return std::nullopt;
    }
    OperatorSpec spec() const override {
        OperatorSpec s;
        s.kind = kind_;
        s.dimension = dimension_;
        s.weight = weight_;
        return s;
    }

  private:
    int dimension_;
    ProxMap prox_;
    DomainProjector domain_;
    std::string kind_;
    double weight_;
};

}  // namespace

MonotoneOperator::MonotoneOperator(std::shared_ptr<const OperatorModel> model)
    : model_(std::move(model)) {
    if (!model_) {
        throw std::invalid_argument("MonotoneOperator: null model");
    }
    kind_ = model_->spec().kind;
}

Point MonotoneOperator::resolve(double lambda, const Point& z) const {
    if (!(lambda >= kMinResolventStep) || !std::isfinite(lambda)) {
        throw std::invalid_argument("resolve: lambda must be finite and >= 1e-15");
    }
    require_dimension(z, dimension(), "resolve");
    require_finite(z, "resolve");
    return model_->resolvent(lambda, z);
}

Point MonotoneOperator::project_domain(const Point& z) const {
    require_dimension(z, dimension(), "project_domain");
    require_finite(z, "project_domain");
    return model_->project_domain(z);
}

double MonotoneOperator::distance_to_domain(const Point& z) const {
    return (z - project_domain(z)).norm();
}

bool MonotoneOperator::contains(const Point& z, double tol) const {
    return distance_to_domain(z) <= tol;
}

std::optional<Point> MonotoneOperator::graph_sample(const Point& z) const {
    require_dimension(z, dimension(), "graph_sample");
    return model_->graph_sample(z);
}

std::pair<Point, Point> MonotoneOperator::graph_point(double lambda, const Point& z) const {
    Point alpha = resolve(lambda, z);
    Point beta = (z - alpha) / lambda;
    return {std::move(alpha), std::move(beta)};
}

Point resolve(const MonotoneOperator& op, double lambda, const Point& z) {
    return op.resolve(lambda, z);
}

Point yosida_j(const MonotoneOperator& op, double n, const Point& z) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("yosida_j: n must be positive and finite");
    }
    return op.resolve(1.0 / n, z);
}

Point yosida_a(const MonotoneOperator& op, double n, const Point& z) {
    return n * (z - yosida_j(op, n, z));
}

Point yosida_resolvent(const MonotoneOperator& op, double n, double mu, const Point& x) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("yosida_resolvent: n must be positive and finite");
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("yosida_resolvent: step must be nonnegative and finite");
    }
    if (mu == 0.0) {
        return x;
    }
    const double lambda = 1.0 / n;
    const double total = lambda + mu;
    return (lambda / total) * x + (mu / total) * op.resolve(total, x);
}

std::vector<Point> flow_trace(const MonotoneOperator& op, const Point& alpha, double t,
                              int substeps) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("flow: t must be finite and >= 0");
    }
    if (substeps < 1) {
        throw std::invalid_argument("flow: substeps must be >= 1");
    }
    const double distance = op.distance_to_domain(alpha);
    if (distance > kMembershipTol) {
        throw DomainViolation("flow: initial point outside the domain closure", distance);
    }
    std::vector<Point> trace{alpha};
    if (t == 0.0) {
        return trace;
    }
    if (op.is_indicator()) {
        trace.push_back(op.project_domain(alpha));
        return trace;
    }
    const double lambda = t / substeps;
    if (lambda < kMinResolventStep) {
        throw std::invalid_argument("flow: step t/substeps below 1e-15");
    }
    trace.reserve(static_cast<std::size_t>(substeps) + 1);
    for (int i = 0; i < substeps; ++i) {
        trace.push_back(op.resolve(lambda, trace.back()));
    }
    return trace;
}

Point flow(const MonotoneOperator& op, const Point& alpha, double t, int substeps) {
    auto trace = flow_trace(op, alpha, t, substeps);
    return std::move(trace.back());
}

MonotoneOperator indicator_halfspace(const Point& normal, double offset) {
    return MonotoneOperator(std::make_shared<HalfspaceIndicator>(normal, offset, false));
}

MonotoneOperator indicator_halfline() {
    return MonotoneOperator(std::make_shared<HalfspaceIndicator>(Point::Constant(1, -1.0), 0.0, true));
}

MonotoneOperator indicator_box(const Point& lo, const Point& hi) {
    return MonotoneOperator(std::make_shared<BoxIndicator>(lo, hi));
}

MonotoneOperator indicator_ball(const Point& center, double radius) {
    return MonotoneOperator(std::make_shared<BallIndicator>(center, radius));
}

MonotoneOperator indicator_polyhedron(std::vector<std::pair<Point, double>> halfspaces,
                                      DykstraOptions options) {
    return MonotoneOperator(std::make_shared<PolyhedronIndicator>(std::move(halfspaces), options));
}

MonotoneOperator linear_monotone(const Matrix& m) {
    return MonotoneOperator(std::make_shared<LinearOperator>(m, false));
}

MonotoneOperator zero_operator(int dimension) {
    if (dimension < 1) {
        throw std::invalid_argument("zero_operator: dimension must be >= 1");
    }
    return MonotoneOperator(
        std::make_shared<LinearOperator>(Matrix::Zero(dimension, dimension), true));
}

MonotoneOperator convex_prox(int dimension, ProxMap prox, DomainProjector domain, std::string name) {
    return MonotoneOperator(std::make_shared<ProxOperator>(dimension, std::move(prox),
                                                           std::move(domain), std::move(name), 0.0));
}

MonotoneOperator prox_l1(int dimension, double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw std::invalid_argument("prox_l1: weight must be finite and >= 0");
    }
    auto prox = [weight](double lambda, const Point& z) -> Point {
        const double threshold = lambda * weight;
        return z.unaryExpr([threshold](double v) {
            return std::copysign(std::max(std::abs(v) - threshold, 0.0), v);
        });
    };
    return MonotoneOperator(
        std::make_shared<ProxOperator>(dimension, prox, DomainProjector{}, "prox_l1", weight));
}

MonotoneOperator prox_quadratic(int dimension, double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw std::invalid_argument("prox_quadratic: weight must be finite and >= 0");
    }
    auto prox = [weight](double lambda, const Point& z) -> Point { return z / (1.0 + lambda * weight); };
    return MonotoneOperator(std::make_shared<ProxOperator>(dimension, prox, DomainProjector{},
                                                           "prox_quadratic", weight));
}

MonotoneOperator make_operator(const OperatorSpec& s) {
    if (s.kind == "halfline") {
        return indicator_halfline();
    }
    if (s.kind == "halfspace") {
        return indicator_halfspace(s.normal, s.offset);
    }
    if (s.kind == "box") {
        return indicator_box(s.lo, s.hi);
    }
    if (s.kind == "ball") {
        return indicator_ball(s.center, s.radius);
    }
    if (s.kind == "polyhedron") {
        return indicator_polyhedron(s.halfspaces);
    }
    if (s.kind == "linear") {
        return linear_monotone(s.matrix);
    }
    if (s.kind == "zero") {
        return zero_operator(s.dimension);
    }
    if (s.kind == "prox_l1") {
        return prox_l1(s.dimension, s.weight);
    }
    if (s.kind == "prox_quadratic") {
        return prox_quadratic(s.dimension, s.weight);
    }
    throw std::invalid_argument("make_operator: unknown operator kind '" + s.kind + "'");
}

}  // namespace mmsde
