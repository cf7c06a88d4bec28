#include "mmsde/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mmsde/errors.hpp"

namespace mmsde {
namespace {

void check_driver(const MonotoneOperator& op, const Coefficient& f, const DriverRealization& driver) {
    const int d = op.dimension();
    if (driver.h.dimension() != d || driver.z.dimension() != d || f.dimension() != d) {
        throw std::invalid_argument("scheme: operator, coefficient and driver dimensions differ");
    }
}

Matrix columns(const std::vector<Point>& points) {
    Matrix m(points.front().size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) {
        m.col(static_cast<Eigen::Index>(k)) = points[k];
    }
    return m;
}

SchemeOutput run_yosida(const MonotoneOperator& op, const GeneralizedProjection* projection, double n,
                        const Coefficient& f, const DriverRealization& driver, int substeps) {
    check_driver(op, f, driver);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("yosida_scheme: n must be positive and finite");
    }
    if (substeps < 1) {
        throw std::invalid_argument("yosida_scheme: substeps must be >= 1");
    }
    const Partition& grid = driver.grid;
    const std::size_t size = grid.size();
    const double threshold = 1.0 / n;
    std::vector<Point> x(size);
    Matrix integral = Matrix::Zero(op.dimension(), static_cast<Eigen::Index>(size));
    x[0] = driver.h.value(0);
    for (std::size_t k = 1; k < size; ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        const Point dz = driver.z.jump(k);
        const Point stoch = f(x[k - 1]) * dz;
        integral.col(col) = integral.col(col - 1) + stoch;
        Point state = x[k - 1] + (driver.h.jump(k) + stoch);
        if (projection != nullptr) {
            const double big = std::max(driver.h_jumps[k].norm(), driver.z_jumps[k].norm());
            if (big > threshold) {
                state = (*projection)(op, state);
            }
        }
        const double mu = (grid[k] - grid[k - 1]) / substeps;
        for (int s = 0; s < substeps; ++s) {
            state = yosida_resolvent(op, n, mu, state);
        }
        x[k] = std::move(state);
    }
    StepPath xp(grid, columns(x));
    StepPath yp(grid, driver.h.values() + integral);
    StepPath kp(grid, yp.values() - xp.values());
    return SchemeOutput{projection != nullptr ? SchemeKind::modified_yosida : SchemeKind::yosida,
                        std::move(xp), std::move(kp), std::move(yp), n, grid.mesh(), substeps,
                        std::nullopt};
}

}  // namespace

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::euler:
            return "euler";
        case SchemeKind::yosida:
            return "yosida";
        case SchemeKind::modified_yosida:
            return "modified_yosida";
    }
    return "unknown";
}

SchemeKind parse_scheme(const std::string& name) {
    if (name == "euler") {
        return SchemeKind::euler;
    }
    if (name == "yosida") {
        return SchemeKind::yosida;
    }
    if (name == "modified_yosida") {
        return SchemeKind::modified_yosida;
    }
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

SchemeOutput euler_scheme(const MonotoneOperator& op, const GeneralizedProjection& projection,
                          const Coefficient& f, const DriverRealization& driver, int flow_substeps,
                          bool record_traces) {
    check_driver(op, f, driver);
    const Partition& grid = driver.grid;
    SkorokhodOptions options;
    options.flow_substeps = flow_substeps;
    options.record_traces = record_traces;
    SkorokhodRecursion recursion(op, projection, driver.h.value(0), options);
    Matrix integral = Matrix::Zero(op.dimension(), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        const Point& left = recursion.advance(grid[k] - grid[k - 1]);
        const Point stoch = f(left) * driver.z.jump(k);
        integral.col(col) = integral.col(col - 1) + stoch;
        recursion.jump(driver.h.jump(k) + stoch);
    }
    StepPath y(grid, driver.h.values() + integral);
    SkorokhodSolution solution = std::move(recursion).finish(y);
    SchemeOutput out{SchemeKind::euler, solution.x, solution.k, std::move(y), 0.0, grid.mesh(),
                     flow_substeps, std::nullopt};
    out.skorokhod = std::move(solution);
    return out;
}

SchemeOutput yosida_scheme(const MonotoneOperator& op, double n, const Coefficient& f,
                           const DriverRealization& driver, int substeps) {
    return run_yosida(op, nullptr, n, f, driver, substeps);
}

SchemeOutput modified_yosida_scheme(const MonotoneOperator& op,
                                    const GeneralizedProjection& projection, double n,
                                    const Coefficient& f, const DriverRealization& driver,
                                    int substeps) {
    return run_yosida(op, &projection, n, f, driver, substeps);
}

StepPath yosida_j_path(const MonotoneOperator& op, double n, const StepPath& x) {
    Matrix values(x.dimension(), static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) {
        values.col(static_cast<Eigen::Index>(k)) = yosida_j(op, n, x.value(k));
    }
    return StepPath(x.partition(), std::move(values));
}

TruncatedRun run_truncated(const Coefficient& f, double initial_radius,
                           const std::function<SchemeOutput(const Coefficient&)>& run,
                           int max_escalations) {
    double radius = initial_radius;
    for (int escalations = 0; escalations <= max_escalations; ++escalations) {
        SchemeOutput out = run(truncate(f, radius));
        const double reach = out.x.values().colwise().norm().maxCoeff();
        if (reach <= radius) {
            return TruncatedRun{std::move(out), radius, escalations};
        }
        if (!std::isfinite(reach)) {
            break;
        }
        radius = std::floor(reach) + 1.0;
    }
    throw NonConvergence("run_truncated: truncation radius kept escalating", Point(), radius);
}

Metadata describe(const SchemeOutput& out, const DriverRealization& driver,
                  const MonotoneOperator& op, const GeneralizedProjection& projection,
                  const Coefficient& f) {
    Metadata meta;
    meta["scheme"] = to_string(out.scheme);
    meta["n"] = format_real(out.yosida_n);
    meta["mesh"] = format_real(out.mesh);
    meta["grid_points"] = std::to_string(driver.grid.size());
    meta["flow_substeps"] = std::to_string(out.flow_substeps);
    meta["seed"] = std::to_string(driver.seed);
    meta["trajectory"] = std::to_string(driver.trajectory);
    meta["operator"] = op.kind();
    meta["projection"] = projection.name();
    meta["projection_c"] = format_real(projection.c);
    meta["coefficient"] = f.spec().kind;
    if (f.truncation()) {
        meta["truncation"] = format_real(*f.truncation());
    }
    return meta;
}

void write_scheme_output(std::ostream& out, const SchemeOutput& output, const Metadata& meta,
                         Format format) {
    LabelledPaths table;
    table.metadata = meta;
    table.paths.emplace_back("x", output.x);
    table.paths.emplace_back("k", output.k);
    write_labelled(out, table, format);
}

}  // namespace mmsde
