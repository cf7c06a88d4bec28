#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mmsde/coefficients.hpp"
#include "mmsde/drivers.hpp"
#include "mmsde/operators.hpp"
#include "mmsde/path_io.hpp"
#include "mmsde/projections.hpp"
#include "mmsde/skorokhod.hpp"

namespace mmsde {

enum class SchemeKind { euler, yosida, modified_yosida };

std::string to_string(SchemeKind kind);
/// "euler", "yosida" or "modified_yosida"; throws std::invalid_argument.
SchemeKind parse_scheme(const std::string& name);

/// Grid values of an approximate solution of X + K = H + int <f(X_-), dZ>.
struct SchemeOutput {
    SchemeKind scheme = SchemeKind::euler;
    StepPath x;
    StepPath k;
    /// Y = H + sum f(X_{t_k-}) Delta Z (left-point rule).
    StepPath y;
    double yosida_n = 0.0;
    double mesh = 0.0;
    int flow_substeps = 0;
    /// Euler only: the full Skorokhod solution of the step input Y.
    std::optional<SkorokhodSolution> skorokhod;
};

/// Euler-type scheme: at each grid point project
/// X_{t-} + Delta H + f(X_{t-}) Delta Z, then follow the constant-input flow.
/// Equivalently (X, K) = SP(A, Pi; Y) for the step input Y.
SchemeOutput euler_scheme(const MonotoneOperator& op, const GeneralizedProjection& projection,
                          const Coefficient& f, const DriverRealization& driver,
                          int flow_substeps = 16, bool record_traces = false);

/// Yosida scheme: explicit increment Delta H + f(X) Delta Z, then the drift
/// -A_n integrated implicitly through (I + mu A_n)^{-1} over `substeps`
/// equal pieces of each interval.
SchemeOutput yosida_scheme(const MonotoneOperator& op, double n, const Coefficient& f,
                           const DriverRealization& driver, int substeps = 1);

/// Yosida scheme with the projection correction: at grid points where the
/// jump part of H or Z exceeds 1/n in Euclidean norm, the post-increment
/// state is replaced by its generalized projection before the drift step.
SchemeOutput modified_yosida_scheme(const MonotoneOperator& op,
                                    const GeneralizedProjection& projection, double n,
                                    const Coefficient& f, const DriverRealization& driver,
                                    int substeps = 1);

/// Grid path of J_n(X).
StepPath yosida_j_path(const MonotoneOperator& op, double n, const StepPath& x);

struct TruncatedRun {
    SchemeOutput output;
    double radius = 0.0;
    int escalations = 0;
};

/// Runs `run` with f truncated at radius N. Whenever the trajectory leaves
/// B(0, N), N grows to the next integer above sup |X| and the run repeats,
/// so f_N = f along the returned trajectory.
TruncatedRun run_truncated(const Coefficient& f, double initial_radius,
                           const std::function<SchemeOutput(const Coefficient&)>& run,
                           int max_escalations = 64);

/// Metadata header for exported scheme outputs.
Metadata describe(const SchemeOutput& out, const DriverRealization& driver,
                  const MonotoneOperator& op, const GeneralizedProjection& projection,
                  const Coefficient& f);

/// Exports X and K (component column) with the metadata header.
void write_scheme_output(std::ostream& out, const SchemeOutput& output, const Metadata& meta,
                         Format format);

}  // namespace mmsde
