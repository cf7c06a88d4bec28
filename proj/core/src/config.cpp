#include "mmsde/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mmsde/errors.hpp"
#include "mmsde/path_io.hpp"
#include "mmsde/schemes.hpp"

namespace mmsde {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"operator",
         {"kind", "dimension", "normal", "offset", "lo", "hi", "center", "radius", "halfspaces",
          "matrix", "weight"}},
        {"projection", {"kind", "c", "tol", "max_iter"}},
        {"coefficient", {"kind", "matrix", "scale", "power", "truncation"}},
        {"driver",
         {"h0", "h_vol", "h_drift", "h_jump_rate", "h_jump_law", "h_jump_mean", "h_jump_cov",
          "h_jump_radius", "h_jump_value", "z_vol", "z_drift", "z_jump_rate", "z_jump_law",
          "z_jump_mean", "z_jump_cov", "z_jump_radius", "z_jump_value"}},
        {"experiment",
         {"horizon", "levels", "yosida_levels", "trajectories", "seed", "out", "checkpoints",
          "checkpoint_continuity", "reference_refinement", "flow_substeps", "yosida_substeps",
          "workers", "scheme", "level", "trajectory", "yosida_n"}},
        {"verify", {"tests", "samples"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream stream(s);
    std::string item;
    while (std::getline(stream, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

class Reader {
  public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) {
            return std::nullopt;
        }
        const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!value) {
            return std::nullopt;
        }
        return trim(*value);
    }

    double real(const std::string& section, const std::string& key, double fallback) const {
        const auto text = raw(section, key);
        return text ? to_real(*text, field(section, key)) : fallback;
    }

    template <class Int>
    Int integer(const std::string& section, const std::string& key, Int fallback) const {
        const auto text = raw(section, key);
        if (!text) {
            return fallback;
        }
        std::uint64_t v = 0;
        const char* end = text->data() + text->size();
        const auto [ptr, ec] = std::from_chars(text->data(), end, v);
        if (ec != std::errc() || ptr != end || text->empty() ||
            v > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
            throw ConfigError(field(section, key),
                              "expected a nonnegative integer, got '" + *text + "'");
        }
        return static_cast<Int>(v);
    }

    std::string string(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        return raw(section, key).value_or(fallback);
    }

    std::optional<std::vector<double>> list(const std::string& section, const std::string& key) const {
        const auto text = raw(section, key);
        if (!text) {
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& item : split(*text, ',')) {
            if (!item.empty()) {
                out.push_back(to_real(item, field(section, key)));
            }
        }
        return out;
    }

    /// A d-vector; a single number is broadcast.
    std::optional<Point> vector(const std::string& section, const std::string& key, int d) const {
        const auto values = list(section, key);
        if (!values) {
            return std::nullopt;
        }
        if (values->size() == 1) {
            return Point::Constant(d, values->front());
        }
        if (static_cast<int>(values->size()) != d) {
            throw ConfigError(field(section, key), "expected " + std::to_string(d) + " components");
        }
        return Eigen::Map<const Point>(values->data(), d);
    }

    /// Rows separated by ';'. A single number s means s * I.
    std::optional<Matrix> matrix(const std::string& section, const std::string& key, int d) const {
        const auto text = raw(section, key);
        if (!text) {
            return std::nullopt;
        }
        const auto rows = split(*text, ';');
        if (rows.size() == 1 && split(rows.front(), ',').size() == 1) {
            return Matrix(to_real(rows.front(), field(section, key)) * Matrix::Identity(d, d));
        }
        Matrix m(d, d);
        if (static_cast<int>(rows.size()) != d) {
            throw ConfigError(field(section, key), "expected " + std::to_string(d) + " rows");
        }
        for (int i = 0; i < d; ++i) {
            const auto cells = split(rows[static_cast<std::size_t>(i)], ',');
            if (static_cast<int>(cells.size()) != d) {
                throw ConfigError(field(section, key), "expected " + std::to_string(d) + " columns");
            }
            for (int j = 0; j < d; ++j) {
                m(i, j) = to_real(cells[static_cast<std::size_t>(j)], field(section, key));
            }
        }
        return m;
    }

    static std::string field(const std::string& section, const std::string& key) {
        return section + "." + key;
    }

  private:
    static double to_real(const std::string& text, const std::string& f) {
        try {
            return parse_real(text);
        } catch (const std::exception&) {
            throw ConfigError(f, "expected a number, got '" + text + "'");
        }
    }

    const pt::ptree& tree_;
};

int infer_dimension(const Reader& r) {
    if (const auto d = r.raw("operator", "dimension")) {
        return r.integer<int>("operator", "dimension", 1);
    }
    const std::string kind = r.string("operator", "kind", "halfline");
    for (const char* key : {"normal", "lo", "center"}) {
        if (const auto v = r.list("operator", key)) {
            return static_cast<int>(v->size());
        }
    }
    if (const auto m = r.raw("operator", "matrix")) {
        return static_cast<int>(split(*m, ';').size());
    }
    if (const auto h = r.raw("operator", "halfspaces")) {
        const auto rows = split(*h, ';');
        return static_cast<int>(split(rows.front(), ',').size()) - 1;
    }
    (void)kind;
    return 1;
}

OperatorSpec read_operator(const Reader& r, int d) {
    OperatorSpec s;
    s.kind = r.string("operator", "kind", "halfline");
    s.dimension = d;
    if (s.kind == "halfline" && d != 1) {
        throw ConfigError("operator.kind", "halfline requires dimension 1");
    }
    s.normal = r.vector("operator", "normal", d).value_or(Point::Constant(d, -1.0));
    s.offset = r.real("operator", "offset", 0.0);
    s.lo = r.vector("operator", "lo", d).value_or(Point::Zero(d));
    s.hi = r.vector("operator", "hi", d).value_or(Point::Ones(d));
    s.center = r.vector("operator", "center", d).value_or(Point::Zero(d));
    s.radius = r.real("operator", "radius", 1.0);
    s.weight = r.real("operator", "weight", 1.0);
    s.matrix = r.matrix("operator", "matrix", d).value_or(Matrix::Identity(d, d));
    if (const auto text = r.raw("operator", "halfspaces")) {
        for (const auto& row : split(*text, ';')) {
            const auto cells = split(row, ',');
            if (static_cast<int>(cells.size()) != d + 1) {
                throw ConfigError("operator.halfspaces", "each row needs d coefficients and an offset");
            }
            Point a(d);
            for (int i = 0; i < d; ++i) {
                a(i) = parse_real(cells[static_cast<std::size_t>(i)]);
            }
            s.halfspaces.emplace_back(a, parse_real(cells.back()));
        }
    }
    return s;
}

JumpLaw read_jump_law(const Reader& r, const std::string& prefix, int d) {
    JumpLaw law;
    const std::string kind = r.string("driver", prefix + "jump_law", "gaussian");
    if (kind == "gaussian") {
        law.kind = JumpLaw::Kind::gaussian;
    } else if (kind == "uniform_ball") {
        law.kind = JumpLaw::Kind::uniform_ball;
    } else if (kind == "fixed") {
        law.kind = JumpLaw::Kind::fixed;
    } else {
        throw ConfigError("driver." + prefix + "jump_law", "expected gaussian|uniform_ball|fixed");
    }
    law.mean = r.vector("driver", prefix + "jump_mean", d).value_or(Point::Zero(d));
    law.covariance = r.matrix("driver", prefix + "jump_cov", d).value_or(Matrix::Identity(d, d));
    law.radius = r.real("driver", prefix + "jump_radius", 1.0);
    law.value = r.vector("driver", prefix + "jump_value", d).value_or(Point::Zero(d));
    return law;
}

ProcessSpec read_process(const Reader& r, const std::string& prefix, int d, double default_vol) {
    ProcessSpec p;
    p.vol = r.matrix("driver", prefix + "vol", d).value_or(default_vol * Matrix::Identity(d, d));
    p.drift = r.vector("driver", prefix + "drift", d).value_or(Point::Zero(d));
    p.jump_rate = r.real("driver", prefix + "jump_rate", 0.0);
    p.jumps = read_jump_law(r, prefix, d);
    return p;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    for (auto& item : split(text, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", std::string("malformed INI: ") + e.message() + " (line " +
                                        std::to_string(e.line()) + ")");
    }
    for (const auto& [section, child] : tree) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end()) {
            throw ConfigError(section, "unknown section");
        }
        if (!child.data().empty() && child.empty()) {
            throw ConfigError(section, "key outside of a section");
        }
        for (const auto& [key, value] : child) {
            if (!known->second.contains(key)) {
                throw ConfigError(section + "." + key, "unknown key");
            }
        }
    }

    const Reader r(tree);
    ExperimentConfig c;
    const int d = infer_dimension(r);
    if (d < 1) {
        throw ConfigError("operator.dimension", "must be >= 1");
    }
    c.op = read_operator(r, d);

    const std::string proj = r.string("projection", "kind", "classical");
    if (proj == "classical") {
        c.projection.kind = ProjectionKind::classical;
    } else if (proj == "elastic") {
        c.projection.kind = ProjectionKind::elastic;
    } else if (proj == "elastic_iterated") {
        c.projection.kind = ProjectionKind::elastic_iterated;
    } else {
        throw ConfigError("projection.kind", "expected classical|elastic|elastic_iterated");
    }
    c.projection.c = r.real("projection", "c", 0.0);
    c.projection.tol = r.real("projection", "tol", 1e-10);
    c.projection.max_iter = r.integer<std::size_t>("projection", "max_iter", 100000);

    c.coefficient.kind = r.string("coefficient", "kind", "constant");
    c.coefficient.dimension = d;
    c.coefficient.matrix = r.matrix("coefficient", "matrix", d).value_or(Matrix::Identity(d, d));
    c.coefficient.scale = r.real("coefficient", "scale", 1.0);
    c.coefficient.power = r.real("coefficient", "power", 2.0);
    if (r.raw("coefficient", "truncation")) {
        c.truncation = r.real("coefficient", "truncation", 2.0);
    }

    c.driver.dimension = d;
    c.driver.h0 = r.vector("driver", "h0", d).value_or(Point::Ones(d));
    c.driver.z = read_process(r, "z_", d, 1.0);
    c.driver.h = read_process(r, "h_", d, 0.0);

    c.horizon = r.real("experiment", "horizon", 1.0);
    if (const auto levels = r.list("experiment", "levels")) {
        c.levels.clear();
        for (const double v : *levels) {
            if (v < 1 || v != std::floor(v)) {
                throw ConfigError("experiment.levels", "levels must be positive integers");
            }
            c.levels.push_back(static_cast<std::size_t>(v));
        }
    }
    if (const auto levels = r.list("experiment", "yosida_levels")) {
        c.yosida_levels = *levels;
    }
    c.trajectories = r.integer<std::size_t>("experiment", "trajectories", c.trajectories);
    c.seed = r.integer<std::uint64_t>("experiment", "seed", c.seed);
    c.out_dir = r.string("experiment", "out", c.out_dir);
    if (const auto times = r.list("experiment", "checkpoints")) {
        c.checkpoints.clear();
        for (const double t : *times) {
            c.checkpoints.push_back({t, true});
        }
    } else {
        c.checkpoints = {{0.5 * c.horizon, true}};
    }
    if (const auto flags = r.raw("experiment", "checkpoint_continuity")) {
        const auto items = split_names(*flags);
        if (items.size() != c.checkpoints.size()) {
            throw ConfigError("experiment.checkpoint_continuity", "one flag per checkpoint required");
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i] != "true" && items[i] != "false" && items[i] != "1" && items[i] != "0") {
                throw ConfigError("experiment.checkpoint_continuity", "expected true|false");
            }
            c.checkpoints[i].continuity = items[i] == "true" || items[i] == "1";
        }
    }
    c.reference_refinement =
        r.integer<std::size_t>("experiment", "reference_refinement", c.reference_refinement);
    c.flow_substeps = r.integer<int>("experiment", "flow_substeps", c.flow_substeps);
    c.yosida_substeps = r.integer<int>("experiment", "yosida_substeps", c.yosida_substeps);
    c.workers = r.integer<std::size_t>("experiment", "workers", c.workers);
    c.scheme = r.string("experiment", "scheme", c.scheme);
    c.level = r.integer<std::size_t>("experiment", "level", c.level);
    c.trajectory = r.integer<std::uint64_t>("experiment", "trajectory", c.trajectory);
    c.yosida_n = r.real("experiment", "yosida_n", c.yosida_n);

    if (const auto tests = r.raw("verify", "tests")) {
        c.verify_tests = split_names(*tests);
    }
    c.verify_samples = r.integer<std::size_t>("verify", "samples", c.verify_samples);

    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open '" + path + "'");
    }
    return parse_config(in);
}

void validate(const ExperimentConfig& c) {
    MonotoneOperator op = [&] {
        try {
            return make_operator(c.op);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("operator", e.what());
        }
    }();
    if (!(c.projection.c >= 0.0 && c.projection.c <= 1.0)) {
        throw ConfigError("projection.c", "must lie in [0, 1]");
    }
    if (!(c.projection.tol > 0.0) || c.projection.max_iter == 0) {
        throw ConfigError("projection.tol", "tol must be > 0 and max_iter >= 1");
    }
    try {
        (void)make_coefficient(c.coefficient);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("coefficient", e.what());
    }
    if (c.truncation && !(*c.truncation >= 1.0)) {
        throw ConfigError("coefficient.truncation", "must be >= 1");
    }
    try {
        validate(c.driver);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("driver", e.what());
    }
    if (op.distance_to_domain(c.driver.h0) > kMembershipTol) {
        throw ConfigError("driver.h0", "initial point must lie in the domain closure");
    }
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) {
        throw ConfigError("experiment.horizon", "must be positive and finite");
    }
    if (c.levels.empty() || !std::is_sorted(c.levels.begin(), c.levels.end()) ||
        std::adjacent_find(c.levels.begin(), c.levels.end()) != c.levels.end() || c.levels.front() < 1) {
        throw ConfigError("experiment.levels", "must be a nonempty strictly increasing list of n >= 1");
    }
    for (std::size_t i = 0; i < c.yosida_levels.size(); ++i) {
        if (!(c.yosida_levels[i] > 0.0) || (i > 0 && !(c.yosida_levels[i] > c.yosida_levels[i - 1]))) {
            throw ConfigError("experiment.yosida_levels", "must be strictly increasing and positive");
        }
    }
    if (c.trajectories < 1) {
        throw ConfigError("experiment.trajectories", "must be >= 1");
    }
    for (const auto& cp : c.checkpoints) {
        if (!(cp.time > 0.0 && cp.time <= c.horizon)) {
            throw ConfigError("experiment.checkpoints", "checkpoints must lie in (0, T]");
        }
    }
    if (c.reference_refinement < 1) {
        throw ConfigError("experiment.reference_refinement", "must be >= 1");
    }
    if (c.flow_substeps < 1) {
        throw ConfigError("experiment.flow_substeps", "must be >= 1");
    }
    if (c.yosida_substeps < 1) {
        throw ConfigError("experiment.yosida_substeps", "must be >= 1");
    }
    if (c.workers < 1) {
        throw ConfigError("experiment.workers", "must be >= 1");
    }
    try {
        (void)parse_scheme(c.scheme);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("experiment.scheme", e.what());
    }
    if (c.level < 1) {
        throw ConfigError("experiment.level", "must be >= 1");
    }
    if (!(c.yosida_n > 0.0)) {
        throw ConfigError("experiment.yosida_n", "must be > 0");
    }
    static const std::set<std::string> groups{"resolvent", "yosida", "projection", "skorokhod",
                                              "comparison"};
    for (const auto& t : c.verify_tests) {
        if (!groups.contains(t)) {
            throw ConfigError("verify.tests", "unknown property group '" + t + "'");
        }
    }
}

std::string default_config_text() {
    return R"([operator]
# halfline | halfspace | box | ball | polyhedron | linear | zero | prox_l1 | prox_quadratic
kind = halfline
# dimension = 1          (inferred from the parameters when omitted)
# normal = -1            halfspace {x : <normal, x> <= offset}
# offset = 0
# lo = 0, 0              box
# hi = 1, 1
# center = 0, 0          ball
# radius = 1
# halfspaces = -1, 1, 0; 1, 1, 0      polyhedron rows a_1..a_d, b
# matrix = 1, 0; 0, 1    linear (or a scalar s meaning s*I)
# weight = 1             prox_l1, prox_quadratic

[projection]
# classical | elastic | elastic_iterated
kind = classical
c = 0
tol = 1e-10
max_iter = 100000

[coefficient]
# zero | constant | linear_diagonal | power_diagonal
kind = constant
matrix = 1
scale = 1
power = 2
# truncation = 2         initial radius N for locally Lipschitz f

[driver]
h0 = 1
h_vol = 0
h_drift = 0
h_jump_rate = 0
z_vol = 1
z_drift = 0
z_jump_rate = 0
# gaussian | uniform_ball | fixed
z_jump_law = gaussian
z_jump_mean = 0
z_jump_cov = 1
z_jump_radius = 1
z_jump_value = 0

[experiment]
horizon = 1
levels = 8, 32, 128
yosida_levels = 4, 16, 64
trajectories = 100
seed = 0
out = .
checkpoints = 0.5
checkpoint_continuity = true
reference_refinement = 16
flow_substeps = 16
yosida_substeps = 1
workers = 1
scheme = euler
level = 32
trajectory = 0
yosida_n = 16

[verify]
tests = resolvent, yosida, projection, skorokhod, comparison
samples = 1000
)";
}

}  // namespace mmsde
