#include "bsnet/cli/run_config.hpp"

#include <cmath>

#include "bsnet/errors.hpp"
#include "bsnet/mapping.hpp"

namespace bsnet::cli {

using io::ConfigError;

namespace {

std::size_t get_count(const io::Config& cfg, const std::string& key, std::size_t fallback) {
    long long v = cfg.get_int(key, static_cast<long long>(fallback));
    if (v < 0) throw ConfigError(key, "must be non-negative");
    return static_cast<std::size_t>(v);
}

OptimizerKind parse_optimizer(const std::string& key, const std::string& s) {
    if (s == "adam") return OptimizerKind::adam;
    if (s == "sgd") return OptimizerKind::sgd;
    if (s == "rmsprop") return OptimizerKind::rmsprop;
    throw ConfigError(key, "expected adam, sgd or rmsprop, got '" + s + "'");
}

KernelKind parse_kernel(const std::string& key, const std::string& s) {
    if (s == "reference") return KernelKind::reference;
    if (s == "serial") return KernelKind::serial;
    if (s == "openmp") return KernelKind::openmp;
    throw ConfigError(key, "expected reference, serial or openmp, got '" + s + "'");
}

struct FamilyDefaults {
    double r, sigma, K, T, alpha;
    std::size_t N, points, n_hidden;
};

FamilyDefaults defaults_for(const std::string& problem) {
    if (problem == "fractional") return {0.05, 0.25, 0.0, 1.0, 0.5, 10, 60, 6};
    if (problem == "european_put") return {0.05, 0.2, 10.0, 1.0, 1.0, 10, 110, 20};
    return {0.05, 0.2, 10.0, 1.0, 1.0, 20, 150, 20};
}

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

} // namespace

void RunConfig::validate() const {
    require(problem == "european_call" || problem == "european_put" || problem == "fractional" ||
                problem == "custom",
            "problem.name", "expected european_call, european_put, fractional or custom");
    require(sigma >= 0.0 && std::isfinite(sigma), "problem.sigma", "must be finite and >= 0");
    require(std::isfinite(r), "problem.r", "must be finite");
    require(T > 0.0 && std::isfinite(T), "problem.T", "must be positive");
    if (problem == "european_call" || problem == "european_put")
        require(K > 0.0, "problem.K", "must be positive");
    if (problem == "custom")
        require(custom.domain_hi > custom.domain_lo, "problem.domain_hi",
                "must exceed problem.domain_lo");
    const bool semi_infinite = problem == "european_call" || problem == "european_put" ||
                               (problem == "custom" && std::isinf(custom.domain_hi));
    if (map_kind == MapKind::truncated) {
        require(s_max > 0.0 && std::isfinite(s_max), "map.s_max", "must be positive");
    } else {
        require(semi_infinite, "map.kind", "arctan needs a semi-infinite problem domain");
        require(l > 0.0 && l < 1.0, "map.l", "must lie in (0, 1)");
        if (L) require(*L > 0.0, "map.L", "must be positive");
        else require(K > 0.0, "problem.K", "must be positive to derive map.L");
        require(right_eval_point > 0.99 && right_eval_point < 1.0, "map.right_eval_point",
                "must lie in (0.99, 1)");
    }
    require(N >= 1, "grid.N", "must be >= 1");
    require(alpha > 0.0 && alpha <= 1.0, "grid.alpha", "must lie in (0, 1]");
    require(theta >= 0.0 && theta <= 1.0, "grid.theta", "must lie in [0, 1]");
    require(points >= 2, "grid.points", "must be >= 2");
    require(n_hidden >= 1, "network.n_hidden", "must be >= 1");

    auto open_unit = [](double v, const char* key) { require(v > 0.0 && v < 1.0, key, "must lie in (0, 1)"); };
    open_unit(training.eta, "training.eta");
    open_unit(training.beta1, "training.beta1");
    open_unit(training.beta2, "training.beta2");
    open_unit(training.rho, "training.rho");
    require(training.epsilon > 0.0, "training.epsilon", "must be positive");
    require(training.epochs_first >= 1, "training.epochs_first", "must be >= 1");
    require(training.epochs_rest >= 1, "training.epochs_rest", "must be >= 1");
    require(training.init_scale > 0.0, "network.init_scale", "must be positive");
    require(training.divergence_threshold > 0.0, "training.divergence_threshold",
            "must be positive");
    require(training.threads >= 0, "training.threads", "must be >= 0");
    for (double a : sweep_alphas)
        require(a > 0.0 && a < 1.0, "sweep.alphas", "every alpha must lie in (0, 1)");
    for (double e : lr_candidates)
        require(e > 0.0 && e < 1.0, "lr_search.candidates", "every rate must lie in (0, 1)");
    require(lr_probe_epochs >= 1, "lr_search.probe_epochs", "must be >= 1");
}

RunConfig load_run_config(const io::Config& cfg) {
    RunConfig rc;
    rc.problem = cfg.get_string("problem.name", rc.problem);
    const FamilyDefaults d = defaults_for(rc.problem);

    rc.r = cfg.get_double("problem.r", d.r);
    rc.sigma = cfg.get_double("problem.sigma", d.sigma);
    rc.K = cfg.get_double("problem.K", d.K);
    rc.T = cfg.get_double("problem.T", d.T);
    if (rc.problem == "custom") {
        auto& c = rc.custom;
        c.domain_lo = cfg.get_double("problem.domain_lo", c.domain_lo);
        c.domain_hi = cfg.get_double("problem.domain_hi", c.domain_hi);
        const std::string kind = cfg.get_string("problem.data_kind", "initial_data");
        if (kind == "initial_data") c.data_kind = DataKind::initial_data;
        else if (kind == "terminal_payoff") c.data_kind = DataKind::terminal_payoff;
        else throw ConfigError("problem.data_kind", "expected initial_data or terminal_payoff");
        c.gamma1 = cfg.get_string("problem.gamma1", c.gamma1);
        c.gamma2 = cfg.get_string("problem.gamma2", c.gamma2);
        c.gamma3 = cfg.get_string("problem.gamma3", c.gamma3);
        c.forcing = cfg.get_string("problem.forcing", c.forcing);
        c.data = cfg.get_string("problem.data", c.data);
        c.left_bc = cfg.get_string("problem.left_bc", c.left_bc);
        c.right_bc = cfg.get_string("problem.right_bc", c.right_bc);
        c.exact = cfg.get_string("problem.exact", c.exact);
    }

    const std::string kind = cfg.get_string("map.kind", "truncated");
    if (kind == "truncated") rc.map_kind = MapKind::truncated;
    else if (kind == "arctan") rc.map_kind = MapKind::arctan;
    else throw ConfigError("map.kind", "expected truncated or arctan, got '" + kind + "'");
    rc.s_max = cfg.get_double("map.s_max", rc.s_max);
    rc.l = cfg.get_double("map.l", rc.l);
    if (cfg.has("map.L")) rc.L = cfg.get_double("map.L", 1.0);
    rc.right_eval_point = cfg.get_double("map.right_eval_point", rc.right_eval_point);

    rc.N = get_count(cfg, "grid.N", d.N);
    rc.alpha = cfg.get_double("grid.alpha", d.alpha);
    rc.theta = cfg.get_double("grid.theta", rc.theta);
    rc.points = get_count(cfg, "grid.points", d.points);

    rc.n_hidden = get_count(cfg, "network.n_hidden", d.n_hidden);
    const std::string act = cfg.get_string("network.output_activation", "identity");
    if (act == "identity") rc.activation = OutputActivation::identity;
    else if (act == "sigmoid") rc.activation = OutputActivation::sigmoid;
    else throw ConfigError("network.output_activation", "expected identity or sigmoid");
    rc.init_from = cfg.get_string("network.init_from", "");
    {
        long long seed = cfg.get_int("network.seed", static_cast<long long>(rc.training.seed));
        if (seed < 0) throw ConfigError("network.seed", "must be non-negative");
        rc.training.seed = static_cast<std::uint64_t>(seed);
    }
    rc.training.init_scale = cfg.get_double("network.init_scale", rc.training.init_scale);

    auto& t = rc.training;
    t.optimizer = parse_optimizer("training.optimizer", cfg.get_string("training.optimizer", "adam"));
    t.eta = cfg.get_double("training.eta", t.eta);
    t.beta1 = cfg.get_double("training.beta1", t.beta1);
    t.beta2 = cfg.get_double("training.beta2", t.beta2);
    t.epsilon = cfg.get_double("training.epsilon", t.epsilon);
    t.rho = cfg.get_double("training.rho", t.rho);
    t.epochs_first = get_count(cfg, "training.epochs_first", t.epochs_first);
    t.epochs_rest = get_count(cfg, "training.epochs_rest", t.epochs_rest);
    t.divergence_threshold = cfg.get_double("training.divergence_threshold", t.divergence_threshold);
    t.kernel = parse_kernel("training.kernel", cfg.get_string("training.kernel", "openmp"));
    t.threads = static_cast<int>(cfg.get_int("training.threads", t.threads));

    rc.out_dir = cfg.get_string("output.dir", rc.out_dir.string());
    rc.plots = cfg.get_bool("output.plots", rc.plots);

    rc.sweep_alphas = cfg.get_list("sweep.alphas");
    if (cfg.has("sweep.alphas") && rc.sweep_alphas.empty())
        throw ConfigError("sweep.alphas", "list is empty");
    rc.lr_candidates = cfg.get_list("lr_search.candidates");
    if (cfg.has("lr_search.candidates") && rc.lr_candidates.empty())
        throw ConfigError("lr_search.candidates", "list is empty");
    rc.lr_probe_epochs = get_count(cfg, "lr_search.probe_epochs", rc.lr_probe_epochs);

    const auto unused = cfg.unused_keys();
    if (!unused.empty()) throw ConfigError(unused.front(), "unknown key");
    rc.validate();
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return load_run_config(io::Config::load(path));
}

ProblemSpec build_problem(const RunConfig& rc, std::optional<double> alpha) {
    const double a = alpha.value_or(rc.alpha);
    ProblemSpec p;
    if (rc.problem == "european_call") {
        p = european_call(rc.r, rc.sigma, rc.K, rc.T);
    } else if (rc.problem == "european_put") {
        p = european_put(rc.r, rc.sigma, rc.K, rc.T);
    } else if (rc.problem == "fractional") {
        return fractional_manufactured(a, rc.r, rc.sigma, rc.T);
    } else {
        CustomProblemSource src = rc.custom;
        src.alpha = a;
        src.r = rc.r;
        src.sigma = rc.sigma;
        src.K = rc.K;
        src.T = rc.T;
        return custom_problem(src);
    }
    // Option problems at alpha < 1 use the Caputo derivative in time to maturity;
    // the closed forms only hold at alpha = 1.
    p.alpha = a;
    if (a != 1.0) p.exact.reset();
    return p;
}

SolverSetup build_setup(const RunConfig& rc) {
    SolverSetup s;
    if (rc.map_kind == MapKind::truncated) {
        s.map = DomainMap::truncated(rc.s_max);
    } else if (rc.L) {
        s.map = DomainMap::arctan(*rc.L, rc.right_eval_point);
        s.map.l = rc.l;
    } else {
        s.map = make_arctan_map(rc.K, rc.l);
        s.map.right_eval_point = rc.right_eval_point;
    }
    s.steps = rc.N;
    s.collocation = rc.points;
    s.n_hidden = rc.n_hidden;
    s.theta = rc.theta;
    s.activation = rc.activation;
    return s;
}

} // namespace bsnet::cli
