#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bsnet/io/config.hpp"
#include "bsnet/problems.hpp"
#include "bsnet/solver.hpp"
#include "bsnet/trainer.hpp"

namespace bsnet::cli {

/// Everything a subcommand needs, read from a flat key = value file.
/// Defaults reproduce the truncated-domain European call.
struct RunConfig {
    // [problem]
    std::string problem = "european_call";  // european_call | european_put | fractional | custom
    double r = 0.05;
    double sigma = 0.2;
    double K = 10.0;
    double T = 1.0;
    CustomProblemSource custom;

    // [map]
    MapKind map_kind = MapKind::truncated;
    double s_max = 15.0;
    double l = 0.6;
    std::optional<double> L;
    double right_eval_point = 0.9999999;

    // [grid]
    std::size_t N = 20;
    double alpha = 1.0;
    double theta = 1.0;
    std::size_t points = 150;

    // [network]
    std::size_t n_hidden = 20;
    OutputActivation activation = OutputActivation::identity;
    std::filesystem::path init_from;

    // [training], plus network.seed and network.init_scale
    TrainConfig training;

    // [output]
    std::filesystem::path out_dir = "out";
    bool plots = true;

    // [sweep] and [lr_search]
    std::vector<double> sweep_alphas;
    std::vector<double> lr_candidates;
    std::size_t lr_probe_epochs = 500;

    /// Throws io::ConfigError with the offending key.
    void validate() const;
};

/// Reads and validates. Unknown keys are rejected.
RunConfig load_run_config(const io::Config& cfg);
RunConfig load_run_config(const std::filesystem::path& path);

/// Problem for the configured family, optionally at a different alpha.
ProblemSpec build_problem(const RunConfig& rc, std::optional<double> alpha = std::nullopt);
SolverSetup build_setup(const RunConfig& rc);

} // namespace bsnet::cli
