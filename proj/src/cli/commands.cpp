#include "bsnet/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "bsnet/cli/run_config.hpp"
#include "bsnet/errors.hpp"
#include "bsnet/expression.hpp"
#include "bsnet/io/csv.hpp"
#include "bsnet/io/svg.hpp"

namespace bsnet::cli {

namespace fs = std::filesystem;
using io::CsvWriter;
using io::format_double;

namespace {

/// Config stage: anything thrown while reading, validating or building inputs.
struct Prepared {
    RunConfig rc;
    ProblemSpec problem;
    SolverSetup setup;
};

std::vector<std::string> param_names(std::size_t n) {
    std::vector<std::string> names;
    for (const char* group : {"w", "b", "v"})
        for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(group) + "_" + std::to_string(i));
    names.push_back("beta");
    return names;
}

NetworkParams read_params(const fs::path& path, std::size_t n_hidden) {
    const io::CsvTable t = io::read_csv(path);
    std::vector<double> flat = t.numeric_column("value");
    if (flat.size() != param_count(n_hidden))
        throw io::ConfigError("network.init_from", "expected " + std::to_string(param_count(n_hidden)) +
                                                       " parameters, file has " + std::to_string(flat.size()));
    return NetworkParams(n_hidden, std::move(flat));
}

Prepared prepare(const fs::path& config, const Overrides& ov) {
    Prepared p;
    p.rc = load_run_config(config);
    if (ov.out_dir) p.rc.out_dir = *ov.out_dir;
    if (ov.seed) p.rc.training.seed = *ov.seed;
    if (ov.no_plots) p.rc.plots = false;
    p.problem = build_problem(p.rc);
    p.setup = build_setup(p.rc);
    if (!p.rc.init_from.empty()) {
        fs::path src = p.rc.init_from;
        if (src.is_relative()) src = config.parent_path() / src;
        try {
            p.setup.initial = read_params(src, p.rc.n_hidden);
        } catch (const io::ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw io::ConfigError("network.init_from", e.what());
        }
    }
    // Building the context runs every remaining range check of the core types.
    (void)make_context(p.problem, p.setup);
    fs::create_directories(p.rc.out_dir);
    return p;
}

template <class Fn>
int run_guarded(const fs::path& config, const Overrides& ov, std::ostream& err, Fn&& body) {
    Prepared prep;
    try {
        prep = prepare(config, ov);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }
    try {
        return body(prep);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_failure;
    }
}

CsvWriter cost_table(const std::vector<CostBreakdown>& trace) {
    CsvWriter w({"epoch", "pde_term", "left_bc_term", "right_bc_term", "total"});
    for (std::size_t e = 0; e < trace.size(); ++e) {
        const auto& c = trace[e];
        w.row({static_cast<double>(e), c.pde_term, c.left_bc_term, c.right_bc_term, c.total});
    }
    return w;
}

io::Series trace_series(const std::string& label, const std::vector<CostBreakdown>& trace) {
    io::Series s{label, {}, {}};
    for (std::size_t e = 0; e < trace.size(); ++e) {
        s.x.push_back(static_cast<double>(e));
        s.y.push_back(trace[e].total);
    }
    return s;
}

void write_solve_outputs(const Prepared& prep, const SolveResult& res,
                         const std::vector<CostBreakdown>* failed_trace, std::ostream& out) {
    const fs::path& dir = prep.rc.out_dir;
    const std::size_t r = res.abscissae.size();

    CsvWriter surface({"t", "S", "U"});
    for (std::size_t k = 0; k < res.surface.size(); ++k)
        for (std::size_t i = 0; i < r; ++i)
            surface.row({res.calendar_times[k], res.abscissae[i], res.surface[k][i]});
    surface.save(dir / "surface.csv");

    const std::size_t steps = res.completed_steps();
    for (std::size_t k = 0; k < steps; ++k) {
        const std::string idx = std::to_string(k + 1);
        cost_table(res.cost_traces[k]).save(dir / ("cost_step_" + idx + ".csv"));
        CsvWriter pw({"param", "value"});
        const auto names = param_names(res.params_per_step[k].n_hidden());
        const auto flat = res.params_per_step[k].flat();
        for (std::size_t j = 0; j < flat.size(); ++j) pw.row({names[j], format_double(flat[j])});
        pw.save(dir / ("params_step_" + idx + ".csv"));
    }
    if (failed_trace) cost_table(*failed_trace).save(dir / ("cost_step_" + std::to_string(steps + 1) + ".csv"));

    CsvWriter timing({"step", "seconds", "epochs", "seconds_per_epoch"});
    for (std::size_t k = 0; k < steps; ++k) {
        const double epochs = static_cast<double>(res.cost_traces[k].size());
        timing.row({static_cast<double>(k + 1), res.wall_times[k], epochs, res.wall_times[k] / epochs});
    }
    timing.save(dir / "timing.csv");

    std::optional<ErrorSummary> errs;
    if (prep.problem.exact && steps == prep.setup.steps) {
        errs = error_metrics(res, prep.problem);
        CsvWriter ew({"S", "abs_err", "log10_abs_err"});
        for (std::size_t i = 0; i < errs->S.size(); ++i)
            ew.row({errs->S[i], errs->abs_err[i], errs->log10_abs_err[i]});
        ew.save(dir / "errors.csv");
        out << "max abs error " << format_double(errs->max_abs) << ", mean abs error "
            << format_double(errs->mean_abs) << '\n';
    }

    if (!prep.rc.plots) return;
    std::vector<double> S;
    std::vector<double> first, last;
    for (std::size_t i = 0; i < r; ++i) {
        if (res.surrogate_index && i == *res.surrogate_index) continue;
        S.push_back(res.abscissae[i]);
        first.push_back(res.surface.front()[i]);
        last.push_back(res.surface.back()[i]);
    }
    const double t_report = res.calendar_times[res.surface.size() - 1];
    std::vector<io::Series> sol{{"data t=" + format_double(res.calendar_times.front()), S, first},
                                {"network t=" + format_double(t_report), S, last}};
    if (prep.problem.exact) {
        io::Series ex{"exact", S, {}};
        const double s_final = res.march_times[res.surface.size() - 1];
        for (double s : S) ex.y.push_back((*prep.problem.exact)(s, s_final));
        sol.push_back(std::move(ex));
    }
    io::write_svg(dir / "solution.svg", {"Solution", "S", "U", false}, sol);
    if (errs)
        io::write_svg(dir / "error.svg", {"Absolute error", "S", "|U - exact|", true},
                      {{"t=" + format_double(t_report), errs->S, errs->abs_err}});
    std::vector<io::Series> costs;
    for (std::size_t k = 0; k < steps; ++k)
        if (k == 0 || k == 1 || k + 1 == steps)
            costs.push_back(trace_series("step " + std::to_string(k + 1), res.cost_traces[k]));
    if (failed_trace) costs.push_back(trace_series("diverged step", *failed_trace));
    io::write_svg(dir / "cost.svg", {"Cost per epoch", "epoch", "cost", true}, costs);
}

const char* status_of(const OptimizerTrace& t) { return t.diverged_epoch ? "diverged" : "completed"; }

} // namespace

int cmd_solve(const fs::path& config, const Overrides& ov, std::ostream& out, std::ostream& err) {
    return run_guarded(config, ov, err, [&](const Prepared& prep) {
        try {
            const SolveResult res = solve(prep.problem, prep.setup, prep.rc.training);
            write_solve_outputs(prep, res, nullptr, out);
            out << "solved " << res.completed_steps() << " steps; outputs in "
                << prep.rc.out_dir.string() << '\n';
            return int(exit_ok);
        } catch (const SolveDiverged& e) {
            write_solve_outputs(prep, e.partial(), &e.failed_trace(), out);
            err << e.what() << "; partial outputs in " << prep.rc.out_dir.string() << '\n';
            return int(exit_diverged);
        }
    });
}

int cmd_compare(const fs::path& config, const Overrides& ov, std::ostream& out, std::ostream& err) {
    return run_guarded(config, ov, err, [&](const Prepared& prep) {
        const auto traces = compare_optimizers(prep.problem, prep.setup, prep.rc.training);
        const fs::path& dir = prep.rc.out_dir;
        CsvWriter summary({"optimizer", "epochs_run", "status", "diverged_epoch", "final_total"});
        CsvWriter timing({"optimizer", "seconds_per_epoch"});
        std::vector<io::Series> plot;
        bool any_completed = false;
        for (const auto& t : traces) {
            const std::string name = to_string(t.optimizer);
            CsvWriter w({"epoch", "pde_term", "left_bc_term", "right_bc_term", "total", "status"});
            for (std::size_t e = 0; e < t.trace.size(); ++e) {
                const auto& c = t.trace[e];
                w.row({format_double(static_cast<double>(e)), format_double(c.pde_term),
                       format_double(c.left_bc_term), format_double(c.right_bc_term),
                       format_double(c.total), status_of(t)});
            }
            w.save(dir / ("compare_" + name + ".csv"));
            summary.row({name, std::to_string(t.trace.size()), status_of(t),
                         t.diverged_epoch ? std::to_string(*t.diverged_epoch) : "",
                         format_double(t.trace.back().total)});
            timing.row({name, format_double(t.seconds_per_epoch)});
            plot.push_back(trace_series(name, t.trace));
            any_completed = any_completed || !t.diverged_epoch;
            out << name << ": " << status_of(t) << " after " << t.trace.size()
                << " epochs, final cost " << format_double(t.trace.back().total) << '\n';
        }
        summary.save(dir / "compare_summary.csv");
        timing.save(dir / "compare_timing.csv");
        if (prep.rc.plots)
            io::write_svg(dir / "compare.svg", {"Optimizer comparison, first step", "epoch", "cost", true}, plot);
        if (!any_completed) {
            err << "all optimizers diverged\n";
            return int(exit_diverged);
        }
        return int(exit_ok);
    });
}

int cmd_sweep_alpha(const fs::path& config, const Overrides& ov, std::ostream& out,
                    std::ostream& err) {
    return run_guarded(config, ov, err, [&](const Prepared& prep) {
        if (prep.rc.sweep_alphas.empty()) {
            err << "config error: sweep.alphas: required for sweep-alpha\n";
            return int(exit_config);
        }
        const RunConfig& rc = prep.rc;
        const auto family = [&rc](double a) { return build_problem(rc, a); };
        const SweepReport rep = sweep_alpha(family, rc.sweep_alphas, prep.setup, rc.training);

        std::vector<std::string> header{"S"};
        for (const auto& c : rep.columns) header.push_back("alpha_" + format_double(c.alpha));
        CsvWriter table(header);
        for (std::size_t i = 0; i < rep.S.size(); ++i) {
            std::vector<std::string> row{format_double(rep.S[i])};
            for (const auto& c : rep.columns) row.push_back(format_double(c.values[i]));
            table.row(std::move(row));
        }
        table.save(rc.out_dir / "sweep.csv");

        CsvWriter status({"alpha", "status", "diverged_step", "max_abs_err"});
        bool any_diverged = false;
        std::vector<io::Series> plot;
        for (const auto& c : rep.columns) {
            any_diverged = any_diverged || c.diverged_step.has_value();
            status.row({format_double(c.alpha), c.diverged_step ? "diverged" : "completed",
                        c.diverged_step ? std::to_string(*c.diverged_step) : "",
                        c.max_abs_err ? format_double(*c.max_abs_err) : ""});
            out << "alpha " << format_double(c.alpha) << ": "
                << (c.diverged_step ? "diverged at step " + std::to_string(*c.diverged_step)
                                    : std::string("completed"));
            if (c.max_abs_err) out << ", max abs error " << format_double(*c.max_abs_err);
            out << '\n';
            plot.push_back({"alpha=" + format_double(c.alpha), rep.S, c.values});
        }
        status.save(rc.out_dir / "sweep_status.csv");
        if (rc.plots) io::write_svg(rc.out_dir / "sweep.svg", {"Reporting-time solution by alpha", "S", "U", false}, plot);
        return int(any_diverged ? exit_diverged : exit_ok);
    });
}

int cmd_lr_search(const fs::path& config, const Overrides& ov, std::ostream& out,
                  std::ostream& err) {
    return run_guarded(config, ov, err, [&](const Prepared& prep) {
        const RunConfig& rc = prep.rc;
        std::vector<double> candidates = rc.lr_candidates;
        if (candidates.empty()) candidates = {0.003, 0.01, 0.03, 0.1, 0.2};

        const StepContext ctx = make_context(prep.problem, prep.setup);
        std::vector<double> row0;
        for (std::size_t i = 0; i < ctx.points.r(); ++i) row0.push_back(prep.problem.data(ctx.point_S(i)).v);
        const StepHistory history(std::move(row0));

        LrSearchReport rep;
        bool failed = false;
        try {
            rep = lr_grid_search(ctx, history, rc.n_hidden, rc.training, candidates, rc.lr_probe_epochs);
        } catch (const SearchFailed& e) {
            rep = e.report();
            failed = true;
        }
        CsvWriter table({"eta", "final_cost", "status", "diverged_epoch"});
        io::Series s{"final cost", {}, {}};
        for (const auto& c : rep.candidates) {
            table.row({format_double(c.eta), format_double(c.final_cost),
                       c.diverged_epoch ? "diverged" : "completed",
                       c.diverged_epoch ? std::to_string(*c.diverged_epoch) : ""});
            s.x.push_back(std::log10(c.eta));
            s.y.push_back(c.final_cost);
        }
        table.save(rc.out_dir / "lr_search.csv");
        if (rc.plots)
            io::write_svg(rc.out_dir / "lr_search.svg",
                          {"Probe cost by learning rate", "log10(eta)", "final cost", true}, {s});
        if (failed) {
            err << "every learning-rate candidate diverged\n";
            return int(exit_diverged);
        }
        out << "chosen eta: " << format_double(rep.best_eta) << '\n';
        return int(exit_ok);
    });
}

} // namespace bsnet::cli
