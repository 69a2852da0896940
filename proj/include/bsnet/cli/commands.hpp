#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace bsnet::cli {

/// Process exit statuses.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,  // selftest check failed or unexpected internal error
    exit_config = 2,
    exit_diverged = 3,
};

struct Overrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    bool no_plots = false;
};

int cmd_solve(const std::filesystem::path& config, const Overrides& ov, std::ostream& out,
              std::ostream& err);
int cmd_compare(const std::filesystem::path& config, const Overrides& ov, std::ostream& out,
                std::ostream& err);
int cmd_sweep_alpha(const std::filesystem::path& config, const Overrides& ov,
                    std::ostream& out, std::ostream& err);
int cmd_lr_search(const std::filesystem::path& config, const Overrides& ov, std::ostream& out,
                  std::ostream& err);
/// Fast invariant checks; one line per check.
int cmd_selftest(std::ostream& out);

} // namespace bsnet::cli
