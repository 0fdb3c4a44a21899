#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace lpl::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitInfeasible = 4;

struct SweepArgs {
  std::filesystem::path config;
  bool with_mc = false;
  std::optional<std::filesystem::path> out;
};

struct RunArgs {
  std::filesystem::path config;
  std::filesystem::path out;
};

int cmd_theory_sweep(const SweepArgs& args);
int cmd_train(const RunArgs& args);
int cmd_analyze(const RunArgs& args);
int cmd_datagen(const RunArgs& args);

/// Runs `fn`, mapping known exceptions to exit statuses and printing the
/// message to stderr.
int guarded(const char* command, const std::function<int()>& fn);

}  // namespace lpl::cli
