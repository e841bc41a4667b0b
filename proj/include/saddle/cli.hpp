#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saddle/dynamics.hpp"
#include "saddle/json_io.hpp"

namespace saddle::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kInapplicable = 2, kVerificationFailure = 3 };

struct EtaRange {
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;

  std::vector<double> values() const;
};

enum class InitKind { Explicit, Random, Witness };

struct InitSpec {
  InitKind kind = InitKind::Random;
  IterateState state;  // Explicit only
  bool at_rest = false;  // Random: x_-1 = x_0, y_-1 = y_0
};

/// One analysis/run unit: a game, an algorithm, step sizes and an initialization.
struct Experiment {
  std::string name = "experiment";
  std::string provenance;
  BilinearGame game = BilinearGame::zero_sum(Matrix(1, 1, 1.0));
  Algorithm algo = Algorithm::OGDA;
  std::vector<double> etas;
  std::optional<EtaRange> eta_range;
  InitSpec init;
  RunOptions run;
  std::uint64_t seed = 1;
};

/// Parses an experiment config; throws Error(Config) on malformed input.
Experiment experiment_from_json(const Json& j);

std::vector<std::string> preset_names();
/// Throws Error(Config) for unknown names. Some presets expand into several experiments.
std::vector<Experiment> preset(const std::string& name);

/// Deterministic initialization for the experiment at the given step size.
IterateState make_init(const Experiment& e, double eta);

struct Options {
  std::string command;
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
};

int analyze(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out);
int run(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out);
int sweep(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out);
int verify(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out);

/// Worker count for parallel sweeps: hardware concurrency capped by
/// SADDLE_LAB_THREADS when set.
unsigned worker_count(std::size_t tasks);

/// Entry point shared by the executable and the tests.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saddle::cli
