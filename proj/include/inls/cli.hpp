#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "inls/params.hpp"
#include "inls/rational.hpp"

namespace inls {

// Exit 2: a precondition on the configuration or inputs failed.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Exit 3: a file could not be read or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct EvolveSection {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 10;
  std::optional<double> virial_R;
  bool linear = false;
  double dt_safety = 16.0;
  // evolution grid; defaults to the model grid
  std::optional<int> J;
  std::optional<double> h;
};

struct PairsSection {
  std::optional<Rational> theta;
  Rational eps{1, 1000000};
  Rational family_eps{1, 100};  // the N = 2 claim-2 eps
};

struct SweepSection {
  std::string command;
  // dotted config key -> values, iterated as a Cartesian product in key order
  std::map<std::string, std::vector<nlohmann::json>> parameters;
};

struct RunConfig {
  nlohmann::json raw;
  int N = 0;
  Rational alpha_q;
  Rational b_q;
  ModelParams params{};
  bool test_mode = false;
  std::optional<int> J;
  std::optional<double> h;
  std::string method = "both";
  double tol = 1e-11;
  int max_iter = 2000;
  EvolveSection evolve;
  PairsSection pairs;
  int probe_trials = 200;
  std::optional<std::string> field;
  std::string out_dir = ".";
  int precision = 10;
  std::uint64_t seed = 0;
  std::optional<SweepSection> sweep;
};

// Validates every key; unknown keys are rejected with ConfigError.
RunConfig parse_config(const nlohmann::json& j);

// Entry point used by the executable; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inls
