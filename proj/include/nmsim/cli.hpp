// cli.hpp
// Command-line front end. run_cli() is the whole program; tools/main.cpp only
// forwards argv to it so tests can drive every subcommand in-process.
//
// Exit codes: 0 success, 1 internal invariant violation, 2 usage or config error.

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmsim/dynamics.hpp"

namespace nmsim::cli {

inline constexpr const char* kRunSchema = "nmsim.run/1";
inline constexpr const char* kCsvHeader = "step,eof_sa,entropy_e,negativity_se,ppt_se,purity";

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat "key = value" text; '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

// Applies recognised keys onto cfg. Throws ConfigError on unknown keys or bad values.
void apply_config(dynamics::SimConfig& cfg, const std::map<std::string, std::string>& kv);
// "off", "paper-defaults", or a path to a key-value file of noise knobs.
dynamics::NoiseModel parse_noise_option(const std::string& value);
std::vector<double> parse_list(const std::string& text);

// Fixed-width rendering with 17 significant digits.
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<dynamics::StepRecord>& records);
void write_json(std::ostream& out, const dynamics::SimConfig& cfg,
                const std::vector<dynamics::StepRecord>& records);

// Throws InvariantViolation naming the first broken run-level invariant.
void check_run_invariants(const dynamics::SimConfig& cfg, const std::vector<dynamics::StepRecord>& records);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nmsim::cli
