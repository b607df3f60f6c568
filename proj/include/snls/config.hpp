#ifndef SNLS_CONFIG_HPP
#define SNLS_CONFIG_HPP

#include <string>
#include <vector>

#include "snls/experiments.hpp"

namespace snls {

/// Malformed or invalid configuration; the message names the line or key.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Parses a sectioned `key = value` file, then applies overrides of the form
/// `key=value` or `section.key=value`. An empty path means "defaults only".
/// Unknown sections and keys are rejected and the result is fully validated.
///
/// Schema (defaults are those of RunConfig):
///   [grid]     n_cells
///   [time]     tau, horizon
///   [params]   theta, lambda, sigma, allow_linear
///   [noise]    epsilon, n_modes, decay, kind (real|complex)
///   [scheme]   scheme, fp_tol, fp_max_iter, truncation_radius, cutoff
///   [ensemble] n_trajectories, master_seed, record_every, threads, dump_states
///   [converge] taus (comma separated), tau_ref
///   [initial]  initial (sine|custom), initial_file (StateVector CSV)
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Same as parse_config but reading the file contents from a string.
/// Relative initial_file paths resolve against base_dir.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                            const std::string& base_dir = "");

/// Canonical text form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Every accepted key as "section.key".
std::vector<std::string> config_keys();

/// Shortest decimal text that reads back to exactly the same double.
std::string format_exact(double value);

}  // namespace snls

#endif
