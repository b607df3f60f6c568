#ifndef SNLS_CSV_IO_HPP
#define SNLS_CSV_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snls/checks.hpp"
#include "snls/experiments.hpp"

namespace snls {

/// 17 significant digits, locale independent. Reads back bit-exactly.
std::string format_number(double value);

// Each *_csv function returns the full file text, header row included.

/// `j,x,re,im`; j counts interior nodes from 1.
std::string state_csv(const StateVector& u, const GridSpec& grid);
/// `n,t,charge,energy,charge_resid,energy_resid`
std::string observables_csv(const ObservableSeries& series);
/// `n,t,j,x,re,im`, one row per node per recorded state.
std::string snapshots_csv(const ObservableSeries& series, const std::vector<StateVector>& states,
                          const GridSpec& grid);
/// `t,mean_charge,se_charge,mean_energy,se_energy`
std::string ensemble_stats_csv(const EnsembleStats& stats);
/// `tau,rms_error,se,log2_tau,log2_err`
std::string convergence_csv(const ConvergenceReport& report);
/// `name,value,threshold,passed`
std::string checks_csv(const std::vector<CheckResult>& checks);
/// `mode,part,expected,empirical,z`
std::string noise_variance_csv(const NoiseCheckReport& report);
/// `mode,covariance,se,z`
std::string noise_covariance_csv(const NoiseCheckReport& report);

/// Parses a StateVector CSV. Rows must be in node order j = 1, 2, ...
std::vector<Complex> parse_state_csv(const std::string& text, const std::string& source = "<string>");
std::vector<Complex> read_state_csv(const std::string& path);

std::string read_text_file(const std::string& path);
/// Writes atomically enough for our purposes: truncate, write, check the stream.
void write_text_file(const std::string& path, const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

/// Ordered `key: value` lines.
class Manifest
{
public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, std::uint64_t value);
  std::string text() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace snls

#endif
