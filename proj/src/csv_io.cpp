#include "snls/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace snls {

namespace {

void put(std::string& out, double v)
{
  out += format_number(v);
}

double parse_field(std::string_view field, const std::string& source, int line)
{
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if(ec != std::errc{} || ptr != last)
    throw Error(source + ":" + std::to_string(line) + ": not a number: '" + std::string(field) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for(;;)
  {
    const std::size_t pos = line.find(sep, start);
    if(pos == std::string_view::npos)
    {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_number(double value)
{
  if(std::isnan(value))
    return "nan";
  if(std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string state_csv(const StateVector& u, const GridSpec& grid)
{
  require_size(u, grid, "state_csv");
  std::string out = "j,x,re,im\n";
  for(std::size_t i = 0; i < u.size(); ++i)
  {
    out += std::to_string(i + 1);
    out += ',';
    put(out, grid.node(i));
    out += ',';
    put(out, u[i].real());
    out += ',';
    put(out, u[i].imag());
    out += '\n';
  }
  return out;
}

std::string observables_csv(const ObservableSeries& s)
{
  std::string out = "n,t,charge,energy,charge_resid,energy_resid\n";
  for(std::size_t r = 0; r < s.size(); ++r)
  {
    out += std::to_string(s.steps[r]);
    for(double v : {s.times[r], s.charge[r], s.energy[r], s.charge_residual[r], s.energy_residual[r]})
    {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string snapshots_csv(const ObservableSeries& series, const std::vector<StateVector>& states,
                          const GridSpec& grid)
{
  if(states.size() != series.size())
    throw Error("snapshots_csv: " + std::to_string(states.size()) + " states for " +
                std::to_string(series.size()) + " records");
  std::string out = "n,t,j,x,re,im\n";
  for(std::size_t r = 0; r < states.size(); ++r)
  {
    require_size(states[r], grid, "snapshots_csv");
    const std::string prefix = std::to_string(series.steps[r]) + "," + format_number(series.times[r]) + ",";
    for(std::size_t i = 0; i < states[r].size(); ++i)
    {
      out += prefix;
      out += std::to_string(i + 1);
      for(double v : {grid.node(i), states[r][i].real(), states[r][i].imag()})
      {
        out += ',';
        put(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

std::string ensemble_stats_csv(const EnsembleStats& s)
{
  std::string out = "t,mean_charge,se_charge,mean_energy,se_energy\n";
  for(std::size_t r = 0; r < s.times.size(); ++r)
  {
    put(out, s.times[r]);
    for(double v : {s.mean_charge[r], s.se_charge[r], s.mean_energy[r], s.se_energy[r]})
    {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string convergence_csv(const ConvergenceReport& report)
{
  std::string out = "tau,rms_error,se,log2_tau,log2_err\n";
  for(std::size_t l = 0; l < report.taus.size(); ++l)
  {
    put(out, report.taus[l]);
    for(double v : {report.errors[l], report.standard_errors[l], std::log2(report.taus[l]),
                    std::log2(report.errors[l])})
    {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string checks_csv(const std::vector<CheckResult>& checks)
{
  std::string out = "name,value,threshold,passed\n";
  for(const auto& c : checks)
  {
    out += '"' + c.name + "\",";
    put(out, c.value);
    out += ',';
    put(out, c.threshold);
    out += c.passed ? ",1\n" : ",0\n";
  }
  return out;
}

std::string noise_variance_csv(const NoiseCheckReport& report)
{
  std::string out = "mode,part,expected,empirical,z\n";
  for(const auto& r : report.variances)
  {
    out += std::to_string(r.mode) + "," + r.part;
    for(double v : {r.expected, r.empirical, r.z})
    {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string noise_covariance_csv(const NoiseCheckReport& report)
{
  std::string out = "mode,covariance,se,z\n";
  for(const auto& r : report.cross)
  {
    out += std::to_string(r.mode);
    for(double v : {r.covariance, r.standard_error, r.z})
    {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

std::vector<Complex> parse_state_csv(const std::string& text, const std::string& source)
{
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if(!std::getline(in, line))
    throw Error(source + ": empty state file");
  ++line_no;
  if(!line.empty() && line.back() == '\r')
    line.pop_back();
  if(line != "j,x,re,im")
    throw Error(source + ":1: expected header 'j,x,re,im', got '" + line + "'");
  std::vector<Complex> values;
  while(std::getline(in, line))
  {
    ++line_no;
    if(!line.empty() && line.back() == '\r')
      line.pop_back();
    if(line.empty())
      continue;
    const auto fields = split(line, ',');
    if(fields.size() != 4)
      throw Error(source + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                  std::to_string(fields.size()));
    const double j = parse_field(fields[0], source, line_no);
    if(j != static_cast<double>(values.size() + 1))
      throw Error(source + ":" + std::to_string(line_no) + ": node index out of order");
    values.emplace_back(parse_field(fields[2], source, line_no), parse_field(fields[3], source, line_no));
  }
  if(values.empty())
    throw Error(source + ": no data rows");
  return values;
}

std::vector<Complex> read_state_csv(const std::string& path)
{
  return parse_state_csv(read_text_file(path), path);
}

std::string read_text_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if(!in)
    throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if(!out)
    throw Error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if(!out)
    throw Error("write failed for '" + path + "'");
}

std::uint64_t fnv1a64(const std::string& bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for(unsigned char c : bytes)
  {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void Manifest::add(const std::string& key, const std::string& value)
{
  entries_.emplace_back(key, value);
}

void Manifest::add(const std::string& key, std::uint64_t value)
{
  entries_.emplace_back(key, std::to_string(value));
}

std::string Manifest::text() const
{
  std::string out;
  for(const auto& [k, v] : entries_)
    out += k + ": " + v + "\n";
  return out;
}

}  // namespace snls
