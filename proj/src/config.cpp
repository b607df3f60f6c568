#include "snls/config.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <sstream>

#include "snls/csv_io.hpp"

namespace snls {

namespace {

// RunConfig plus the fields that only become a TimeGrid once everything is read.
struct Draft
{
  RunConfig cfg;
  double tau;
  double horizon;
};

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if(first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v)
{
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if(ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
  return out;
}

template <class Int>
Int to_integer(std::string_view v)
{
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if(ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view v)
{
  if(v == "true" || v == "1")
    return true;
  if(v == "false" || v == "0")
    return false;
  throw ConfigError("expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> to_list(std::string_view v)
{
  std::vector<double> out;
  std::size_t start = 0;
  while(start <= v.size())
  {
    auto end = v.find(',', start);
    if(end == std::string_view::npos)
      end = v.size();
    const auto item = trim(v.substr(start, end - start));
    if(item.empty())
      throw ConfigError("empty entry in list '" + std::string(v) + "'");
    out.push_back(to_double(item));
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<double>& xs)
{
  std::string out;
  for(std::size_t i = 0; i < xs.size(); ++i)
  {
    if(i)
      out += ", ";
    out += format_exact(xs[i]);
  }
  return out;
}

struct Key
{
  const char* section;
  const char* name;
  std::function<void(Draft&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& key_table()
{
  static const std::vector<Key> keys = {
      {"grid", "n_cells", [](Draft& d, std::string_view v) { d.cfg.grid = GridSpec(to_integer<int>(v)); },
       [](const RunConfig& c) { return std::to_string(c.grid.n_cells()); }},

      {"time", "tau", [](Draft& d, std::string_view v) { d.tau = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.time.tau()); }},
      {"time", "horizon", [](Draft& d, std::string_view v) { d.horizon = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.time.horizon()); }},

      {"params", "theta", [](Draft& d, std::string_view v) { d.cfg.params.theta = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.params.theta); }},
      {"params", "lambda", [](Draft& d, std::string_view v) { d.cfg.params.lambda = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.params.lambda); }},
      {"params", "sigma", [](Draft& d, std::string_view v) { d.cfg.params.sigma = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.params.sigma); }},
      {"params", "allow_linear", [](Draft& d, std::string_view v) { d.cfg.params.allow_linear = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.params.allow_linear ? "true" : "false"); }},

      {"noise", "epsilon", [](Draft& d, std::string_view v) { d.cfg.noise.epsilon = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.noise.epsilon); }},
      {"noise", "n_modes", [](Draft& d, std::string_view v) { d.cfg.noise.n_modes = to_integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.noise.n_modes); }},
      {"noise", "decay", [](Draft& d, std::string_view v) { d.cfg.noise.decay = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.noise.decay); }},
      {"noise", "kind",
       [](Draft& d, std::string_view v) {
         if(v == "real")
           d.cfg.noise.kind = NoiseKind::real;
         else if(v == "complex")
           d.cfg.noise.kind = NoiseKind::complex;
         else
           throw ConfigError("noise kind must be real or complex, got '" + std::string(v) + "'");
       },
       [](const RunConfig& c) { return std::string(c.noise.kind == NoiseKind::real ? "real" : "complex"); }},

      {"scheme", "scheme",
       [](Draft& d, std::string_view v) { d.cfg.scheme.scheme = scheme_from_string(std::string(v)); },
       [](const RunConfig& c) { return to_string(c.scheme.scheme); }},
      {"scheme", "fp_tol", [](Draft& d, std::string_view v) { d.cfg.scheme.fp_tol = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.scheme.fp_tol); }},
      {"scheme", "fp_max_iter",
       [](Draft& d, std::string_view v) { d.cfg.scheme.fp_max_iter = to_integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.scheme.fp_max_iter); }},
      {"scheme", "truncation_radius",
       [](Draft& d, std::string_view v) { d.cfg.scheme.truncation_radius = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.scheme.truncation_radius); }},
      {"scheme", "cutoff",
       [](Draft& d, std::string_view v) { d.cfg.scheme.cutoff = cutoff_from_string(std::string(v)); },
       [](const RunConfig& c) { return to_string(c.scheme.cutoff); }},

      {"ensemble", "n_trajectories",
       [](Draft& d, std::string_view v) { d.cfg.n_trajectories = to_integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.n_trajectories); }},
      {"ensemble", "master_seed",
       [](Draft& d, std::string_view v) { d.cfg.master_seed = to_integer<std::uint64_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.master_seed); }},
      {"ensemble", "record_every",
       [](Draft& d, std::string_view v) { d.cfg.record_every = to_integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.record_every); }},
      {"ensemble", "threads", [](Draft& d, std::string_view v) { d.cfg.threads = to_integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.threads); }},
      {"ensemble", "dump_states", [](Draft& d, std::string_view v) { d.cfg.dump_states = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.dump_states ? "true" : "false"); }},

      {"converge", "taus", [](Draft& d, std::string_view v) { d.cfg.taus = to_list(v); },
       [](const RunConfig& c) { return join(c.taus); }},
      {"converge", "tau_ref", [](Draft& d, std::string_view v) { d.cfg.tau_ref = to_double(v); },
       [](const RunConfig& c) { return format_exact(c.tau_ref); }},

      {"initial", "initial",
       [](Draft& d, std::string_view v) {
         if(v == "sine")
           d.cfg.initial = InitialKind::sine;
         else if(v == "custom")
           d.cfg.initial = InitialKind::custom_samples;
         else
           throw ConfigError("initial must be sine or custom, got '" + std::string(v) + "'");
       },
       [](const RunConfig& c) { return std::string(c.initial == InitialKind::sine ? "sine" : "custom"); }},
      {"initial", "initial_file", [](Draft& d, std::string_view v) { d.cfg.initial_file = std::string(v); },
       [](const RunConfig& c) { return c.initial_file; }},
  };
  return keys;
}

const Key* find_key(std::string_view section, std::string_view name)
{
  for(const auto& k : key_table())
    if(name == k.name && (section.empty() || section == k.section))
      return &k;
  return nullptr;
}

bool known_section(std::string_view section)
{
  for(const auto& k : key_table())
    if(section == k.section)
      return true;
  return false;
}

void assign(Draft& d, const Key& key, std::string_view value, const std::string& where)
{
  try
  {
    key.set(d, value);
  }
  catch(const Error& e)
  {
    throw ConfigError(where + ": " + key.section + "." + key.name + ": " + e.what());
  }
}

void apply_override(Draft& d, const std::string& text)
{
  const auto eq = text.find('=');
  if(eq == std::string::npos)
    throw ConfigError("override '" + text + "' is not of the form key=value");
  const auto lhs = trim(std::string_view(text).substr(0, eq));
  const auto value = trim(std::string_view(text).substr(eq + 1));
  std::string_view section;
  std::string_view name = lhs;
  if(const auto dot = lhs.find('.'); dot != std::string_view::npos)
  {
    section = lhs.substr(0, dot);
    name = lhs.substr(dot + 1);
  }
  const Key* key = find_key(section, name);
  if(!key)
    throw ConfigError("override '" + text + "': unknown key '" + std::string(lhs) + "'");
  assign(d, *key, value, "override '" + text + "'");
}

}  // namespace

std::string format_exact(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> config_keys()
{
  std::vector<std::string> out;
  for(const auto& k : key_table())
    out.push_back(std::string(k.section) + "." + k.name);
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& base_dir)
{
  Draft d{RunConfig{}, RunConfig{}.time.tau(), RunConfig{}.time.horizon()};
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while(std::getline(in, raw))
  {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    std::string_view line = trim(raw);
    if(line.empty() || line.front() == '#' || line.front() == ';')
      continue;
    if(line.front() == '[')
    {
      if(line.back() != ']')
        throw ConfigError(where + ": malformed section header '" + std::string(line) + "'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if(!known_section(section))
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if(eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value, got '" + std::string(line) + "'");
    const auto name = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const Key* key = find_key(section, name);
    if(!key)
      throw ConfigError(where + ": unknown key '" + std::string(name) + "'" +
                        (section.empty() ? std::string() : " in section [" + section + "]"));
    assign(d, *key, value, where);
  }
  for(const auto& o : overrides)
    apply_override(d, o);

  RunConfig cfg = std::move(d.cfg);
  try
  {
    cfg.time = TimeGrid::from_horizon(d.horizon, d.tau);
  }
  catch(const Error& e)
  {
    throw ConfigError(std::string("time: ") + e.what());
  }
  if(cfg.initial == InitialKind::custom_samples)
  {
    if(cfg.initial_file.empty())
      throw ConfigError("initial: custom initial condition needs initial_file");
    std::filesystem::path p(cfg.initial_file);
    if(p.is_relative() && !base_dir.empty())
      p = std::filesystem::path(base_dir) / p;
    cfg.initial_file = p.lexically_normal().string();
    try
    {
      cfg.initial_samples = read_state_csv(cfg.initial_file);
    }
    catch(const Error& e)
    {
      throw ConfigError(std::string("initial_file: ") + e.what());
    }
  }
  try
  {
    cfg.validate();
  }
  catch(const ConfigError&)
  {
    throw;
  }
  catch(const Error& e)
  {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides)
{
  if(path.empty())
    return parse_config_text("", overrides, "");
  std::string text;
  try
  {
    text = read_text_file(path);
  }
  catch(const Error& e)
  {
    throw ConfigError(e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  try
  {
    return parse_config_text(text, overrides, dir);
  }
  catch(const ConfigError& e)
  {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const RunConfig& cfg)
{
  std::string out;
  const char* current = "";
  for(const auto& k : key_table())
  {
    if(std::string_view(current) != k.section)
    {
      if(*current)
        out += '\n';
      out += std::string("[") + k.section + "]\n";
      current = k.section;
    }
    out += std::string(k.name) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace snls
