#include "oqs/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "oqs/scenarios.hpp"

namespace oqs::cli {

using nlohmann::json;

namespace {

const CatalogEntry& entry(const std::string& id) {
  for (const auto& e : scenario_catalog())
    if (e.id == id) return e;
  throw ConfigError("unknown scenario: " + id);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key in " + where + ": " + k);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
  return x;
}

std::vector<double> spaced(const json& spec, const std::string& what, bool geometric) {
  if (!spec.is_array() || spec.size() != 3) throw ConfigError(what + " must be [start, stop, count]");
  const double a = number(spec[0], what), b = number(spec[1], what), n = number(spec[2], what);
  if (n < 1 || n != std::floor(n)) throw ConfigError(what + ": count must be a positive integer");
  if (geometric && (a <= 0 || b <= 0)) throw ConfigError(what + ": logspace bounds must be positive");
  std::vector<double> g;
  const int count = static_cast<int>(n);
  for (int k = 0; k < count; ++k) {
    const double s = count == 1 ? 0.0 : double(k) / (count - 1);
    const double m = count == 1 ? 1.0 : count - 1;
    g.push_back(geometric ? a * std::pow(b / a, s) : (a * (m - k) + b * k) / m);
  }
  return g;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '=' ? c : '_';
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

bool ResultTable::has_errors() const {
  for (const auto& e : errors)
    if (!e.empty()) return true;
  return false;
}

RunConfig parse_config(const json& j) {
  check_keys(j, {"scenario", "params", "sweep", "observables", "seed", "strict", "plot"}, "config");
  if (!j.contains("scenario") || !j["scenario"].is_string()) throw ConfigError("config needs a scenario id");
  RunConfig c;
  c.scenario = j["scenario"].get<std::string>();
  const CatalogEntry& e = entry(c.scenario);
  auto known = [&](const std::string& name, const std::string& where) {
    if (!e.defaults.count(name)) throw ConfigError("unknown parameter in " + where + ": " + name);
  };
  if (j.contains("params") && !j["params"].is_object()) throw ConfigError("params must be an object");
  if (j.contains("params"))
    for (const auto& [k, v] : j["params"].items()) {
      known(k, "params");
      c.overrides[k] = number(v, "params." + k);
    }
  if (j.contains("sweep")) {
    if (!j["sweep"].is_array()) throw ConfigError("sweep must be a list of axes");
    std::set<std::string> seen;
    for (const auto& ax : j["sweep"]) {
      check_keys(ax, {"parameter", "values", "linspace", "logspace"}, "sweep axis");
      if (!ax.contains("parameter") || !ax["parameter"].is_string()) throw ConfigError("sweep axis needs a parameter");
      SweepAxis a{ax["parameter"].get<std::string>(), {}};
      known(a.parameter, "sweep");
      if (!seen.insert(a.parameter).second) throw ConfigError("parameter swept twice: " + a.parameter);
      const int forms = int(ax.contains("values")) + int(ax.contains("linspace")) + int(ax.contains("logspace"));
      if (forms != 1) throw ConfigError("sweep axis " + a.parameter + " needs exactly one of values, linspace, logspace");
      const std::string what = "sweep." + a.parameter;
      if (ax.contains("values")) {
        if (!ax["values"].is_array()) throw ConfigError(what + ": values must be a list");
        for (const auto& v : ax["values"]) a.grid.push_back(number(v, what));
      } else {
        a.grid = spaced(ax.contains("linspace") ? ax["linspace"] : ax["logspace"], what, ax.contains("logspace"));
      }
      if (a.grid.empty()) throw ConfigError(what + ": empty grid");
      c.axes.push_back(std::move(a));
    }
  }
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) throw ConfigError("observables must be a list");
    std::vector<std::string> obs;
    for (const auto& o : j["observables"]) {
      if (!o.is_string()) throw ConfigError("observable names must be strings");
      const std::string name = o.get<std::string>();
      if (std::find(e.observables.begin(), e.observables.end(), name) == e.observables.end())
        throw ConfigError("unknown observable: " + name);
      obs.push_back(name);
    }
    c.observables = obs;
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) throw ConfigError("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("strict")) {
    if (!j["strict"].is_boolean()) throw ConfigError("strict must be true or false");
    c.strict = j["strict"].get<bool>();
  }
  if (j.contains("plot")) {
    check_keys(j["plot"], {"x"}, "plot");
    if (j["plot"].contains("x")) {
      if (!j["plot"]["x"].is_string()) throw ConfigError("plot.x must be a parameter name");
      c.plot_x = j["plot"]["x"].get<std::string>();
      bool swept = false;
      for (const auto& a : c.axes) swept |= a.parameter == c.plot_x;
      if (!swept) throw ConfigError("plot.x is not a swept parameter: " + c.plot_x);
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::string config_hash(const RunConfig& c) {
  ScenarioConfig base = default_config(c.scenario);
  for (const auto& [k, v] : c.overrides) base.set(k, v);
  json j;
  j["scenario"] = c.scenario;
  for (const auto& [k, v] : base.params) j["params"][k] = fmt(v);
  j["sweep"] = json::array();
  for (const auto& a : c.axes) {
    json g = json::array();
    for (double v : a.grid) g.push_back(fmt(v));
    j["sweep"].push_back({{"parameter", a.parameter}, {"grid", g}});
  }
  j["observables"] = c.observables ? json(*c.observables) : json(nullptr);
  j["seed"] = c.seed;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

ResultTable run(const RunConfig& c, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const CatalogEntry& e = entry(c.scenario);
  ResultTable t;
  t.scenario = c.scenario;
  t.config_hash = config_hash(c);
  t.observables = c.observables ? *c.observables : e.observables;
  for (const auto& a : c.axes) t.parameters.push_back(a.parameter);
  t.plot_x = c.plot_x.empty() && !c.axes.empty() ? c.axes.front().parameter : c.plot_x;

  std::size_t points = 1;
  for (const auto& a : c.axes) points *= a.grid.size();
  t.rows.assign(points, {});
  t.errors.assign(points, "");

  ScenarioConfig base = default_config(c.scenario);
  for (const auto& [k, v] : c.overrides) base.set(k, v);
  base.seed = c.seed;

  auto compute = [&](std::size_t idx) {
    ScenarioConfig cfg = base;
    std::vector<double> row;
    std::size_t rest = idx;
    std::vector<double> coords(c.axes.size());
    for (std::size_t a = c.axes.size(); a-- > 0;) {
      coords[a] = c.axes[a].grid[rest % c.axes[a].grid.size()];
      rest /= c.axes[a].grid.size();
    }
    for (std::size_t a = 0; a < c.axes.size(); ++a) cfg.set(c.axes[a].parameter, coords[a]);
    row = coords;
    std::string err;
    if (!t.observables.empty()) {
      std::map<std::string, double> out;
      bool failed = false;
      try {
        out = evaluate(cfg);
      } catch (const std::exception& ex) {
        err = ex.what();
        failed = true;
      }
      for (const auto& name : t.observables) {
        auto it = out.find(name);
        const double v = it != out.end() ? it->second : std::numeric_limits<double>::quiet_NaN();
        if (!failed && !std::isfinite(v)) {
          if (!err.empty()) err += "; ";
          err += it == out.end() ? name + ": not available for these parameters" : name + ": not finite";
        }
        row.push_back(v);
      }
    }
    t.rows[idx] = std::move(row);
    t.errors[idx] = std::move(err);
  };

  const int n = std::max(1, std::min<int>(workers, static_cast<int>(points)));
  if (n == 1) {
    for (std::size_t i = 0; i < points; ++i) compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points;) compute(i);
      });
    for (auto& th : pool) th.join();
  }
  t.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

std::string to_csv(const ResultTable& t) {
  std::ostringstream s;
  s << "# scenario=" << t.scenario << "\n# config_hash=" << t.config_hash << "\n# version=" << t.version << "\n";
  bool first = true;
  for (const auto& name : t.parameters) s << (first ? "" : ",") << name, first = false;
  for (const auto& name : t.observables) s << (first ? "" : ",") << name, first = false;
  s << (first ? "" : ",") << "error\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (double v : t.rows[r]) s << fmt(v) << ",";
    s << csv_field(t.errors[r]) << "\n";
  }
  return s.str();
}

json to_json(const ResultTable& t) {
  json j;
  j["metadata"] = {{"scenario", t.scenario},
                   {"config_hash", t.config_hash},
                   {"version", t.version},
                   {"wall_time_s", t.wall_time}};
  json cols = t.parameters;
  for (const auto& o : t.observables) cols.push_back(o);
  j["columns"] = cols;
  j["rows"] = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (double v : row) r.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["rows"].push_back(r);
  }
  j["errors"] = t.errors;
  return j;
}

std::map<std::string, std::string> to_plotdata(const ResultTable& t) {
  if (t.parameters.empty()) throw ConfigError("plotdata needs at least one swept parameter");
  const auto xit = std::find(t.parameters.begin(), t.parameters.end(), t.plot_x);
  const std::size_t xcol = static_cast<std::size_t>(xit - t.parameters.begin());
  std::map<std::string, std::string> files;
  for (std::size_t o = 0; o < t.observables.size(); ++o) {
    const std::size_t ycol = t.parameters.size() + o;
    std::map<std::string, std::ostringstream> curves;
    std::vector<std::string> order;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::string key;
      for (std::size_t p = 0; p < t.parameters.size(); ++p) {
        if (p == xcol) continue;
        key += (key.empty() ? "" : "_") + t.parameters[p] + "=" + json(t.rows[r][p]).dump();  // shortest round trip
      }
      if (key.empty()) key = "all";
      key = sanitize(key);
      auto [it, fresh] = curves.try_emplace(key);
      if (fresh) it->second << "# " << t.parameters[xcol] << " " << t.observables[o] << "\n";
      it->second << fmt(t.rows[r][xcol]) << " " << fmt(t.rows[r][ycol]) << "\n";
    }
    for (auto& [key, text] : curves)
      files[t.scenario + "_" + sanitize(t.observables[o]) + "_" + key + ".dat"] = text.str();
  }
  return files;
}

json catalog_json() {
  json out = json::array();
  for (const auto& e : scenario_catalog()) {
    json params = json::object();
    for (const auto& [k, v] : e.defaults) {
      auto d = e.derived.find(k);
      params[k] = d != e.derived.end() ? json({{"derived", d->second}}) : json(v);
    }
    out.push_back({{"id", e.id},
                   {"title", e.title},
                   {"parameters", params},
                   {"figures", e.figures},
                   {"observables", e.observables},
                   {"stochastic", e.stochastic}});
  }
  return out;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Batch runner for open-quantum-system scenarios"};
  app.require_subcommand(1);
  std::string out, format = "csv", config_path;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  bool strict = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out, "output file (csv, json) or directory (plotdata); default stdout");
    sub->add_option("--format", format, "csv, json or plotdata")->check(CLI::IsMember({"csv", "json", "plotdata"}));
    sub->add_option("--workers", workers, std::string("parallel grid points; default from ") + kWorkersEnv)
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed for stochastic scenarios");
    sub->add_flag("--strict", strict, "exit with code 3 when any point fails");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "evaluate a single parameter point");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate every point of the configured grid");
  CLI::App* list_cmd = app.add_subcommand("list-scenarios", "print the scenario catalog as JSON");
  add_common(run_cmd);
  add_common(sweep_cmd);
  list_cmd->add_option("--out", out, "output file; default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      const std::string text = catalog_json().dump(2) + "\n";
      if (out.empty()) std::cout << text;
      else write_file(out, text);
      return 0;
    }
    RunConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    config.strict = config.strict || strict;
    if (run_cmd->parsed() && !config.axes.empty()) throw ConfigError("run takes a single point; use sweep for grids");
    if (sweep_cmd->parsed() && config.axes.empty()) throw ConfigError("sweep needs at least one sweep axis");
    if (format == "plotdata" && out.empty()) throw ConfigError("plotdata needs --out <directory>");
    if (workers == 0) {
      workers = 1;
      if (const char* env = std::getenv(kWorkersEnv)) {
        char* end = nullptr;
        const long w = std::strtol(env, &end, 10);
        if (*env == '\0' || *end != '\0' || w < 1) throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer");
        workers = static_cast<int>(w);
      }
    }
    const ResultTable table = run(config, workers);
    if (format == "plotdata") {
      const auto files = to_plotdata(table);
      std::filesystem::create_directories(out);
      for (const auto& [name, text] : files) write_file(std::filesystem::path(out) / name, text);
    } else {
      const std::string text = format == "json" ? to_json(table).dump(2) + "\n" : to_csv(table);
      if (out.empty()) std::cout << text;
      else write_file(out, text);
    }
    std::cerr << table.rows.size() << " points in " << table.wall_time << " s\n";
    for (std::size_t r = 0; r < table.errors.size(); ++r)
      if (!table.errors[r].empty()) std::cerr << "point " << r << ": " << table.errors[r] << "\n";
    return config.strict && table.has_errors() ? 3 : 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace oqs::cli
