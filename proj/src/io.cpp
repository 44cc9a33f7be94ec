#include "abspec/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "abspec/quadrature.hpp"

namespace abspec {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> plain_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void append_complex(std::string& out, Complex v) {
  out += format_real(v.real());
  out += ',';
  out += format_real(v.imag());
}

}  // namespace

CsvError::CsvError(const std::string& source, std::size_t line, const std::string& what)
    : ConfigError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  if (auto v = plain_real(s)) return *v;
  const auto pos = s.find("pi");
  if (pos != std::string::npos) {
    std::string coef = trim(s.substr(0, pos));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double c = 1.0;
    if (coef == "-") {
      c = -1.0;
    } else if (!coef.empty() && coef != "+") {
      const auto v = plain_real(coef);
      if (!v) throw ConfigError("not a number: '" + text + "'");
      c = *v;
    }
    double den = 1.0;
    const std::string rest = trim(s.substr(pos + 2));
    if (!rest.empty()) {
      const auto v = rest.front() == '/' ? plain_real(trim(rest.substr(1))) : std::nullopt;
      if (!v || *v == 0.0) throw ConfigError("not a number: '" + text + "'");
      den = *v;
    }
    return c * std::numbers::pi / den;
  }
  throw ConfigError("not a number: '" + text + "'");
}

std::vector<double> parse_range(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("range '" + text + "' must be start:stop:count");
  const double a = parse_real(parts[0]);
  const double b = parse_real(parts[1]);
  long long n = 0;
  const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
  if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size() || n < 1) {
    throw ConfigError("range '" + text + "': count must be a positive integer");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("range '" + text + "' must be finite");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
  }
}

std::string eigenfunction_csv(const std::vector<double>& r, const std::vector<ValueWithDerivative>& values) {
  std::string out = "r,u,du_dr\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += format_real(r[i]) + ',' + format_real(values[i].value) + ',' + format_real(values[i].d_dr) + '\n';
  }
  return out;
}

std::string measure_csv(const SpectralMeasure& measure, const std::vector<double>& energies) {
  std::string out = "E,density\n";
  for (double e : energies) out += format_real(e) + ',' + format_real(measure.density(e)) + '\n';
  for (const Atom& a : measure.atoms()) out += "# atom," + format_real(a.energy) + ',' + format_real(a.weight) + '\n';
  return out;
}

std::string radial_csv(const RadialFunction& f) {
  std::string out = "r,re,im\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out += format_real(f.grid.nodes[i]) + ',';
    append_complex(out, f.values[i]);
    out += '\n';
  }
  return out;
}

std::string coefficients_csv(const TransformCoefficients& c) {
  std::string out = "E,re,im\n";
  for (std::size_t i = 0; i < c.continuum.size(); ++i) {
    out += format_real(c.quad.nodes[i]) + ',';
    append_complex(out, c.continuum[i]);
    out += '\n';
  }
  for (std::size_t i = 0; i < c.atom_values.size(); ++i) {
    out += "# atom," + format_real(c.quad.atoms[i].energy) + ',' + format_real(c.quad.atoms[i].weight) + ',';
    append_complex(out, c.atom_values[i]);
    out += '\n';
  }
  return out;
}

std::string coefficients3d_csv(const Coefficients3D& c, double rel_cutoff) {
  std::map<int, double> norms;
  double largest = 0.0;
  for (int m = -c.grid.m_max; m <= c.grid.m_max; ++m) {
    norms[m] = c.channel_norm_squared(m);
    largest = std::max(largest, norms[m]);
  }
  auto active = [&](int m) { return largest > 0.0 && norms[m] > rel_cutoff * rel_cutoff * largest; };
  std::string out = "m,p,E,re,im\n";
  std::string atoms;
  for (const ChannelCoefficients& ch : c.channels) {
    if (!active(ch.m)) continue;
    const std::string prefix = std::to_string(ch.m) + ',' + format_real(ch.p) + ',';
    for (std::size_t i = 0; i < ch.coeffs.continuum.size(); ++i) {
      out += prefix + format_real(ch.coeffs.quad.nodes[i]) + ',';
      append_complex(out, ch.coeffs.continuum[i]);
      out += '\n';
    }
    for (std::size_t i = 0; i < ch.coeffs.atom_values.size(); ++i) {
      const Atom& a = ch.coeffs.quad.atoms[i];
      atoms += "# atom," + prefix + format_real(a.energy) + ',' + format_real(a.weight) + ',';
      append_complex(atoms, ch.coeffs.atom_values[i]);
      atoms += '\n';
    }
  }
  return out + atoms;
}

std::string bound_states_csv(const std::vector<BoundStateRow>& rows) {
  std::string out = "m,kappa,E_b,weight,theta\n";
  for (const BoundStateRow& r : rows) {
    out += std::to_string(r.m) + ',' + format_real(r.kappa) + ',' + format_real(r.energy) + ',' +
           format_real(r.weight) + ',' + format_real(r.theta) + '\n';
  }
  return out;
}

RadialFunction read_radial_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<double> r;
  std::vector<Complex> v;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      if (t != "r,re,im") throw CsvError(source, lineno, "expected header 'r,re,im', got '" + t + "'");
      header = true;
      continue;
    }
    const std::vector<std::string> cells = split(t, ',');
    if (cells.size() != 3) {
      throw CsvError(source, lineno, "expected 3 fields, got " + std::to_string(cells.size()));
    }
    std::optional<double> x[3];
    for (int k = 0; k < 3; ++k) {
      x[k] = plain_real(cells[static_cast<std::size_t>(k)]);
      if (!x[k] || !std::isfinite(*x[k])) {
        throw CsvError(source, lineno, "field " + std::to_string(k + 1) + " is not a finite number: '" +
                                           cells[static_cast<std::size_t>(k)] + "'");
      }
    }
    if (!(*x[0] > 0.0)) throw CsvError(source, lineno, "r must be > 0");
    if (!r.empty() && !(*x[0] > r.back())) throw CsvError(source, lineno, "r must be strictly increasing");
    r.push_back(*x[0]);
    v.emplace_back(*x[1], *x[2]);
  }
  if (!header) throw CsvError(source, lineno + 1, "missing header 'r,re,im'");
  if (r.size() < 2) throw CsvError(source, lineno + 1, "need at least two samples");

  RadialGrid grid;
  grid.nodes = r;
  const std::size_t n = r.size();
  // A Gauss-Legendre set on [a, b] is recovered from its outermost nodes.
  const double t = gauss_legendre(n, -1.0, 1.0).nodes.back();
  const double c = 0.5 * (r.front() + r.back());
  const double h = 0.5 * (r.back() - r.front()) / t;
  bool gauss = c - h > 0.0;
  if (gauss) {
    const RadialGrid g = RadialGrid::gauss(c - h, c + h, n);
    for (std::size_t i = 0; i < n && gauss; ++i) gauss = std::fabs(g.nodes[i] - r[i]) <= 1e-12 * r.back();
    if (gauss) grid.weights = g.weights;
  }
  if (!gauss) {
    grid.weights.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double w = 0.5 * (r[i + 1] - r[i]);
      grid.weights[i] += w;
      grid.weights[i + 1] += w;
    }
  }
  return RadialFunction{grid, v, {}};
}

RadialFunction read_radial_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_radial_csv(in, path);
}

namespace {

std::size_t parse_count(const std::string& key, const std::string& text) {
  long long n = 0;
  const std::string s = trim(text);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || n < 0) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(n);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::vector<std::string>& inputs) {
  std::vector<double> out;
  for (const std::string& s : inputs) {
    for (const std::string& piece : split(s, ',')) {
      if (!piece.empty()) out.push_back(parse_real(piece));
    }
  }
  return out;
}

double& tolerance_slot(SuiteTolerances& t, const std::string& name) {
  static const std::map<std::string, double SuiteTolerances::*> slots{
      {"wronskian", &SuiteTolerances::wronskian},
      {"bessel", &SuiteTolerances::bessel},
      {"ode_ratio", &SuiteTolerances::ode_ratio},
      {"bound_state", &SuiteTolerances::bound_state},
      {"kappa_limit", &SuiteTolerances::kappa_limit},
      {"collapse", &SuiteTolerances::collapse},
      {"parseval", &SuiteTolerances::parseval},
      {"roundtrip", &SuiteTolerances::roundtrip},
      {"diagonalization", &SuiteTolerances::diagonalization},
      {"sine_transform", &SuiteTolerances::sine_transform},
      {"periodicity", &SuiteTolerances::periodicity},
      {"continuity_ratio", &SuiteTolerances::continuity_ratio},
      {"selectivity", &SuiteTolerances::selectivity},
      {"parseval_3d", &SuiteTolerances::parseval_3d},
      {"symmetry", &SuiteTolerances::symmetry},
      {"apply_h", &SuiteTolerances::apply_h},
      {"control_deficit", &SuiteTolerances::control_deficit},
  };
  const auto it = slots.find(name);
  if (it == slots.end()) throw ConfigError("unknown tolerance 'tol_" + name + "'");
  return t.*(it->second);
}

}  // namespace

ThetaSpec RunConfig::theta_spec() const {
  if (!phi) throw ConfigError("config has no flux 'phi'");
  return ThetaSpec(*phi, channels);
}

RunConfig parse_run_config(std::istream& in, const std::string& source) {
  // The INI reader only knows whole-line comments; values never contain '#' or ';'.
  std::stringstream stripped;
  for (std::string line; std::getline(in, line);) {
    stripped << line.substr(0, line.find_first_of("#;")) << '\n';
  }
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(stripped);
  } catch (const CLI::Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  RunConfig cfg;
  struct Table {
    std::optional<double> theta;
    std::optional<std::vector<double>> breakpoints;
    std::optional<std::vector<double>> values;
  };
  std::map<int, Table> tables;

  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string where = source + ": " + item.fullname();
    try {
      const std::string value = item.inputs.empty() ? "" : item.inputs.front();
      auto single = [&]() -> const std::string& {
        if (item.inputs.size() != 1) throw ConfigError("expected a single value");
        return value;
      };
      const std::vector<std::string>& p = item.parents;
      const std::string& key = item.name;
      if (p.empty()) {
        if (key == "phi") cfg.phi = parse_real(single());
        else throw ConfigError("unknown key");
      } else if (p.size() == 2 && p[0] == "channel") {
        const std::string& ms = p[1];
        int m = 0;
        const auto res = std::from_chars(ms.data(), ms.data() + ms.size(), m);
        if (res.ec != std::errc() || res.ptr != ms.data() + ms.size()) {
          throw ConfigError("channel section needs an integer m, got '" + ms + "'");
        }
        Table& t = tables[m];
        if (key == "theta") t.theta = parse_real(single());
        else if (key == "breakpoints") t.breakpoints = parse_list(item.inputs);
        else if (key == "values") t.values = parse_list(item.inputs);
        else throw ConfigError("unknown key");
      } else if (p.size() == 1 && p[0] == "grid") {
        if (key == "m_max") cfg.m_max = static_cast<int>(parse_count(key, single()));
        else if (key == "p_max") cfg.p_max = parse_real(single());
        else if (key == "p_nodes") cfg.p_nodes = parse_count(key, single());
        else if (key == "e_max") cfg.forward.e_max = parse_real(single());
        else if (key == "node_budget") cfg.forward.node_budget = parse_count(key, single());
        else if (key == "radial_nodes") cfg.forward.reduction.radial_nodes = parse_count(key, single());
        else if (key == "angle_nodes") cfg.forward.reduction.angle_nodes = parse_count(key, single());
        else if (key == "axial_nodes") cfg.forward.reduction.axial_nodes = parse_count(key, single());
        else throw ConfigError("unknown key");
      } else if (p.size() == 1 && p[0] == "verify") {
        SuiteConfig& s = cfg.suite;
        if (key == "kappas") s.kappas = parse_list(item.inputs);
        else if (key == "thetas") s.thetas = parse_list(item.inputs);
        else if (key == "phis") s.phis = parse_list(item.inputs);
        else if (key == "e_max_start") s.e_max_start = parse_real(single());
        else if (key == "e_max_cap") s.e_max_cap = parse_real(single());
        else if (key == "e_max_3d") s.e_max_3d = parse_real(single());
        else if (key == "negative_controls") s.negative_controls = parse_bool(key, single());
        else if (key.rfind("tol_", 0) == 0) {
          const double v = parse_real(single());
          if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerances must be finite and > 0");
          tolerance_slot(s.tol, key.substr(4)) = v;
        } else {
          throw ConfigError("unknown key");
        }
      } else if (p.size() == 1 && p[0] == "output") {
        if (key == "path") cfg.output = single();
        else throw ConfigError("unknown key");
      } else {
        throw ConfigError("unknown section");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }

  for (auto& [m, t] : tables) {
    const std::string where = source + ": channel." + std::to_string(m);
    if (t.theta && (t.breakpoints || t.values)) throw ConfigError(where + ": give either theta or a table, not both");
    if (t.theta) {
      cfg.channels.emplace(m, ThetaEntry(*t.theta));
    } else if (t.values) {
      try {
        cfg.channels.emplace(m, ThetaEntry(ThetaTable{t.breakpoints.value_or(std::vector<double>{}), *t.values}));
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    } else {
      throw ConfigError(where + ": needs theta or values");
    }
  }
  if (!(cfg.p_max > 0.0) || cfg.p_nodes == 0) throw ConfigError(source + ": grid needs p_max > 0 and p_nodes >= 1");
  if (!(cfg.suite.e_max_cap >= cfg.suite.e_max_start) || !(cfg.suite.e_max_start > 0.0) ||
      !std::isfinite(cfg.suite.e_max_cap)) {
    throw ConfigError(source + ": verify needs 0 < e_max_start <= e_max_cap < inf");
  }
  cfg.suite.m_max = cfg.m_max;
  cfg.suite.p_max = cfg.p_max;
  cfg.suite.p_nodes = cfg.p_nodes;
  // A config with a flux and channels is checked before anything runs.
  if (cfg.phi) cfg.theta_spec();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_run_config(in, path);
}

}  // namespace abspec
