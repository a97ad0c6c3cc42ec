#include "islandlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "islandlab/errors.hpp"

namespace islandlab {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Solve: return "solve";
    case ExperimentKind::Expand: return "expand";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Genericity: return "genericity";
    case ExperimentKind::AppendixA: return "appendixA";
    case ExperimentKind::FixedPoint: return "fixedpoint";
    case ExperimentKind::Oracle: return "oracle";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "solve") return ExperimentKind::Solve;
  if (name == "expand") return ExperimentKind::Expand;
  if (name == "sweep") return ExperimentKind::Sweep;
  if (name == "genericity") return ExperimentKind::Genericity;
  if (name == "appendixA" || name == "appendix-a") return ExperimentKind::AppendixA;
  if (name == "fixedpoint" || name == "fixed-point") return ExperimentKind::FixedPoint;
  if (name == "oracle") return ExperimentKind::Oracle;
  throw ConfigError("unknown experiment kind: " + name);
}

void ExperimentConfig::validate() const {
  if (nx < 8 || ns < 8) throw ConfigError("grid resolution below minimum 8 x 8");
  if (refine < 1 || refine > 16) throw ConfigError("refine must be in [1, 16]");
  if (epsilons.empty()) throw ConfigError("epsilon list is empty");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw ConfigError("epsilon list must be strictly positive");
  }
  if (!std::is_sorted(epsilons.begin(), epsilons.end())) {
    throw ConfigError("epsilon list must be sorted ascending");
  }
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("delta values must lie in (0, 1)");
  }
  if (!std::is_sorted(resolutions.begin(), resolutions.end())) {
    throw ConfigError("resolutions must be ascending");
  }
  if (samples < 1) throw ConfigError("samples must be positive");
  shape.base().validate();
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + s + "' in " + where);
  }
}

long long to_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer '" + s + "' in " + where);
  }
}

void add_boundary_mode(FourierSeries& series, const std::vector<std::string>& vals,
                       const std::string& key) {
  if (vals.size() != 3) {
    throw ConfigError("boundary line '" + key + "' needs: mode cos_coef sin_coef");
  }
  const int mode = static_cast<int>(to_int(vals[0], key));
  if (mode < 0 || mode > 64) throw ConfigError("boundary mode out of range in " + key);
  series.add_mode(mode, to_double(vals[1], key), to_double(vals[2], key));
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.shape.base_bottom = FourierSeries();
  cfg.shape.base_top = FourierSeries();
  bool saw_G = false, saw_H = false, saw_poly = false, saw_deltas = false;
  Nonlinearity F;

  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    {
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto e = line.find_last_not_of(" \t\r");
      trimmed = line.substr(b, e - b + 1);
    }
    if (trimmed.front() == '[') {
      if (trimmed.back() != ']') throw ConfigError("malformed section at line " + std::to_string(lineno));
      section = trimmed.substr(1, trimmed.size() - 2);
      if (section != "shape" && section != "nonlinearity" && section != "grid" &&
          section != "sweep") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    }
    std::string key = trimmed.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::vector<std::string> vals = tokenize(trimmed.substr(eq + 1));
    if (vals.empty()) continue;  // empty value lines are allowed (e.g. "g =")
    const std::string where = "[" + section + "] " + key;

    if (section == "shape") {
      if (key == "epsilon") {
        cfg.shape.epsilon = to_double(vals[0], where);
      } else if (key == "c_bottom" || key == "c_G") {
        cfg.shape.c_bottom = to_double(vals[0], where);
      } else if (key == "c_top" || key == "c_H") {
        cfg.shape.c_top = to_double(vals[0], where);
      } else if (key == "G") {
        add_boundary_mode(cfg.shape.base_bottom, vals, where);
        saw_G = true;
      } else if (key == "H") {
        add_boundary_mode(cfg.shape.base_top, vals, where);
        saw_H = true;
      } else if (key == "g") {
        add_boundary_mode(cfg.shape.bottom_bump, vals, where);
      } else if (key == "h") {
        add_boundary_mode(cfg.shape.top_bump, vals, where);
      } else {
        throw ConfigError("unknown key " + where);
      }
    } else if (section == "nonlinearity") {
      if (key == "poly") {
        std::vector<double> coeffs;
        for (const std::string& v : vals) coeffs.push_back(to_double(v, where));
        F.set_polynomial(std::move(coeffs));
        saw_poly = true;
      } else if (key == "sin") {
        if (vals.size() != 3) throw ConfigError(where + " needs: amplitude omega phase");
        F.add_sin(to_double(vals[0], where), to_double(vals[1], where), to_double(vals[2], where));
        saw_poly = true;
      } else {
        throw ConfigError("unknown key " + where);
      }
    } else if (section == "grid") {
      if (key == "nx") {
        cfg.nx = static_cast<int>(to_int(vals[0], where));
      } else if (key == "ns") {
        cfg.ns = static_cast<int>(to_int(vals[0], where));
      } else if (key == "refine") {
        cfg.refine = static_cast<int>(to_int(vals[0], where));
      } else if (key == "resolutions") {
        for (const std::string& v : vals) {
          const std::size_t x = v.find('x');
          if (x == std::string::npos) throw ConfigError(where + ": expected NXxNS tokens");
          cfg.resolutions.emplace_back(static_cast<int>(to_int(v.substr(0, x), where)),
                                       static_cast<int>(to_int(v.substr(x + 1), where)));
        }
      } else {
        throw ConfigError("unknown key " + where);
      }
    } else if (section == "sweep") {
      if (key == "kind") {
        cfg.kind = experiment_kind_from_string(vals[0]);
      } else if (key == "epsilons") {
        cfg.epsilons.clear();
        for (const std::string& v : vals) cfg.epsilons.push_back(to_double(v, where));
      } else if (key == "deltas") {
        cfg.deltas.clear();
        for (const std::string& v : vals) cfg.deltas.push_back(to_double(v, where));
        saw_deltas = true;
      } else if (key == "samples") {
        cfg.samples = static_cast<int>(to_int(vals[0], where));
      } else if (key == "seed") {
        cfg.seed = static_cast<unsigned long long>(to_int(vals[0], where));
      } else if (key == "case") {
        cfg.appendix_case = vals[0];
      } else if (key == "max_iter") {
        cfg.fp_max_iter = static_cast<int>(to_int(vals[0], where));
      } else {
        throw ConfigError("unknown key " + where);
      }
    } else {
      throw ConfigError("key outside any section at line " + std::to_string(lineno));
    }
  }
  (void)saw_deltas;
  if (!saw_G) cfg.shape.base_bottom = FourierSeries::constant(-1.0);
  if (!saw_H) cfg.shape.base_top = FourierSeries::constant(1.0);
  if (saw_poly) cfg.F = F;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace islandlab
