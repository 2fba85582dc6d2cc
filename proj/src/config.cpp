#include "qthalf/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qthalf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Violations {
  std::vector<std::string> items;
  void add(const std::string& s) { items.push_back(s); }
  bool any() const { return !items.empty(); }
  [[noreturn]] void raise() const {
    std::ostringstream os;
    os << "config rejected with " << items.size() << " violation(s):";
    for (const auto& s : items) os << "\n  - " << s;
    throw std::runtime_error(os.str());
  }
};

using Setter = std::function<void(RunConfig&, const std::string&, Violations&)>;

bool parse_double(const std::string& v, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(v, &pos);
    return pos == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_int(const std::string& v, int& out) {
  try {
    std::size_t pos = 0;
    out = std::stoi(v, &pos);
    return pos == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
  try {
    std::size_t pos = 0;
    out = std::stoull(v, &pos);
    return pos == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

Setter dbl(double RunConfig::* f, const char* key) {
  return [f, key](RunConfig& c, const std::string& v, Violations& viol) {
    double x;
    if (!parse_double(v, x))
      viol.add(std::string(key) + " = '" + v + "' is not a number");
    else
      c.*f = x;
  };
}

Setter intg(int RunConfig::* f, const char* key) {
  return [f, key](RunConfig& c, const std::string& v, Violations& viol) {
    int x;
    if (!parse_int(v, x))
      viol.add(std::string(key) + " = '" + v + "' is not an integer");
    else
      c.*f = x;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"model.dim", intg(&RunConfig::dim, "model.dim")},
      {"model.xi", dbl(&RunConfig::xi, "model.xi")},
      {"model.a", dbl(&RunConfig::a, "model.a")},
      {"model.b", dbl(&RunConfig::b, "model.b")},
      {"model.c", dbl(&RunConfig::c, "model.c")},
      {"grid.n_tan", intg(&RunConfig::n_tan, "grid.n_tan")},
      {"grid.n_wall", intg(&RunConfig::n_wall, "grid.n_wall")},
      {"grid.tan_extent", dbl(&RunConfig::tan_extent, "grid.tan_extent")},
      {"grid.wall_extent", dbl(&RunConfig::wall_extent, "grid.wall_extent")},
      {"scheme.theta",
       [](RunConfig& c, const std::string& v, Violations& viol) {
         try {
           c.theta = parse_rational(v);
         } catch (const std::exception& e) {
           viol.add(std::string("scheme.theta: ") + e.what());
         }
       }},
      {"scheme.p_margin", intg(&RunConfig::p_margin, "scheme.p_margin")},
      {"experiment.kind",
       [](RunConfig& c, const std::string& v, Violations&) { c.kind = v; }},
      {"experiment.seed",
       [](RunConfig& c, const std::string& v, Violations& viol) {
         std::uint64_t s;
         if (!parse_u64(v, s))
           viol.add("experiment.seed = '" + v + "' is not an unsigned integer");
         else
           c.seed = s;
       }},
      {"experiment.out",
       [](RunConfig& c, const std::string& v, Violations&) { c.out = v; }},
      {"experiment.T", dbl(&RunConfig::T, "experiment.T")},
      {"experiment.dt", dbl(&RunConfig::dt, "experiment.dt")},
      {"experiment.amplitude", dbl(&RunConfig::amplitude, "experiment.amplitude")},
      {"experiment.k_max", intg(&RunConfig::k_max, "experiment.k_max")},
      {"experiment.band", intg(&RunConfig::band, "experiment.band")},
      {"experiment.epsilon", dbl(&RunConfig::epsilon, "experiment.epsilon")},
      {"experiment.lambda_min", dbl(&RunConfig::lambda_min, "experiment.lambda_min")},
      {"experiment.lambda_max", dbl(&RunConfig::lambda_max, "experiment.lambda_max")},
      {"experiment.n_lambda", intg(&RunConfig::n_lambda, "experiment.n_lambda")},
      {"experiment.instances", intg(&RunConfig::instances, "experiment.instances")},
      {"experiment.gn_fields", intg(&RunConfig::gn_fields, "experiment.gn_fields")},
      {"experiment.gn_level", intg(&RunConfig::gn_level, "experiment.gn_level")},
      {"experiment.q_tilde", dbl(&RunConfig::q_tilde, "experiment.q_tilde")},
      {"experiment.q_norm", dbl(&RunConfig::q_norm, "experiment.q_norm")},
      {"experiment.store_every", intg(&RunConfig::store_every, "experiment.store_every")},
      {"experiment.tol_invariant", dbl(&RunConfig::tol_invariant, "experiment.tol_invariant")},
      {"experiment.tol_smoothing_slope",
       dbl(&RunConfig::tol_smoothing_slope, "experiment.tol_smoothing_slope")},
      {"experiment.tol_decay_dev", dbl(&RunConfig::tol_decay_dev, "experiment.tol_decay_dev")},
      {"experiment.tol_gn_variation",
       dbl(&RunConfig::tol_gn_variation, "experiment.tol_gn_variation")},
      {"experiment.tol_delta", dbl(&RunConfig::tol_delta, "experiment.tol_delta")},
      {"experiment.tol_residual", dbl(&RunConfig::tol_residual, "experiment.tol_residual")},
      {"experiment.tol_e_total", dbl(&RunConfig::tol_e_total, "experiment.tol_e_total")},
  };
  return m;
}

void validate(const RunConfig& c, Violations& viol) {
  if (c.dim != 2 && c.dim != 3) viol.add("model.dim must be 2 or 3");
  if (!(c.a > 0.0)) viol.add("model.a must be positive");
  if (!(c.c > 0.0)) viol.add("model.c must be positive");
  if (c.n_tan < 4 || (c.n_tan & (c.n_tan - 1)) != 0)
    viol.add("grid.n_tan must be a power of two, at least 4");
  if (c.n_wall < 9) viol.add("grid.n_wall must be at least 9");
  if (!(c.tan_extent > 0.0)) viol.add("grid.tan_extent must be positive");
  if (!(c.wall_extent > 0.0)) viol.add("grid.wall_extent must be positive");
  if (!rational_less(Rational(0, 1), c.theta) || !rational_less(c.theta, Rational(1, 2)))
    viol.add("scheme.theta = " + std::to_string(c.theta.num) + "/" +
             std::to_string(c.theta.den) +
             " violates the exponent-scheme constraint 0 < theta < 1/2");
  if (c.p_margin < 0) viol.add("scheme.p_margin must be >= 0");
  if (!valid_kind(c.kind))
    viol.add("experiment.kind = '" + c.kind +
             "' is not one of invariants, resolvent-sweep, decay-fit, gn-check, picard, simulate");
  if (!(c.T > 0.0)) viol.add("experiment.T must be positive");
  if (!(c.dt > 0.0)) viol.add("experiment.dt must be positive");
  if (!(c.amplitude > 0.0)) viol.add("experiment.amplitude must be positive");
  if (c.k_max < 1) viol.add("experiment.k_max must be >= 1");
  if (c.band < 1) viol.add("experiment.band must be >= 1");
  if (c.epsilon < 0.0) viol.add("experiment.epsilon must be >= 0 (0 selects the default)");
  if (!(c.lambda_min > 0.0) || !(c.lambda_max > c.lambda_min))
    viol.add("experiment.lambda range must satisfy 0 < lambda_min < lambda_max");
  if (c.n_lambda < 3) viol.add("experiment.n_lambda must be >= 3");
  if (c.instances < 1) viol.add("experiment.instances must be >= 1");
  if (c.gn_fields < 1) viol.add("experiment.gn_fields must be >= 1");
  if (c.gn_level != 0 && c.gn_level != 1) viol.add("experiment.gn_level must be 0 or 1");
  if ((c.q_tilde == 0.0) != (c.q_norm == 0.0))
    viol.add("experiment.q_tilde and q_norm must be overridden together");
  if (c.q_tilde != 0.0 && !(c.q_tilde >= 1.0 && c.q_norm > c.q_tilde))
    viol.add("experiment smoothing pair must satisfy 1 <= q_tilde < q_norm");
  if (c.store_every < 1) viol.add("experiment.store_every must be >= 1");
  if (!(c.tol_invariant > 0.0)) viol.add("experiment.tol_invariant must be positive");
  if (!(c.tol_decay_dev > 0.0)) viol.add("experiment.tol_decay_dev must be positive");
  if (!(c.tol_gn_variation > 0.0)) viol.add("experiment.tol_gn_variation must be positive");
  if (!(c.tol_delta > 0.0)) viol.add("experiment.tol_delta must be positive");
  if (!(c.tol_residual > 0.0)) viol.add("experiment.tol_residual must be positive");
  if (!(c.tol_e_total > 0.0)) viol.add("experiment.tol_e_total must be positive");
}

}  // namespace

bool valid_kind(const std::string& kind) {
  return kind == "invariants" || kind == "resolvent-sweep" || kind == "decay-fit" ||
         kind == "gn-check" || kind == "picard" || kind == "simulate";
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  Violations viol;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip full-line and trailing comments; no value may contain '#'
    const std::string s = trim(line.substr(0, line.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        viol.add("line " + std::to_string(lineno) + ": malformed section header '" + s + "'");
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "grid" && section != "scheme" &&
          section != "experiment")
        viol.add("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      viol.add("line " + std::to_string(lineno) + ": expected key = value, got '" + s + "'");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) {
      viol.add("line " + std::to_string(lineno) + ": key '" + key + "' outside any section");
      continue;
    }
    const std::string full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) {
      viol.add("line " + std::to_string(lineno) + ": unknown key '" + full + "'");
      continue;
    }
    it->second(cfg, value, viol);
  }
  validate(cfg, viol);
  if (viol.any()) viol.raise();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[model]\n";
  os << "dim = " << c.dim << "\n";
  os << "xi = " << fmt_double(c.xi) << "\n";
  os << "a = " << fmt_double(c.a) << "\n";
  os << "b = " << fmt_double(c.b) << "\n";
  os << "c = " << fmt_double(c.c) << "\n";
  os << "\n[grid]\n";
  os << "n_tan = " << c.n_tan << "\n";
  os << "n_wall = " << c.n_wall << "\n";
  os << "tan_extent = " << fmt_double(c.tan_extent) << "\n";
  os << "wall_extent = " << fmt_double(c.wall_extent) << "\n";
  os << "\n[scheme]\n";
  os << "theta = " << c.theta.num << "/" << c.theta.den << "\n";
  os << "p_margin = " << c.p_margin << "\n";
  os << "\n[experiment]\n";
  os << "kind = " << c.kind << "\n";
  os << "seed = " << c.seed << "\n";
  os << "out = " << c.out << "\n";
  os << "T = " << fmt_double(c.T) << "\n";
  os << "dt = " << fmt_double(c.dt) << "\n";
  os << "amplitude = " << fmt_double(c.amplitude) << "\n";
  os << "k_max = " << c.k_max << "\n";
  os << "band = " << c.band << "\n";
  os << "epsilon = " << fmt_double(c.epsilon) << "\n";
  os << "lambda_min = " << fmt_double(c.lambda_min) << "\n";
  os << "lambda_max = " << fmt_double(c.lambda_max) << "\n";
  os << "n_lambda = " << c.n_lambda << "\n";
  os << "instances = " << c.instances << "\n";
  os << "gn_fields = " << c.gn_fields << "\n";
  os << "gn_level = " << c.gn_level << "\n";
  os << "q_tilde = " << fmt_double(c.q_tilde) << "\n";
  os << "q_norm = " << fmt_double(c.q_norm) << "\n";
  os << "store_every = " << c.store_every << "\n";
  os << "tol_invariant = " << fmt_double(c.tol_invariant) << "\n";
  os << "tol_smoothing_slope = " << fmt_double(c.tol_smoothing_slope) << "\n";
  os << "tol_decay_dev = " << fmt_double(c.tol_decay_dev) << "\n";
  os << "tol_gn_variation = " << fmt_double(c.tol_gn_variation) << "\n";
  os << "tol_delta = " << fmt_double(c.tol_delta) << "\n";
  os << "tol_residual = " << fmt_double(c.tol_residual) << "\n";
  os << "tol_e_total = " << fmt_double(c.tol_e_total) << "\n";
  return os.str();
}

std::string config_hash_hex(const RunConfig& cfg) {
  const std::string text = emit_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace qthalf
