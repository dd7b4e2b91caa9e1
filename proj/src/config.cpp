#include "faultmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace faultmimo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_number(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size())
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 2e9)
    throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + v + "'");
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || v.front() == '-')
    throw std::invalid_argument("config: '" + key + "' expects an unsigned integer");
  return x;
}

std::vector<double> range(double a, double step, double b) {
  if (!(step > 0.0) || b < a) throw std::invalid_argument("config: bad range");
  const long n = std::lround(std::floor((b - a) / step + 1e-9));
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) {
    const double v = a + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e12) / 1e12);  // 0.30000000000000004 -> 0.3
  }
  return out;
}

const std::vector<std::string> kAllEstimators = {"LS", "LS-SLS", "MMSE", "exAD", "fsAD", "stPCP"};

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::SweepAlpha: return "sweep_alpha";
    case Experiment::SweepP: return "sweep_P";
    case Experiment::ZeroFaults: return "zero_faults";
    case Experiment::RandomAoa: return "random_aoa";
    case Experiment::SweepBeta: return "sweep_beta";
    case Experiment::SerVsM: return "ser_vs_M";
    case Experiment::AsymptoticCheck: return "asymptotic_check";
    case Experiment::HybridTune: return "hybrid_tune";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& name) {
  for (Experiment e : {Experiment::SweepAlpha, Experiment::SweepP, Experiment::ZeroFaults,
                       Experiment::RandomAoa, Experiment::SweepBeta, Experiment::SerVsM,
                       Experiment::AsymptoticCheck, Experiment::HybridTune})
    if (to_string(e) == name) return e;
  throw std::invalid_argument("config: unknown experiment '" + name + "'");
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) continue;
    if (item.find(':') != std::string::npos) {
      const auto parts = split(item, ':');
      if (parts.size() != 3) throw std::invalid_argument("config: range must be a:step:b");
      const auto r = range(to_number("range", parts[0]), to_number("range", parts[1]),
                           to_number("range", parts[2]));
      out.insert(out.end(), r.begin(), r.end());
    } else {
      out.push_back(to_number("list", item));
    }
  }
  return out;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.grid = range(0.0, 0.05, 1.0);
  c.methods = kAllEstimators;
  switch (e) {
    case Experiment::SweepAlpha:
      break;
    case Experiment::SweepP:
      c.grid = {5, 10, 20, 40};
      break;
    case Experiment::ZeroFaults:
      c.system.gamma = 0.0;
      c.beta = std::numeric_limits<double>::infinity();
      break;
    case Experiment::RandomAoa:
      c.system.aoa_mode = AoaMode::Random;
      c.methods = {"LS", "MMSE", "exAD", "fsAD1_10", "fsAD", "fsAD4"};
      break;
    case Experiment::SweepBeta:
      break;
    case Experiment::SerVsM:
      c.grid = {60, 80, 100, 120};
      c.alpha_exad = 0.4;
      c.alpha_fsad = 0.25;
      c.alpha_stpcp = 0.4;
      c.methods = kAllEstimators;
      c.methods.push_back("PChn");
      c.methods.push_back("PChn+O");
      break;
    case Experiment::AsymptoticCheck:
      c.grid = {100, 200, 300, 400, 500};
      c.methods = {"MRC", "MRC-modified", "ZF", "ZF-modified"};
      break;
    case Experiment::HybridTune:
      c.grid = range(0.1, 0.1, 0.5);
      c.grid2 = {0.3, 0.5};
      c.methods = {"exAD", "fsAD"};
      break;
  }
  return c;
}

void ExperimentConfig::resolve_noise() {
  if (!snr_db) return;
  const double symbol_power = system.total_pilot_power / (system.K * system.L);
  system.sigma2 = symbol_power / std::pow(10.0, *snr_db / 10.0);
}

double ExperimentConfig::alpha_for(const std::string& method) const {
  if (method == "exAD") return alpha_exad;
  if (method == "stPCP") return alpha_stpcp;
  if (method.rfind("fsAD", 0) == 0) return alpha_fsad;
  return std::numeric_limits<double>::quiet_NaN();
}

void ExperimentConfig::validate() const {
  system.validate();
  if (grid.empty()) throw std::invalid_argument("config: sweep grid is empty");
  if (experiment == Experiment::HybridTune && grid2.empty())
    throw std::invalid_argument("config: hybrid_tune needs a nonempty beta grid (grid2)");
  if (methods.empty()) throw std::invalid_argument("config: no methods selected");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (ser_samples < 1 || symbols < 1) throw std::invalid_argument("config: sample counts must be >= 1");
  if (psk_order != 2 && psk_order != 4 && psk_order != 8)
    throw std::invalid_argument("config: psk_order must be 2, 4 or 8");
  for (double a : {alpha_exad, alpha_fsad, alpha_stpcp})
    if (!(a >= 0.0)) throw std::invalid_argument("config: alpha must be >= 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("config: beta must be >= 0");
}

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
    if (!kv.emplace(key, value).second) throw std::invalid_argument("config: duplicate key '" + key + "'");
  }
  auto exp_it = kv.find("experiment");
  if (exp_it == kv.end()) throw std::invalid_argument("config: missing 'experiment'");
  ExperimentConfig c = default_config(experiment_from_string(exp_it->second));
  kv.erase(exp_it);

  if (kv.count("sigma2") && kv.count("snr_db"))
    throw std::invalid_argument("config: give either sigma2 or snr_db, not both");
  bool pilot_power_given = kv.count("total_pilot_power") > 0;

  SystemConfig& s = c.system;
  SolverParams& p = c.solver;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"M", [&](auto& k, auto& v) { s.M = to_int(k, v); }},
      {"K", [&](auto& k, auto& v) { s.K = to_int(k, v); }},
      {"L", [&](auto& k, auto& v) { s.L = to_int(k, v); }},
      {"P", [&](auto& k, auto& v) { s.P = to_int(k, v); }},
      {"gamma", [&](auto& k, auto& v) { s.gamma = to_number(k, v); }},
      {"d_over_lambda", [&](auto& k, auto& v) { s.d_over_lambda = to_number(k, v); }},
      {"sigma2", [&](auto& k, auto& v) { s.sigma2 = to_number(k, v); c.snr_db.reset(); }},
      {"snr_db", [&](auto& k, auto& v) { c.snr_db = to_number(k, v); }},
      {"rho", [&](auto& k, auto& v) { s.rho = to_number(k, v); }},
      {"total_pilot_power", [&](auto& k, auto& v) { s.total_pilot_power = to_number(k, v); }},
      {"aoa_mode",
       [&](auto& k, auto& v) {
         if (v == "uniform-grid") s.aoa_mode = AoaMode::UniformGrid;
         else if (v == "random") s.aoa_mode = AoaMode::Random;
         else throw std::invalid_argument("config: '" + k + "' must be uniform-grid or random");
       }},
      {"seed", [&](auto& k, auto& v) { s.seed = to_u64(k, v); }},
      {"methods", [&](auto&, auto& v) { c.methods = split(v, ','); }},
      {"grid", [&](auto&, auto& v) { c.grid = parse_number_list(v); }},
      {"grid2", [&](auto&, auto& v) { c.grid2 = parse_number_list(v); }},
      {"alpha",
       [&](auto& k, auto& v) { c.alpha_exad = c.alpha_fsad = c.alpha_stpcp = to_number(k, v); }},
      {"alpha_exad", [&](auto& k, auto& v) { c.alpha_exad = to_number(k, v); }},
      {"alpha_fsad", [&](auto& k, auto& v) { c.alpha_fsad = to_number(k, v); }},
      {"alpha_stpcp", [&](auto& k, auto& v) { c.alpha_stpcp = to_number(k, v); }},
      {"beta", [&](auto& k, auto& v) { c.beta = to_number(k, v); }},
      {"grid_N", [&](auto& k, auto& v) { p.grid_N = to_int(k, v); }},
      {"outer_max_iters", [&](auto& k, auto& v) { p.outer.max_iters = to_int(k, v); }},
      {"outer_tol",
       [&](auto& k, auto& v) { p.outer.tol_primal = p.outer.tol_dual = to_number(k, v); }},
      {"inner_max_iters", [&](auto& k, auto& v) { p.inner.max_iters = to_int(k, v); }},
      {"inner_tol",
       [&](auto& k, auto& v) { p.inner.tol_primal = p.inner.tol_dual = to_number(k, v); }},
      {"inner_penalty", [&](auto& k, auto& v) { p.inner.penalty = to_number(k, v); }},
      {"support_threshold_rel", [&](auto& k, auto& v) { p.support_threshold_rel = to_number(k, v); }},
      {"support_noise_floor", [&](auto& k, auto& v) { p.support_noise_floor = to_number(k, v); }},
      {"trials", [&](auto& k, auto& v) { c.trials = to_int(k, v); }},
      {"workers", [&](auto& k, auto& v) { c.workers = to_int(k, v); }},
      {"out", [&](auto&, auto& v) { c.out_dir = v; }},
      {"ser_samples", [&](auto& k, auto& v) { c.ser_samples = to_int(k, v); }},
      {"psk_order", [&](auto& k, auto& v) { c.psk_order = to_int(k, v); }},
      {"symbols", [&](auto& k, auto& v) { c.symbols = to_int(k, v); }},
  };
  for (const auto& [key, value] : kv) {
    auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second(key, value);
  }
  // Unless given, pilot power gives each pilot symbol the data-symbol power rho.
  if (!pilot_power_given) s.total_pilot_power = s.K * s.L * s.rho;
  c.resolve_noise();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace faultmimo
