// Desk-scale versions of the study-level expectations. Sizes are reduced so
// the suite runs in minutes on one core; full-size checks live in the
// acceptance binary.
#include <doctest.h>

#include <algorithm>
#include <map>

#include "faultmimo/harness.hpp"

using namespace faultmimo;

namespace {

ExperimentConfig desk(Experiment e) {
  ExperimentConfig c = default_config(e);
  c.system.M = 32;
  c.system.K = 4;
  c.system.L = 4;
  c.system.P = 8;
  c.system.total_pilot_power = c.system.K * c.system.L;
  c.system.seed = 2024;
  c.resolve_noise();
  c.trials = 5;
  return c;
}

using Means = std::map<std::pair<std::string, double>, MeanRow>;

Means index(const ExperimentOutput& out) {
  Means m;
  for (const auto& r : out.means) m[{r.method, r.sweep_value}] = r;
  return m;
}

std::vector<MeanRow> curve(const ExperimentOutput& out, const std::string& method) {
  std::vector<MeanRow> v;
  for (const auto& r : out.means)
    if (r.method == method) v.push_back(r);
  return v;
}

const MeanRow& best(const std::vector<MeanRow>& c) {
  return *std::min_element(c.begin(), c.end(),
                           [](const MeanRow& a, const MeanRow& b) { return a.error_db < b.error_db; });
}

double spread(const std::vector<MeanRow>& c) {
  double lo = 1e300, hi = -1e300;
  for (const auto& r : c) {
    lo = std::min(lo, r.error_db);
    hi = std::max(hi, r.error_db);
  }
  return hi - lo;
}

}  // namespace

TEST_CASE("alpha sweep orderings") {
  ExperimentConfig c = desk(Experiment::SweepAlpha);
  c.system.gamma = 0.125;
  const ExperimentOutput out = run_experiment(c);
  const Means m = index(out);

  CHECK(spread(curve(out, "LS")) < 0.1);
  CHECK(spread(curve(out, "LS-SLS")) < 0.1);
  CHECK(std::abs(m.at({"LS", 0.0}).error_db - m.at({"LS-SLS", 0.0}).error_db) < 0.5);
  CHECK(std::abs(m.at({"exAD", 0.0}).error_db - m.at({"LS", 0.0}).error_db) < 0.5);

  const double ex = best(curve(out, "exAD")).error_db;
  const double fs = best(curve(out, "fsAD")).error_db;
  const double st = best(curve(out, "stPCP")).error_db;
  INFO("best exAD " << ex << " fsAD " << fs << " stPCP " << st);
  CHECK(std::abs(fs - ex) < 1.5);
  CHECK(ex <= st);
  CHECK(fs <= st);
  CHECK(ex < m.at({"LS", 0.0}).error_db);
}

TEST_CASE("path count sweep") {
  ExperimentConfig c = desk(Experiment::SweepP);
  c.system.gamma = 0.125;
  c.grid = {4, 8, 16, 24};  // P < M
  c.methods = {"LS", "exAD"};
  c.trials = 10;
  const ExperimentOutput out = run_experiment(c);
  CHECK(spread(curve(out, "LS")) < 0.3);
  const auto ex = curve(out, "exAD");
  for (std::size_t i = 1; i < ex.size(); ++i) {
    INFO("P " << ex[i].sweep_value);
    CHECK(ex[i].error_db >= ex[i - 1].error_db - 0.5);
  }
}

TEST_CASE("zero-fault study") {
  ExperimentConfig c = desk(Experiment::ZeroFaults);
  c.grid = parse_number_list("0:0.1:1");
  const ExperimentOutput out = run_experiment(c);
  for (const auto& r : out.rows) CHECK(r.detection_error == 0);
  const double mmse = best(curve(out, "MMSE")).error_db;
  for (const std::string m : {"LS", "LS-SLS", "exAD", "fsAD", "stPCP"}) {
    INFO(m);
    CHECK(mmse <= best(curve(out, m)).error_db);
  }
  // Soft check: reported, not enforced.
  WARN_MESSAGE(best(curve(out, "exAD")).error_db - mmse < 2.0,
               "exAD best " << best(curve(out, "exAD")).error_db << " dB vs MMSE " << mmse << " dB");
}

TEST_CASE("random AoA grid resolution") {
  ExperimentConfig c = desk(Experiment::RandomAoa);
  c.system.K = 10;
  c.system.L = 10;
  c.system.P = 12;
  c.system.gamma = 0.125;
  c.system.total_pilot_power = 100.0;
  c.resolve_noise();
  c.grid = parse_number_list("0:0.05:0.6");
  c.methods = {"exAD", "fsAD1_10", "fsAD", "fsAD4"};
  c.trials = 4;
  const ExperimentOutput out = run_experiment(c);
  const double ex = best(curve(out, "exAD")).error_db;
  const double coarse = best(curve(out, "fsAD1_10")).error_db;
  const double mid = best(curve(out, "fsAD")).error_db;
  const double fine = best(curve(out, "fsAD4")).error_db;
  INFO("exAD " << ex << " N/10 " << coarse << " N " << mid << " 4N " << fine);
  CHECK(fine <= mid + 0.5);
  CHECK(std::abs(fine - ex) <= std::abs(mid - ex) + 0.1);
  CHECK(coarse >= mid);
}

TEST_CASE("beta stability") {
  ExperimentConfig c = desk(Experiment::SweepBeta);
  c.system.gamma = 0.125;
  c.methods = {"exAD", "fsAD"};
  c.grid = {0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  const ExperimentOutput out = run_experiment(c);
  for (const std::string m : {"exAD", "fsAD"}) {
    INFO(m);
    CHECK(spread(curve(out, m)) < 1.5);
  }
}

TEST_CASE("ser versus antennas") {
  ExperimentConfig c = default_config(Experiment::SerVsM);
  c.system.seed = 2024;
  c.grid = {60, 120};
  c.methods = {"LS", "fsAD", "PChn", "PChn+O"};
  c.ser_samples = 4000;
  c.trials = 2;
  const ExperimentOutput out = run_experiment(c);
  const Means m = index(out);
  for (double M : c.grid) {
    INFO("M " << M);
    CHECK(m.at({"PChn+O", M}).ser <= m.at({"PChn", M}).ser);
  }
  CHECK(m.at({"fsAD", 120.0}).ser <= m.at({"LS", 120.0}).ser);
}

TEST_CASE("asymptotic mrc gap") {
  ExperimentConfig c = desk(Experiment::AsymptoticCheck);
  c.system.K = 4;
  c.system.P = 8;
  c.system.gamma = 0.05;
  c.grid = {100, 200};
  c.trials = 3;
  c.symbols = 1000;
  const ExperimentOutput out = run_experiment(c);
  for (const auto& r : out.means)
    if (r.method == "MRC-gap") CHECK(r.mse <= r.reference + 3.0 * r.mse_stderr);

  c.system.gamma = 0.0;
  const ExperimentOutput clean = run_experiment(c);
  const Means m = index(clean);
  for (double M : c.grid) CHECK(m.at({"MRC", M}).mse == m.at({"MRC-modified", M}).mse);
}

TEST_CASE("hybrid tuning lands near the best pair") {
  ExperimentConfig c = desk(Experiment::HybridTune);
  c.system.gamma = 0.125;
  c.grid = parse_number_list("0.1:0.1:0.5");
  c.grid2 = {0.3, 0.5};
  c.ser_samples = 4000;
  c.trials = 3;
  const ExperimentOutput out = run_experiment(c);
  const Means m = index(out);
  for (const std::string method : {"exAD", "fsAD"}) {
    const MeanRow& h = m.at({method + "-hybrid", 0.0});
    const MeanRow& b = m.at({method + "-best", 0.0});
    INFO(method << " hybrid " << h.ser << " best " << b.ser);
    CHECK(b.error_db <= h.error_db);
    WARN(h.ser <= 2.0 * b.ser);  // soft check
  }
}
