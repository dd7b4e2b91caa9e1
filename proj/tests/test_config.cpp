#include <doctest.h>

#include <sstream>

#include "faultmimo/config.hpp"

using namespace faultmimo;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("number lists and ranges") {
  const auto g = parse_number_list("0:0.05:1");
  REQUIRE(g.size() == 21);
  CHECK(g[6] == 0.3);
  CHECK(g.back() == 1.0);
  CHECK(parse_number_list("5, 10,20 ,40") == std::vector<double>{5, 10, 20, 40});
  CHECK(parse_number_list("1, 2:1:4") == std::vector<double>{1, 2, 3, 4});
  CHECK_THROWS_AS(parse_number_list("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number_list("0:0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number_list("abc"), std::invalid_argument);
}

TEST_CASE("experiment defaults") {
  const ExperimentConfig a = parse("experiment = sweep_alpha\n");
  CHECK(a.grid.size() == 21);
  CHECK(a.trials == 10);
  CHECK(a.beta == 0.5);
  CHECK(a.methods.size() == 6);
  CHECK(a.system.M == 120);

  const ExperimentConfig z = parse("experiment = zero_faults");
  CHECK(z.system.gamma == 0.0);
  CHECK(std::isinf(z.beta));

  const ExperimentConfig s = parse("experiment = ser_vs_M");
  CHECK(s.alpha_exad == 0.4);
  CHECK(s.alpha_fsad == 0.25);
  CHECK(s.alpha_stpcp == 0.4);
  CHECK(s.ser_samples == 10000);
  CHECK(std::find(s.methods.begin(), s.methods.end(), "PChn+O") != s.methods.end());

  const ExperimentConfig r = parse("experiment = random_aoa");
  CHECK(r.system.aoa_mode == AoaMode::Random);
  CHECK(r.alpha_for("fsAD4") == r.alpha_fsad);
  CHECK(std::isnan(r.alpha_for("LS")));
}

TEST_CASE("snr convention") {
  // Per-symbol pilot power P_total/(K L) = 1 by default, so 10 dB gives 0.1.
  const ExperimentConfig c = parse("experiment = sweep_alpha\nsnr_db = 10\n");
  CHECK(c.system.total_pilot_power == doctest::Approx(100.0));
  CHECK(c.system.sigma2 == doctest::Approx(0.1));

  const ExperimentConfig d = parse("experiment = sweep_alpha\ntotal_pilot_power = 400\nsnr_db = 20\n");
  CHECK(d.system.sigma2 == doctest::Approx(0.04));

  const ExperimentConfig e = parse("experiment = sweep_alpha\nsigma2 = 0.3\n");
  CHECK(e.system.sigma2 == doctest::Approx(0.3));
  CHECK_FALSE(e.snr_db.has_value());

  CHECK_THROWS_AS(parse("experiment = sweep_alpha\nsigma2 = 0.3\nsnr_db = 5\n"), std::invalid_argument);
}

TEST_CASE("overrides, comments and errors") {
  const ExperimentConfig c = parse(
      "# comment line\n"
      "experiment = sweep_beta   # trailing\n"
      "M = 60\nK = 4\nL = 6\nP = 8\n"
      "methods = exAD, stPCP\n"
      "alpha = 0.25\n"
      "seed = 18446744073709551615\n"
      "outer_tol = 1e-5\n"
      "workers = 3\n");
  CHECK(c.experiment == Experiment::SweepBeta);
  CHECK(c.system.M == 60);
  CHECK(c.methods == std::vector<std::string>{"exAD", "stPCP"});
  CHECK(c.alpha_exad == 0.25);
  CHECK(c.alpha_stpcp == 0.25);
  CHECK(c.system.seed == 18446744073709551615ull);
  CHECK(c.solver.outer.tol_primal == 1e-5);
  CHECK(c.workers == 3);

  CHECK_THROWS_AS(parse("M = 10\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = fig9\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\nfoo = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\nM = ten\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\nM = 4.5\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\nM = 5\nM = 6\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\ntrials = 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\ngrid = \n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = sweep_alpha\nM\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("experiment = hybrid_tune\ngrid2 =\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), std::runtime_error);
}

TEST_CASE("experiment names round trip") {
  for (auto e : {Experiment::SweepAlpha, Experiment::SweepP, Experiment::ZeroFaults,
                 Experiment::RandomAoa, Experiment::SweepBeta, Experiment::SerVsM,
                 Experiment::AsymptoticCheck, Experiment::HybridTune})
    CHECK(experiment_from_string(to_string(e)) == e);
}
