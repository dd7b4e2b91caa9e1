#include <doctest.h>

#include "faultmimo/prox.hpp"
#include "support.hpp"

using namespace faultmimo;
using testing_support::atom;
using testing_support::random_unit;

namespace {

// Direct evaluation of max_f ||V^* a(f)|| / sqrt(M) on an n-point grid.
double dual_oracle(const CMatrix& V, int n) {
  const int M = static_cast<int>(V.rows());
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const CVector a = testing_support::freq_vector(double(i) / n, M);
    best = std::max(best, (V.adjoint() * a).norm() / std::sqrt(double(M)));
  }
  return best;
}

double nuclear(const CMatrix& X) { return Eigen::JacobiSVD<CMatrix>(X).singularValues().sum(); }

CMatrix on_grid_sum(const std::vector<int>& bins, const std::vector<double>& w, int N, int M,
                    Rng& rng, int K) {
  CMatrix H = CMatrix::Zero(M, K);
  for (std::size_t i = 0; i < bins.size(); ++i)
    H += w[i] * atom(double(bins[i]) / N, random_unit(rng, K), M);
  return H;
}

AdmmControls tight() {
  AdmmControls c = norm_eval_controls();
  return c;
}

}  // namespace

TEST_CASE("unit atoms have unit atomic norm") {
  Rng rng(1);
  for (int i = 0; i < 3; ++i) {
    const CMatrix A = atom(rng.uniform(), random_unit(rng, 2), 16);
    const NormResult r = atomic_norm_sdp(A, tight());
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-2));
    const NormResult s = atomic_norm_sdp(2.5 * A, tight());
    CHECK(s.value == doctest::Approx(2.5 * r.value).epsilon(1e-2));
  }
  CHECK(atomic_norm_sdp(CMatrix::Zero(4, 2), tight()).value == 0.0);
}

TEST_CASE("three separated atoms: triangle bound and weak duality") {
  Rng rng(2);
  const int M = 16, K = 2;
  const CMatrix H = on_grid_sum({0, 5, 10}, {1.0, 2.0, 3.0}, 16, M, rng, K);
  SdpState st;
  const NormResult r = atomic_norm_sdp(H, tight(), &st);
  CHECK(r.value <= 6.0 + 1e-2);
  // ||H||_A >= <H, H> / ||H||_A^* with the dual evaluated on a fine grid.
  const double lower = H.squaredNorm() / dual_atomic_norm(H, 64 * M);
  CHECK(r.value >= lower - 1e-2);

  const CMatrix block = st.block();
  const double min_eig = Eigen::SelfAdjointEigenSolver<CMatrix>(block).eigenvalues()(0);
  CHECK(min_eig >= -1e-6 * block.trace().real());
}

TEST_CASE("atomic norm dominates the nuclear norm") {
  Rng rng(3);
  for (int i = 0; i < 4; ++i) {
    const CMatrix H = rng.complex_normal(8, 2, 1.0);
    CHECK(atomic_norm_sdp(H, tight()).value >= nuclear(H) - 1e-3);
  }
}

TEST_CASE("hermitian_toeplitz layout") {
  CVector a(3);
  a << 2.0, cdouble(1.0, 1.0), cdouble(0.0, -3.0);
  const CMatrix T = hermitian_toeplitz(a);
  CHECK((T - T.adjoint()).norm() == 0.0);
  CHECK(T(2, 0) == a(2));
  CHECK(T(0, 2) == std::conj(a(2)));
  CHECK(T(1, 1) == cdouble(2.0));
}

TEST_CASE("prox_atomic_sdp edge cases") {
  Rng rng(4);
  const CMatrix V = rng.complex_normal(8, 2, 1.0);
  CHECK((prox_atomic_sdp(V, 0.0, AdmmControls{}).H - V).norm() == 0.0);
  const double t = 1.05 * dual_atomic_norm(V, 64 * 8);
  const SdpProxResult r = prox_atomic_sdp(V, t, tight());
  CHECK(r.H.norm() < 1e-3 * V.norm());
  CHECK_THROWS_AS(prox_atomic_sdp(V, -1.0, AdmmControls{}), std::invalid_argument);
}

TEST_CASE("SDP prox agrees with a fine gridded prox") {
  Rng rng(5);
  const int M = 8, K = 2, N = 64 * M * K;
  const CMatrix V = 3.0 * atom(37.0 / N, random_unit(rng, K), M) + 0.05 * rng.complex_normal(M, K, 1.0);
  const double t = 0.5;
  const SdpProxResult sdp = prox_atomic_sdp(V, t, tight());
  const GridOperator op(M, N);
  AdmmControls gc;
  gc.max_iters = 20000;
  gc.tol_primal = 1e-10;
  const GridProxResult grid = prox_atomic_grid(V, t, op, gc);
  CHECK((sdp.H - grid.H).norm() / grid.H.norm() < 0.02);
}

TEST_CASE("SDP prox passes the descent certificate") {
  Rng rng(6);
  const int M = 6, K = 2;
  const CMatrix V = rng.complex_normal(M, K, 1.0);
  const double t = 0.4;
  const CMatrix H = prox_atomic_sdp(V, t, tight()).H;
  auto g = [&](const CMatrix& X) {
    return t * atomic_norm_sdp(X, tight()).value + 0.5 * (X - V).squaredNorm();
  };
  // Norm evaluations carry ADMM tolerance error, hence the slack.
  CHECK(testing_support::descent_violation(g, H, rng, 20) <= 1e-5);
}

TEST_CASE("gridded prox edge cases and optimality") {
  Rng rng(7);
  const int M = 8, K = 2, N = 64;
  const GridOperator op(M, N);
  const CMatrix V = rng.complex_normal(M, K, 1.0);

  const GridProxResult zero_t = prox_atomic_grid(V, 0.0, op, AdmmControls{});
  CHECK((zero_t.H - V).norm() < 1e-10);
  const GridProxResult huge = prox_atomic_grid(V, 1e6, op, AdmmControls{});
  CHECK(huge.H.norm() == 0.0);
  CHECK(huge.Gbar.norm() == 0.0);

  const double t = 0.3;
  AdmmControls gc;
  gc.max_iters = 20000;
  gc.tol_primal = 1e-12;
  const GridProxResult r = prox_atomic_grid(V, t, op, gc);
  CHECK((op.forward(r.Gbar) - r.H).norm() < 1e-10);
  const CMatrix F = testing_support::dense_grid(M, N);
  auto obj = [&](const CMatrix& G) {
    return t * G.rowwise().norm().sum() + 0.5 * (F * G - V).squaredNorm();
  };
  const double base = obj(r.Gbar);
  int worse = 0;
  for (int i = 0; i < 100; ++i) {
    CMatrix d = rng.complex_normal(N, K, 1.0);
    d /= d.norm();
    const double eps = i % 2 ? 1e-3 : 1e-2;
    if (obj(r.Gbar + eps * d) < base - 1e-10) ++worse;
  }
  CHECK(worse == 0);
  // Objective trace is finite and ends at the reported point.
  REQUIRE_FALSE(r.objective_trace.empty());
  CHECK(r.objective_trace.back() == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("gridded atomic norm") {
  Rng rng(8);
  const int M = 8, K = 2;
  const GridOperator op(M, 64);
  const CMatrix A = atom(11.0 / 64, random_unit(rng, K), M);
  AdmmControls c = tight();
  const NormResult r = gridded_atomic_norm(A, op, c);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(gridded_atomic_norm(CMatrix::Zero(M, K), op, c).value == 0.0);

  const GridOperator fine(M, 256);
  for (int i = 0; i < 3; ++i) {
    const CMatrix H = rng.complex_normal(M, K, 1.0);
    const double coarse_v = gridded_atomic_norm(H, op, c).value;
    const double fine_v = gridded_atomic_norm(H, fine, c).value;
    CHECK(fine_v <= coarse_v + 1e-3);
  }
}

TEST_CASE("sandwich bound on an on-grid instance") {
  Rng rng(9);
  const int M = 16, K = 2, N = 8 * M * K;
  const CMatrix H = on_grid_sum({3, 40, 95, 150, 222}, {1.0, 0.7, 1.3, 0.5, 1.1}, N, M, rng, K);
  const GridOperator op(M, N);
  const double grid_v = gridded_atomic_norm(H, op, tight()).value;
  const double sdp_v = atomic_norm_sdp(H, tight()).value;
  const double factor = std::sqrt(1.0 - 2.0 * kPi * M * K / N);
  CHECK(factor == doctest::Approx(0.4633).epsilon(1e-3));
  CHECK(factor * grid_v <= sdp_v + 1e-3);
  CHECK(sdp_v <= grid_v + 1e-3);
}

TEST_CASE("dual atomic norm") {
  Rng rng(10);
  const int M = 12;
  CMatrix V = CMatrix::Zero(M, 3);
  V.col(0) = testing_support::freq_vector(5.0 / (16 * M), M) / std::sqrt(double(M));
  CHECK(dual_atomic_norm(V, 16 * M) == doctest::Approx(1.0).epsilon(1e-12));

  CMatrix row = CMatrix::Zero(M, 3);
  row.row(4) << 1.0, cdouble(0.0, 2.0), -2.0;
  CHECK(dual_atomic_norm(row, 4 * M) == doctest::Approx(3.0 / std::sqrt(double(M))).epsilon(1e-12));

  for (int i = 0; i < 10; ++i) {
    const CMatrix R = rng.complex_normal(M, 3, 1.0);
    const double d4 = dual_atomic_norm(R, 4 * M);
    const double d8 = dual_atomic_norm(R, 8 * M);
    const double d32 = dual_atomic_norm(R, 32 * M);
    CHECK(d4 <= d8 + 1e-12);
    CHECK(d8 <= d32 + 1e-12);
    CHECK(d32 <= Eigen::JacobiSVD<CMatrix>(R).singularValues()(0) + 1e-9);
    CHECK(std::abs(d8 - dual_oracle(R, 8 * M)) < 1e-9);
    const GridOperator op(M, 8 * M);
    CHECK(gridded_dual_norm(R, op) == doctest::Approx(d8));
  }
  CHECK_THROWS_AS(dual_atomic_norm(V, 4 * M - 1), std::invalid_argument);
}
