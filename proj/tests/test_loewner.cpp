#include <doctest.h>

#include <cmath>
#include <random>

#include "loewner/analysis.hpp"
#include "loewner/beam_model.hpp"
#include "loewner/errors.hpp"
#include "loewner/loewner_core.hpp"
#include "support.hpp"

using namespace loewner;
using testing::rel_err;
using testing::RationalOracle;

namespace {

SampleSet sample_on(const Evaluator& h, double lo, double hi, int count) {
  return analysis::sample_serial(h, analysis::log_grid(lo, hi, count));
}

TangentialData random_tangential(std::mt19937_64& rng, int nu, int rho) {
  std::normal_distribution<double> g(0.0, 3.0);
  TangentialData d;
  for (int i = 0; i < rho; ++i) {
    d.right_points.emplace_back(g(rng), g(rng));
    d.right_values.emplace_back(g(rng), g(rng));
  }
  for (int i = 0; i < nu; ++i) {
    d.left_points.emplace_back(g(rng), g(rng));
    d.left_values.emplace_back(g(rng), g(rng));
  }
  return d;
}

double max_rel_at_samples(const ReducedModel& m, const SampleSet& samples) {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, rel_err(eval_reduced(m, s.s), s.value));
  return worst;
}

}  // namespace

TEST_SUITE("loewner") {

TEST_CASE("build_pencil: scalar example and Sylvester identities") {
  TangentialData d;
  d.right_points = {1.0};
  d.right_values = {2.0};
  d.left_points = {3.0};
  d.left_values = {4.0};
  const auto p = build_pencil(d);
  CHECK(p.loewner(0, 0) == Complex(1.0, 0.0));
  CHECK(p.shifted(0, 0) == Complex(5.0, 0.0));
  CHECK(p.V(0) == Complex(4.0, 0.0));
  CHECK(p.W(0) == Complex(2.0, 0.0));

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto data = random_tangential(rng, 7 + trial, 5 + trial);
    const auto pc = build_pencil(data);
    REQUIRE(pc.loewner.rows() == static_cast<Eigen::Index>(data.nu()));
    REQUIRE(pc.loewner.cols() == static_cast<Eigen::Index>(data.rho()));
    for (std::size_t i = 0; i < data.nu(); ++i) {
      for (std::size_t j = 0; j < data.rho(); ++j) {
        const Complex mu = data.left_points[i], lam = data.right_points[j];
        const Complex v = data.left_values[i], w = data.right_values[j];
        const Complex ll = pc.loewner(i, j), ls = pc.shifted(i, j);
        const double tol = 1e-13 * std::max({std::abs(v), std::abs(w), 1.0}) *
                           std::max({std::abs(mu), std::abs(lam), 1.0});
        CHECK(std::abs((mu - lam) * ll - (v - w)) <= tol);
        CHECK(std::abs((mu - lam) * ls - (mu * v - lam * w)) <= tol);
        // Rank-one corrections; the second one equals +w_j with these
        // definitions of LL and LLs.
        CHECK(std::abs(ls - lam * ll - v) <= tol);
        CHECK(std::abs(ls - mu * ll - w) <= tol);
      }
    }
  }
}

TEST_CASE("build_pencil: parallel build equals the serial reference") {
  std::mt19937_64 rng(4);
  const auto data = random_tangential(rng, 157, 131);
  const auto a = build_pencil(data);
  const auto b = build_pencil_serial(data);
  CHECK(a.loewner == b.loewner);
  CHECK(a.shifted == b.shifted);
  CHECK(a.V == b.V);
  CHECK(a.W == b.W);
}

TEST_CASE("build_pencil: colliding points are rejected") {
  TangentialData d;
  d.right_points = {{0, 1}, {0, 2}};
  d.right_values = {1.0, 1.0};
  d.left_points = {{0, 3}, {0, 2}};
  d.left_values = {1.0, 1.0};
  try {
    build_pencil(d);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("mu[1]") != std::string::npos);
    CHECK(std::string(e.what()).find("lambda[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(build_pencil_serial(d), DataError);
}

TEST_CASE("exact data from 1/(s+1) gives a rank-one Loewner matrix") {
  const Evaluator h = [](Complex s) { return 1.0 / (s + 1.0); };
  TangentialData d;
  for (double l : {1.0, 2.0}) {
    d.right_points.emplace_back(l);
    d.right_values.push_back(h(l));
  }
  for (double m : {3.0, 4.0}) {
    d.left_points.emplace_back(m);
    d.left_values.push_back(h(m));
  }
  const auto p = build_pencil(d);
  Eigen::JacobiSVD<ComplexMatrix> svd(p.loewner);
  CHECK(svd.singularValues()(1) / svd.singularValues()(0) < 1e-12);

  const auto data = close_under_conjugation(partition_samples(sample_on(h, -1, 1, 8)));
  const auto dec = sv_analysis(realify(build_pencil(data)));
  CHECK(dec.row_normalized[1] < 1e-12);
  CHECK(dec.col_normalized[1] < 1e-12);
  CHECK(select_order(dec) == 1);
}

TEST_CASE("partition_samples") {
  SampleSet s;
  for (int k = 1; k <= 4; ++k) s.push_back({{0.0, double(k)}, {double(k), 0.0}});
  // Input order must not matter: sorting is by |Im s|.
  std::swap(s[0], s[3]);
  const auto alt = partition_samples(s, PartitionScheme::kAlternating);
  CHECK(alt.right_points == std::vector<Complex>{{0, 1}, {0, 3}});
  CHECK(alt.left_points == std::vector<Complex>{{0, 2}, {0, 4}});
  CHECK(alt.right_values == std::vector<Complex>{1.0, 3.0});

  SampleSet six;
  for (int k = 1; k <= 6; ++k) six.push_back({{0.0, double(k)}, 1.0});
  const auto half = partition_samples(six, PartitionScheme::kHalfSplit);
  CHECK(half.rho() == 3);
  CHECK(half.nu() == 3);
  CHECK(half.right_points.back() == Complex(0, 3));

  const auto beam = sample_on([](Complex z) { return 1.0 / (z + 1.0); }, 1, 4.5, 400);
  const auto d = partition_samples(beam);
  CHECK(d.rho() == 200);
  CHECK(d.nu() == 200);

  SampleSet dup = six;
  dup.push_back(six[2]);
  CHECK_THROWS_AS(partition_samples(dup), DataError);
  CHECK_THROWS_AS(partition_samples(SampleSet{six[0]}), DataError);
}

TEST_CASE("close_under_conjugation") {
  TangentialData d;
  d.right_points = {{0, 1}};
  d.right_values = {{2, 3}};
  d.left_points = {{0, 2}, {5, 0}};
  d.left_values = {{1, 1}, {7, 0}};
  const auto c = close_under_conjugation(d);
  CHECK(c.right_points == std::vector<Complex>{{0, 1}, {0, -1}});
  CHECK(c.right_values == std::vector<Complex>{{2, 3}, {2, -3}});
  CHECK(c.nu() == 3);
  CHECK(c.rho() == 2);

  const auto again = close_under_conjugation(c);
  CHECK(again.right_points == c.right_points);
  CHECK(again.left_points == c.left_points);
  CHECK(again.left_values == c.left_values);

  TangentialData bad = d;
  bad.left_values[1] = {7, 1};
  CHECK_THROWS_AS(close_under_conjugation(bad), DataError);

  const auto big = partition_samples(sample_on([](Complex z) { return 1.0 / (z + 1.0); }, 1, 4.5, 400));
  const auto closed = close_under_conjugation(big);
  CHECK(closed.rho() == 400);
  CHECK(closed.nu() == 400);
}

TEST_CASE("realify: real pencil with unchanged transfer values and singular values") {
  const Evaluator h = [](Complex s) { return 1.0 / (s + 1.0); };
  TangentialData one;
  one.right_points = {{0, 1}, {0, -1}};
  one.right_values = {h({0, 1}), h({0, -1})};
  one.left_points = {{0, 2}, {0, -2}};
  one.left_values = {h({0, 2}), h({0, -2})};
  const auto r1 = realify(build_pencil(one));
  CHECK(r1.is_real);
  CHECK(r1.loewner.rows() == 2);
  CHECK(r1.loewner.imag().isZero(0.0));

  std::mt19937_64 rng(9);
  const RationalOracle sys = testing::random_stable(rng, 4);
  const auto data = close_under_conjugation(
      partition_samples(sample_on(std::cref(sys), -0.5, 2.5, 6)));
  const auto complex_pencil = build_pencil(data);
  const auto real_pencil = realify(complex_pencil);
  CHECK(real_pencil.shifted.imag().isZero(0.0));
  for (Complex z : {Complex(0.3, 2.0), Complex(-1.0, 7.0), Complex(2.0, -0.5)}) {
    CHECK(rel_err(eval_pencil(real_pencil, z), eval_pencil(complex_pencil, z)) < 1e-10);
  }
  const auto a = sv_analysis(complex_pencil);
  const auto b = sv_analysis(real_pencil);
  REQUIRE(a.sv_row.size() == b.sv_row.size());
  for (std::size_t k = 0; k < a.sv_row.size(); ++k) {
    CHECK(std::abs(a.row_normalized[k] - b.row_normalized[k]) < 1e-10);
    CHECK(std::abs(a.col_normalized[k] - b.col_normalized[k]) < 1e-10);
  }

  TangentialData open;
  open.right_points = {{0, 1}};
  open.right_values = {h({0, 1})};
  open.left_points = {{0, 2}};
  open.left_values = {h({0, 2})};
  CHECK_THROWS_AS(realify(build_pencil(open)), DataError);
  CHECK_THROWS_AS(reduce(build_pencil(open), 1), DataError);
}

TEST_CASE("the full pencil interpolates the data") {
  std::mt19937_64 rng(12);
  const RationalOracle sys = testing::random_stable(rng, 4);
  const auto data = close_under_conjugation(
      partition_samples(sample_on(std::cref(sys), 0.0, 2.0, 4)));
  const auto pencil = realify(build_pencil(data));
  REQUIRE(pencil.loewner.rows() == 4);
  for (std::size_t j = 0; j < data.rho(); ++j) {
    CHECK(rel_err(eval_pencil(pencil, data.right_points[j]), data.right_values[j]) < 1e-8);
  }
  for (std::size_t i = 0; i < data.nu(); ++i) {
    CHECK(rel_err(eval_pencil(pencil, data.left_points[i]), data.left_values[i]) < 1e-8);
  }
  // Projection at full order reproduces the unreduced interpolant.
  const auto model = reduce(pencil, 4);
  for (int k = 0; k < 10; ++k) {
    const Complex z{-0.5 + 0.2 * k, 0.3 + 3.1 * k};
    CHECK(rel_err(eval_reduced(model, z), eval_pencil(pencil, z)) < 1e-8);
  }
}

TEST_CASE("rank law and recovery on random stable rational systems") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    const RationalOracle sys = testing::random_stable(rng, n);
    const auto samples = sample_on(std::cref(sys), -1.0, 3.0, 40);
    const auto res = reduce_samples(samples, PartitionScheme::kAlternating, std::nullopt);
    CAPTURE(trial);
    CAPTURE(n);
    CHECK(res.decay.row_normalized[n] < 1e-10);
    CHECK(res.decay.col_normalized[n] < 1e-10);
    CHECK(res.model.order == n);
    CHECK(max_rel_at_samples(res.model, samples) < 1e-8);
    for (int k = 0; k < 10; ++k) {
      const Complex z{-0.3 * k, std::pow(10.0, -0.8 + 0.37 * k)};
      CHECK(rel_err(eval_reduced(res.model, z), sys(z)) < 1e-8);
    }
    const auto poles = analysis::reduced_poles(res.model);
    REQUIRE(poles.size() == static_cast<std::size_t>(n));
    for (const auto& m : analysis::match_poles(sys.poles, poles)) CHECK(m.rel_dist < 1e-7);
  }
}

TEST_CASE("reduce: errors, warnings and the r = 1 example") {
  ReducedModel m;
  m.E = RealMatrix::Ones(1, 1);
  m.A = -RealMatrix::Ones(1, 1);
  m.B = RealVector::Ones(1);
  m.C = RealRowVector::Ones(1);
  m.order = 1;
  CHECK(eval_reduced(m, 0.0) == Complex(1.0, 0.0));
  CHECK(eval_reduced(m, {0.0, -2.0}) == std::conj(eval_reduced(m, {0.0, 2.0})));
  CHECK_THROWS_AS(eval_reduced(m, -1.0), NumericalError);

  const Evaluator h = [](Complex s) { return 2.0 / (s + 3.0); };
  const auto pencil =
      realify(build_pencil(close_under_conjugation(partition_samples(sample_on(h, -1, 2, 10)))));
  CHECK_THROWS_AS(reduce(pencil, 0), DomainError);
  CHECK_THROWS_AS(reduce(pencil, 11), DomainError);
  CHECK(reduce(pencil, 1).warnings.empty());
  CHECK(reduce(pencil, 3).warnings.size() == 1);
  ReduceOptions slack;
  slack.rank_slack = 2;
  CHECK(reduce(pencil, 3, slack).warnings.empty());

  // Identically zero data: every projected matrix vanishes.
  const Evaluator zero = [](Complex) { return Complex(0.0, 0.0); };
  const auto degenerate = realify(
      build_pencil(close_under_conjugation(partition_samples(sample_on(zero, 0, 1, 6)))));
  CHECK_THROWS_AS(reduce(degenerate, 2), NumericalError);
}

TEST_CASE("beam data, r = 32") {
  const auto p = beam::BeamParams::aluminum_cantilever();
  const auto samples =
      analysis::sample([&p](Complex s) { return beam::eval_H_orig(s, p); },
                       analysis::log_grid(1.0, 4.5, 400));
  const auto res = reduce_samples(samples, PartitionScheme::kAlternating, 32);
  CHECK(res.pencil.loewner.rows() == 400);
  CHECK(res.pencil.loewner.cols() == 400);
  CHECK(res.model.E.rows() == 32);
  CHECK(max_rel_at_samples(res.model, samples) <= 1e-6);
  const Complex off{0.0, std::pow(10.0, 2.5)};
  CHECK(rel_err(eval_reduced(res.model, off), beam::eval_H_orig(off, p)) < 1e-6);
}

}  // TEST_SUITE
