#include <doctest.h>

#include <cmath>
#include <random>

#include "loewner/analysis.hpp"
#include "loewner/beam_model.hpp"
#include "loewner/errors.hpp"
#include "loewner/loewner_core.hpp"
#include "support.hpp"

using namespace loewner;
using namespace loewner::analysis;
using testing::rel_err;
using testing::RationalOracle;

namespace {

ReducedModel model_from(const Evaluator& h, std::optional<int> order = std::nullopt) {
  const auto samples = sample_serial(h, log_grid(-1.0, 2.0, 40));
  return reduce_samples(samples, PartitionScheme::kAlternating, order).model;
}

ReducedModel first_order_lag() {
  ReducedModel m;
  m.E = RealMatrix::Ones(1, 1);
  m.A = -RealMatrix::Ones(1, 1);
  m.B = RealVector::Ones(1);
  m.C = RealRowVector::Ones(1);
  m.order = 1;
  return m;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("log_grid") {
  const auto g = log_grid(0, 1, 2);
  REQUIRE(g.points.size() == 2);
  CHECK(g.points[0] == Complex(0, 1));
  CHECK(g.points[1] == Complex(0, 10));

  const auto full = log_grid(1, 4.5, 400);
  CHECK(full.points.size() == 400);
  CHECK(full.points.front().imag() == 10.0);
  CHECK(rel_err(full.points.back().imag(), std::pow(10.0, 4.5)) < 1e-15);
  for (std::size_t k = 0; k < full.points.size(); ++k) {
    CHECK(full.points[k].real() == 0.0);
    if (k > 0) CHECK(full.points[k].imag() > full.points[k - 1].imag());
  }
  const auto again = log_grid(1, 4.5, 400);
  CHECK(again.points == full.points);
  CHECK(log_grid(0, 7, 500).omegas().back() == doctest::Approx(1e7).epsilon(1e-15));

  CHECK_THROWS_AS(log_grid(1, 1, 10), DomainError);
  CHECK_THROWS_AS(log_grid(2, 1, 10), DomainError);
  CHECK_THROWS_AS(log_grid(0, 1, 1), DomainError);
}

TEST_CASE("sample: order, parallel equals serial, errors carry the point") {
  const auto grid = log_grid(1, 4.5, 400);
  const auto ones = sample(Evaluator([](Complex) { return Complex(1.0, 0.0); }), grid);
  for (std::size_t k = 0; k < ones.size(); ++k) {
    CHECK(ones[k].value == Complex(1.0, 0.0));
    CHECK(ones[k].s == grid.points[k]);
  }

  const auto p = beam::BeamParams::aluminum_cantilever();
  const Evaluator h = [&p](Complex s) { return beam::eval_H_orig(s, p); };
  const auto par = sample(h, grid);
  const auto ser = sample_serial(h, grid);
  REQUIRE(par.size() == ser.size());
  bool identical = true;
  for (std::size_t k = 0; k < par.size(); ++k) identical &= par[k].value == ser[k].value;
  CHECK(identical);

  const Evaluator bad = [](Complex s) -> Complex {
    if (s.imag() > 5.0) throw NumericalError("boom");
    return 1.0;
  };
  for (auto fn : {&sample, &sample_serial}) {
    try {
      fn(bad, log_grid(0, 1, 5));
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("boom") != std::string::npos);
      CHECK(msg.find("5.62") != std::string::npos);
    }
  }

  // H_orig vs long modal series on [10, 1e3].
  const auto sub = log_grid(1, 3, 60);
  const auto alphas = beam::alpha_roots(10000, p.length());
  const auto prof = error_profile(
      h, [&](Complex s) { return beam::eval_H_modal(s, p, alphas, 10000); }, sub);
  CHECK(prof.max_rel < 1e-3);
}

TEST_CASE("error_profile") {
  const Evaluator h = [](Complex s) { return 1.0 / (s + 2.0); };
  const auto grid = log_grid(0, 3, 50);
  const auto self = error_profile(h, h, grid);
  CHECK(self.max_rel == 0.0);
  CHECK(self.median_rel == 0.0);
  CHECK(self.abs_err.size() == grid.points.size());

  const Evaluator g = [](Complex s) { return 1.01 / (s + 2.0); };
  const auto prof = error_profile(h, g, grid);
  CHECK(prof.max_rel >= prof.median_rel);
  CHECK(prof.median_rel == doctest::Approx(0.01).epsilon(1e-9));

  const Evaluator zero = [](Complex) { return Complex(0.0, 0.0); };
  const auto z = error_profile(zero, h, grid);
  CHECK(z.rel_is_absolute[0]);
  CHECK(z.rel_err[0] == z.abs_err[0]);

  CHECK_THROWS_AS(error_profile(sample(h, grid), sample(h, log_grid(0, 3, 10)), grid), DataError);
}

TEST_CASE("ratio_summary and median") {
  const auto r = ratio_summary({2, 9, 40}, {1, 3, 4});
  CHECK(r.min == 2.0);
  CHECK(r.median == 3.0);
  CHECK(r.max == 10.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(ratio_summary({1}, {1, 2}), DataError);
  CHECK_THROWS_AS(ratio_summary({}, {}), DataError);
}

TEST_CASE("reduced_poles") {
  const auto p1 = reduced_poles(first_order_lag());
  REQUIRE(p1.size() == 1);
  CHECK(p1[0] == Complex(-1.0, 0.0));

  RationalOracle two;
  two.poles = {-1.0, -2.0};
  two.residues = {1.0, -1.0};
  const auto m2 = model_from(std::cref(two));
  REQUIRE(m2.order == 2);
  auto poles = reduced_poles(m2);
  REQUIRE(poles.size() == 2);
  std::sort(poles.begin(), poles.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
  CHECK(std::abs(poles[0] - Complex(-1.0)) < 1e-8);
  CHECK(std::abs(poles[1] - Complex(-2.0)) < 2e-8);

  std::mt19937_64 rng(77);
  for (int n = 2; n <= 6; ++n) {
    const auto sys = testing::random_stable(rng, n);
    const auto got = reduced_poles(model_from(std::cref(sys)));
    REQUIRE(got.size() == static_cast<std::size_t>(n));
    for (std::size_t k = 1; k < got.size(); ++k) {
      CHECK(std::abs(got[k].imag()) >= std::abs(got[k - 1].imag()) - 1e-9);
    }
    for (const auto& m : match_poles(sys.poles, got)) CHECK(m.rel_dist < 1e-7);
  }
}

TEST_CASE("reduced_zeros") {
  const auto lag = reduced_zeros(first_order_lag());
  CHECK(lag.finite.empty());
  CHECK(lag.indeterminate == 0);

  const auto none = reduced_zeros(model_from([](Complex s) { return 1.0 / (s + 1.0); }));
  CHECK(none.finite.empty());

  const auto m = model_from([](Complex s) { return (s + 3.0) / (s + 1.0); });
  const auto z = reduced_zeros(m);
  REQUIRE(z.finite.size() == 1);
  CHECK(std::abs(z.finite[0] - Complex(-3.0)) < 1e-8);
  const auto poles = reduced_poles(m);
  CHECK(std::any_of(poles.begin(), poles.end(),
                    [](Complex q) { return std::abs(q + 1.0) < 1e-8; }));

  // (s + 4)(s + 5) / ((s + 1)(s + 2)(s + 3))
  const Evaluator h = [](Complex s) { return (s + 4.0) * (s + 5.0) / ((s + 1.0) * (s + 2.0) * (s + 3.0)); };
  auto zz = reduced_zeros(model_from(h)).finite;
  REQUIRE(zz.size() == 2);
  std::sort(zz.begin(), zz.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
  CHECK(std::abs(zz[0] + 4.0) < 1e-7);
  CHECK(std::abs(zz[1] + 5.0) < 1e-7);
}

TEST_CASE("pencil_eigenvalues classifies infinite eigenvalues") {
  RealMatrix a(2, 2), e(2, 2);
  a << -1, 0, 0, 1;
  e << 1, 0, 0, 0;
  const auto ev = pencil_eigenvalues(a, e);
  REQUIRE(ev.finite.size() == 1);
  CHECK(std::abs(ev.finite[0] + 1.0) < 1e-14);
  CHECK(ev.infinite == 1);
  CHECK(ev.indeterminate == 0);
}

TEST_CASE("sort_spectrum is deterministic") {
  std::vector<Complex> v{{-1, 3}, {-2, -3}, {-5, 0}, {-1, -3}, {-2, 3}, {-3, 0}};
  auto w = v;
  std::reverse(w.begin(), w.end());
  sort_spectrum(v);
  sort_spectrum(w);
  CHECK(v == w);
  CHECK(v.front().imag() == 0.0);
  CHECK(std::abs(v.back().imag()) == 3.0);
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(std::abs(v[k].imag()) >= std::abs(v[k - 1].imag()));
}

TEST_CASE("interlace_report") {
  const auto p = beam::BeamParams::aluminum_cantilever();
  const auto spec = beam::spectrum(32, p);
  const auto rep = interlace_report(beam::alpha_roots(32, p.length()), beam::gamma_roots(31, p.length()));
  CHECK(rep.ok);
  CHECK_FALSE(rep.first_violation.has_value());
  CHECK(interlace_report(spec).ok);

  const beam::BeamParams unit(1.0, p.youngs(), p.inertia(), p.damping());
  CHECK(interlace_report(beam::alpha_roots(32, unit.length()), beam::gamma_roots(31, unit.length())).ok);

  auto alphas = beam::alpha_roots(32, p.length());
  auto gammas = beam::gamma_roots(31, p.length());
  std::swap(alphas[4], gammas[4]);
  const auto bad = interlace_report(alphas, gammas);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.first_violation.has_value());
  CHECK(*bad.first_violation == 4);

  CHECK_THROWS_AS(interlace_report({1.0}, {}), DomainError);
}

TEST_CASE("match_poles is greedy and one-to-one") {
  const std::vector<Complex> ref{{-1, 10}, {-1, 20}};
  const std::vector<Complex> cand{{-1, 20.001}, {-1, 10.0}, {-1, 10.002}};
  const auto m = match_poles(ref, cand);
  REQUIRE(m.size() == 2);
  CHECK(m[0].matched == Complex(-1, 10.0));
  CHECK(m[0].rel_dist == 0.0);
  CHECK(m[1].matched == Complex(-1, 20.001));

  const auto lonely = match_poles(ref, {Complex(-1, 10)});
  CHECK(std::isinf(lonely[1].rel_dist));
}

}  // TEST_SUITE
