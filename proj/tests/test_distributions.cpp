#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "growthfit/distributions.hpp"
#include "growthfit/rng.hpp"
#include "support/helpers.hpp"
#include "support/reference_params.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using growthfit::AdLnParams;
using growthfit::ASubParams;
using growthfit::Family;
using growthfit::ModelParams;
using growthfit::ModelSpec;
using growthfit::NormalParams;
using growthfit::StudentTParams;
using growthfit::TMixParams;

namespace {

template <typename F>
std::string thrown_cls(F&& f) {
  try {
    f();
  } catch (const growthfit::Error& e) {
    return e.cls();
  }
  return "";
}

const AdLnParams kAdLnUnit{1.0, 1.0, 0.0, 1.0};
const AdLnParams kAdLnSharp{14.206, 14.346, 0.007, 0.047};
const AdLnParams kAdLnSkew{5.042, 10.556, -0.065, 0.081};
const AdLnParams kAdLnMid{9.246, 14.187, 0.061, 0.066};
const StudentTParams kTRef{0.092, 0.115, 5.236};
const ASubParams kASubRef{0.0847, 0.1491, 1.072, 1.349, 0.0385};

}  // namespace

TEST_CASE("parameter validation rejects out-of-domain values") {
  CHECK(thrown_cls([] { NormalParams(0.0, 0.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { NormalParams(0.0, -1.0); }) == growthfit::errc::invalid_params);
  const double nan = std::nan("");
  CHECK(thrown_cls([nan] { NormalParams(nan, 1.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { StudentTParams(0.0, 1.0, 0.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { StudentTParams(0.0, -0.5, 5.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { AdLnParams(-1.0, 2.0, 0.0, 1.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { AdLnParams(2.0, 0.0, 0.0, 1.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { AdLnParams(1.0, 1.0, 0.0, 0.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { ASubParams(0.0, 1.0, 1.0, 1.0, 0.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { ASubParams(1.0, 1.0, 0.0, 1.0, 0.0); }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] { ASubParams(1.0, 1.0, 1.0, -1.0, 0.0); }) == growthfit::errc::invalid_params);

  CHECK(thrown_cls([] {
          TMixParams({0.0}, {1.0}, {1.0}, {4.0});
        }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] {
          TMixParams({0.0, 0.1}, {1.0}, {0.5, 0.5}, {4.0, 12.0});
        }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] {
          TMixParams({0.0, 0.1}, {1.0, 1.0}, {0.6, 0.5}, {4.0, 12.0});
        }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] {
          TMixParams({0.0, 0.1}, {1.0, 1.0}, {1.2, -0.2}, {4.0, 12.0});
        }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] {
          TMixParams({0.0, 0.1}, {1.0, 1.0}, {0.5, 0.5}, {12.0, 4.0});
        }) == growthfit::errc::invalid_params);
  CHECK(thrown_cls([] {
          TMixParams({0.0, 0.1}, {1.0, 1.0}, {0.5, 0.5}, {4.0, 4.0});
        }) == growthfit::errc::invalid_params);

  CHECK_NOTHROW(TMixParams({0.1, 0.0}, {0.2, 1.0}, {1.0, 0.0}, {4.0, 12.0}));
}

TEST_CASE("log density matches closed forms at the center") {
  CHECK_THAT(growthfit::log_pdf(NormalParams(0.0, 1.0), 0.0),
             WithinAbs(-0.91893853320467274, 1e-14));
  CHECK_THAT(growthfit::log_pdf(StudentTParams(0.0, 1.0, 1.0), 0.0),
             WithinAbs(-1.1447298858494002, 1e-14));
  CHECK_THAT(growthfit::log_pdf(ASubParams(1.0, 1.0, 1.0, 1.0, 0.0), 0.0),
             WithinAbs(std::log(0.5), 1e-14));

  const double f4 = std::exp(growthfit::log_pdf(StudentTParams(0.0, 1.0, 4.0), 0.0));
  CHECK_THAT(f4, WithinAbs(0.375, 1e-15));
  const double f12 = std::exp(growthfit::log_pdf(StudentTParams(0.0, 1.0, 12.0), 0.0));
  CHECK_THAT(f12, WithinAbs(0.39072630522305728, 1e-15));
  const TMixParams mix({0.0, 0.0}, {1.0, 1.0}, {0.5, 0.5}, {4.0, 12.0});
  CHECK_THAT(growthfit::log_pdf(ModelParams(mix), 0.0),
             WithinAbs(std::log(0.5 * f4 + 0.5 * f12), 1e-14));
  CHECK_THAT(growthfit::log_pdf(ModelParams(mix), 0.0),
             WithinAbs(-0.96007765753608213, 1e-13));
}

TEST_CASE("double-sided log-normal density matches reference values") {
  const ModelParams unit{kAdLnUnit};
  CHECK_THAT(growthfit::log_pdf(unit, 0.0), WithinAbs(-1.3410216450092635, 1e-12));
  CHECK_THAT(growthfit::log_pdf(unit, -2.0), WithinAbs(-2.2819273777221031, 1e-12));
  CHECK_THAT(growthfit::log_pdf(unit, 1.5), WithinAbs(-1.8962590579489908, 1e-12));

  const double half_term =
      0.25 * std::exp(0.5) * growthfit::specfun::erfc(1.0 / std::sqrt(2.0));
  CHECK_THAT(growthfit::log_pdf(unit, 0.0), WithinAbs(std::log(2.0 * half_term), 1e-13));

  const ModelParams sharp{kAdLnSharp};
  CHECK_THAT(growthfit::log_pdf(sharp, -0.5), WithinAbs(-5.0806987955859983, 1e-12));
  CHECK_THAT(growthfit::log_pdf(sharp, 0.0), WithinAbs(1.4970968644037357, 1e-12));
  CHECK_THAT(growthfit::log_pdf(sharp, 0.5), WithinAbs(-4.8152497913459983, 1e-12));
  CHECK_THAT(growthfit::log_pdf(sharp, 2.0), WithinAbs(-26.124249791345998, 1e-11));
  CHECK_THAT(growthfit::log_pdf(sharp, 3.0), WithinAbs(-40.330249791345998, 1e-11));

  const ModelParams skew{kAdLnSkew};
  CHECK_THAT(growthfit::log_pdf(skew, -2.0), WithinAbs(-18.832962172853501, 1e-11));
  CHECK_THAT(growthfit::log_pdf(skew, 0.0), WithinAbs(0.79819655565500214, 1e-12));
  CHECK_THAT(growthfit::log_pdf(skew, 3.0), WithinAbs(-14.142979356699501, 1e-11));

  CHECK_THAT(growthfit::log_pdf(ModelParams(kAdLnMid), 0.3),
             WithinAbs(-0.30162943554736667, 1e-12));
}

TEST_CASE("asymmetric subbotin density matches reference values") {
  const ModelParams ref{kASubRef};
  CHECK_THAT(growthfit::log_pdf(ref, -0.3), WithinAbs(-2.7669691499360187, 1e-13));
  CHECK_THAT(growthfit::log_pdf(ref, 0.0), WithinAbs(0.95150327101222262, 1e-13));
  CHECK_THAT(growthfit::log_pdf(ref, 0.5), WithinAbs(-2.0514481831021391, 1e-13));

  CHECK_THAT(growthfit::log_pdf(ModelParams(kTRef), 0.0),
             WithinAbs(0.83685418281232597, 1e-13));
  CHECK_THAT(growthfit::log_pdf(ModelParams(kTRef), 0.5),
             WithinAbs(-2.6229329453752431, 1e-13));
}

TEST_CASE("cdf matches closed forms and reference values") {
  CHECK_THAT(growthfit::cdf(NormalParams(0.5, 2.0), 0.5), WithinAbs(0.5, 1e-15));
  for (const auto& p : testsets::student_t_sets())
    CHECK_THAT(growthfit::cdf(ModelParams(p), p.mu), WithinAbs(0.5, 1e-14));
  CHECK_THAT(growthfit::cdf(ASubParams(1.0, 1.0, 1.0, 1.0, 0.0), -1.0),
             WithinAbs(0.18393972058572116, 1e-14));

  const ModelParams ref{kASubRef};
  CHECK_THAT(growthfit::cdf(ref, -0.3), WithinAbs(0.0047538044478060818, 1e-13));
  CHECK_THAT(growthfit::cdf(ref, 0.0), WithinAbs(0.21657708037796122, 1e-13));
  CHECK_THAT(growthfit::cdf(ref, 0.5), WithinAbs(0.98782947633905766, 1e-13));

  const ModelParams unit{kAdLnUnit};
  CHECK_THAT(growthfit::cdf(unit, -2.0), WithinAbs(0.10839226360438665, 1e-9));
  CHECK_THAT(growthfit::cdf(unit, 0.0), WithinAbs(0.5, 1e-9));
  CHECK_THAT(growthfit::cdf(unit, 1.5), WithinAbs(0.82894716953275709, 1e-9));

  const ModelParams sharp{kAdLnSharp};
  CHECK_THAT(growthfit::cdf(sharp, -0.5), WithinAbs(0.00043326112430374475, 1e-10));
  CHECK_THAT(growthfit::cdf(sharp, 0.0), WithinAbs(0.46646130991767393, 1e-9));
  CHECK_THAT(growthfit::cdf(sharp, 0.5), WithinAbs(0.99942945253999053, 1e-9));

  const ModelParams skew{kAdLnSkew};
  CHECK_THAT(growthfit::cdf(skew, -2.0), WithinRel(6.2726213062261850e-10, 1e-9));
  CHECK_THAT(growthfit::cdf(skew, 0.0), WithinAbs(0.48768104006425199, 1e-9));
  CHECK_THAT(growthfit::cdf(skew, 3.0), WithinAbs(0.99999985705161065, 1e-9));

  CHECK_THAT(growthfit::cdf(ModelParams(kAdLnMid), 0.3),
             WithinAbs(0.91997981334222140, 1e-9));
}

TEST_CASE("cdf is consistent with the density by finite differences") {
  struct Case {
    ModelParams params;
    double center;
    double scale;
  };
  const std::vector<Case> cases = {
      {NormalParams(0.099, 0.150), 0.099, 0.150},
      {kTRef, 0.092, 0.115},
      {kAdLnSharp, 0.007, 0.047 + 1.0 / 14.206},
      {kASubRef, 0.0385, 0.1491},
      {testsets::mix2(12, 0.174, 0.273, 0.018, 0.102, 0.339), 0.1, 0.273},
      {testsets::tmix3_sets()[0], 0.1, 0.12},
  };
  for (const auto& c : cases) {
    const double h = 1e-4 * c.scale;
    for (int i = 0; i < 25; ++i) {
      const double k = -3.0 + 6.0 * (i + 0.5) / 25.0;
      const double g = c.center + k * c.scale;
      const double fd =
          (growthfit::cdf(c.params, g + h) - growthfit::cdf(c.params, g - h)) /
          (2.0 * h);
      const double f = std::exp(growthfit::log_pdf(c.params, g));
      CHECK_THAT(fd, WithinRel(f, 1e-4));
    }
  }
}

TEST_CASE("subbotin with unit shape reduces to the asymmetric Laplace") {
  const double a_l = 0.5, a_r = 2.0, mu = 0.3;
  const ModelParams p{ASubParams(a_l, a_r, 1.0, 1.0, mu)};
  for (int i = 0; i < 100; ++i) {
    const double g = mu - 6.0 + 12.0 * i / 99.0;
    const double expect_ln =
        g < mu ? -std::log(a_l + a_r) - (mu - g) / a_l
               : -std::log(a_l + a_r) - (g - mu) / a_r;
    CHECK_THAT(growthfit::log_pdf(p, g), WithinAbs(expect_ln, 1e-12));
    const double expect_cdf =
        g < mu ? a_l / (a_l + a_r) * std::exp(-(mu - g) / a_l)
               : 1.0 - a_r / (a_l + a_r) * std::exp(-(g - mu) / a_r);
    CHECK_THAT(growthfit::cdf(p, g), WithinAbs(expect_cdf, 1e-12));
  }
}

TEST_CASE("symmetric subbotin with shape two reduces to the normal") {
  const double a = 0.7, mu = -0.2;
  const ModelParams sub{ASubParams(a, a, 2.0, 2.0, mu)};
  const ModelParams norm{NormalParams(mu, a)};
  for (int i = 0; i < 100; ++i) {
    const double g = mu - 6.0 * a + 12.0 * a * i / 99.0;
    CHECK_THAT(growthfit::log_pdf(sub, g),
               WithinAbs(growthfit::log_pdf(norm, g), 1e-12));
    CHECK_THAT(growthfit::cdf(sub, g), WithinAbs(growthfit::cdf(norm, g), 1e-12));
  }
}

TEST_CASE("student t with huge dof approaches the normal") {
  const ModelParams t{StudentTParams(0.0, 1.0, 1e6)};
  const ModelParams norm{NormalParams(0.0, 1.0)};
  double sup_pdf = 0.0, sup_cdf = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double z = -6.0 + 12.0 * i / 200.0;
    sup_pdf = std::max(sup_pdf, std::abs(std::exp(growthfit::log_pdf(t, z)) -
                                         std::exp(growthfit::log_pdf(norm, z))));
    sup_cdf = std::max(sup_cdf,
                       std::abs(growthfit::cdf(t, z) - growthfit::cdf(norm, z)));
  }
  CHECK(sup_pdf < 1e-5);
  CHECK(sup_cdf < 1e-5);
}

TEST_CASE("mixture with a unit weight reduces to its first component") {
  const TMixParams mix({0.1, 0.0}, {0.2, 1.0}, {1.0, 0.0}, {4.0, 12.0});
  const ModelParams comp{StudentTParams(0.1, 0.2, 4.0)};
  for (int i = 0; i <= 60; ++i) {
    const double g = -1.4 + 3.0 * i / 60.0;
    CHECK_THAT(growthfit::log_pdf(ModelParams(mix), g),
               WithinAbs(growthfit::log_pdf(comp, g), 1e-12));
    CHECK_THAT(growthfit::cdf(ModelParams(mix), g),
               WithinAbs(growthfit::cdf(comp, g), 1e-12));
  }
  growthfit::RngStream rng(99);
  const auto draws = growthfit::draw_many(ModelParams(mix), 10000, rng);
  CHECK(testsup::ks_statistic(comp, draws) < 1.63 / std::sqrt(10000.0));
}

TEST_CASE("double-sided log-normal tails decay at the rate parameters") {
  const ModelParams sharp{kAdLnSharp};
  const double up2 = growthfit::log_pdf(sharp, 2.0) + 14.206 * 2.0;
  const double up3 = growthfit::log_pdf(sharp, 3.0) + 14.206 * 3.0;
  CHECK_THAT(up3 - up2, WithinAbs(0.0, 1e-3));
  const double lo2 = growthfit::log_pdf(sharp, -2.0) - 14.346 * (-2.0);
  const double lo3 = growthfit::log_pdf(sharp, -3.0) - 14.346 * (-3.0);
  CHECK_THAT(lo3 - lo2, WithinAbs(0.0, 1e-3));
}

TEST_CASE("densities integrate to one with tail closure") {
  const std::vector<ModelParams> sets = {
      NormalParams(0.0, 1.0),
      kTRef,
      kAdLnUnit,
      kAdLnSharp,
      kAdLnSkew,
      kASubRef,
      testsets::asub_sets()[5],
      testsets::tmix12_sets()[4],
      testsets::tmix3_sets()[0],
  };
  for (const auto& p : sets)
    CHECK_THAT(testsup::total_mass(p), WithinAbs(1.0, 1e-6));
}

TEST_CASE("cdf is monotone and saturates at the window edges") {
  for (const auto& p : testsets::all_sets()) {
    const auto [lo, hi] = testsup::mass_window(p);
    double prev = growthfit::cdf(p, lo);
    CHECK(prev < 1e-5);
    for (int i = 1; i <= 8; ++i) {
      const double g = lo + (hi - lo) * i / 8.0;
      const double cur = growthfit::cdf(p, g);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
    CHECK(prev > 1.0 - 1e-5);
  }
}

TEST_CASE("sample mean of normal draws is close to the location") {
  growthfit::RngStream rng(7);
  const auto draws = growthfit::draw_many(NormalParams(0.0, 1.0), 100000, rng);
  double sum = 0.0;
  for (double g : draws) sum += g;
  CHECK(std::abs(sum / 100000.0) < 0.02);
}

TEST_CASE("draws pass a KS test against the generating cdf") {
  const std::vector<ModelParams> sets = {
      NormalParams(0.099, 0.150),
      kTRef,
      kAdLnSharp,
      kASubRef,
      testsets::asub_sets()[5],
      testsets::mix2(12, 0.174, 0.273, 0.018, 0.102, 0.339),
      testsets::tmix3_sets()[0],
  };
  const std::size_t n = 20000;
  const double crit = 1.63 / std::sqrt(static_cast<double>(n));
  std::uint64_t seed = 11;
  for (const auto& p : sets) {
    growthfit::RngStream rng(seed++);
    const auto draws = growthfit::draw_many(p, n, rng);
    CHECK(testsup::ks_statistic(p, draws) < crit);
  }
}

TEST_CASE("subbotin draws with shape two match the normal") {
  growthfit::RngStream rng(21);
  const auto draws =
      growthfit::draw_many(ASubParams(1.0, 1.0, 2.0, 2.0, 0.0), 100000, rng);
  CHECK(testsup::ks_statistic(NormalParams(0.0, 1.0), draws) <
        1.63 / std::sqrt(100000.0));
}

TEST_CASE("draws are deterministic in the seed and differ across streams") {
  growthfit::RngStream a(42), b(42), c(43);
  const ModelParams p{kTRef};
  const auto d1 = growthfit::draw_many(p, 100, a);
  const auto d2 = growthfit::draw_many(p, 100, b);
  const auto d3 = growthfit::draw_many(p, 100, c);
  CHECK(d1 == d2);
  CHECK(d1 != d3);
}

TEST_CASE("model specs expose labels, parameter counts, and names") {
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("normal")) == 2);
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("student_t")) == 3);
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("adln")) == 4);
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("asub")) == 5);
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("2st12")) == 5);
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("2st39")) == 5);
  CHECK(growthfit::n_free_params(growthfit::spec_from_label("3st")) == 8);

  for (const auto& label : growthfit::known_labels()) {
    const ModelSpec spec = growthfit::spec_from_label(label);
    CHECK(growthfit::label_for(spec) == label);
    CHECK(growthfit::param_names(spec).size() == growthfit::n_free_params(spec));
  }
  CHECK(thrown_cls([] { growthfit::spec_from_label("weibull"); }) ==
        growthfit::errc::usage);

  const ModelSpec mix3 = growthfit::spec_from_label("3st");
  const auto names = growthfit::param_names(mix3);
  REQUIRE(names.size() == 8);
  CHECK(names[0] == "mu1");
  CHECK(names[1] == "sigma1");
  CHECK(names[6] == "p1");
  CHECK(names[7] == "p2");
}

TEST_CASE("parameter vectors round trip through the flat encoding") {
  for (const auto& p : testsets::all_sets()) {
    const ModelSpec spec = growthfit::spec_of(p);
    const auto values = growthfit::param_values(p);
    REQUIRE(values.size() == growthfit::n_free_params(spec));
    const ModelParams back = growthfit::params_from_values(spec, values);
    const auto values2 = growthfit::param_values(back);
    REQUIRE(values2.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      CHECK_THAT(values2[i], WithinAbs(values[i], 1e-15));
  }
  CHECK(thrown_cls([] {
          growthfit::params_from_values(growthfit::spec_from_label("normal"),
                                        {1.0, 2.0, 3.0});
        }) == growthfit::errc::invalid_params);
}
