#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kedmd.hpp"

using namespace kedmd;

namespace {

const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

// Forward map of the Blaschke family written out independently of the library.
double blaschke_oracle(double mu, double x) {
  const double pi = std::numbers::pi;
  const double shift = x <= 0.0 ? 1.0 : -1.0;
  return 2.0 * x + shift + 2.0 / pi * std::atan(mu * std::sin(pi * x) / (1.0 - mu * std::cos(pi * x)));
}

}  // namespace

TEST(SkewedDoubling, EvalExamples) {
  const IntervalMap d = make_skewed_doubling(0.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(eval(d, 0.5)), 0.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(eval(d, -1.0)), -1.0);
  const IntervalMap s = make_skewed_doubling(inv_sqrt2);
  EXPECT_NEAR(static_cast<double>(eval(s, 0.0)), 2.0 / (1.0 + inv_sqrt2) - 1.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(eval(s, 0.0)), 0.171572875253809902, 1e-15);
}

TEST(SkewedDoubling, CriticalPointUsesLeftBranch) {
  const double a = 0.25;
  const IntervalMap s = make_skewed_doubling(a);
  EXPECT_DOUBLE_EQ(static_cast<double>(s(a)), 1.0);
  EXPECT_NEAR(static_cast<double>(s(std::nextafter(a, 1.0))), -1.0, 1e-14);
}

TEST(SkewedDoubling, DomainErrors) {
  const IntervalMap s = make_skewed_doubling(0.0);
  EXPECT_THROW(s(1.5), domain_error);
  EXPECT_THROW(s(-1.0000001), domain_error);
  EXPECT_THROW(s(std::nan("")), domain_error);
  EXPECT_THROW(make_skewed_doubling(1.0), parameter_error);
  EXPECT_THROW(make_skewed_doubling(-1.2), parameter_error);
}

TEST(SkewedDoubling, Structure) {
  const IntervalMap d = make_skewed_doubling(0.0);
  ASSERT_EQ(d.branch_count(), 2u);
  for (const Branch& b : d.branches()) {
    EXPECT_DOUBLE_EQ(static_cast<double>(b.forward_derivative(0.1)), 2.0);
    EXPECT_DOUBLE_EQ(static_cast<double>(b.inverse_derivative(complex_real(0.3, 0.2)).real()), 0.5);
    EXPECT_EQ(b.sign, 1);
  }
  ASSERT_EQ(d.critical_points().size(), 1u);
  EXPECT_EQ(d.critical_points()[0], 0.0);

  const IntervalMap s = make_skewed_doubling(inv_sqrt2);
  EXPECT_NEAR(s.deriv_sup(), 2.0 / (1.0 - inv_sqrt2), 1e-12);
  EXPECT_NEAR(s.deriv_sup(), 6.828427124746, 1e-9);
  EXPECT_TRUE(s.piecewise_affine());
  EXPECT_EQ(s.exact_spectrum_kind(), ExactSpectrumKind::skewed_doubling);
}

TEST(SkewedDoubling, InverseBranchFormulas) {
  for (double a : {-0.4, 0.0, inv_sqrt2}) {
    const IntervalMap s = make_skewed_doubling(a);
    for (double re : {-1.3, 0.0, 0.7})
      for (double im : {-0.5, 0.0, 1.1}) {
        const std::complex<double> z(re, im);
        const auto p1 = s.branches()[0].inverse(complex_real(re, im));
        const auto p2 = s.branches()[1].inverse(complex_real(re, im));
        const std::complex<double> e1 = -1.0 + (1.0 + a) * (z + 1.0) / 2.0;
        const std::complex<double> e2 = 1.0 + (1.0 - a) * (z - 1.0) / 2.0;
        EXPECT_NEAR(std::abs(std::complex<double>(p1) - e1), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(std::complex<double>(p2) - e2), 0.0, 1e-15);
      }
  }
}

TEST(Maps, RoundTripAndSign) {
  const std::vector<IntervalMap> maps = {make_skewed_doubling(0.0), make_skewed_doubling(inv_sqrt2),
                                         make_skewed_doubling(-0.6), make_blaschke(0.0), make_blaschke(0.3),
                                         make_blaschke(-0.3)};
  for (const IntervalMap& map : maps) {
    for (const Branch& b : map.branches()) {
      const int expected_sign = b.inverse_derivative(complex_real(0, 0)).real() > 0 ? 1 : -1;
      EXPECT_EQ(b.sign, expected_sign);
      for (int i = 0; i <= 1000; ++i) {
        const real x = -1 + 2 * static_cast<real>(i) / 1000;
        const real y = b.inverse(complex_real(x, 0)).real();
        EXPECT_GE(y, b.domain_lo - 1e-15);
        EXPECT_LE(y, b.domain_hi + 1e-15);
        EXPECT_NEAR(static_cast<double>(b.forward(y)), static_cast<double>(x), 1e-12) << map.name();
      }
    }
  }
}

TEST(Maps, PiecewiseMonotoneAndExpanding) {
  for (const IntervalMap& map : {make_skewed_doubling(0.3), make_blaschke(0.3)}) {
    for (const Branch& b : map.branches()) {
      real prev = -2;
      for (int i = 1; i < 1000; ++i) {
        const real x = b.domain_lo + (b.domain_hi - b.domain_lo) * i / 1000.0L;
        const real t = map(x);
        EXPECT_GT(t, prev);
        prev = t;
        EXPECT_GE(std::abs(static_cast<double>(b.forward_derivative(x))), 1.0);
        EXPECT_LE(std::abs(static_cast<double>(b.forward_derivative(x))), map.deriv_sup());
      }
    }
  }
}

TEST(Blaschke, MuZeroIsDoubling) {
  const IntervalMap b = make_blaschke(0.0);
  const IntervalMap d = make_skewed_doubling(0.0);
  for (int i = 0; i <= 100; ++i) {
    const double x = -1.0 + 0.02 * i;
    EXPECT_NEAR(static_cast<double>(b(x)), static_cast<double>(d(x)), 1e-15);
  }
  for (double re : {-1.0, 0.2, 1.0}) {
    const complex_real z(re, 0.3);
    EXPECT_NEAR(std::abs(std::complex<double>(b.branches()[0].inverse(z)) - (std::complex<double>(z) / 2.0 - 0.5)),
                0.0, 1e-15);
    EXPECT_NEAR(std::abs(std::complex<double>(b.branches()[1].inverse(z)) - (std::complex<double>(z) / 2.0 + 0.5)),
                0.0, 1e-15);
  }
}

TEST(Blaschke, ForwardValues) {
  const IntervalMap b = make_blaschke(0.3);
  // The correction term vanishes at x = 0, so the right-hand limit is -1 and
  // the left branch (used at the critical point) gives +1.
  EXPECT_NEAR(static_cast<double>(b(std::nextafter(0.0, 1.0))), -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(static_cast<double>(b(0.0)), 1.0);
  for (int i = 0; i <= 100; ++i) {
    const double x = -1.0 + 0.02 * i;
    EXPECT_NEAR(static_cast<double>(b(x)), std::clamp(blaschke_oracle(0.3, x), -1.0, 1.0), 1e-14) << x;
  }
  EXPECT_NEAR(static_cast<double>(b(0.5)), 2.0 / std::numbers::pi * std::atan(0.3), 1e-15);
}

TEST(Blaschke, RoundTrip101) {
  const IntervalMap b = make_blaschke(0.3);
  for (const Branch& br : b.branches())
    for (int i = 0; i <= 100; ++i) {
      const real x = -1 + static_cast<real>(i) / 50;
      EXPECT_NEAR(static_cast<double>(br.forward(br.inverse(complex_real(x, 0)).real())), static_cast<double>(x),
                  1e-10);
    }
}

TEST(Blaschke, DerivativeMatchesDifferenceQuotient) {
  const IntervalMap b = make_blaschke(0.3);
  const real h = 1e-6L;
  for (const Branch& br : b.branches())
    for (int i = 1; i < 50; ++i) {
      const real x = br.domain_lo + (br.domain_hi - br.domain_lo) * i / 50.0L;
      const real fd = (br.forward(x + h) - br.forward(x - h)) / (2 * h);
      EXPECT_NEAR(static_cast<double>(br.forward_derivative(x)), static_cast<double>(fd), 1e-7);
      const complex_real z(static_cast<real>(0.4), static_cast<real>(0.3));
      const complex_real dfd = (br.inverse(z + h) - br.inverse(z - h)) / (2 * h);
      EXPECT_NEAR(static_cast<double>(std::abs(br.inverse_derivative(z) - dfd)), 0.0, 1e-7);
    }
  // sup |T'| is attained at x = 0 for mu > 0: 2 + 2 mu / (1 - mu).
  EXPECT_NEAR(b.deriv_sup(), 1.01 * (2.0 + 0.6 / 0.7), 1e-9);
}

TEST(Blaschke, ParameterRange) {
  EXPECT_NO_THROW(make_blaschke(0.3));
  EXPECT_NO_THROW(make_blaschke(-0.3));
  EXPECT_THROW(make_blaschke(0.31), parameter_error);
}

TEST(Blaschke, ContinuityCheck) {
  const IntervalMap b = make_blaschke(0.3);
  EXPECT_NO_THROW(check_branch_continuity(b, 1.1));
  // The inverse branches are singular where mu cos(pi z / 2) = +-1, about |z| = 1.19.
  EXPECT_THROW(check_branch_continuity(b, 1.5), branch_cut_error);
}

TEST(ExactSpectrum, SkewedDoubling) {
  const Spectrum s = exact_spectrum(make_skewed_doubling(inv_sqrt2), 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(s[1].real(), 0.75, 1e-15);
  for (double a : {-0.9, -0.2, 0.4, 0.95}) {
    const Spectrum e = exact_spectrum(make_skewed_doubling(a), 30);
    EXPECT_NEAR(e[0].real(), 1.0, 1e-15);
    for (std::size_t n = 0; n + 1 < e.size(); ++n) EXPECT_LT(e[n + 1].real(), e[n].real());
  }
}

TEST(ExactSpectrum, Blaschke) {
  const Spectrum s = exact_spectrum(make_blaschke(0.3), 6);
  const std::vector<double> expected = {1, 0.65, 0.4225, 0.3, 0.3, 0.274625};
  ASSERT_EQ(s.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(s[i].real(), expected[i], 1e-15);

  // Every value is mu^n (twice) or ((1 + mu)/2)^n.
  const double mu = 0.3;
  const Spectrum big = exact_spectrum(make_blaschke(mu), 40);
  std::map<int, int> doubled;
  for (std::size_t i = 1; i < big.size(); ++i) {
    const double v = big[i].real();
    const double n_mu = std::log(v) / std::log(mu);
    const double n_half = std::log(v) / std::log((1 + mu) / 2);
    const bool is_mu = std::abs(n_mu - std::round(n_mu)) < 1e-9;
    const bool is_half = std::abs(n_half - std::round(n_half)) < 1e-9;
    EXPECT_TRUE(is_mu || is_half) << v;
    if (is_mu && !is_half) ++doubled[static_cast<int>(std::round(n_mu))];
  }
  for (const auto& [n, count] : doubled)
    if (std::pow(mu, n) > big[big.size() - 1].real() + 1e-15) EXPECT_EQ(count, 2) << n;
}

TEST(ExactSpectrum, UnsupportedMap) {
  Branch left;
  left.domain_lo = -1.0;
  left.domain_hi = 0.0;
  left.forward = [](real x) { return 2 * x + 1; };
  left.forward_derivative = [](real) { return real(2); };
  left.inverse = [](complex_real z) { return (z - real(1)) / real(2); };
  left.inverse_derivative = [](complex_real) { return complex_real(0.5, 0); };
  Branch right = left;
  right.domain_lo = 0.0;
  right.domain_hi = 1.0;
  right.forward = [](real x) { return 2 * x - 1; };
  right.inverse = [](complex_real z) { return (z + real(1)) / real(2); };
  const IntervalMap custom("custom", {left, right}, 2.0);
  EXPECT_THROW(exact_spectrum(custom, 3), unsupported_map_error);
  EXPECT_FALSE(custom.piecewise_affine());
}

TEST(IntervalMap, Validation) {
  const IntervalMap d = make_skewed_doubling(0.0);
  std::vector<Branch> gap = d.branches();
  gap[1].domain_lo = 0.1;
  EXPECT_THROW(IntervalMap("gap", gap, 2.0), parameter_error);
  EXPECT_THROW(IntervalMap("slow", d.branches(), 0.5), parameter_error);
  EXPECT_THROW(d.with_expansion_params({2.0, 1.5}), parameter_error);
  EXPECT_THROW(d.with_expansion_params({1.0, 1.5}), parameter_error);
  const IntervalMap e = d.with_expansion_params({1.5, 3.0});
  ASSERT_TRUE(e.expansion_params().has_value());
  EXPECT_EQ(e.expansion_params()->R, 3.0);
}
