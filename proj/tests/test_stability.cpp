#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "erkn/phi.hpp"
#include "erkn/stability.hpp"

using erkn::make_method;

namespace {

double det2(const erkn::Matrix2& s) { return s[0] * s[3] - s[1] * s[2]; }

}  // namespace

TEST_CASE("stability: z = 0 is the exact rotation") {
  for (const auto& name : erkn::serkn_method_names()) {
    const auto m = make_method(name);
    for (double v : {0.3, 1.0, 7.5, 49.0}) {
      const auto s = erkn::stability_matrix(m, v, 0.0);
      CHECK(s[0] == doctest::Approx(erkn::phi(0, v)).epsilon(1e-15));
      CHECK(s[1] == doctest::Approx(erkn::phi(1, v)).epsilon(1e-15));
      CHECK(s[2] == doctest::Approx(-v * erkn::phi(1, v)).epsilon(1e-15));
      CHECK(std::abs(det2(s) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("stability: one-stage matrix against a long double evaluation") {
  const auto m = make_method("SERKN1s2(1)");
  const double v = 1.0, z = 0.5;
  const long double rv = std::sqrt(1.0L);
  const long double p0 = std::cos(rv), p1 = std::sin(rv) / rv;
  const long double b = std::cos(rv / 2), bb = 0.5L * (std::sin(rv / 2) / (rv / 2));
  const long double a = p0;
  const long double x0 = std::cos(rv / 2), x1 = 0.5L * std::sin(rv / 2) / (rv / 2);
  const long double n = 1.0L + z * a;
  const auto s = erkn::stability_matrix(m, v, z);
  CHECK(std::abs(s[0] - static_cast<double>(p0 - z * bb * x0 / n)) < 1e-15);
  CHECK(std::abs(s[1] - static_cast<double>(p1 - z * bb * x1 / n)) < 1e-15);
  CHECK(std::abs(s[2] - static_cast<double>(-v * p1 - z * b * x0 / n)) < 1e-15);
  CHECK(std::abs(s[3] - static_cast<double>(p0 - z * b * x1 / n)) < 1e-15);
}

TEST_CASE("stability: classical tableau matches the RKN stability function") {
  // RKN1s2 on y'' = -w y: Q = (y + h c y')/(1 + a w h^2), c = 1/2, a = 1.
  const auto m = make_method("RKN1s2");
  const double v = 0.8, z = 0.4, r = v + z;
  const auto s = erkn::stability_matrix(m, v, z);
  const double den = 1.0 + r;
  CHECK(s[0] == doctest::Approx(1.0 - r * 0.5 / den).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(1.0 - r * 0.5 * 0.5 / den).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(-r / den).epsilon(1e-15));
  CHECK(s[3] == doctest::Approx(1.0 - r * 0.5 / den).epsilon(1e-15));
  // Frozen SERKN limit at V -> 0+ matches the same classical formula.
  const auto serkn = make_method("SERKN1s2(1)");
  const auto limit = erkn::stability_matrix(serkn, 1e-14, r);
  for (int k = 0; k < 4; ++k) CHECK(limit[k] == doctest::Approx(s[k]).epsilon(1e-12));
}

TEST_CASE("stability: classification") {
  const auto m = make_method("SERKN2s4");
  double rho = 0.0;
  CHECK(erkn::classify_point(m, 1.0, 0.0, &rho) == erkn::kPeriodic);
  CHECK(rho == doctest::Approx(1.0).epsilon(1e-14));
  // tr^2 = 4 det at V = pi^2: the defective double eigenvalue -1 is unstable.
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(erkn::classify_point(m, pi2, 0.0) == erkn::kUnstable);
  CHECK(erkn::classify_point(m, 1.0, -2.0) == erkn::kOutOfDomain);
  CHECK(erkn::classify_point(m, 1.0, -1.0) == erkn::kOutOfDomain);
  CHECK_THROWS_AS(erkn::classify_point(m, 0.0, 1.0), std::invalid_argument);
  CHECK(erkn::spectral_radius({2.0, 0.0, 0.0, 0.5}) == 2.0);
  CHECK(erkn::spectral_radius({0.0, 1.0, -1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("stability: resonance guard") {
  // One-stage with a_bar = b_bar: 1 + z b_bar(V) = 0 at z = -1 / b_bar(V).
  const auto m = make_method("SERKN1s2(2)");
  const double v = 2.0;
  const double z = -1.0 / m.b_bar[0](v);
  CHECK_THROWS_AS(erkn::stability_matrix(m, v, z), erkn::GuardError);
}

TEST_CASE("stability: scans") {
  const auto m = make_method("SERKN1s2(1)");
  const auto tiny = erkn::scan_region(m, 1.0, 2.0, -0.5, 0.5, 2, 2);
  CHECK(tiny.code.size() == 4);
  CHECK(tiny.rho.size() == 4);
  CHECK(tiny.v_axis.back() == 2.0);
  CHECK(tiny.z_axis.front() == -0.5);
  CHECK_THROWS_AS(erkn::scan_region(m, 0.0, 2.0, -1, 1, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(erkn::scan_region(m, 1.0, 2.0, -1, 1, 1, 4), std::invalid_argument);

  for (const auto& name : erkn::serkn_method_names()) {
    const auto g = erkn::scan_region(make_method(name), 0.5, 50.0, -50.0, 50.0, 100, 101);
    const std::size_t iz0 = 50;
    REQUIRE(g.z_axis[iz0] == 0.0);
    for (std::size_t i = 0; i < g.v_axis.size(); ++i) {
      const double c = std::cos(std::sqrt(g.v_axis[i]));
      if (std::abs(c * c - 1.0) > 1e-12) CHECK(g.at(i, iz0) == erkn::kPeriodic);
    }
    // Points far outside the region are unstable; out-of-domain points are marked.
    bool any_unstable = false, any_out = false;
    for (int c : g.code) {
      any_unstable = any_unstable || c == erkn::kUnstable;
      any_out = any_out || c == erkn::kOutOfDomain;
    }
    CHECK(any_unstable);
    CHECK(any_out);
    // Sampling a point directly matches its grid value.
    for (std::size_t i : {3u, 40u, 99u})
      for (std::size_t j : {0u, 37u, 88u})
        CHECK(erkn::classify_point(make_method(name), g.v_axis[i], g.z_axis[j]) == g.at(i, j));
  }
}

TEST_CASE("stability: CSV") {
  const auto g = erkn::scan_region(make_method("SERKN2s3"), 1.0, 3.0, -2.0, 1.0, 2, 3);
  std::ostringstream os;
  erkn::write_stability_csv(os, g);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "V,z,code,rho");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 6);
  CHECK(os.str().find("\n1,-2,-1,nan\n") != std::string::npos);
  std::ostringstream again;
  erkn::write_stability_csv(again, erkn::scan_region(make_method("SERKN2s3"), 1.0, 3.0, -2.0, 1.0, 2, 3));
  CHECK(again.str() == os.str());
}
