#include <doctest.h>

#include <cmath>
#include <limits>

#include "fhhg/errors.hpp"
#include "fhhg/model.hpp"
#include "fhhg/self_energy.hpp"

using namespace fhhg;

TEST_SUITE("model_core") {

TEST_CASE("make_model accepts the reference drive") {
  const auto p = make_model(1.0, 2.4, 1.2, 0.1, kTwoPi);
  CHECK(p.drive_ratio() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.period() == doctest::Approx(kTwoPi / 1.2));
}

TEST_CASE("make_model accepts the free atom") {
  const auto p = make_model(1.0, 0.0, 1.2, 0.0, kTwoPi);
  CHECK(p.lambda == 0.0);
  CHECK(p.A == 0.0);
}

TEST_CASE("make_model guards") {
  CHECK_THROWS_WITH_AS(make_model(1.0, 1.0, 0.0, 0.1, kTwoPi), "omega must be positive", DomainError);
  CHECK_THROWS_AS(make_model(1.0, 1.0, -1.0, 0.1), DomainError);
  CHECK_THROWS_AS(make_model(1.0, 1.0, 1.0, -0.1), DomainError);
  CHECK_THROWS_AS(make_model(1.0, 1.0, 1.0, 0.1, 0.0), DomainError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_model(nan, 1.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(make_model(1.0, std::numeric_limits<double>::infinity(), 1.0, 0.1), DomainError);
}

TEST_CASE("open channels at the reference parameters") {
  const auto p = make_model(1.0, 2.4, 1.2, 0.1);
  CHECK(open_channels(p, {-8, 8}).open == std::vector<int>{-4, -3, -2, -1, 0});
}

TEST_CASE("open channels for a negative level") {
  // 0 < -1 - 1.2 n < 2 pi  <=>  n in {-6, ..., -1}
  const auto p = make_model(-1.0, 2.4, 1.2, 0.1);
  const auto open = open_channels(p, {-16, 16}).open;
  CHECK(open == std::vector<int>{-6, -5, -4, -3, -2, -1});
  for (int n = -16; n <= 16; ++n) {
    const double e = -1.0 - 1.2 * n;
    CHECK(channel_open(p, n) == (e > 0.0 && e < kTwoPi));
  }
}

TEST_CASE("open channels ignore lambda and A") {
  const auto a = make_model(1.0, 2.4, 1.2, 0.0);
  const auto b = make_model(1.0, 0.0, 1.2, 0.1);
  CHECK(open_channels(a, {-32, 32}).open == open_channels(b, {-32, 32}).open);
}

TEST_CASE("open channels agree with the spectral density") {
  const auto p = make_model(0.3, 1.0, 0.7, 0.1);
  const auto set = open_channels(p, {-32, 32});
  for (int n = -32; n <= 32; ++n) {
    CHECK((spectral_density(p.epsilon_d - n * p.omega, p.k_c) > 0.0) == set.contains(n));
  }
}

TEST_CASE("open channels require a window containing zero") {
  const auto p = make_model(1.0, 2.4, 1.2, 0.1);
  CHECK_THROWS_AS(open_channels(p, {1, 4}), DomainError);
}

TEST_CASE("uniform grids") {
  const auto g = Grid1D::uniform(-1.0, 1.0, 5, GridKind::position);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == -1.0);
  CHECK(g[4] == 1.0);
  CHECK(g[2] == doctest::Approx(0.0));
  CHECK(g.kind() == GridKind::position);
  CHECK_THROWS_AS(Grid1D::from_points({0.0, 0.0}, GridKind::time), DomainError);
  CHECK_THROWS_AS(Grid1D::from_points({1.0, 0.0}, GridKind::time), DomainError);
}

}  // TEST_SUITE
