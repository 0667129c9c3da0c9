#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "degenlab/geometry.hpp"

using namespace degenlab;

namespace {

Point pt(double x) { return (Point(1) << x).finished(); }
Point pt(double x, double y) { return (Point(2) << x, y).finished(); }
Point pt(double x, double y, double z) { return (Point(3) << x, y, z).finished(); }

const double pi = std::acos(-1.0);

}  // namespace

TEST_CASE("distance to the boundary") {
  CHECK(distance(Domain::interval(0, 1), pt(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(distance(Domain::ball(2, 1), pt(0.6, 0)) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(distance(Domain::rectangle(1, 1), pt(0.3, 0.5)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(distance(Domain::interval(0, 1), pt(0.0)) == 0.0);
  CHECK_THROWS_AS(distance(Domain::ball(2, 1), pt(1.5, 0)), DomainError);
  CHECK_THROWS_AS(distance(Domain::ball(2, 1), pt(0.5)), ContractViolation);
}

TEST_CASE("gradient of the distance") {
  CHECK(grad_distance(Domain::interval(0, 1), pt(0.1))(0) == 1.0);
  CHECK(grad_distance(Domain::interval(0, 1), pt(0.9))(0) == -1.0);
  const auto g = grad_distance(Domain::ball(2, 1), pt(0.5, 0));
  CHECK(g(0) == -1.0);
  CHECK(g(1) == 0.0);
  CHECK_THROWS_AS(grad_distance(Domain::rectangle(1, 1), pt(0.5, 0.5)), NonSmoothPointError);
  CHECK_THROWS_AS(grad_distance(Domain::interval(0, 1), pt(0.5)), NonSmoothPointError);
  CHECK_THROWS_AS(grad_distance(Domain::ball(3, 1), pt(0, 0, 0)), NonSmoothPointError);
}

TEST_CASE("unit gradient and concave distance near the boundary") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Domain square = Domain::rectangle(1, 1);
  const Domain disk = Domain::ball(2, 1);
  const Domain ball3 = Domain::ball(3, 2);
  for (int k = 0; k < 500; ++k) {
    const double s = 0.2 * u(rng);
    const Point xs = pt(s, 0.25 + 0.5 * u(rng));
    CHECK(grad_distance(square, xs).norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(laplacian_distance(square, xs) <= 0.0);

    const double th = 2 * pi * u(rng);
    const Point xd = pt((1 - s) * std::cos(th), (1 - s) * std::sin(th));
    CHECK(grad_distance(disk, xd).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(laplacian_distance(disk, xd) <= 0.0);

    const Point x3 = pt(0, 0, 2 - s);
    CHECK(grad_distance(ball3, x3).norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(laplacian_distance(ball3, x3) <= 0.0);
  }
}

TEST_CASE("laplacian of the distance") {
  CHECK(laplacian_distance(Domain::interval(0, 1), pt(0.2)) == 0.0);
  CHECK(laplacian_distance(Domain::ball(2, 1), pt(0.5, 0)) == doctest::Approx(-2.0));
  CHECK(laplacian_distance(Domain::ball(3, 1), pt(0, 0.3, 0.4)) == doctest::Approx(-4.0));
  CHECK(laplacian_distance(Domain::rectangle(2, 1), pt(0.1, 0.5)) == 0.0);
}

TEST_CASE("level set areas") {
  CHECK(level_set_area(Domain::interval(0, 1), 0.1) == 2.0);
  CHECK(level_set_area(Domain::ball(2, 1), 0.0) == doctest::Approx(2 * pi));
  CHECK(level_set_area(Domain::ball(3, 1), 0.5) == doctest::Approx(pi));
  CHECK(level_set_area(Domain::rectangle(2, 1), 0.25) == doctest::Approx(4.0));
  CHECK_THROWS_AS(level_set_area(Domain::interval(0, 1), 0.5), DomainError);
}

TEST_CASE("default sigma is capped by 1/e") {
  CHECK(default_sigma(Domain::interval(0, 1)) == doctest::Approx(0.25));
  CHECK(default_sigma(Domain::ball(2, 4)) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(TubularNeighborhood(Domain::interval(0, 1), 0.5), ConfigurationError);
  CHECK_THROWS_AS(TubularNeighborhood(Domain::interval(0, 1), 0.0), ConfigurationError);
}

TEST_CASE("tubular integrals") {
  const TubularNeighborhood disk(Domain::ball(2, 1), 0.25);
  const auto r = tubular_integral(disk, [](double t) { return 1.0 / std::sqrt(t); });
  CHECK_FALSE(r.divergent);
  CHECK(r.value == doctest::Approx(2 * pi * (11.0 / 12.0)).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(5.7596).epsilon(1e-4));

  const TubularNeighborhood unit(Domain::interval(0, 1), 0.25);
  const auto one = tubular_integral(unit, [](double) { return 1.0; });
  CHECK_FALSE(one.divergent);
  CHECK(one.value == doctest::Approx(0.5).epsilon(1e-13));

  CHECK(tubular_integral(unit, [](double t) { return 1.0 / t; }).divergent);

  SUBCASE("power integrability threshold") {
    for (double g : {-1.5, -1.0, -0.9, -0.5, 0.0, 1.0}) {
      const auto p = tubular_integral(unit, [g](double t) { return std::pow(t, g); });
      CAPTURE(g);
      CHECK(p.divergent == (g <= -1.0));
      if (!p.divergent) CHECK(p.value == doctest::Approx(2 * std::pow(0.25, g + 1) / (g + 1)).epsilon(1e-8));
    }
  }
  SUBCASE("negative integrand is refused") {
    CHECK_THROWS_AS(tubular_integral(unit, [](double) { return -1.0; }), ContractViolation);
  }
}

TEST_CASE("graded interval mesh") {
  const Domain unit = Domain::interval(0, 1);
  const Mesh uniform = graded_mesh(unit, 4, 1.0);
  REQUIRE(uniform.size() == 5);
  const double expect1[] = {0, 0.25, 0.5, 0.75, 1};
  for (int i = 0; i < 5; ++i) CHECK(uniform.nodes(i) == doctest::Approx(expect1[i]).epsilon(1e-15));

  const Mesh graded = graded_mesh(unit, 4, 2.0);
  const double expect2[] = {0, 0.125, 0.5, 0.875, 1};
  for (int i = 0; i < 5; ++i) CHECK(graded.nodes(i) == doctest::Approx(expect2[i]).epsilon(1e-15));
  CHECK(graded.offsets(3) == doctest::Approx(0.125).epsilon(1e-15));

  CHECK_THROWS_AS(graded_mesh(unit, 4, 0.5), ConfigurationError);
  CHECK_THROWS_AS(graded_mesh(unit, 5, 1.0), ConfigurationError);
  CHECK_THROWS_AS(graded_mesh(Domain::ball(2, 1), 8, 1.0), ConfigurationError);

  SUBCASE("first cell scales as n^-gamma") {
    for (double gamma : {1.0, 2.0, 4.0, 8.0}) {
      for (int n : {64, 256, 1024}) {
        const Mesh m = graded_mesh(unit, n, gamma);
        CAPTURE(gamma);
        CAPTURE(n);
        CHECK(m.cell(0) / std::pow(2.0 / n, gamma) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(m.cell(m.cells() - 1) == doctest::Approx(m.cell(0)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("offsets resolve the far end under strong grading") {
    const Mesh m = graded_mesh(unit, 1 << 14, 40.0);
    const Eigen::Index last = m.size() - 2;
    CHECK(m.offsets(last) > 0.0);
    CHECK(m.offsets(last) == doctest::Approx(m.offsets(1)).epsilon(1e-12));
  }
}

TEST_CASE("graded radial mesh") {
  const Mesh m = graded_radial_mesh(Domain::ball(2, 1), 4, 2.0);
  const double expect[] = {0, 0.4375, 0.75, 0.9375, 1};
  for (int i = 0; i < 5; ++i) CHECK(m.nodes(i) == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(m.offsets(0) == doctest::Approx(1.0));
  CHECK(m.offsets(4) == 0.0);
  CHECK_THROWS_AS(graded_radial_mesh(Domain::interval(0, 1), 8, 1.0), ConfigurationError);
}

TEST_CASE("mesh dump") {
  std::ostringstream os;
  write_mesh(os, graded_mesh(Domain::interval(0, 1), 4, 1.0));
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "# mesh n=4 gamma=1 domain=interval");
  int lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  CHECK(lines == 5);
}

TEST_CASE("domain constructors validate") {
  CHECK_THROWS_AS(Domain::interval(1, 0), ConfigurationError);
  CHECK_THROWS_AS(Domain::ball(1, 1), ConfigurationError);
  CHECK_THROWS_AS(Domain::rectangle(0, 1), ConfigurationError);
  CHECK(Domain::rectangle(2, 1).inradius() == doctest::Approx(0.5));
}

TEST_CASE("long double instantiation") {
  Eigen::Matrix<long double, 2, 1> x;
  x << 0.6L, 0.0L;
  CHECK(static_cast<double>(distance(Domain::ball(2, 1), x)) == doctest::Approx(0.4));
}
