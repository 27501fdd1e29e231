#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zoomloc/geometry.hpp"
#include "zoomloc/rng.hpp"
#include "scenarios.hpp"

using namespace zoomloc;

TEST_CASE("index set spans the symmetric range") {
  for (int n : {2, 3, 4, 5, 7, 8}) {
    IndexSet is{n};
    CHECK(is.hi() - is.lo() + 1 == n);
    CHECK(is.lo() == -int(std::ceil((n - 1) / 2.0)));
    CHECK(is.hi() == (n - 1) / 2);
    CHECK(is.contains(0));
  }
}

TEST_CASE("array config validation") {
  ArrayConfig cfg = testsc::desk_config();
  CHECK_NOTHROW(cfg.validate());
  CHECK_FALSE(cfg.has_dense_spacing());
  CHECK(cfg.spacing_set().size() == 19);
  CHECK(cfg.spacing_set().front() == Catch::Approx(cfg.d_min));
  CHECK(cfg.spacing_set().back() == Catch::Approx(cfg.d_max));

  ArrayConfig bad = cfg;
  bad.n_x = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.d_min = 2 * cfg.d_max;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.wavelength = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  ArrayConfig dense = cfg;
  dense.d_min = 0.3 * cfg.wavelength;
  CHECK(dense.has_dense_spacing());
}

TEST_CASE("element positions") {
  ArrayConfig cfg;
  cfg.n_x = 4;
  cfg.n_y = 7;
  cfg.wavelength = 0.05;
  cfg.d_min = 0.5 * 0.05;
  cfg.d_max = 10 * 0.05;
  cfg.d_step = 0.1 * 0.05;

  CHECK(element_position(cfg, 0, 0, 0.1).isZero());
  CHECK(element_position(cfg, 1, 0, 5 * 0.05).isApprox(Eigen::Vector3d(0.25, 0, 0)));
  // direct evaluation of the definition: [-2*0.045, 3*0.045, 0]
  CHECK(element_position(cfg, -2, 3, 0.9 * 0.05).isApprox(Eigen::Vector3d(-0.09, 0.135, 0)));

  CHECK_THROWS_AS(element_position(cfg, 2, 0, 0.1), std::out_of_range);   // hi for n_x=4 is 1
  CHECK_THROWS_AS(element_position(cfg, 0, 4, 0.1), std::out_of_range);   // hi for n_y=7 is 3
  CHECK_THROWS_AS(element_position(cfg, 0, 0, 0.6), std::invalid_argument);
}

TEST_CASE("element position odd symmetry") {
  ArrayConfig cfg = testsc::fig3_config();
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    const int i = int(rng.uniform(-3, 4));
    const int j = int(rng.uniform(-3, 4));
    const double d = rng.uniform(cfg.d_min, cfg.d_max);
    CHECK(element_position(cfg, i, j, d)
              .isApprox(-element_position(cfg, -i, -j, d), 1e-14));
  }
}

TEST_CASE("exact range") {
  const Position center = Position::from_uvr(0.0, 0.0, 8.168);
  CHECK(exact_range(center, Eigen::Vector3d::Zero()) == Catch::Approx(8.168));

  const Position p345 = Position::cartesian(3.0, 4.0, 0.0);
  CHECK(exact_range(p345, Eigen::Vector3d::Zero()) == Catch::Approx(5.0));

  // oracle: direct Euclidean norm with the Fig. 3 user
  const Position pu = testsc::fig3_user();
  const double expect = std::sqrt(5.606 * 5.606 + 0.768 * 0.768 + 5.642 * 5.642);
  CHECK(exact_range(pu, Eigen::Vector3d(0.25, 0, 0)) == Catch::Approx(expect).epsilon(1e-12));
  CHECK(expect == Catch::Approx(7.9906).margin(5e-4));
}

TEST_CASE("fresnel range") {
  const Position p = testsc::fig2_user();

  SECTION("all expansion terms vanish at the array center") {
    CHECK(fresnel_range(p, 0, 0, 0.25) == Catch::Approx(p.r()).epsilon(1e-15));
  }

  SECTION("term-by-term oracle at (i=1, j=0, d=5 lambda)") {
    const double r = 8.168, u = 0.717, v = 0.093, d = 0.25;
    const double oracle = r - 1 * d * u - 0.0
        + 1 * d * d * (1 - u * u) / (2 * r) + 0.0 - u * v * 1 * 0 * d * d / r;
    CHECK(fresnel_range(p, 1, 0, d) == Catch::Approx(oracle).epsilon(1e-14));
    CHECK(oracle == Catch::Approx(7.9906).margin(5e-4));
  }

  SECTION("phase-equivalent error below lambda/16 for the sampled inputs") {
    const double lambda = testsc::kLambda6GHz;
    const double fr = fresnel_range(p, 1, 0, 0.25);
    const double ex = exact_range(p, Eigen::Vector3d(0.25, 0, 0));
    CHECK(std::abs(fr - ex) < lambda / 16.0);
  }

  SECTION("max error over the array decreases as d shrinks") {
    ArrayConfig cfg = testsc::fig3_config();
    const double lambda = cfg.wavelength;
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      const Position q = Position::spherical(rng.uniform(0.0, kPi / 3),
                                             rng.uniform(-kPi, kPi),
                                             rng.uniform(6.0, 10.0));
      double prev = std::numeric_limits<double>::infinity();
      for (double d : {2 * lambda, lambda, lambda / 2}) {
        double worst = 0.0;
        for (int i = cfg.index_set_x().lo(); i <= cfg.index_set_x().hi(); ++i)
          for (int j = cfg.index_set_y().lo(); j <= cfg.index_set_y().hi(); ++j)
            worst = std::max(worst, std::abs(fresnel_range(q, i, j, d) -
                                             exact_range(q, Eigen::Vector3d(i * d, j * d, 0))));
        CHECK(worst < prev);
        prev = worst;
      }
    }
  }
}

TEST_CASE("near field limits") {
  SECTION("direct formula at D = 1 m, lambda = 0.05 m") {
    ArrayConfig cfg;
    cfg.n_x = cfg.n_y = 2;
    cfg.wavelength = 0.05;
    cfg.d_max = 1.0 / std::sqrt(2.0);
    cfg.d_min = cfg.d_max / 2;
    cfg.d_step = cfg.d_max / 10;
    CHECK(cfg.aperture() == Catch::Approx(1.0));
    const auto lim = near_field_limits(cfg);
    CHECK(lim.fresnel == Catch::Approx(std::cbrt(1.0 / 0.4)).epsilon(1e-12));
    CHECK(lim.fresnel == Catch::Approx(1.357).margin(1e-3));
    CHECK(lim.fraunhofer == Catch::Approx(40.0));
    CHECK(lim.fresnel < lim.fraunhofer);
  }

  SECTION("limits collapse as the aperture shrinks") {
    ArrayConfig cfg;
    cfg.n_x = cfg.n_y = 2;
    cfg.wavelength = 0.05;
    cfg.d_max = 1e-6;
    cfg.d_min = 1e-7;
    cfg.d_step = 1e-7;
    const auto lim = near_field_limits(cfg);
    CHECK(lim.fresnel < 1e-3);
    CHECK(lim.fraunhofer < 1e-3);
  }

  SECTION("the 5..10 m user band fits the desk-scale 4x4 array") {
    const auto lim = near_field_limits(testsc::desk_config());
    CHECK(lim.fresnel < 5.0);
    CHECK(lim.fraunhofer > 10.0);
    CHECK_NOTHROW(require_near_field_interval(testsc::desk_config(), 5.0, 10.0));
  }

  SECTION("an 8x8 array at d_max = 10 lambda is rejected for 5..10 m users") {
    ArrayConfig cfg = testsc::desk_config();
    cfg.n_x = cfg.n_y = 8;
    CHECK_THROWS_AS(require_near_field_interval(cfg, 5.0, 10.0), std::invalid_argument);
  }
}

TEST_CASE("position round trips") {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const double theta = rng.uniform(0.0, kPi / 2 * 0.999);
    const double phi = rng.uniform(-kPi, kPi);
    const double r = rng.uniform(0.5, 50.0);
    const Position p = Position::spherical(theta, phi, r);
    CHECK(p.r() == Catch::Approx(r).epsilon(1e-12));
    CHECK(p.z() >= 0.0);
    CHECK(p.u() * p.u() + p.v() * p.v() <= 1.0 + 1e-12);

    const Position q = Position::from_uvr(p.u(), p.v(), p.r());
    CHECK((q.cart() - p.cart()).norm() <= 1e-12 * p.r());

    const Position c = Position::cartesian(p.x(), p.y(), p.z());
    CHECK(c.u() == Catch::Approx(p.u()).margin(1e-12));
    CHECK(c.v() == Catch::Approx(p.v()).margin(1e-12));
  }
}

TEST_CASE("position rejects the back half-space and zero range") {
  CHECK_THROWS_AS(Position::cartesian(1.0, 0.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(Position::cartesian(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Position::from_uvr(0.9, 0.9, 5.0), std::invalid_argument);
  CHECK_NOTHROW(Position::cartesian(3.0, 4.0, 0.0));
}
