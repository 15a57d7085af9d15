#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pdc/constants.hpp"
#include "pdc/dispersion.hpp"

using namespace pdc;

namespace {
constexpr double deg = pi / 180.0;

CrystalConfig bbo() {
  CrystalConfig c;
  c.cut_angle_theta = 36.3 * deg;
  c.sellmeier = sellmeier_named("eimerl1987");
  return c;
}
}  // namespace

TEST_SUITE("dispersion") {

TEST_CASE("eimerl1987 indices at the paper wavelengths") {
  CrystalConfig c = bbo();
  CHECK(index_ordinary(698e-9, c) == doctest::Approx(1.664979079115).epsilon(1e-10));
  CHECK(index_ordinary(349e-9, c) == doctest::Approx(1.707543188050).epsilon(1e-10));
  CHECK(index_extraordinary(349e-9, pi / 2, c) ==
        doctest::Approx(1.578920595746).epsilon(1e-10));
  CHECK(index_extraordinary(349e-9, 36.3 * deg, c) ==
        doctest::Approx(1.658960528398).epsilon(1e-10));
}

TEST_CASE("principal axes bound the angle-tuned index") {
  CrystalConfig c = bbo();
  double n_o = index_ordinary(349e-9, c);
  double n_e = index_extraordinary(349e-9, pi / 2, c);
  CHECK(index_extraordinary(349e-9, 0.0, c) == doctest::Approx(n_o).epsilon(1e-12));
  for (double th : {0.2, 0.7, 1.1}) {
    double n = index_extraordinary(349e-9, th, c);
    CHECK(n < n_o);
    CHECK(n > n_e);
  }
}

TEST_CASE("validity window and angle range are enforced") {
  CrystalConfig c = bbo();
  CHECK_THROWS_AS(index_ordinary(1.3e-6, c), std::domain_error);
  CHECK_THROWS_AS(index_ordinary(0.15e-6, c), std::domain_error);
  CHECK_THROWS_AS(index_extraordinary(349e-9, -0.1, c), std::domain_error);
  CHECK_THROWS_AS(sellmeier_named("unknown-set"), std::invalid_argument);
}

TEST_CASE("kato1986 is a distinct published set") {
  SellmeierSet k = sellmeier_named("kato1986");
  CrystalConfig c = bbo();
  c.sellmeier = k;
  double n_kato = index_ordinary(698e-9, c);
  CHECK(n_kato == doctest::Approx(1.664135591792).epsilon(1e-10));
  CHECK(std::abs(n_kato - 1.664979079115) > 1e-6);
}

TEST_CASE("degenerate geometry for the 36.3 deg cut at 349 nm") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  CHECK(g.lambda_s0 == doctest::Approx(698e-9).epsilon(1e-14));
  CHECK(g.theta_s_int / deg == doctest::Approx(4.873154).epsilon(1e-5));
  CHECK(g.theta_s_ext / deg == doctest::Approx(8.131187).epsilon(1e-5));
  CHECK(g.k_perp0 == doctest::Approx(1273200.997723).epsilon(1e-9));
  CHECK(g.n_p == doctest::Approx(1.658960528398).epsilon(1e-10));
  CHECK(g.dn_p_dtheta == doctest::Approx(-0.126682919).epsilon(1e-6));

  // Longitudinal matching: k_pz = 2 k_s cos(theta_int).
  CHECK(g.k_p0 == doctest::Approx(2 * g.k_s0 * std::cos(g.theta_s_int)).epsilon(1e-12));
  // Snell at the exit face with the ordinary signal index.
  CHECK(std::sin(g.theta_s_ext) ==
        doctest::Approx(index_ordinary(698e-9, c) * std::sin(g.theta_s_int))
            .epsilon(1e-12));
  // Symmetric beams at degeneracy.
  CHECK(g.theta_i_int == doctest::Approx(g.theta_s_int).epsilon(1e-14));
  CHECK(g.k_perp0 == doctest::Approx(g.k_s0 * std::sin(g.theta_s_int)).epsilon(1e-12));
}

TEST_CASE("non-phase-matchable cut is reported, not silently clamped") {
  CrystalConfig c = bbo();
  c.cut_angle_theta = 25.0 * deg;
  CHECK_THROWS_AS(solve_geometry(c, 349e-9), std::runtime_error);
}

TEST_CASE("anisotropy radius, quoted constants and own dispersion") {
  // Hand value 0.123 / 1.658 * 8 mm / 2.2.
  CHECK(anisotropy_radius(1.658, -0.123, 8e-3) ==
        doctest::Approx(2.697664217567716e-4).epsilon(1e-12));

  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  CHECK(anisotropy_radius(c, g) == doctest::Approx(2.776830e-4).epsilon(1e-5));
  // Scaling in L and 1/x_e.
  CHECK(anisotropy_radius(1.658, -0.123, 16e-3) ==
        doctest::Approx(2 * 2.697664217567716e-4).epsilon(1e-12));
  CHECK(anisotropy_radius(1.658, -0.123, 8e-3, 4.4) ==
        doctest::Approx(0.5 * 2.697664217567716e-4).epsilon(1e-12));
}

}  // TEST_SUITE
