#include "support.hpp"

#include "spalab/witness_family.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace spalab;
using testsupport::family_eigs_plain;
using testsupport::family_eigs_transposed;
using testsupport::pi;
using testsupport::sample_bp_params;
using testsupport::sample_params;
using Complex = std::complex<double>;

TEST_CASE("parameter validation and angle reduction") {
  CHECK_THROWS_AS(WitnessParams<double>(-0.1, 1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(WitnessParams<double>(1, -1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(WitnessParams<double>(1, 1, 1, std::nan("")), std::invalid_argument);
  const WitnessParams<double> w(1, 1, 1, 7.0);
  CHECK(w.theta == std::remainder(7.0, 2 * pi));
  CHECK(std::abs(w.theta) <= pi);
}

TEST_CASE("angle function spot values") {
  CHECK(q_theta(0.0) == 2.0);
  CHECK(p_theta(0.0) == 2.0);
  CHECK(std::abs(p_theta(2 * pi / 3) - 2.0) <= 1e-15);
  CHECK(std::abs(p_theta(-2 * pi / 3) - 2.0) <= 1e-15);
  CHECK(std::abs(p_theta(pi / 3) - 1.0) <= 1e-15);
  CHECK(std::abs(p_theta(pi) - 1.0) <= 1e-15);
  // range is [1,2]
  for (int k = 0; k <= 100; ++k) {
    const double p = p_theta(-pi + 2 * pi * k / 100.0);
    CHECK(p >= 1.0 - 1e-15);
    CHECK(p <= 2.0);
  }
}

TEST_CASE("theta_for_p inverts p_theta on [1,2]") {
  CHECK_THROWS_AS(theta_for_p(0.99), std::domain_error);
  CHECK_THROWS_AS(theta_for_p(2.01), std::domain_error);
  for (int k = 0; k <= 50; ++k) {
    const double p = 1.0 + k / 50.0;
    const double th = theta_for_p(p);
    CHECK(th >= 0.0);
    CHECK(th <= pi / 3 + 1e-15);
    CHECK(std::abs(p_theta(th) - p) <= 1e-12);
  }
}

TEST_CASE("matrix entries sit where the family puts them") {
  const WitnessParams<double> w(1.5, 0.25, 0.75, 0.3);
  const auto W = build_witness(w);
  const double diag[9] = {w.a, w.c, w.b, w.b, w.a, w.c, w.c, w.b, w.a};
  for (int i = 0; i < 9; ++i) CHECK(W(i, i) == Complex(diag[i], 0));
  const Complex phase(std::cos(0.3), std::sin(0.3));
  CHECK(W(0, 4) == -phase);
  CHECK(W(4, 8) == -phase);
  CHECK(W(8, 0) == -phase);
  CHECK(W(4, 0) == -std::conj(phase));
  CHECK(W(8, 4) == -std::conj(phase));
  CHECK(W(0, 8) == -std::conj(phase));
  int nonzero = 0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      if (W(i, j) != Complex(0, 0)) ++nonzero;
  CHECK(nonzero == 15);
}

TEST_CASE("spectrum matches the analytic reference on random parameters") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = sample_params(rng);
    const auto got = spectrum(build_witness(w)).eigenvalues;
    const auto want = family_eigs_plain(w);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(got(i) - want[i]) <= 1e-12);
  }
}

TEST_CASE("transposed spectrum matches the analytic block reference") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = sample_params(rng);
    const auto got = spectrum(partial_transpose(build_witness(w))).eigenvalues;
    const auto want = family_eigs_transposed(w);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(got(i) - want[i]) <= 1e-12);
  }
}

TEST_CASE("transposing pairs the phases into corner blocks") {
  const WitnessParams<double> w(1.0, 0.5, 0.25, 0.7);
  const auto G = partial_transpose(build_witness(w));
  const Complex phase(std::cos(0.7), std::sin(0.7));
  CHECK(G(1, 3) == -phase);
  CHECK(G(5, 7) == -phase);
  CHECK(G(6, 2) == -phase);
  CHECK(G(3, 1) == -std::conj(phase));
  CHECK(G(0, 4) == Complex(0, 0));
}

TEST_CASE("ppt closed form against the analytic eigenvalues") {
  std::mt19937_64 rng(107);
  int tested = 0;
  while (tested < 300) {
    const auto w = sample_params(rng);
    const double p = p_theta(w.theta);
    if (std::abs(w.a - p) < 1e-6 || std::abs(w.b * w.c - 1.0) < 1e-6) continue;
    ++tested;
    const bool closed = is_ppt_closed_form(w);
    const bool plain_psd = family_eigs_plain(w)[0] >= -1e-9;
    const bool trans_psd = family_eigs_transposed(w)[0] >= -1e-9;
    CHECK(closed == (plain_psd && trans_psd));
  }
}

TEST_CASE("block positivity truth table") {
  const double th = theta_for_p(1.5);
  CHECK(is_block_positive_closed_form(WitnessParams<double>(2.0, 1.0, 1.0, 0.0)));
  CHECK(is_block_positive_closed_form(WitnessParams<double>(1.2, 0.2, 0.2, th)));
  CHECK(is_block_positive_closed_form(WitnessParams<double>(0.5, 1.0, 1.0, th)));
  // below the plane a+b+c = p
  CHECK_FALSE(is_block_positive_closed_form(WitnessParams<double>(0.5, 0.4, 0.4, th)));
  // above the plane but inside the bc < (1-a)^2 notch
  CHECK_FALSE(is_block_positive_closed_form(WitnessParams<double>(0.5, 1.4, 0.1, th)));
  // boundary bc = (1-a)^2 with a+b+c = p counts as inside
  const auto sol = WitnessParams<double>(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0,
                                         theta_for_p(4.0 / 3.0));
  CHECK(is_block_positive_closed_form(sol));
}

TEST_CASE("alpha and beta closed forms") {
  CHECK_THROWS_AS(alpha_closed_form(WitnessParams<double>(0.5, 0.4, 0.4, theta_for_p(1.5))),
                  std::domain_error);
  CHECK_THROWS_AS(beta_closed_form(WitnessParams<double>(0.5, 0.4, 0.4, theta_for_p(1.5))),
                  std::domain_error);

  // PSD member: both reaches are full
  const WitnessParams<double> psd(2.0, 1.0, 1.0, 0.0);
  CHECK(alpha_closed_form(psd) == 1.0);
  CHECK(beta_closed_form(psd) == 1.0);

  // flat family point with theta = 0
  const WitnessParams<double> flat(1.0, 1.0, 1.0, 0.0);
  CHECK(std::abs(alpha_closed_form(flat) - 0.5) <= 1e-15);
  CHECK(beta_closed_form(flat) == 1.0);

  // first catalog point: both reaches are 3/5
  const WitnessParams<double> cat(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, theta_for_p(4.0 / 3.0));
  CHECK(std::abs(alpha_closed_form(cat) - 0.6) <= 1e-12);
  CHECK(std::abs(beta_closed_form(cat) - 0.6) <= 1e-12);
}

TEST_CASE("segment discriminant polynomial identities") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = sample_params(rng);
    const double t = ut(rng);
    const double bt = 1.0 - t + t * w.b;
    const double ct = 1.0 - t + t * w.c;
    CHECK(std::abs((bt * ct - t * t) - (-copositivity_poly(w, t))) <= 1e-12);
  }
  // the reach returned for bc < 1 is a root of the polynomial
  int tested = 0;
  while (tested < 200) {
    const auto w = sample_bp_params(rng);
    if (w.b * w.c >= 1.0) continue;
    ++tested;
    const double beta = beta_closed_form(w);
    if (beta < 1.0) CHECK(std::abs(copositivity_poly(w, beta)) <= 1e-13);
  }
}

TEST_CASE("beta root stays accurate for tiny b and c") {
  // direct quadratic-formula root loses digits here; the stable form must not
  const WitnessParams<double> w(2.5, 1e-8, 1e-8, theta_for_p(1.5));
  REQUIRE(is_block_positive_closed_form(w));
  const double root = beta_closed_form(w);
  // solve F(t) = 0 in long double as reference
  const long double A = (long double)(w.b) + w.c - (long double)(w.b) * w.c;
  const long double B = 2.0L - w.b - w.c;
  const long double ref = 2.0L / (B + std::sqrt(B * B + 4.0L * A));
  CHECK(std::abs(root - (double)ref) <= 1e-15);
  CHECK(std::abs(copositivity_poly(w, root)) <= 1e-14);
}

TEST_CASE("type criterion in and out of the shared regime") {
  const double th = theta_for_p(1.5);
  CHECK(witness_type_from_criterion(WitnessParams<double>(0.5, 0.9, 0.7, th)) ==
        WitnessType::CopositiveType);
  CHECK(witness_type_from_criterion(WitnessParams<double>(1.2, 0.3, 0.2, th)) ==
        WitnessType::PositiveType);
  const WitnessParams<double> cat(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, theta_for_p(4.0 / 3.0));
  CHECK(witness_type_from_criterion(cat) == WitnessType::PPTType);
  // outside the regime: bc >= 1 makes the transposed side fully reachable
  CHECK(witness_type_from_criterion(WitnessParams<double>(1.0, 1.0, 1.0, 0.0)) ==
        WitnessType::CopositiveType);
  CHECK(witness_type_from_criterion(WitnessParams<double>(2.0, 1.0, 1.0, 0.0)) ==
        WitnessType::PPTType);
}

TEST_CASE("classify_family gates on block positivity") {
  const double th = theta_for_p(1.5);
  const auto bad = classify_family(WitnessParams<double>(0.5, 0.4, 0.4, th));
  CHECK_FALSE(bad.is_block_positive);
  CHECK(bad.type == WitnessType::NotAWitness);
  const auto good = classify_family(WitnessParams<double>(2.0, 1.0, 1.0, 0.0));
  CHECK(good.is_ppt_matrix);
  CHECK(good.type == WitnessType::PPTType);
  CHECK(good.p == 2.0);
}

TEST_CASE("best segment point expressed inside the family") {
  const WitnessParams<double> cat(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, theta_for_p(4.0 / 3.0));
  const auto sf = spa_closed_form(cat);
  const double p = p_theta(cat.theta);
  CHECK(std::abs(sf.scale - 0.6) <= 1e-12);
  CHECK(std::abs(sf.params.a - p) <= 1e-12);
  CHECK(std::abs(sf.params.b - 1.0) <= 1e-12);
  CHECK(std::abs(sf.params.c - 1.0) <= 1e-12);
  CHECK(sf.params.theta == cat.theta);
  // the form actually reproduces the segment point
  const auto seg = ((1.0 - sf.scale) * identity<double>(3, 3).entries() +
                    sf.scale * build_witness(cat).entries())
                       .eval();
  const auto rhs = (sf.scale * build_witness(sf.params).entries()).eval();
  CHECK((seg - rhs).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(spa_closed_form(WitnessParams<double>(2.0, 1.0, 1.0, 0.0)),
                  std::domain_error);
  CHECK_THROWS_AS(spa_closed_form(WitnessParams<double>(0.5, 0.4, 0.4, theta_for_p(1.5))),
                  std::domain_error);
}

TEST_CASE("segment rescaling identity") {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> ut(1e-3, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = sample_params(rng);
    CHECK(scaling_identity_holds(w, ut(rng)));
  }
  CHECK_THROWS_AS(scaling_identity_holds(sample_params(rng), 0.0), std::domain_error);
  CHECK_THROWS_AS(scaling_identity_holds(sample_params(rng), 1.5), std::domain_error);
}

TEST_CASE("family pairing equals the 9x9 trace") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w1 = sample_params(rng);
    const auto w2 = sample_params(rng);
    const double closed = family_pairing(w1, w2);
    const double traced = trace_pairing(build_witness(w1), build_witness(w2));
    CHECK(std::abs(closed - traced) <= 1e-10 * std::max(1.0, std::abs(closed)));
    CHECK(std::abs(closed - family_pairing(w2, w1)) <= 1e-12);
  }
}
