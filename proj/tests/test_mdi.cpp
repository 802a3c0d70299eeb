#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "keyrates/channels.hpp"
#include "keyrates/divergences.hpp"
#include "keyrates/mdi.hpp"
#include "support.hpp"

using namespace kr;

TEST_CASE("erasure capacity: product of detector and leg transmissions") {
  CHECK(erasure_capacity(0.5, 0.8, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
  const double e1 = std::exp(-1.0);
  CHECK(erasure_capacity(1.0, e1, e1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(erasure_capacity(1.0, 1.0, 1.0) == 1.0);
  CHECK(erasure_capacity(0.0, 0.9, 0.9) == 0.0);

  CHECK_THROWS_AS(erasure_capacity(1.2, 0.5, 0.5), invalid_input);
  CHECK_THROWS_AS(erasure_capacity(0.5, -0.1, 0.5), invalid_input);
  CHECK_THROWS_AS(erasure_capacity(0.5, 0.5, 1.1), invalid_input);
}

TEST_CASE("depolarizing bound: entropic form above 1/sqrt(3), zero below") {
  CHECK(depolarizing_bound(1.0, 0.9) ==
        doctest::Approx(1.0 - binary_entropy(0.8575)).epsilon(1e-12));
  CHECK(depolarizing_bound(0.6, 0.9) ==
        doctest::Approx(0.6 * (1.0 - binary_entropy(0.8575))).epsilon(1e-12));

  const double thr = 1.0 / std::sqrt(3.0);
  CHECK(depolarizing_bound(1.0, thr) == 0.0);
  CHECK(depolarizing_bound(1.0, thr - 1e-6) == 0.0);
  CHECK(depolarizing_bound(1.0, 0.2) == 0.0);
  CHECK(depolarizing_bound(1.0, -0.2) == 0.0);
  // Continuous at the threshold: h2 is flat at 1/2, so the rise is quadratic.
  CHECK(depolarizing_bound(1.0, thr + 1e-6) > 0.0);
  CHECK(depolarizing_bound(1.0, thr + 1e-6) < 1e-9);

  CHECK_THROWS_AS(depolarizing_bound(-0.1, 0.9), invalid_input);
  CHECK_THROWS_AS(depolarizing_bound(1.0, 1.1), invalid_input);
  CHECK_THROWS_AS(depolarizing_bound(1.0, -0.5), invalid_input);
}

TEST_CASE("dephasing bound: entropic form above 3/4, zero below") {
  CHECK(dephasing_bound(0.8, 0.9) ==
        doctest::Approx(0.8 * (1.0 - binary_entropy(0.77))).epsilon(1e-12));
  CHECK(dephasing_bound(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(dephasing_bound(1.0, 0.75) == 0.0);
  CHECK(dephasing_bound(1.0, 0.5) == 0.0);
  CHECK(dephasing_bound(1.0, 0.75 + 1e-6) > 0.0);
  CHECK(dephasing_bound(1.0, 0.75 + 1e-6) < 1e-9);

  CHECK_THROWS_AS(dephasing_bound(1.5, 0.9), invalid_input);
  CHECK_THROWS_AS(dephasing_bound(1.0, -0.1), invalid_input);
}

TEST_CASE("repeaterless benchmark: weaker leg wins") {
  CHECK(repeaterless_bound(0.3, 0.7) == 0.3);
  CHECK(repeaterless_bound(0.7, 0.3) == 0.3);
  CHECK_THROWS_AS(repeaterless_bound(-0.1, 0.5), invalid_input);
}

TEST_CASE("bell-diagonal relative entropy of entanglement") {
  CHECK(bell_diagonal_ree({1, 0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bell_diagonal_ree({0.25, 0.25, 0.25, 0.25}) == 0.0);
  CHECK(bell_diagonal_ree({0.5, 0.5, 0, 0}) == 0.0);  // boundary: no entanglement
  CHECK(bell_diagonal_ree({0.7, 0.1, 0.1, 0.1}) ==
        doctest::Approx(1.0 - binary_entropy(0.7)).epsilon(1e-12));
  // Placement of the dominant weight does not matter.
  CHECK(bell_diagonal_ree({0.1, 0.1, 0.7, 0.1}) ==
        doctest::Approx(1.0 - binary_entropy(0.7)).epsilon(1e-12));

  // Two equivalent forms of the swapped depolarizing weight, and agreement
  // with the closed-form bound at unit detector efficiency.
  for (double lam : {0.7, 0.85, 0.95}) {
    const double w0 = (3.0 * lam * lam + 1.0) / 4.0;
    CHECK(w0 == doctest::Approx(lam * lam + (1.0 - lam * lam) / 4.0).epsilon(1e-15));
    const double rest = (1.0 - w0) / 3.0;
    CHECK(bell_diagonal_ree({w0, rest, rest, rest}) ==
          doctest::Approx(depolarizing_bound(1.0, lam)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(bell_diagonal_ree({0.5, 0, 0, 0}), invalid_input);
  CHECK_THROWS_AS(bell_diagonal_ree({-0.1, 0.4, 0.4, 0.3}), invalid_input);
}

TEST_CASE("mdi assembly: shapes and validation") {
  MdiAssembly a = mdi_channel(erasure_channel(0.8), erasure_channel(0.5), 0.9, true);
  a.channel.validate();
  CHECK(a.channel.in_dim() == 4);
  CHECK(a.channel.out_dim() == 25);  // broadcast outcome to both ends
  CHECK(a.q == 0.9);
  CHECK(a.corrected);

  MdiAssembly b = mdi_channel(dephasing_channel(0.9), dephasing_channel(0.9), 1.0, false);
  b.channel.validate();
  CHECK_FALSE(b.corrected);

  CHECK_THROWS_AS(mdi_channel(identity_channel(3), identity_channel(2), 1.0, true),
                  invalid_input);
  CHECK_THROWS_AS(mdi_channel(identity_channel(2), identity_channel(2), 1.2, true),
                  invalid_input);
}

TEST_CASE("choi pipeline matches the erasure closed form") {
  for (auto [e1, e2, q] : {std::tuple{0.5, 0.8, 0.7}, {1.0, 1.0, 1.0}, {0.3, 0.9, 0.55}}) {
    CrossCheckResult r = choi_cross_check(MdiKind::erasure, {e1, e2}, q);
    CAPTURE(e1);
    CAPTURE(e2);
    CAPTURE(q);
    CHECK(r.closed_form_bits == doctest::Approx(erasure_capacity(q, e1, e2)).epsilon(1e-12));
    CHECK(r.delta <= 1e-9);
    CHECK(r.success_probability == doctest::Approx(q * e1 * e2).epsilon(1e-9));
    CHECK(r.bell_weights[0] == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(choi_cross_check(MdiKind::erasure, {0.5}, 1.0), invalid_input);
}

TEST_CASE("choi pipeline matches the depolarizing closed form") {
  for (double lam : {0.5, 0.6, 0.8, 0.95}) {
    for (double q : {1.0, 0.8}) {
      CrossCheckResult r = choi_cross_check(MdiKind::depolarizing, {lam}, q);
      CAPTURE(lam);
      CAPTURE(q);
      CHECK(r.delta <= 1e-9);
      CHECK(r.bell_weights[0] == doctest::Approx((3 * lam * lam + 1) / 4).epsilon(1e-9));
      CHECK(r.bell_weights[1] == doctest::Approx((1 - lam * lam) / 4).epsilon(1e-9));
      CHECK(r.bell_weights[2] == doctest::Approx((1 - lam * lam) / 4).epsilon(1e-9));
      CHECK(r.success_probability == doctest::Approx(q).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(choi_cross_check(MdiKind::depolarizing, {}, 1.0), invalid_input);
}

TEST_CASE("choi pipeline: dephasing weights follow the two-leg swap law") {
  // Swapping two phase-mixing legs concentrates Bell weight
  // lam^2 + (1-lam)^2 on the corrected target and 2 lam (1-lam) on the
  // phase-flipped partner. The published closed form uses a different
  // polynomial, (4 lam^2 - 3 lam + 1)/2, so away from lam = 1 the pipeline
  // and the closed form genuinely disagree; both sides are pinned here and
  // the mismatch is surfaced rather than hidden.
  const double lam = 0.9, q = 0.5;
  CrossCheckResult r = choi_cross_check(MdiKind::dephasing, {lam}, q);
  const double swap_weight = lam * lam + (1 - lam) * (1 - lam);  // 0.82
  CHECK(r.bell_weights[0] == doctest::Approx(swap_weight).epsilon(1e-9));
  CHECK(r.bell_weights[1] == doctest::Approx(2 * lam * (1 - lam)).epsilon(1e-9));
  CHECK(r.bell_weights[2] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.bell_weights[3] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.success_probability == doctest::Approx(q).epsilon(1e-9));
  CHECK(r.pipeline_bits ==
        doctest::Approx(q * (1.0 - binary_entropy(swap_weight))).epsilon(1e-9));
  CHECK(r.closed_form_bits == doctest::Approx(dephasing_bound(q, lam)).epsilon(1e-12));
  CHECK(r.delta > 1e-3);  // the documented discrepancy

  // At lam = 1 the leg is noiseless and the two sides agree exactly.
  CrossCheckResult ideal = choi_cross_check(MdiKind::dephasing, {1.0}, 1.0);
  CHECK(ideal.delta <= 1e-12);
  CHECK(ideal.bell_weights[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ideal.pipeline_bits == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("choi pipeline: dead detector gives zero throughput") {
  CrossCheckResult r = choi_cross_check(MdiKind::erasure, {0.8, 0.8}, 0.0);
  CHECK(r.success_probability == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.pipeline_bits == 0.0);
  CHECK(r.closed_form_bits == 0.0);
}

TEST_CASE("rate-distance sweep: exponential leg transmission") {
  const double att = kDefaultAttenuationPerKm;
  auto rows = rate_distance_sweep(MdiKind::erasure, 1.0, att, {0.0, 22.0, 44.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].distance_km == 0.0);
  CHECK(rows[0].value_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[0].rb_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[1].value_bits == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(rows[1].rb_bits == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(rows[2].value_bits == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));

  // Detector efficiency scales the rate but not the benchmark.
  auto rows2 = rate_distance_sweep(MdiKind::erasure, 0.9, att, {0.0});
  CHECK(rows2[0].value_bits == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(rows2[0].rb_bits == doctest::Approx(1.0).epsilon(1e-12));

  // Monotone decay and benchmark domination along a grid.
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(4.0 * k);
  auto sweep = rate_distance_sweep(MdiKind::erasure, 0.95, att, grid);
  for (size_t i = 0; i < sweep.size(); ++i) {
    CHECK(sweep[i].value_bits <= sweep[i].rb_bits + 1e-15);
    if (i) CHECK(sweep[i].value_bits <= sweep[i - 1].value_bits);
  }

  CHECK_THROWS_AS(rate_distance_sweep(MdiKind::depolarizing, 1.0, att, {0.0}), invalid_input);
  CHECK_THROWS_AS(rate_distance_sweep(MdiKind::erasure, 1.0, -att, {0.0}), invalid_input);
  CHECK_THROWS_AS(rate_distance_sweep(MdiKind::erasure, 1.0, att, {-5.0}), invalid_input);
}

TEST_CASE("mdi kind parsing") {
  CHECK(mdi_kind_from_string("erasure") == MdiKind::erasure);
  CHECK(mdi_kind_from_string("depolarizing") == MdiKind::depolarizing);
  CHECK(mdi_kind_from_string("dephasing") == MdiKind::dephasing);
  CHECK_THROWS_AS(mdi_kind_from_string("amplitude"), invalid_input);
}
