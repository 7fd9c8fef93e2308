#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hitwalk/formulas.hpp"
#include "hitwalk/rng.hpp"
#include "support/named_graphs.hpp"

using namespace hitwalk;
using namespace hitwalk::testing;

TEST_CASE("error envelopes evaluate the stated expressions") {
  CHECK(error_envelope(1000, 0.2, 2, Envelope::prob) == Catch::Approx(0.18586).margin(5e-5));
  CHECK(error_envelope(1000, 0.2, 2, Envelope::walks) == Catch::Approx(0.92926).margin(5e-5));
  CHECK(error_envelope(1000000, 1.0, 2, Envelope::inv_pn) == Catch::Approx(1e-6));
  CHECK(error_envelope(1000, 0.2, 2, Envelope::ratio_gap) ==
        Catch::Approx(std::sqrt(std::log(1000.0)) / (std::pow(0.2, 1.5) * std::pow(1000.0, 1.5))));
  CHECK_THROWS_AS(error_envelope(1, 0.2, 2, Envelope::prob), std::invalid_argument);
  CHECK_THROWS_AS(error_envelope(100, 0.0, 2, Envelope::prob), std::invalid_argument);
}

TEST_CASE("corrections vanish on vertex-transitive graphs") {
  // With every neighbor of v equivalent to w under an automorphism fixing v,
  // the correction sum telescopes to zero and the predictor reduces to
  // 2m/d(v) - 1.
  {
    auto pet = petersen_graph();
    const double expected = 2.0 * 15 / 3 - 1.0;  // 9; also the exact adjacent value
    CHECK(predict_prob_form(pet, 0, 1, 2) == Catch::Approx(expected).margin(1e-9));
    CHECK(predict_walks_form(pet, 0, 1, 2) == Catch::Approx(expected).margin(1e-9));
    auto h = hitting_vector(pet, 1);
    CHECK(h.values[0] == Catch::Approx(expected).margin(1e-9));
  }
  {
    const std::size_t n = 8;
    auto kn = complete_graph(n);
    CHECK(predict_prob_form(kn, 2, 5, 2) == Catch::Approx(n - 1.0).margin(1e-9));
    CHECK(predict_walks_form(kn, 2, 5, 2) == Catch::Approx(n - 1.0).margin(1e-9));
  }
}

TEST_CASE("walks-form predictor on the triangle") {
  // Exact H = 2 on K_3; the smoke-scale envelope absorbs the difference.
  const double pred = predict_walks_form(complete_graph(3), 0, 1, 2);
  const double env = error_envelope(3, 1.0, 2, Envelope::walks);
  CHECK(std::abs(pred - 2.0) <= env);
}

TEST_CASE("diameter-2 closed form") {
  {
    const std::size_t n = 9;
    auto kn = complete_graph(n);
    CHECK(predict_diam2_form(kn, 1, 4, 1.0) == Catch::Approx(n - 1.0));
  }
  {
    auto p3 = path_graph(3);
    CHECK(predict_diam2_form(p3, 0, 2, 0.5) == Catch::Approx(5.0));  // exact is 4
    auto h = hitting_vector(p3, 2);
    CHECK(h.values[0] == Catch::Approx(4.0));
  }
  CHECK_THROWS_AS(predict_diam2_form(path_graph(5), 0, 4, 0.5), std::invalid_argument);
}

TEST_CASE("pairwise difference expansion") {
  {
    auto pet = petersen_graph();
    auto same = mixed_difference_check(pet, 3, 0, 3, 2);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == Catch::Approx(0.0).margin(1e-12));
  }
  {
    // On a cycle, vertices mirrored across v are automorphic with v fixed.
    auto c5 = cycle_graph(5);
    auto sym = mixed_difference_check(c5, 1, 0, 4, 2);
    CHECK(sym.lhs == Catch::Approx(0.0).margin(1e-9));
    CHECK(sym.rhs == Catch::Approx(0.0).margin(1e-12));
  }
  {
    GnpSpec spec{300, 0.3, 2, 19};
    auto g = sample_gnp(spec);
    REQUIRE(is_connected(g));
    RngStream rng(7);
    for (int t = 0; t < 5; ++t) {
      Vertex v = static_cast<Vertex>(rng.next_below(300));
      Vertex u = static_cast<Vertex>(rng.next_below(300));
      Vertex w = static_cast<Vertex>(rng.next_below(300));
      if (u == v || w == v) continue;
      auto c = mixed_difference_check(g, u, v, w, 2);
      CHECK(c.residual <= 5.0 * error_envelope(300, spec.p, 2, Envelope::prob));
    }
  }
}

TEST_CASE("compare suite batches, caches and flags") {
  GnpSpec spec{200, 0.3, 2, 23};
  auto g = sample_gnp(spec);
  REQUIRE(is_connected(g));

  CHECK(compare_suite(g, spec, {}).empty());

  std::vector<Edge> pairs = {{3, 7}, {12, 7}, {40, 7}, {7, 7}, {3, 9}};
  auto recs = compare_suite(g, spec, pairs);
  REQUIRE(recs.size() == 5);
  CHECK(recs[3].error == "invalid pair");

  for (const auto& r : recs) {
    if (!r.error.empty()) continue;
    CHECK(r.pred_prob == Catch::Approx(predict_prob_form(g, r.w, r.v, GnpSpec::fitting_k(200, spec.p))).margin(1e-12));
    CHECK(r.pred_walks == Catch::Approx(predict_walks_form(g, r.w, r.v, GnpSpec::fitting_k(200, spec.p))).margin(1e-12));
    auto h = hitting_vector(g, r.v);
    CHECK(r.exact == Catch::Approx(h.values[r.w]).margin(1e-9));
    CHECK(r.residual_prob == Catch::Approx(std::abs(r.exact - r.pred_prob)).margin(1e-12));
    if (r.dist_wv <= 2) {
      REQUIRE(r.pred_diam2.has_value());
      CHECK(*r.pred_diam2 ==
            Catch::Approx(predict_diam2_form(g, r.w, r.v, spec.p)).margin(1e-12));
    }
    // The two predictors differ by exactly the termwise expansion, so the
    // triangle bound computed from the terms must hold.
    CHECK(r.walks_prob_gap <= r.walks_prob_gap_bound + 1e-12);
  }

  // Determinism: identical inputs, identical bits.
  auto again = compare_suite(g, spec, pairs);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].pred_prob == again[i].pred_prob);
    CHECK(recs[i].pred_walks == again[i].pred_walks);
    CHECK(recs[i].exact == again[i].exact);
  }
}

TEST_CASE("fitted constants stay small on an in-range sample") {
  GnpSpec spec{500, 0.4, 2, 29};
  auto g = sample_gnp(spec);
  REQUIRE(is_connected(g));
  RngStream rng(41);
  std::vector<Edge> pairs;
  for (int t = 0; t < 25; ++t) {
    Vertex v = static_cast<Vertex>(rng.next_below(500));
    Vertex w = static_cast<Vertex>(rng.next_below(499));
    if (w >= v) ++w;
    pairs.push_back({w, v});
  }
  auto recs = compare_suite(g, spec, pairs);
  for (const auto& r : recs) REQUIRE(r.error.empty());
  CHECK(recs[0].in_good_class);
  CHECK(fitted_constant(recs, &PredictionRecord::residual_prob,
                        recs[0].env_prob) <= 5.0);
  CHECK(fitted_constant(recs, &PredictionRecord::residual_walks,
                        recs[0].env_walks) <= 5.0);
}
