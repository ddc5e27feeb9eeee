#include <doctest.h>

#include "testutil.hpp"
#include "wlmc/graphs.hpp"
#include "wlmc/mcnn.hpp"
#include "wlmc/wl.hpp"

using namespace wlmc;

namespace {

LipschitzMap random_map(testutil::Rng& rng, int in, int out,
                        Nonlinearity nl = Nonlinearity::Identity) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  LipschitzMap map;
  map.weight.resize(out, in);
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < in; ++c) map.weight(r, c) = uni(rng);
  map.bias.resize(out);
  for (int r = 0; r < out; ++r) map.bias[r] = uni(rng);
  map.nonlinearity = nl;
  return map;
}

McnnSpec random_spec(testutil::Rng& rng, int input_dim, int layers) {
  McnnSpec spec;
  int dim = input_dim;
  for (int l = 0; l < layers; ++l) {
    const int out = 1 + static_cast<int>(rng() % 3);
    spec.layers.push_back(random_map(rng, dim, out, l % 2 ? Nonlinearity::Abs : Nonlinearity::Identity));
    dim = out;
  }
  spec.readout_phi = random_map(rng, dim, 2);
  spec.readout_psi = random_map(rng, 2, 1);
  return spec;
}

}  // namespace

TEST_CASE("q_phi") {
  testutil::Rng rng(30);
  SUBCASE("identity on a dirac returns the point") {
    const LipschitzMap id = LipschitzMap::identity(2);
    Matrix points(3, 2);
    points << 1, 2, 3, 4, 5, 6;
    const Vector out = q_phi(id, ProbVec::dirac(3, 1), points);
    CHECK(out[0] == doctest::Approx(3.0));
    CHECK(out[1] == doctest::Approx(4.0));
  }
  SUBCASE("identity on a uniform two-point measure is the mean") {
    Matrix points(2, 1);
    points << 0, 2;
    CHECK(q_phi(LipschitzMap::identity(1), ProbVec::uniform(2), points)[0] ==
          doctest::Approx(1.0));
  }
  SUBCASE("random affine maps match direct summation") {
    const LipschitzMap phi = random_map(rng, 3, 2);
    const Matrix points = testutil::random_labels(rng, 5, 3);
    const ProbVec w(testutil::random_prob_vector(rng, 5));
    Vector direct = Vector::Zero(2);
    for (int i = 0; i < 5; ++i) direct += w[i] * (phi.weight * points.row(i).transpose() + phi.bias);
    CHECK((q_phi(phi, w, points) - direct).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(q_phi(LipschitzMap::identity(2), ProbVec::uniform(2), Matrix::Zero(2, 3)),
                    ValidationError);
  }
}

TEST_CASE("apply_F") {
  SUBCASE("identity map on the half-lazy graph chain reproduces half-averaging") {
    testutil::Rng rng(31);
    const LabeledGraph g = testutil::random_graph(rng, 6, 0.5, true, 3);
    const Lmmc x = graph_to_lmmc(g, 0.5);
    const Lmmc stepped = apply_F(LipschitzMap::identity(1), x);
    const Matrix stacked = wwl_labels(g, 1);
    for (int v = 0; v < g.n; ++v) {
      CHECK(stepped.labels()(v, 0) == doctest::Approx(stacked(v, 1)).epsilon(1e-12));
    }
  }
  SUBCASE("constant labels map to the constant image") {
    testutil::Rng rng(32);
    const Lmmc x = testutil::random_lmmc(rng, 4).with_labels(Matrix::Constant(4, 1, 2.5));
    LipschitzMap phi = random_map(rng, 1, 2, Nonlinearity::Abs);
    const Lmmc out = apply_F(phi, x);
    const Vector image = phi(Vector::Constant(1, 2.5));
    for (int v = 0; v < 4; ++v) {
      CHECK(out.labels()(v, 0) == doctest::Approx(image[0]));
      CHECK(out.labels()(v, 1) == doctest::Approx(image[1]));
    }
  }
  SUBCASE("swap chain swaps the labels") {
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    Matrix labels(2, 1);
    labels << 0, 1;
    const Lmmc x = validate_lmmc(swap, Vector::Constant(2, 0.5), labels);
    const Lmmc out = apply_F(LipschitzMap::identity(1), x);
    CHECK(out.labels()(0, 0) == doctest::Approx(1.0));
    CHECK(out.labels()(1, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("mcnn_forward") {
  testutil::Rng rng(33);
  SUBCASE("constant head gives constant output") {
    McnnSpec spec = random_spec(rng, 1, 2);
    spec.readout_psi.weight.setZero();
    spec.readout_psi.bias.setConstant(1.0);
    const Lmmc x = testutil::random_lmmc(rng, 4);
    const Lmmc y = testutil::random_lmmc(rng, 6);
    CHECK(mcnn_forward(spec, x) == doctest::Approx(1.0));
    CHECK(mcnn_forward(spec, y) == doctest::Approx(1.0));
  }
  SUBCASE("no layers + identity readout = mean label") {
    McnnSpec spec;
    spec.readout_phi = LipschitzMap::identity(1);
    spec.readout_psi = LipschitzMap::identity(1);
    const Lmmc x = testutil::random_lmmc(rng, 5);
    const double expected = x.stationary().weights().dot(x.labels().col(0));
    CHECK(mcnn_forward(spec, x) == doctest::Approx(expected));
  }
  SUBCASE("isomorphic inputs produce equal outputs") {
    const McnnSpec spec = random_spec(rng, 2, 2);
    const Lmmc x = testutil::random_lmmc(rng, 5, 2);
    const Lmmc xp = testutil::permute_lmmc(rng, x);
    CHECK(mcnn_forward(spec, x) == doctest::Approx(mcnn_forward(spec, xp)).epsilon(1e-12));
  }
  SUBCASE("zero-distance families evaluate identically") {
    auto [claw, path] = testutil::claw_vs_path();
    const Lmmc x = graph_to_lmmc(claw, 0.6);
    const Lmmc y = graph_to_lmmc(path, 0.6);
    for (int trial = 0; trial < 20; ++trial) {
      const McnnSpec spec = random_spec(rng, 1, 1 + trial % 3);
      CHECK(std::abs(mcnn_forward(spec, x) - mcnn_forward(spec, y)) <= 1e-6);
    }
  }
}

TEST_CASE("lipschitz bound controls the output gap") {
  testutil::Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 1 + trial % 2;
    McnnSpec spec;
    double product = 1.0;
    int dim = 1;
    for (int l = 0; l < k; ++l) {
      const int out = 1 + static_cast<int>(rng() % 2);
      spec.layers.push_back(random_map(rng, dim, out, Nonlinearity::Abs));
      product *= spec.layers.back().lipschitz_bound();
      dim = out;
    }
    // 1-Lipschitz readout, identity head
    spec.readout_phi = random_map(rng, dim, 1);
    const double norm = spec.readout_phi.lipschitz_bound();
    if (norm > 0) spec.readout_phi.weight /= norm;
    spec.readout_psi = LipschitzMap::identity(1);

    const Lmmc x = testutil::random_lmmc(rng, 3 + trial % 3);
    const Lmmc y = testutil::random_lmmc(rng, 3 + (trial * 2) % 3);
    const double gap = std::abs(mcnn_forward(spec, x) - mcnn_forward(spec, y));
    CHECK(gap <= product * wl_distance(x, y, k) + 1e-7);
  }
}

TEST_CASE("random search separates the separating family") {
  auto [g1, g2] = testutil::separating_family(2);
  const Lmmc x = graph_to_lmmc(g1, 0.0);
  const Lmmc y = graph_to_lmmc(g2, 0.0);
  REQUIRE(wl_distance(x, y, 1) > 1e-4);
  testutil::Rng rng(35);
  bool separated = false;
  int attempts = 0;
  for (; attempts < 1000 && !separated; ++attempts) {
    // The readout needs a nonlinearity: an affine readout sees only the mean
    // of the relabeled chain, and the two means coincide for this family.
    McnnSpec spec;
    spec.layers.push_back(random_map(rng, 1, 2, Nonlinearity::Abs));
    spec.readout_phi = random_map(rng, 2, 2, Nonlinearity::Abs);
    spec.readout_psi = random_map(rng, 2, 1);
    separated = std::abs(mcnn_forward(spec, x) - mcnn_forward(spec, y)) > 1e-7;
  }
  CHECK(separated);
}

TEST_CASE("parallel composition reproduces sums and products") {
  testutil::Rng rng(36);
  McnnSpec a, b;
  a.layers.push_back(random_map(rng, 2, 2, Nonlinearity::Abs));
  a.readout_phi = random_map(rng, 2, 1);
  a.readout_psi = random_map(rng, 1, 1);
  b.layers.push_back(random_map(rng, 2, 3, Nonlinearity::Abs));
  b.readout_phi = random_map(rng, 3, 2);
  b.readout_psi = random_map(rng, 2, 1);

  const McnnSpec pair = combine_specs(a, b);
  const Lmmc x = testutil::random_lmmc(rng, 4, 2);

  const double out_a = mcnn_forward(a, x);
  const double out_b = mcnn_forward(b, x);
  const Vector embed = mcnn_embed(pair, x);
  const double head_a = a.readout_psi(embed.head(a.readout_phi.out_dim()))(0);
  const double head_b = b.readout_psi(embed.tail(b.readout_phi.out_dim()))(0);
  CHECK(head_a + head_b == doctest::Approx(out_a + out_b).epsilon(1e-9));
  CHECK(head_a * head_b == doctest::Approx(out_a * out_b).epsilon(1e-9));
}

TEST_CASE("spec JSON round trip") {
  testutil::Rng rng(37);
  const McnnSpec spec = random_spec(rng, 2, 2);
  const McnnSpec back = mcnn_from_json(mcnn_to_json(spec));
  const Lmmc x = testutil::random_lmmc(rng, 4, 2);
  CHECK(mcnn_forward(spec, x) == doctest::Approx(mcnn_forward(back, x)).epsilon(1e-15));
  CHECK_THROWS_AS(mcnn_from_json("{not json"), ValidationError);
}

TEST_CASE("dimension checks") {
  McnnSpec spec;
  spec.layers.push_back(LipschitzMap::identity(2));
  spec.readout_phi = LipschitzMap::identity(3);  // wrong
  spec.readout_psi = LipschitzMap::identity(1);
  CHECK_THROWS_AS(check_spec(spec, 2), ValidationError);
}
