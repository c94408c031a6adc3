#include <cmath>
#include <vector>

#include "doctest.h"
#include "syge/geometry.hpp"
#include "syge/rng.hpp"

using namespace syge;

namespace {

double norm(const std::vector<float>& v) {
  double s = 0;
  for (float x : v) s += double(x) * x;
  return std::sqrt(s);
}

// 2x2 oracle straight from the matrix entries
void rot2(double theta, double x0, double x1, double& y0, double& y1) {
  y0 = std::cos(theta) * x0 - std::sin(theta) * x1;
  y1 = std::sin(theta) * x0 + std::cos(theta) * x1;
}
void ref2(double phi, double x0, double x1, double& y0, double& y1) {
  y0 = std::cos(phi) * x0 + std::sin(phi) * x1;
  y1 = std::sin(phi) * x0 - std::cos(phi) * x1;
}

}  // namespace

TEST_CASE("rotation quarter turn and reflection axis cases") {
  const std::vector<float> x{1.0f, 0.0f};
  const std::vector<float> theta{float(M_PI / 2)};
  const auto y = givens_rotate(theta, x);
  CHECK(y[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(y[1] == doctest::Approx(1.0));

  // angle-zero reflection mirrors across the first axis
  const std::vector<float> phi{0.0f};
  const std::vector<float> w{1.0f, 1.0f};
  const auto z = givens_reflect(phi, w);
  CHECK(z[0] == doctest::Approx(1.0));
  CHECK(z[1] == doctest::Approx(-1.0));
}

TEST_CASE("blockwise action matches the dense 2x2 oracle") {
  Rng rng(123);
  for (int it = 0; it < 200; ++it) {
    const size_t n = 2 * (1 + rng.below(5));
    std::vector<float> angles(n / 2), x(n);
    for (auto& a : angles) a = float(rng.uniform(-M_PI, M_PI));
    for (auto& v : x) v = float(rng.uniform(-2, 2));
    const auto yr = givens_rotate(angles, x);
    const auto yf = givens_reflect(angles, x);
    for (size_t b = 0; b < n / 2; ++b) {
      double r0, r1, f0, f1;
      rot2(angles[b], x[2 * b], x[2 * b + 1], r0, r1);
      ref2(angles[b], x[2 * b], x[2 * b + 1], f0, f1);
      CHECK(yr[2 * b] == doctest::Approx(r0).epsilon(1e-5));
      CHECK(yr[2 * b + 1] == doctest::Approx(r1).epsilon(1e-5));
      CHECK(yf[2 * b] == doctest::Approx(f0).epsilon(1e-5));
      CHECK(yf[2 * b + 1] == doctest::Approx(f1).epsilon(1e-5));
    }
  }
}

TEST_CASE("both transforms are isometries") {
  Rng rng(7);
  for (int it = 0; it < 1000; ++it) {
    const size_t n = 2 * (1 + rng.below(8));
    std::vector<float> angles(n / 2), x(n);
    for (auto& a : angles) a = float(rng.uniform(-10, 10));
    for (auto& v : x) v = float(rng.uniform(-3, 3));
    const double nx = norm(x);
    CHECK(norm(givens_rotate(angles, x)) == doctest::Approx(nx).epsilon(1e-5));
    CHECK(norm(givens_reflect(angles, x)) == doctest::Approx(nx).epsilon(1e-5));
  }
}

TEST_CASE("transpose rotation inverts, reflection is an involution") {
  Rng rng(9);
  for (int it = 0; it < 1000; ++it) {
    const size_t n = 2 * (1 + rng.below(8));
    std::vector<float> angles(n / 2), x(n), back(n);
    for (auto& a : angles) a = float(rng.uniform(-M_PI, M_PI));
    for (auto& v : x) v = float(rng.uniform(-3, 3));
    const auto y = givens_rotate(angles, x);
    givens_rotate_tr(angles.data(), y.data(), back.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-5));
    const auto twice = givens_reflect(angles, givens_reflect(angles, x));
    for (size_t i = 0; i < n; ++i) CHECK(twice[i] == doctest::Approx(x[i]).epsilon(1e-5));
  }
}

TEST_CASE("odd-length input is rejected") {
  const std::vector<float> angles{0.5f}, x{1.0f, 2.0f, 3.0f};
  CHECK_THROWS_AS(givens_rotate(angles, x), std::invalid_argument);
}

TEST_CASE("squared distance and dot products agree with hand values") {
  const std::vector<float> a{1, 2, 3}, b{4, 6, 8};
  CHECK(sq_dist(a, b) == doctest::Approx(9 + 16 + 25));
  CHECK(dot(a.data(), b.data(), 3) == doctest::Approx(4 + 12 + 24));
}

TEST_CASE("cosine handles aligned, orthogonal and empty directions") {
  const std::vector<float> x{1, 0}, y{0, 2}, z{3, 0}, zero{0, 0};
  CHECK(cosine(x, y) == doctest::Approx(0.0));
  CHECK(cosine(x, z) == doctest::Approx(1.0));
  CHECK(cosine(x, std::vector<float>{-2, 0}) == doctest::Approx(-1.0));
  bool flag = false;
  CHECK(cosine(x, zero, &flag) == 0.0);
  CHECK(flag);
}

TEST_CASE("sigmoid endpoints and stable logs") {
  CHECK(sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049));
  CHECK(log_sigmoid(-3.0) == doctest::Approx(-3.048587351573742));
  // extreme inputs must not overflow into -inf/nan
  CHECK(std::isfinite(log_sigmoid(-1000.0)));
  CHECK(log_sigmoid(1000.0) == doctest::Approx(0.0));
  CHECK(sigmoid(-1000.0) == doctest::Approx(0.0));
}

TEST_CASE("two-way softmax is a proper distribution") {
  Rng rng(17);
  for (int it = 0; it < 500; ++it) {
    const double s0 = rng.uniform(-50, 50), s1 = rng.uniform(-50, 50);
    double a0, a1;
    softmax2(s0, s1, a0, a1);
    CHECK(a0 >= 0.0);
    CHECK(a1 >= 0.0);
    CHECK(a0 + a1 == doctest::Approx(1.0));
    if (s0 > s1) CHECK(a0 > a1);
  }
}

TEST_CASE("attention output is a convex combination") {
  Rng rng(23);
  for (int it = 0; it < 1000; ++it) {
    const size_t n = 2 * (1 + rng.below(6));
    std::vector<float> x(n), y(n), a(n), out(n);
    for (auto& v : x) v = float(rng.uniform(-2, 2));
    for (auto& v : y) v = float(rng.uniform(-2, 2));
    for (auto& v : a) v = float(rng.uniform(-2, 2));
    double ax = 0, ay = 0;
    attention_combine(x.data(), y.data(), a.data(), out.data(), n, &ax, &ay);
    CHECK(ax >= 0.0);
    CHECK(ay >= 0.0);
    CHECK(ax + ay == doctest::Approx(1.0));
    for (size_t i = 0; i < n; ++i) {
      const double lo = std::min(double(x[i]), double(y[i]));
      const double hi = std::max(double(x[i]), double(y[i]));
      CHECK(out[i] >= lo - 1e-5);
      CHECK(out[i] <= hi + 1e-5);
    }
  }
}
