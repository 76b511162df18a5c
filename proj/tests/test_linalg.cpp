#include <catch2/catch.hpp>

#include <cmath>
#include <complex>

#include "bicarleman/linalg.hpp"
#include "bicarleman/random.hpp"

using namespace bicarleman;

namespace {

constexpr double kPi_oracle = 3.14159265358979323846;

// Independent 3x3 Hermitian eigenvalue oracle: closed-form roots of the
// characteristic polynomial (trigonometric Cardano).
std::vector<double> hermitian3_eigenvalues(const ComplexMatrix& H) {
  double p1 = std::norm(H(0, 1)) + std::norm(H(0, 2)) + std::norm(H(1, 2));
  double q = (H(0, 0).real() + H(1, 1).real() + H(2, 2).real()) / 3.0;
  double a = H(0, 0).real() - q, b = H(1, 1).real() - q, c = H(2, 2).real() - q;
  double p2 = a * a + b * b + c * c + 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return {q, q, q};
  // det((H - qI)/p)
  ComplexMatrix B(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      B(i, j) = (H(i, j) - (i == j ? Complex{q, 0.0} : Complex{0.0, 0.0})) / p;
  Complex det = B(0, 0) * (B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1)) -
                B(0, 1) * (B(1, 0) * B(2, 2) - B(1, 2) * B(2, 0)) +
                B(0, 2) * (B(1, 0) * B(2, 1) - B(1, 1) * B(2, 0));
  double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  double e1 = q + 2.0 * p * std::cos(phi);
  double e3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi_oracle / 3.0);
  double e2 = 3.0 * q - e1 - e3;
  std::vector<double> ev{e1, e2, e3};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

}  // namespace

TEST_CASE("inner product basics") {
  ComplexVector e1{Complex{1, 0}, Complex{0, 0}};
  ComplexVector e2{Complex{0, 0}, Complex{1, 0}};
  ComplexVector ie1{Complex{0, 1}, Complex{0, 0}};
  CHECK(inner(e1, e1) == Complex{1.0, 0.0});
  CHECK(inner(ie1, e2) == Complex{0.0, 0.0});

  // random length-4 value against a component-by-component hand expansion
  Rng rng(7);
  ComplexVector a = rng.vector(4), b = rng.vector(4);
  Complex expanded = a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]) +
                     a[3] * std::conj(b[3]);
  CHECK(std::abs(inner(a, b) - expanded) < 1e-15);
  CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-15);

  CHECK_THROWS_AS(inner(a, e1), dimension_error);
}

TEST_CASE("adjoint is an involution") {
  Rng rng(11);
  ComplexMatrix m = rng.matrix(5, 3);
  CHECK(m.adjoint().adjoint() == m);
}

TEST_CASE("svd of diagonal and nilpotent matrices") {
  ComplexMatrix d(2, 2);
  d(0, 0) = Complex{2.0, 0.0};
  d(1, 1) = Complex{1.0, 0.0};
  SchmidtSystem sd = svd(d);
  REQUIRE(sd.singular_values.size() == 2);
  CHECK(sd.singular_values[0] == Approx(2.0).margin(1e-12));
  CHECK(sd.singular_values[1] == Approx(1.0).margin(1e-12));

  ComplexMatrix n(2, 2);
  n(0, 1) = Complex{1.0, 0.0};
  SchmidtSystem sn = svd(n);
  REQUIRE(sn.singular_values.size() == 2);
  CHECK(sn.singular_values[0] == Approx(1.0).margin(1e-12));
  CHECK(sn.singular_values[1] == 0.0);
  CHECK(max_abs(n - reconstruct(sn)) < 1e-12);
  CHECK(sn.rank() == 1);
}

TEST_CASE("svd singular values match the characteristic-polynomial oracle") {
  Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix m = rng.matrix(3, 3);
    SchmidtSystem sys = svd(m);
    ComplexMatrix mm = m.adjoint() * m;  // Hermitian, eigenvalues s_n^2
    std::vector<double> ev = hermitian3_eigenvalues(mm);
    REQUIRE(sys.singular_values.size() == 3);
    for (int i = 0; i < 3; ++i)
      CHECK(sys.singular_values[static_cast<std::size_t>(i)] ==
            Approx(std::sqrt(std::max(0.0, ev[static_cast<std::size_t>(i)]))).margin(1e-9));
  }
}

TEST_CASE("svd invariants on random matrices") {
  Rng rng(37);
  for (std::size_t dim : {2, 5, 8}) {
    ComplexMatrix m = rng.matrix(dim, dim);
    SchmidtSystem sys = svd(m);
    // non-increasing, orthonormal systems, reconstruction
    for (std::size_t i = 0; i + 1 < sys.size(); ++i)
      CHECK(sys.singular_values[i] >= sys.singular_values[i + 1]);
    for (std::size_t a = 0; a < sys.size(); ++a)
      for (std::size_t b = 0; b < sys.size(); ++b) {
        Complex gl = inner(sys.left_vectors[a], sys.left_vectors[b]);
        Complex gr = inner(sys.right_vectors[a], sys.right_vectors[b]);
        CHECK(std::abs(gl - (a == b ? 1.0 : 0.0)) < 1e-10);
        CHECK(std::abs(gr - (a == b ? 1.0 : 0.0)) < 1e-10);
      }
    CHECK(max_abs(m - reconstruct(sys)) < 1e-10);
    // deterministic phase convention: largest entry of each q_n real positive
    for (std::size_t t = 0; t < sys.size(); ++t) {
      if (sys.singular_values[t] == 0.0) continue;
      std::size_t best = 0;
      for (std::size_t i = 1; i < dim; ++i)
        if (std::abs(sys.left_vectors[t][i]) > std::abs(sys.left_vectors[t][best])) best = i;
      CHECK(sys.left_vectors[t][best].imag() == Approx(0.0).margin(1e-12));
      CHECK(sys.left_vectors[t][best].real() > 0.0);
    }
  }
}

TEST_CASE("fractional power operator") {
  ComplexMatrix m(1, 1);
  m(0, 0) = Complex{16.0, 0.0};
  SchmidtSystem sys = svd(m);
  ComplexMatrix quarter = fractional_power_operator(sys, 0.25);
  CHECK(std::abs(quarter(0, 0) - Complex{2.0, 0.0}) < 1e-12);

  ComplexMatrix z(3, 3);
  SchmidtSystem zs = svd(z);
  ComplexMatrix zq = fractional_power_operator(zs, 0.7);
  CHECK(max_abs(zq) == 0.0);

  Rng rng(41);
  ComplexMatrix r = rng.matrix(4, 4);
  SchmidtSystem rs = svd(r);
  CHECK(max_abs(r - fractional_power_operator(rs, 1.0)) < 1e-10);

  CHECK_THROWS_AS(fractional_power_operator(rs, 0.0), config_error);
}

TEST_CASE("schwarz chain through the quarter power") {
  // ||B f|| <= ||J f||^{1/4} for unit f, B the quarter-power of J
  Rng rng(53);
  ComplexMatrix a = rng.matrix(6, 2), b = rng.matrix(2, 6);
  ComplexMatrix j = a * b;  // rank 2
  SchmidtSystem sys = svd(j);
  ComplexMatrix quarter = fractional_power_operator(sys, 0.25);
  for (int rep = 0; rep < 100; ++rep) {
    ComplexVector f = rng.unit_vector(6);
    CHECK(norm(quarter.apply(f)) <= std::pow(norm(j.apply(f)), 0.25) + 1e-9);
  }
}

TEST_CASE("projector") {
  ComplexMatrix p = projector({0}, 2);
  CHECK(p(0, 0) == Complex{1.0, 0.0});
  CHECK(p(1, 1) == Complex{0.0, 0.0});
  CHECK(p(0, 1) == Complex{0.0, 0.0});

  CHECK(max_abs(projector({}, 3)) == 0.0);
  CHECK(projector({0, 1}, 2) == ComplexMatrix::identity(2));

  ComplexMatrix e = projector({1, 3}, 5);
  CHECK(e * e == e);
  CHECK(e.adjoint() == e);

  CHECK_THROWS_AS(projector({5}, 5), dimension_error);
}

TEST_CASE("svd completes the left system of rank-deficient matrices") {
  // regression: with several positive singular directions spread across the
  // canonical basis, a thresholded sequential completion used to run dry and
  // leave empty left vectors behind
  Rng rng(36);
  for (int rep = 0; rep < 4; ++rep) {
    ComplexMatrix a = rng.matrix(16, 4), b = rng.matrix(4, 16);
    ComplexMatrix m = a * b;  // rank <= 4 in dimension 16
    SchmidtSystem sys = svd(m);
    REQUIRE(sys.left_vectors.size() == 16);
    for (std::size_t t = 0; t < sys.size(); ++t)
      REQUIRE(sys.left_vectors[t].size() == 16);
    for (std::size_t x = 0; x < sys.size(); ++x)
      for (std::size_t y = x; y < sys.size(); ++y) {
        CHECK(std::abs(inner(sys.left_vectors[x], sys.left_vectors[y]) -
                       (x == y ? 1.0 : 0.0)) < 1e-10);
      }
    CHECK(max_abs(m - reconstruct(sys)) < 1e-10);
  }
}

TEST_CASE("svd rejects non-finite input") {
  ComplexMatrix m(2, 2);
  m(0, 0) = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(svd(m), dimension_error);
}
