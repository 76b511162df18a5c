#include <catch2/catch.hpp>

#include <cmath>

#include "bicarleman/random.hpp"
#include "bicarleman/wavelet.hpp"
#include "common.hpp"

using namespace bicarleman;

namespace {

const MotherWavelet& shared_mother() { return bicarleman::testing::shared_basis()->mother; }

const WaveletEnumeration& shared_enumeration() {
  return bicarleman::testing::shared_basis()->enumeration;
}

// high-order quadrature of f over [lo, hi]
template <typename F>
double integrate(F&& f, double lo, double hi, int panels) {
  std::vector<double> xs, ws;
  quad::composite_gl16(lo, hi, panels, xs, ws);
  double acc = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) acc += ws[q] * f(xs[q]);
  return acc;
}

}  // namespace

TEST_CASE("smooth step endpoints and symmetry") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(-3.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(2.5) == 1.0);
  CHECK(smooth_step(0.5) == Approx(0.5).margin(1e-15));
  double a = smooth_step(0.25);
  CHECK(a > 0.0);
  CHECK(a < 0.5);
  CHECK(a == Approx(1.0 - smooth_step(0.75)).margin(1e-15));
  // strictly increasing inside the transition
  double prev = 0.0;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    double v = smooth_step(x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("bell function support and peak") {
  const double lo = 2.0 * kPi / 3.0, mid = 4.0 * kPi / 3.0, hi = 8.0 * kPi / 3.0;
  CHECK(bell_eval(lo) == 0.0);
  CHECK(bell_eval(hi) == 0.0);
  CHECK(bell_eval(lo - 0.3) == 0.0);
  CHECK(bell_eval(hi + 0.3) == 0.0);
  CHECK(bell_eval(mid) == Approx(1.0).margin(1e-15));
  for (double xi = 0.1; xi < 9.0; xi += 0.1) {
    CHECK(bell_eval(xi) >= 0.0);
    CHECK(bell_eval(xi) <= 1.0);
  }
  // partition property driving orthonormality: b(xi)^2 + b(2 xi)^2 = 1
  for (double xi = lo + 1e-3; xi < mid; xi += 0.05) {
    double s = bell_eval(xi) * bell_eval(xi) + bell_eval(2.0 * xi) * bell_eval(2.0 * xi);
    CHECK(s == Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("bell stays smooth across the support endpoints") {
  // numerical C-infinity proxy: central differences up to order 4 remain
  // bounded when straddling the support edges
  const double h = 1e-3;
  auto fd = [&](double xi, int order) {
    // binomial central difference of the given order
    double acc = 0.0;
    double sign = 1.0;
    double coeff = 1.0;
    for (int r = 0; r <= order; ++r) {
      acc += sign * coeff * bell_eval(xi + (0.5 * order - r) * h);
      sign = -sign;
      coeff = coeff * (order - r) / (r + 1.0);
    }
    return acc / std::pow(h, order);
  };
  for (double edge : {2.0 * kPi / 3.0, 4.0 * kPi / 3.0, 8.0 * kPi / 3.0}) {
    for (double off = -0.05; off <= 0.05; off += 0.01) {
      for (int order = 1; order <= 4; ++order) {
        double v = fd(edge + off, order);
        CHECK(std::isfinite(v));
        CHECK(std::abs(v) < 1e6);
      }
    }
  }
}

TEST_CASE("bell normalization gives a unit-norm mother function") {
  // (1/pi) int b^2 = ||u||_L2^2 = 1 by Parseval
  double val = integrate([](double xi) { return bell_eval(xi) * bell_eval(xi); },
                         2.0 * kPi / 3.0, 8.0 * kPi / 3.0, 256) /
               kPi;
  CHECK(val == Approx(1.0).margin(1e-8));
  CHECK(shared_mother().l2_norm_sq() == Approx(1.0).margin(1e-8));
}

TEST_CASE("mother function vanishes at the odd-symmetry point") {
  // at s = -1/2 the integrand reduces to sgn(xi) b(|xi|), odd in xi
  CHECK(shared_mother().eval_direct(-0.5, 0) == Complex{0.0, 0.0});
  CHECK(shared_mother().eval(-0.5, 0) == Complex{0.0, 0.0});
}

TEST_CASE("mother value bound and node-doubling agreement") {
  const MotherWavelet& mw = shared_mother();
  double bound = integrate([](double xi) { return bell_eval(xi); }, 2.0 * kPi / 3.0,
                           8.0 * kPi / 3.0, 256) /
                 kPi;
  Complex u0 = mw.eval_direct(0.0, 0);
  CHECK(std::abs(u0) <= bound);
  CHECK(u0.real() == 0.0);  // purely imaginary by construction
  Rng rng(3);
  for (int r = 0; r < 32; ++r) {
    double s = rng.uniform(-80.0, 80.0);
    for (int i = 0; i <= 3; ++i)
      CHECK(std::abs(mw.eval_direct(s, i) - mw.eval_direct(s, i, 2)) < 1e-9);
  }
}

TEST_CASE("mother derivative matches the finite-difference oracle") {
  const MotherWavelet& mw = shared_mother();
  const double h = 1e-4;
  for (double s : {0.0, 0.37, -1.2, 2.5}) {
    for (int i = 1; i <= 3; ++i) {
      double cd = (mw.eval(s + h, i - 1).imag() - mw.eval(s - h, i - 1).imag()) / (2.0 * h);
      double tw = mw.eval(s, i).imag();
      CHECK(tw == Approx(cd).epsilon(1e-5).margin(1e-7));
    }
  }
}

TEST_CASE("interpolation stays within its budget") {
  const MotherWavelet& mw = shared_mother();
  Rng rng(5);
  for (int i = 0; i <= mw.table_order(); ++i) {
    double tc = mw.cache_tau_max(i) - 1.0;
    for (int r = 0; r < 40; ++r) {
      double tau = rng.uniform(-tc, tc);
      CHECK(std::abs(mw.eval(tau - 0.5, i) - mw.eval_direct(tau - 0.5, i)) < 1e-8);
    }
  }
}

TEST_CASE("interpolation budget holds at higher configured orders") {
  MotherWavelet mw(5, 512);  // tables through order 6
  Rng rng(6);
  for (int i = 4; i <= mw.table_order(); ++i) {
    double tc = mw.cache_tau_max(i) - 1.0;
    double worst = 0.0;
    for (int r = 0; r < 40; ++r) {
      double tau = rng.uniform(-tc, tc);
      worst = std::max(worst, std::abs(mw.eval(tau - 0.5, i) - mw.eval_direct(tau - 0.5, i)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("enumeration spiral prefix and bound tables") {
  const WaveletEnumeration& e = shared_enumeration();
  CHECK(e.pair(0) == std::make_pair(0, 0));
  CHECK(e.pair(1) == std::make_pair(0, 1));
  CHECK(e.pair(2) == std::make_pair(1, 0));
  CHECK(e.pair(3) == std::make_pair(0, -1));
  CHECK(e.pair(4) == std::make_pair(-1, 0));
  CHECK(e.d_bound(0) == 1.0);

  // bijectivity over the enumerated range
  CHECK(e.index_of.size() == e.size());
  for (std::size_t n = 0; n < e.size(); ++n) CHECK(e.index_of.at(e.pair(n)) == n);

  // D formulas, bit-exact
  CHECK(dilation_bound(3) == 512.0);
  CHECK(dilation_bound(-4) == 0.25);
  CHECK(dilation_bound(0) == 1.0);
  CHECK(dilation_bound(-1) == Approx(1.0 / std::sqrt(2.0)).margin(1e-16));
  for (std::size_t n = 0; n < e.size(); ++n) {
    int j = e.pair(n).first;
    CHECK(e.d_bound(n) == dilation_bound(j));
  }

  // A_i = 2^{(i+1/2)^2} ||u^{(i)}||
  for (int i = 0; i <= 4; ++i) {
    double half = i + 0.5;
    CHECK(e.a_bound(i) == std::exp2(half * half) * shared_mother().sup_norm(i));
  }
}

TEST_CASE("basis evaluation dilation rules") {
  const MotherWavelet& mw = shared_mother();
  const WaveletEnumeration& e = shared_enumeration();
  // (j,k) = (0,0): identity dilation
  for (double s : {-1.0, 0.2, 0.9}) CHECK(basis_eval(mw, e, 0, s, 0) == mw.eval(s, 0));
  // (j,k) = (1,0) at s = 1/2: sqrt(2) u(1)
  std::size_t n10 = e.index_of.at({1, 0});
  CHECK(std::abs(basis_eval(mw, e, n10, 0.5, 0) - std::sqrt(2.0) * mw.eval(1.0, 0)) < 1e-15);
  // derivative consistency through the chain-rule factor
  std::size_t nm1 = e.index_of.at({-1, 1});
  const double h = 1e-4;
  for (int i = 1; i <= 3; ++i) {
    double cd = (basis_eval(mw, e, nm1, 0.3 + h, i - 1).imag() -
                 basis_eval(mw, e, nm1, 0.3 - h, i - 1).imag()) /
                (2.0 * h);
    CHECK(basis_eval(mw, e, nm1, 0.3, i).imag() == Approx(cd).epsilon(1e-5).margin(1e-8));
  }
}

TEST_CASE("evaluation rejects out-of-range requests") {
  const MotherWavelet& mw = shared_mother();
  const WaveletEnumeration& e = shared_enumeration();
  CHECK_THROWS_AS(basis_eval(mw, e, e.size() + 5, 0.0, 0), range_error);
  CHECK_THROWS_AS(mw.eval(0.0, mw.table_order() + 1), config_error);
  CHECK_THROWS_AS(e.a_bound(mw.table_order() + 2), range_error);
}

TEST_CASE("grid sup stays below the certified bound") {
  const MotherWavelet& mw = shared_mother();
  const WaveletEnumeration& e = shared_enumeration();
  for (std::size_t n : {0u, 2u, 4u, 10u}) {
    for (int i = 0; i <= 3; ++i) {
      CHECK(grid_sup(mw, e, n, i) <= e.sup_bound(n, i));
    }
  }
}

TEST_CASE("h subsequence selection") {
  const MotherWavelet& mw = shared_mother();
  HPlacementPolicy policy;
  const WaveletEnumeration& e = shared_enumeration();
  REQUIRE(e.size() >= required_enumeration_count(3, policy));

  auto h3 = choose_h_subsequence(e, 3, policy);
  REQUIRE(h3.size() == 3);
  CHECK(h3[0] < h3[1]);
  CHECK(h3[1] < h3[2]);
  double dsum = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    int j = e.pair(h3[r]).first;
    CHECK(j == -static_cast<int>(r + 1));
    dsum += e.d_bound(h3[r]);
  }
  // geometric sum oracle: sum_{r=1..3} (1/sqrt2)^r
  double r1 = 1.0 / std::sqrt(2.0);
  double oracle = r1 * (1.0 - std::pow(r1, 3)) / (1.0 - r1);
  CHECK(dsum == Approx(oracle).margin(1e-12));
  CHECK(dsum <= 1.561);

  auto h1 = choose_h_subsequence(e, 1, policy);
  REQUIRE(h1.size() == 1);
  CHECK(e.pair(h1[0]).first <= -1);

  // partition property: selected and complement disjoint, union complete
  std::vector<char> selected(e.size(), 0);
  for (std::size_t idx : h3) selected[idx] = 1;
  std::size_t g_count = 0;
  for (std::size_t n = 0; n < e.size(); ++n)
    if (!selected[n]) ++g_count;
  CHECK(g_count + h3.size() == e.size());

  // enumeration too small
  WaveletEnumeration tiny = enumerate_wavelets(16, mw);
  CHECK_THROWS_AS(choose_h_subsequence(tiny, 1, policy), range_error);
}

TEST_CASE("far translates are negligible on the window") {
  HPlacementPolicy policy;
  const WaveletEnumeration& e = shared_enumeration();
  auto hs = choose_h_subsequence(e, 2, policy);
  for (std::size_t idx : hs) {
    auto [j, k] = e.pair(idx);
    for (double s = -policy.window; s <= policy.window; s += 7.3) {
      double tau = std::ldexp(s, j) - k;
      CHECK(std::abs(tau) >= policy.margin);
    }
  }
}

TEST_CASE("wavelets vanish on the far frame") {
  // measured decay proxy: the first 12 basis functions on 40 <= |s| <= 60
  const MotherWavelet& mw = shared_mother();
  const WaveletEnumeration& e = shared_enumeration();
  double worst = 0.0;
  for (std::size_t n = 0; n < 12; ++n)
    for (double s = 40.0; s <= 60.0; s += 0.1) {
      worst = std::max(worst, std::abs(basis_eval(mw, e, n, s, 0)));
      worst = std::max(worst, std::abs(basis_eval(mw, e, n, -s, 0)));
    }
  CHECK(worst < 1e-4);
}
