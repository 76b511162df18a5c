#include <catch2/catch.hpp>

#include <cmath>

#include "bicarleman/kernel.hpp"
#include "bicarleman/pipeline.hpp"
#include "bicarleman/random.hpp"
#include "common.hpp"

using namespace bicarleman;
using bicarleman::testing::build_model;
using bicarleman::testing::build_stage;
using bicarleman::testing::Stage;

TEST_CASE("transfer vectors vanish for the zero operator") {
  Stage st = build_stage(fixtures::zero_operator(6, 4));
  TransferVectors tv = compute_transfer_vectors(st.assignment, st.env);
  REQUIRE(tv.t_star_h.size() == st.env.complement_indices.size());
  for (const auto& v : tv.t_star_h) CHECK(norm(v) == 0.0);
  for (const auto& v : tv.t_h) CHECK(norm(v) == 0.0);
}

TEST_CASE("transfer vectors match the permuted matrix columns") {
  // rank-1 operator S = e_0 e_1^*: S e_1^p couples complement to null block
  OperatorEnvironment env;
  env.dim = 4;
  env.S = ComplexMatrix(4, 4);
  env.S(2, 0) = Complex{0.8, 0.3};  // S e_0 = (0.8+0.3i) e_2
  env.complement_indices = {0, 1};
  env.null_indices = {2, 3};
  Stage st = build_stage(env);
  TransferVectors tv = compute_transfer_vectors(st.assignment, st.env);

  // oracle: [T* h_{n(k)}] = U S* e_k^p and [T h_{n(k)}] = U S e_k^p
  ComplexMatrix Sstar = st.env.S.adjoint();
  for (std::size_t k = 0; k < st.assignment.complement_indices.size(); ++k) {
    std::size_t c = st.assignment.complement_indices[k];
    ComplexVector t_star = st.assignment.apply_U(Sstar.apply(st.env.basis_vector(c)));
    ComplexVector t = st.assignment.apply_U(st.env.S.apply(st.env.basis_vector(c)));
    CHECK(norm(tv.t_star_h[k] - t_star) < 1e-14);
    CHECK(norm(tv.t_h[k] - t) < 1e-14);
  }
}

TEST_CASE("transfer norms are dominated by z") {
  Rng rng(83);
  Stage st = build_stage(fixtures::random_operator(rng, 8, 2, 4));
  KernelModel m = build_model(st);
  REQUIRE_FALSE(m.P_terms.empty());
  for (std::size_t k = 0; k < m.P_terms.size(); ++k) {
    CHECK(norm(m.P_terms[k].coeffs) <= m.P_terms[k].z_bound + 1e-10);
    CHECK(norm(m.Ptilde_terms[k].coeffs) <= m.Ptilde_terms[k].z_bound + 1e-10);
  }
}

TEST_CASE("F tables for a vanishing nuclear part are empty") {
  Stage st = build_stage(fixtures::zero_operator(6, 4));
  FVectors fv = compute_F_vectors(st.assignment, st.split);
  CHECK(fv.weights.empty());
  CHECK(fv.tilde_weights.empty());
}

TEST_CASE("F vectors reproduce the rank-one algebra") {
  // J = sigma <., p> q with p = null basis vector, q a complement vector:
  // the single F term carries weight sigma^{1/2} and the sides are the
  // U-images of the sigma^{1/4}-scaled singular vectors.
  const double sigma = 1e-4;  // small enough to survive normalization
  OperatorEnvironment env;
  env.dim = 4;
  env.S = ComplexMatrix(4, 4);
  env.S(0, 2) = Complex{sigma, 0.0};  // S e_2 = sigma e_0
  env.complement_indices = {0, 1};
  env.null_indices = {2, 3};
  Stage st = build_stage(env);
  FVectors fv = compute_F_vectors(st.assignment, st.split);

  REQUIRE(fv.weights.size() == 1);  // J = S E has the single value sigma
  CHECK(fv.weights[0] == Approx(std::sqrt(sigma)).epsilon(1e-12));
  ComplexVector p = st.env.basis_vector(2), q = st.env.basis_vector(0);
  double quarter = std::pow(sigma, 0.25);
  CHECK(norm(fv.u_b_p[0] - st.assignment.apply_U(quarter * ComplexVector(q))) < 1e-12);
  CHECK(norm(fv.u_b_star_q[0] - st.assignment.apply_U(quarter * ComplexVector(p))) < 1e-12);

  // norms are below ||B|| = s_1^{1/4}
  CHECK(norm(fv.u_b_p[0]) <= quarter + 1e-12);
  CHECK(norm(fv.u_b_star_q[0]) <= quarter + 1e-12);
}

TEST_CASE("kernel of the zero operator vanishes identically") {
  Stage st = build_stage(fixtures::zero_operator(6, 4));
  KernelModel m = build_model(st);
  Rng rng(89);
  for (int r = 0; r < 10; ++r) {
    double s = rng.uniform(-20.0, 20.0), t = rng.uniform(-20.0, 20.0);
    CHECK(std::abs(eval_K(m, st.basis->mother, st.basis->enumeration, s, t, 0, 0)) == 0.0);
    CHECK(std::abs(eval_K_star(m, st.basis->mother, st.basis->enumeration, s, t, 1, 2)) == 0.0);
  }
  CHECK(norm(carleman_function(m, st.basis->mother, st.basis->enumeration, 0.7, 0)) == 0.0);
}

TEST_CASE("kernel decomposition and symmetry") {
  Rng rng(97);
  Stage st = build_stage(fixtures::random_operator(rng, 8, 2, 4));
  KernelModel m = build_model(st);
  const MotherWavelet& mw = st.basis->mother;
  const WaveletEnumeration& e = st.basis->enumeration;
  for (int r = 0; r < 25; ++r) {
    double s = rng.uniform(-8.0, 8.0), t = rng.uniform(-8.0, 8.0);
    Complex k = eval_K(m, mw, e, s, t, 0, 0);
    Complex parts = eval_P_part(m, mw, e, m.P_terms, s, t, 0, 0) +
                    eval_F_part(m, mw, e, m.Ftilde_terms, s, t, 0, 0);
    CHECK(std::abs(k - parts) < 1e-15);
    CHECK(std::abs(k - std::conj(eval_K_star(m, mw, e, t, s, 0, 0))) < 1e-9);
  }
  CHECK_THROWS_AS(eval_K(m, mw, e, 0.0, 0.0, m.i_max + 1, 0), config_error);
}

TEST_CASE("hermitian operator has a hermitian kernel") {
  // K*(s,t) agrees with K(s,t) when S = S*
  Rng rng(101);
  OperatorEnvironment env = fixtures::random_operator(rng, 6, 2, 3);
  ComplexMatrix sym(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      sym(i, j) = 0.5 * (env.S(i, j) + std::conj(env.S(j, i)));
  env.S = sym;
  Stage st = build_stage(env);
  KernelModel m = build_model(st);
  for (int r = 0; r < 15; ++r) {
    double s = rng.uniform(-6.0, 6.0), t = rng.uniform(-6.0, 6.0);
    Complex k = eval_K(m, st.basis->mother, st.basis->enumeration, s, t, 0, 0);
    Complex ks = eval_K_star(m, st.basis->mother, st.basis->enumeration, s, t, 0, 0);
    CHECK(std::abs(k - ks) < 1e-9);
  }
}

TEST_CASE("carleman coefficients match a direct series evaluation") {
  Rng rng(103);
  Stage st = build_stage(fixtures::random_operator(rng, 8, 2, 4));
  KernelModel m = build_model(st);
  const MotherWavelet& mw = st.basis->mother;
  const WaveletEnumeration& e = st.basis->enumeration;
  // <k(s), u_w> coefficients evaluated against K(s, t) pointwise through the
  // basis expansion: K(s, t) = sum_p conj(k(s))_p^* ... i.e. the kernel row
  // reconstructs from the carleman vector
  for (int r = 0; r < 5; ++r) {
    double s = rng.uniform(-5.0, 5.0), t = rng.uniform(-5.0, 5.0);
    ComplexVector kvec = carleman_function(m, mw, e, s, 0);
    Complex recon{0.0, 0.0};
    for (std::size_t p = 0; p < kvec.size(); ++p)
      recon += std::conj(kvec[p] * basis_eval(mw, e, m.assigned_wavelets[p], t, 0));
    CHECK(std::abs(recon - eval_K(m, mw, e, s, t, 0, 0)) < 1e-12);
  }
}

TEST_CASE("truncation bounds") {
  Rng rng(107);
  Stage st = build_stage(fixtures::random_operator(rng, 10, 3, 5));
  KernelModel full = build_model(st);
  const MotherWavelet& mw = st.basis->mother;
  const WaveletEnumeration& e = st.basis->enumeration;

  // no terms omitted: bound is zero
  CHECK(truncation_bound(full, 0, 0) == 0.0);
  CHECK(truncation_bound_star(full, 1, 1) == 0.0);

  // omit everything: bound equals the full certified sum
  KernelModel all_cut = full;
  all_cut.p_cap = 0;
  all_cut.f_cap = 0;
  double full_sum = 0.0;
  for (const auto& t : full.P_terms) full_sum += t.D * full.A[0] * full.C_star[0];
  for (const auto& t : full.Ftilde_terms)
    full_sum += t.weight * full.coeff_sup_bound(t.s_side, 0) * full.coeff_sup_bound(t.t_side, 0);
  CHECK(truncation_bound(all_cut, 0, 0) == Approx(full_sum).epsilon(1e-12));

  // half cap: measured omitted mass below the certified bound
  std::size_t longest = std::max(full.P_terms.size(), full.Ftilde_terms.size());
  KernelModel capped = build_model(st, 3, (longest + 1) / 2);
  for (int i = 0; i <= 1; ++i)
    for (int j = 0; j <= 1; ++j) {
      double bound = truncation_bound(capped, i, j);
      double measured = 0.0;
      for (double s = -6.0; s <= 6.0; s += 1.5)
        for (double t = -6.0; t <= 6.0; t += 1.5)
          measured = std::max(measured, std::abs(eval_K(full, mw, e, s, t, i, j) -
                                                 eval_K(capped, mw, e, s, t, i, j)));
      CHECK(measured <= bound + 1e-12);
    }
}

TEST_CASE("kernel L2 mass equals the Frobenius norm of the operator") {
  // the kernel of a unitary conjugation preserves the Hilbert-Schmidt norm:
  // integrating |K|^2 over both axes (window plus far patches) must return
  // ||S||_F^2, an oracle independent of the series bookkeeping
  Rng rng(199);
  Stage st = build_stage(fixtures::random_operator(rng, 8, 2, 4));
  KernelModel m = build_model(st);
  std::vector<double> coords, weights;
  bicarleman::verify_detail::t_nodes_with_patches(m, st.basis->enumeration, 60.0, 8.0, coords,
                                                  weights);
  KernelGrid grid(m, st.basis->mother, st.basis->enumeration, coords, coords, 0, 0);
  double frob = frobenius(st.env.S);
  CHECK(std::sqrt(grid.integral_abs2(weights, weights, false)) == Approx(frob).margin(1e-6));
  CHECK(std::sqrt(grid.integral_abs2(weights, weights, true)) == Approx(frob).margin(1e-6));
}

TEST_CASE("F weights are non-increasing square roots of singular values") {
  Rng rng(211);
  Stage st = build_stage(fixtures::random_operator(rng, 8, 3, 4));
  KernelModel m = build_model(st);
  for (std::size_t n = 0; n + 1 < m.F_terms.size(); ++n)
    CHECK(m.F_terms[n].weight >= m.F_terms[n + 1].weight);
  for (std::size_t n = 0; n + 1 < m.Ftilde_terms.size(); ++n)
    CHECK(m.Ftilde_terms[n].weight >= m.Ftilde_terms[n + 1].weight);
  std::size_t idx = 0;
  for (std::size_t n = 0; n < st.split.schmidt_J.size(); ++n) {
    double s = st.split.schmidt_J.singular_values[n];
    if (s <= 0.0) continue;
    REQUIRE(idx < m.F_terms.size());
    CHECK(m.F_terms[idx].weight == std::sqrt(s));
    ++idx;
  }
}

TEST_CASE("kernel grid matches pointwise evaluation") {
  Rng rng(109);
  Stage st = build_stage(fixtures::random_operator(rng, 8, 2, 4));
  KernelModel m = build_model(st);
  std::vector<double> ss{-3.0, 0.5, 2.0}, ts{-1.0, 0.0, 4.0};
  KernelGrid grid(m, st.basis->mother, st.basis->enumeration, ss, ts, 1, 0);
  for (std::size_t a = 0; a < ss.size(); ++a)
    for (std::size_t b = 0; b < ts.size(); ++b) {
      CHECK(std::abs(grid.K(a, b) -
                     eval_K(m, st.basis->mother, st.basis->enumeration, ss[a], ts[b], 1, 0)) <
            1e-13);
      CHECK(std::abs(grid.K_star(a, b) - eval_K_star(m, st.basis->mother, st.basis->enumeration,
                                                     ss[a], ts[b], 1, 0)) < 1e-13);
    }
}
