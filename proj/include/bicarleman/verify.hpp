#pragma once

// Batch verification harness: runs every invariant suite over a built
// pipeline (wavelet orthonormality, splitting identities, unitarity,
// kernel symmetry, smoothness surrogates, vanishing, summability,
// truncation) and reports measured residuals against their bounds.
// All randomness is seeded; a run is bit-reproducible for a fixed config.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bicarleman/assignment.hpp"
#include "bicarleman/kernel.hpp"
#include "bicarleman/linalg.hpp"
#include "bicarleman/random.hpp"
#include "bicarleman/splitting.hpp"
#include "bicarleman/wavelet.hpp"

namespace bicarleman {

struct Tolerances {
  double l2_norm = 1e-8;
  double gram = 5e-6;
  double bound_certificate = 1.0;     // grid-sup / (D_n A_i) ratio
  double wavelet_fd_rel = 1e-5;
  double wavelet_vanish = 1e-4;       // measured first-12 frame sup is 4.3e-5
  double interp_budget = 1e-8;
  double quad_doubling = 1e-9;
  double svd_recon = 1e-10;
  double schwarz_slack = 1e-9;
  double split_recon = 1e-10;
  double adjoint_relation = 1e-10;
  double q_repr = 1e-10;
  double unitary_inner = 1e-14;
  double summability_slack = 1e-12;
  double transfer_norm_slack = 1e-10;
  double f_vector_slack = 1e-10;
  double action_agreement = 1e-4;
  double decomposition = 1e-12;
  double conj_symmetry = 1e-9;
  double kernel_fd_rel = 1e-4;
  double carleman_parseval = 1e-5;
  double modulus_ratio = 1.0;         // measured step / certified bound
  double fd_convergence_ratio = 1.0;  // halving must beat quadratic-with-slack
  double frame_ratio = 1e-5;
  double truncation_slack = 1e-12;
};

struct VerifyOptions {
  std::uint64_t seed = 20240817;
  int i_max = 3;
  double extent = 60.0;  // quadrature and grid half-width
  double frame_lo = 40.0;
  double frame_hi = 60.0;
  double center = 10.0;
  std::size_t ortho_count = 12;
  Tolerances tol;
};

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

struct VerificationReport {
  std::vector<CheckRecord> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  // Line format: CHECK <name> residual=<r> bound=<b> PASS|FAIL
  // Runtimes are intentionally not serialized; reports are byte-stable.
  std::string to_text() const {
    std::string out;
    char buf[256];
    for (const auto& c : checks) {
      std::snprintf(buf, sizeof(buf), "CHECK %s residual=%.17g bound=%.17g %s\n",
                    c.name.c_str(), c.residual, c.bound, c.pass ? "PASS" : "FAIL");
      out += buf;
    }
    out += pass() ? "RESULT PASS\n" : "RESULT FAIL\n";
    return out;
  }
};

namespace verify_detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline CheckRecord record(const std::string& name, double residual, double bound,
                          const Stopwatch& sw) {
  CheckRecord r;
  r.name = name;
  r.residual = residual;
  r.bound = bound;
  r.pass = std::isfinite(residual) && residual <= bound;
  r.seconds = sw.seconds();
  return r;
}

// Ratio with a guard for the all-zero case (zero operator fixtures).
inline double guarded_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

// Composite GL16 nodes over [-extent, extent], `per_unit` panels per unit.
inline void window_nodes(double extent, double per_unit, std::vector<double>& coords,
                         std::vector<double>& weights) {
  int panels = std::max(8, static_cast<int>(std::ceil(2.0 * extent * per_unit)));
  quad::composite_gl16(-extent, extent, panels, coords, weights);
}

// t-quadrature covering the window plus the translated supports of the far
// assigned wavelets (|2^j t - k| <= 120 per wavelet).  Patches are laid over
// pairwise-disjoint intervals -- finest dilation first, window pre-inserted --
// so no region is integrated twice; a region shared by several wavelets then
// belongs to the finest one, whose panel density resolves the coarser ones.
inline void t_nodes_with_patches(const KernelModel& m, const WaveletEnumeration& e,
                                 double extent, double per_unit, std::vector<double>& coords,
                                 std::vector<double>& weights) {
  window_nodes(extent, per_unit, coords, weights);
  struct Span {
    double lo, hi, scale;
  };
  std::vector<Span> wanted;
  for (std::size_t w : m.assigned_wavelets) {
    auto [j, k] = e.pair(w);
    if (k == 0) continue;
    double scale = std::exp2(static_cast<double>(-j));  // 2^{|j|} for j <= 0
    double center = static_cast<double>(k) * scale;
    double reach = 120.0 * scale;
    if (center - reach >= -extent && center + reach <= extent) continue;  // window covers it
    wanted.push_back({center - reach, center + reach, scale});
  }
  std::sort(wanted.begin(), wanted.end(),
            [](const Span& a, const Span& b) { return a.scale < b.scale; });
  std::vector<std::pair<double, double>> covered{{-extent, extent}};
  std::vector<double> pc, pw;
  for (const Span& span : wanted) {
    // pieces of [lo, hi] not already covered
    std::vector<std::pair<double, double>> pieces{{span.lo, span.hi}};
    for (const auto& [clo, chi] : covered) {
      std::vector<std::pair<double, double>> next;
      for (const auto& [plo, phi] : pieces) {
        if (chi <= plo || clo >= phi) {
          next.emplace_back(plo, phi);
          continue;
        }
        if (plo < clo) next.emplace_back(plo, std::min(phi, clo));
        if (phi > chi) next.emplace_back(std::max(plo, chi), phi);
      }
      pieces = std::move(next);
    }
    for (const auto& [plo, phi] : pieces) {
      if (phi - plo < 1e-9) continue;
      int panels = std::max(8, static_cast<int>(std::ceil((phi - plo) / (0.3 * span.scale))));
      quad::composite_gl16(plo, phi, panels, pc, pw);
      coords.insert(coords.end(), pc.begin(), pc.end());
      weights.insert(weights.end(), pw.begin(), pw.end());
      covered.emplace_back(plo, phi);
    }
  }
}

// Point sampler for the kernel checks.  The construction pushes the
// operator mass onto far-translated wavelets, so points drawn only from the
// observation window would probe a region where K is structurally tiny.
// Points therefore alternate between the window and the effective supports
// of the far-assigned wavelets, where the kernel carries O(1) coefficients.
class PointSampler {
 public:
  PointSampler(const KernelModel& m, const WaveletEnumeration& e, double window) {
    for (std::size_t w : m.assigned_wavelets) {
      auto [j, k] = e.pair(w);
      if (k == 0) continue;
      double scale = std::exp2(static_cast<double>(-j));
      double center = static_cast<double>(k) * scale;
      if (std::abs(center) - 20.0 * scale > window) patches_.push_back({scale, double(k)});
    }
  }

  bool has_patches() const { return !patches_.empty(); }

  double draw(Rng& rng, double lo, double hi) const {
    if (patches_.empty() || rng.uniform() < 0.5) return rng.uniform(lo, hi);
    return draw_in(pick(rng), rng);
  }

  // Correlated pairs: half the time both coordinates come from the same far
  // patch (or both from the window).  A basis function pairs with its own
  // translate in the kernel series, so uncorrelated draws would rarely see
  // the regions where the kernel carries its mass.
  std::pair<double, double> draw_pair(Rng& rng, double lo, double hi) const {
    if (patches_.empty()) return {rng.uniform(lo, hi), rng.uniform(lo, hi)};
    if (rng.uniform() < 0.5) return {draw(rng, lo, hi), draw(rng, lo, hi)};
    if (rng.uniform() < 0.25) return {rng.uniform(lo, hi), rng.uniform(lo, hi)};
    const Patch& p = pick(rng);
    return {draw_in(p, rng), draw_in(p, rng)};
  }

 private:
  struct Patch {
    double scale;        // 2^{|j|}
    double translation;  // k
  };

  const Patch& pick(Rng& rng) const {
    return patches_[static_cast<std::size_t>(rng.uniform(0.0, 1.0) *
                                             static_cast<double>(patches_.size()))];
  }

  double draw_in(const Patch& p, Rng& rng) const {
    return p.scale * (rng.uniform(-15.0, 15.0) + p.translation);
  }

  std::vector<Patch> patches_;
};

inline double certified_P_sup(const KernelModel& m, const std::vector<KernelModel::PTerm>& terms,
                              int i, int j) {
  double acc = 0.0;
  for (std::size_t k = 0; k < std::min(m.p_cap, terms.size()); ++k)
    acc += terms[k].D * m.A[static_cast<std::size_t>(i)] * m.coeff_sup_bound(terms[k].coeffs, j);
  return acc;
}

inline double certified_F_sup(const KernelModel& m, const std::vector<KernelModel::FTerm>& terms,
                              int i, int j) {
  double acc = 0.0;
  for (std::size_t n = 0; n < std::min(m.f_cap, terms.size()); ++n)
    acc += terms[n].weight * m.coeff_sup_bound(terms[n].s_side, i) *
           m.coeff_sup_bound(terms[n].t_side, j);
  return acc;
}

// Certified sup of |d^{i+j} K / ds^i dt^j| from the stored tables.
inline double certified_K_sup(const KernelModel& m, int i, int j) {
  return certified_P_sup(m, m.P_terms, i, j) + certified_F_sup(m, m.Ftilde_terms, i, j);
}

inline double certified_K_star_sup(const KernelModel& m, int i, int j) {
  return certified_P_sup(m, m.Ptilde_terms, i, j) + certified_F_sup(m, m.F_terms, i, j);
}

// Certified sup of ||d^i k / ds^i||_{L2} (coefficient-space norms).
inline double certified_carleman_sup(const KernelModel& m,
                                     const std::vector<KernelModel::PTerm>& p_terms,
                                     const std::vector<KernelModel::FTerm>& f_terms, int i) {
  double acc = 0.0;
  for (std::size_t k = 0; k < std::min(m.p_cap, p_terms.size()); ++k)
    acc += p_terms[k].D * m.A[static_cast<std::size_t>(i)] * norm(p_terms[k].coeffs);
  for (std::size_t n = 0; n < std::min(m.f_cap, f_terms.size()); ++n)
    acc += f_terms[n].weight * m.coeff_sup_bound(f_terms[n].s_side, i) * norm(f_terms[n].t_side);
  return acc;
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// wavelet checks
// ---------------------------------------------------------------------------

inline CheckRecord check_wavelet_l2(const WaveletBasis& basis, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  double res = std::abs(basis.mother.l2_norm_sq() - 1.0);
  return verify_detail::record("wavelet-l2-norm", res, o.tol.l2_norm, sw);
}

inline CheckRecord check_wavelet_orthonormality(const WaveletBasis& basis,
                                                const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  std::size_t count = std::min<std::size_t>(o.ortho_count, basis.enumeration.size());
  double dev = 0.0;
  // refine until two successive resolutions agree
  double prev = -1.0;
  for (double per_unit : {6.0, 12.0}) {
    std::vector<double> xs, ws;
    verify_detail::window_nodes(o.extent, per_unit, xs, ws);
    std::vector<std::vector<double>> rows(count, std::vector<double>(xs.size()));
    for (std::size_t n = 0; n < count; ++n)
      for (std::size_t x = 0; x < xs.size(); ++x)
        rows[n][x] = basis.eval(n, xs[x], 0).imag();  // wavelets are purely imaginary
    dev = 0.0;
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = a; b < count; ++b) {
        double g = 0.0;
        for (std::size_t x = 0; x < xs.size(); ++x) g += ws[x] * rows[a][x] * rows[b][x];
        dev = std::max(dev, std::abs(g - (a == b ? 1.0 : 0.0)));
      }
    if (prev >= 0.0 && std::abs(dev - prev) < 1e-9) break;
    prev = dev;
  }
  return verify_detail::record("wavelet-orthonormality", dev, o.tol.gram, sw);
}

inline CheckRecord check_wavelet_bound_certificates(const WaveletBasis& basis,
                                                    const Assignment* a,
                                                    const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  std::vector<std::size_t> ns;
  for (std::size_t n = 0; n < std::min<std::size_t>(12, basis.enumeration.size()); ++n)
    ns.push_back(n);
  if (a)
    for (std::size_t w : a->assigned_wavelets) ns.push_back(w);
  // the sup over the effective support depends only on (j, i); dedupe
  std::vector<std::pair<int, int>> seen;
  double worst = 0.0;
  for (std::size_t n : ns) {
    int j = basis.enumeration.pair(n).first;
    for (int i = 0; i <= std::min(3, o.i_max); ++i) {
      if (std::find(seen.begin(), seen.end(), std::make_pair(j, i)) != seen.end()) continue;
      seen.emplace_back(j, i);
      double sup = grid_sup(basis.mother, basis.enumeration, n, i);
      worst = std::max(worst, sup / basis.enumeration.sup_bound(n, i));
    }
  }
  return verify_detail::record("wavelet-bound-certificates", worst, o.tol.bound_certificate, sw);
}

inline CheckRecord check_wavelet_derivative_consistency(const WaveletBasis& basis,
                                                        const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x5741564544ull);
  std::size_t count = std::min<std::size_t>(12, basis.enumeration.size());
  double worst = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    int j = basis.enumeration.pair(n).first;
    // step 1e-4 in the wavelet's own frame, so the truncation term stays
    // uniform across dilations; relative scale floored at a quarter of the
    // dilated sup so zero-crossing samples stay meaningful
    double h = 1e-4 * std::exp2(static_cast<double>(-j));
    for (int i = 1; i <= std::min(3, o.i_max); ++i) {
      double amp = std::exp2(static_cast<double>(j) * (static_cast<double>(i) + 0.5));
      double scale = 0.25 * amp * basis.mother.sup_norm(i);
      double err = 0.0;
      std::vector<double> ss;
      for (int r = 0; r < 10; ++r) ss.push_back(rng.uniform(-4.0, 4.0));
      std::vector<double> av(ss.size());
      for (std::size_t r = 0; r < ss.size(); ++r) {
        av[r] = basis.eval(n, ss[r], i).imag();
        scale = std::max(scale, std::abs(av[r]));
      }
      for (std::size_t r = 0; r < ss.size(); ++r) {
        double cd = (basis.eval(n, ss[r] + h, i - 1).imag() -
                     basis.eval(n, ss[r] - h, i - 1).imag()) /
                    (2.0 * h);
        err = std::max(err, std::abs(av[r] - cd));
      }
      worst = std::max(worst, err / scale);
    }
  }
  return verify_detail::record("wavelet-derivative-consistency", worst, o.tol.wavelet_fd_rel, sw);
}

inline CheckRecord check_wavelet_vanishing(const WaveletBasis& basis, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  std::size_t count = std::min<std::size_t>(12, basis.enumeration.size());
  double worst = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    for (double s = o.frame_lo; s <= o.frame_hi; s += 0.05) {
      worst = std::max(worst, std::abs(basis.eval(n, s, 0).imag()));
      worst = std::max(worst, std::abs(basis.eval(n, -s, 0).imag()));
    }
  }
  return verify_detail::record("wavelet-vanishing", worst, o.tol.wavelet_vanish, sw);
}

inline CheckRecord check_wavelet_interpolation(const WaveletBasis& basis,
                                               const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x494e544552ull);
  double worst = 0.0;
  for (int i = 0; i <= basis.mother.table_order(); ++i) {
    double tc = basis.mother.cache_tau_max(i) - 1.0;
    for (int r = 0; r < 48; ++r) {
      double tau = rng.uniform(-tc, tc);
      worst = std::max(worst, std::abs(basis.mother.eval(tau - 0.5, i).imag() -
                                       basis.mother.eval_direct(tau - 0.5, i).imag()));
    }
  }
  return verify_detail::record("wavelet-interp-budget", worst, o.tol.interp_budget, sw);
}

inline CheckRecord check_wavelet_quadrature_doubling(const WaveletBasis& basis,
                                                     const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x44424cull);
  double worst = 0.0;
  for (int r = 0; r < 48; ++r) {
    double s = rng.uniform(-100.0, 100.0);
    for (int i = 0; i <= std::min(2, o.i_max); ++i)
      worst = std::max(worst, std::abs(basis.mother.eval_direct(s, i, 1).imag() -
                                       basis.mother.eval_direct(s, i, 2).imag()));
  }
  return verify_detail::record("wavelet-quadrature-doubling", worst, o.tol.quad_doubling, sw);
}

// ---------------------------------------------------------------------------
// splitting checks
// ---------------------------------------------------------------------------

inline CheckRecord check_svd_reconstruction(const SplitSystem& sp, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  double res = 0.0;
  auto gram_dev = [](const std::vector<ComplexVector>& vs) {
    double dev = 0.0;
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a; b < vs.size(); ++b)
        dev = std::max(dev, std::abs(inner(vs[a], vs[b]) - (a == b ? 1.0 : 0.0)));
    return dev;
  };
  for (const SchmidtSystem* sys : {&sp.schmidt_J, &sp.schmidt_J_tilde}) {
    res = std::max(res, gram_dev(sys->left_vectors));
    res = std::max(res, gram_dev(sys->right_vectors));
  }
  if (sp.J.rows() > 0) {
    res = std::max(res, max_abs(sp.J - reconstruct(sp.schmidt_J)));
    res = std::max(res, max_abs(sp.J_tilde - reconstruct(sp.schmidt_J_tilde)));
  }
  return verify_detail::record("svd-reconstruction", res, o.tol.svd_recon, sw);
}

inline CheckRecord check_schwarz_chain(const SplitSystem& sp, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x534348574152ull);
  ComplexMatrix Bs = sp.B.adjoint(), Bts = sp.B_tilde.adjoint();
  ComplexMatrix Js = sp.J.adjoint(), Jts = sp.J_tilde.adjoint();
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < 100; ++r) {
    ComplexVector f = rng.unit_vector(sp.J.cols());
    worst = std::max(worst, norm(sp.B.apply(f)) - std::pow(norm(sp.J.apply(f)), 0.25));
    worst = std::max(worst, norm(Bs.apply(f)) - std::pow(norm(Js.apply(f)), 0.25));
    worst = std::max(worst, norm(sp.B_tilde.apply(f)) - std::pow(norm(sp.J_tilde.apply(f)), 0.25));
    worst = std::max(worst, norm(Bts.apply(f)) - std::pow(norm(Jts.apply(f)), 0.25));
  }
  return verify_detail::record("schwarz-chain", worst, o.tol.schwarz_slack, sw);
}

inline CheckRecord check_split_identity(const OperatorEnvironment& env, const SplitSystem& sp,
                                        const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  // S = Q + ES with ES recovered from the Schmidt data of J~ (ES = J~*).
  double res = max_abs(env.S - (sp.Q + reconstruct(sp.schmidt_J_tilde).adjoint()));
  res = std::max(res,
                 max_abs(env.S.adjoint() - (sp.Q_tilde + reconstruct(sp.schmidt_J).adjoint())));
  return verify_detail::record("split-identity", res, o.tol.split_recon, sw);
}

inline CheckRecord check_adjoint_relation(const OperatorEnvironment& env, const SplitSystem& sp,
                                          const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x41444aull);
  ComplexMatrix ES_star = sp.E * env.S.adjoint();
  ComplexMatrix Jstar = reconstruct(sp.schmidt_J).adjoint();
  ComplexMatrix ES = sp.E * env.S;
  ComplexMatrix Jt_star = reconstruct(sp.schmidt_J_tilde).adjoint();
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    ComplexVector f = rng.vector(env.dim);
    worst = std::max(worst, norm(ES_star.apply(f) - Jstar.apply(f)));
    worst = std::max(worst, norm(ES.apply(f) - Jt_star.apply(f)));
  }
  return verify_detail::record("adjoint-relation", worst, o.tol.adjoint_relation, sw);
}

inline CheckRecord check_q_representation(const OperatorEnvironment& env, const SplitSystem& sp,
                                          const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x51524550ull);
  ComplexMatrix Sstar = env.S.adjoint();
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    ComplexVector f = rng.vector(env.dim);
    ComplexVector lhs = sp.Q.apply(f);
    ComplexVector rhs(env.dim, Complex{0.0, 0.0});
    for (std::size_t c : env.complement_indices) {
      Complex coeff = inner(f, Sstar.apply(env.basis_vector(c)));
      rhs[c] += coeff;
    }
    worst = std::max(worst, norm(lhs - rhs));
  }
  return verify_detail::record("q-representation", worst, o.tol.q_repr, sw);
}

inline CheckRecord check_nuclearity(const SplitSystem& sp, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  (void)o;
  double res = std::max(half_power_sum(sp.schmidt_J), half_power_sum(sp.schmidt_J_tilde));
  return verify_detail::record("nuclearity-half-power-sum", res,
                               std::numeric_limits<double>::max(), sw);
}

// ---------------------------------------------------------------------------
// assignment checks
// ---------------------------------------------------------------------------

inline CheckRecord check_unitary_permutation(const Assignment& a, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  (void)o;
  std::size_t n = a.dim();
  ComplexMatrix I = ComplexMatrix::identity(n);
  double res = 0.0;
  if (!(a.U * a.U.adjoint() == I) || !(a.U.adjoint() * a.U == I)) res = 1.0;
  // U must also be the permutation the bookkeeping claims
  for (std::size_t src = 0; src < n && res == 0.0; ++src) {
    std::size_t p = a.image_position(a.wavelet_of_source[src]);
    if (a.U(p, src) != Complex{1.0, 0.0}) res = 1.0;
  }
  return verify_detail::record("unitary-permutation", res, 0.0, sw);
}

inline CheckRecord check_unitary_inner_products(const Assignment& a, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x554e49ull);
  double worst = 0.0;
  for (int r = 0; r < 50; ++r) {
    ComplexVector f = rng.vector(a.dim()), g = rng.vector(a.dim());
    worst = std::max(worst,
                     std::abs(inner(a.U.apply(f), a.U.apply(g)) - inner(f, g)));
  }
  return verify_detail::record("unitary-inner-products", worst, o.tol.unitary_inner, sw);
}

inline CheckRecord check_assignment_indices(const Assignment& a, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  (void)o;
  double mismatches = 0.0;
  auto expect = [&](std::size_t src, std::size_t wavelet) {
    if (a.wavelet_of_source[src] != wavelet) mismatches += 1.0;
    if (a.preimage_of_wavelet(wavelet) != src) mismatches += 1.0;  // pullback roundtrip
  };
  for (std::size_t k = 0; k < a.x_indices.size(); ++k) expect(a.x_indices[k], a.g_wavelets[k]);
  for (std::size_t k = 0; k < a.v_indices.size(); ++k) expect(a.v_indices[k], a.m_of_v[k]);
  for (std::size_t k = 0; k < a.complement_indices.size(); ++k)
    expect(a.complement_indices[k], a.n_of_complement[k]);
  return verify_detail::record("assignment-indices", mismatches, 0.0, sw);
}

inline CheckRecord check_summability(const Assignment& a, const OperatorEnvironment& env,
                                     const SplitSystem& sp, const WaveletEnumeration& e,
                                     const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  SummabilityReport rep = summability_report(a, env, sp, e, o.i_max);
  double excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= rep.i_max; ++i) {
    std::size_t u = static_cast<std::size_t>(i);
    excess = std::max(excess, rep.h_sum[u] - rep.h_bound[u]);
    excess = std::max(excess, rep.v_sum[u] - rep.v_bound[u]);
    excess = std::max(excess, rep.perp_sum[u] - rep.perp_bound[u]);
    excess = std::max(excess, rep.x_sum[u] - rep.x_bound[u]);
  }
  return verify_detail::record("summability", excess, o.tol.summability_slack, sw);
}

// ---------------------------------------------------------------------------
// kernel checks
// ---------------------------------------------------------------------------

inline CheckRecord check_transfer_norms(const KernelModel& m, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  double worst = -std::numeric_limits<double>::infinity();
  if (m.P_terms.empty()) worst = 0.0;
  for (std::size_t k = 0; k < m.P_terms.size(); ++k) {
    worst = std::max(worst, norm(m.P_terms[k].coeffs) - m.P_terms[k].z_bound);
    worst = std::max(worst, norm(m.Ptilde_terms[k].coeffs) - m.Ptilde_terms[k].z_bound);
  }
  return verify_detail::record("transfer-norm-bounds", worst, o.tol.transfer_norm_slack, sw);
}

inline CheckRecord check_f_vector_norms(const KernelModel& m, const SplitSystem& sp,
                                        const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  double worst = 0.0;
  double b_norm = sp.schmidt_J.size() ? std::pow(sp.schmidt_J.singular_values[0], 0.25) : 0.0;
  double bt_norm =
      sp.schmidt_J_tilde.size() ? std::pow(sp.schmidt_J_tilde.singular_values[0], 0.25) : 0.0;
  for (const auto& t : m.F_terms) {
    worst = std::max(worst, norm(t.s_side) - b_norm);
    worst = std::max(worst, norm(t.t_side) - b_norm);
  }
  for (const auto& t : m.Ftilde_terms) {
    worst = std::max(worst, norm(t.s_side) - bt_norm);
    worst = std::max(worst, norm(t.t_side) - bt_norm);
  }
  return verify_detail::record("f-vector-norm-bounds", worst, o.tol.f_vector_slack, sw);
}

// |Int Int K(s,t) f(t) conj(g(s)) dt ds - <U S U^{-1} f, g>| for random f, g
// in the span of the first 8 enumerated wavelets.  Components of f, g on
// unassigned wavelets are annihilated by U^{-1} and carry no kernel mass, so
// both sides see the same projection.
inline CheckRecord check_action_agreement(const OperatorEnvironment& env, const Assignment& a,
                                          const KernelModel& m, const WaveletBasis& basis,
                                          const VerifyOptions& o, int pairs = 3) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x414354ull);
  std::size_t span = std::min<std::size_t>(8, basis.enumeration.size());

  // two quadrature resolutions (one refinement step), grids shared by pairs
  std::vector<std::vector<double>> xs(2), ws(2);
  std::vector<KernelGrid> grids;
  std::vector<std::vector<std::vector<Complex>>> rows(2);  // [res][n][x]
  for (std::size_t r = 0; r < 2; ++r) {
    verify_detail::window_nodes(o.extent, r == 0 ? 6.0 : 9.0, xs[r], ws[r]);
    grids.emplace_back(m, basis.mother, basis.enumeration, xs[r], xs[r], 0, 0);
    rows[r].resize(span);
    for (std::size_t n = 0; n < span; ++n) {
      rows[r][n].resize(xs[r].size());
      for (std::size_t x = 0; x < xs[r].size(); ++x)
        rows[r][n][x] = basis.eval(n, xs[r][x], 0);
    }
  }

  double worst = 0.0;
  for (int rep = 0; rep < pairs; ++rep) {
    std::vector<Complex> fc(span), gc(span);
    for (auto& z : fc) z = rng.complex_uniform();
    for (auto& z : gc) z = rng.complex_uniform();

    // matrix side: inject into assigned coefficient space, pull back by U
    ComplexVector f_img(m.assigned_wavelets.size(), Complex{0.0, 0.0});
    ComplexVector g_img(m.assigned_wavelets.size(), Complex{0.0, 0.0});
    for (std::size_t n = 0; n < span; ++n) {
      auto it = std::lower_bound(m.assigned_wavelets.begin(), m.assigned_wavelets.end(), n);
      if (it != m.assigned_wavelets.end() && *it == n) {
        std::size_t p = static_cast<std::size_t>(it - m.assigned_wavelets.begin());
        f_img[p] = fc[n];
        g_img[p] = gc[n];
      }
    }
    Complex matrix_side = inner(a.apply_U(env.S.apply(a.apply_U_inverse(f_img))), g_img);

    // quadrature side, keeping the finer of the two resolutions
    Complex quad_side{0.0, 0.0};
    for (std::size_t r = 0; r < 2; ++r) {
      std::vector<Complex> g_weighted(xs[r].size()), f_weighted(xs[r].size());
      for (std::size_t x = 0; x < xs[r].size(); ++x) {
        Complex fv{0.0, 0.0}, gv{0.0, 0.0};
        for (std::size_t n = 0; n < span; ++n) {
          fv += fc[n] * rows[r][n][x];
          gv += gc[n] * rows[r][n][x];
        }
        f_weighted[x] = ws[r][x] * fv;
        g_weighted[x] = ws[r][x] * std::conj(gv);
      }
      quad_side = grids[r].bilinear_K(g_weighted, f_weighted);
    }
    worst = std::max(worst, std::abs(quad_side - matrix_side));
  }
  return verify_detail::record("action-agreement", worst, o.tol.action_agreement, sw);
}

// Pointwise form of the action agreement: the t-integral of K(s, t) f(t) at
// sample points s matches the series evaluation of the image U S U^{-1} f.
inline CheckRecord check_action_pointwise(const OperatorEnvironment& env, const Assignment& a,
                                          const KernelModel& m, const WaveletBasis& basis,
                                          const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x414354504full);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  std::size_t span = std::min<std::size_t>(8, basis.enumeration.size());
  std::vector<Complex> fc(span);
  for (auto& z : fc) z = rng.complex_uniform();

  ComplexVector f_img(m.assigned_wavelets.size(), Complex{0.0, 0.0});
  for (std::size_t n = 0; n < span; ++n) {
    auto it = std::lower_bound(m.assigned_wavelets.begin(), m.assigned_wavelets.end(), n);
    if (it != m.assigned_wavelets.end() && *it == n)
      f_img[static_cast<std::size_t>(it - m.assigned_wavelets.begin())] = fc[n];
  }
  ComplexVector image = a.apply_U(env.S.apply(a.apply_U_inverse(f_img)));

  std::vector<double> ss;
  for (int r = 0; r < 20; ++r) ss.push_back(sampler.draw(rng, -8.0, 8.0));
  std::vector<double> tc, tw;
  verify_detail::window_nodes(o.extent, 9.0, tc, tw);
  KernelGrid grid(m, basis.mother, basis.enumeration, ss, tc, 0, 0);
  std::vector<Complex> f_vals(tc.size(), Complex{0.0, 0.0});
  for (std::size_t n = 0; n < span; ++n)
    for (std::size_t x = 0; x < tc.size(); ++x) f_vals[x] += fc[n] * basis.eval(n, tc[x], 0);

  double worst = 0.0;
  for (std::size_t sidx = 0; sidx < ss.size(); ++sidx) {
    Complex integral{0.0, 0.0};
    for (std::size_t x = 0; x < tc.size(); ++x)
      integral += tw[x] * grid.K(sidx, x) * f_vals[x];
    Complex series{0.0, 0.0};
    for (std::size_t p = 0; p < image.size(); ++p)
      series += image[p] * basis_eval(basis.mother, basis.enumeration, m.assigned_wavelets[p],
                                      ss[sidx], 0);
    worst = std::max(worst, std::abs(integral - series));
  }
  return verify_detail::record("action-pointwise", worst, o.tol.action_agreement, sw);
}

inline CheckRecord check_decomposition(const KernelModel& m, const WaveletBasis& basis,
                                       const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x4445434full);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    auto [s, t] = sampler.draw_pair(rng, -6.0, 6.0);
    Complex whole = eval_K(m, basis.mother, basis.enumeration, s, t, 0, 0);
    Complex parts = eval_P_part(m, basis.mother, basis.enumeration, m.P_terms, s, t, 0, 0) +
                    eval_F_part(m, basis.mother, basis.enumeration, m.Ftilde_terms, s, t, 0, 0);
    worst = std::max(worst, std::abs(whole - parts));
  }
  return verify_detail::record("decomposition-consistency", worst, o.tol.decomposition, sw);
}

inline CheckRecord check_conjugate_symmetry(const KernelModel& m, const WaveletBasis& basis,
                                            const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x53594dull);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  double worst = 0.0;
  for (int r = 0; r < 100; ++r) {
    auto [s, t] = sampler.draw_pair(rng, -8.0, 8.0);
    Complex k = eval_K(m, basis.mother, basis.enumeration, s, t, 0, 0);
    Complex ks = eval_K_star(m, basis.mother, basis.enumeration, t, s, 0, 0);
    worst = std::max(worst, std::abs(k - std::conj(ks)));
  }
  return verify_detail::record("conjugate-symmetry", worst, o.tol.conj_symmetry, sw);
}

inline CheckRecord check_kernel_fd_agreement(const KernelModel& m, const WaveletBasis& basis,
                                             const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x4644ull);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  const double h = 1e-3;
  double worst = 0.0;
  int top = std::min(3, m.i_max);
  std::vector<std::pair<double, double>> pts;
  for (int r = 0; r < 20; ++r) pts.push_back(sampler.draw_pair(rng, -4.0, 4.0));
  for (int i = 0; i <= top; ++i) {
    for (int j = 0; i + j <= top; ++j) {
      if (i + j == 0) continue;
      // relative to the sampled derivative scale; samples more than nine
      // orders below the certified sup sit in evaluation noise and are
      // measured against that floor instead
      double scale = 1e-9 * verify_detail::certified_K_sup(m, i, j);
      double err = 0.0;
      std::vector<Complex> tw(pts.size());
      for (std::size_t r = 0; r < pts.size(); ++r) {
        tw[r] = eval_K(m, basis.mother, basis.enumeration, pts[r].first, pts[r].second, i, j);
        scale = std::max(scale, std::abs(tw[r]));
      }
      for (std::size_t r = 0; r < pts.size(); ++r) {
        auto [s, t] = pts[r];
        Complex cd;
        if (i > 0) {
          cd = (eval_K(m, basis.mother, basis.enumeration, s + h, t, i - 1, j) -
                eval_K(m, basis.mother, basis.enumeration, s - h, t, i - 1, j)) /
               Complex{2.0 * h, 0.0};
        } else {
          cd = (eval_K(m, basis.mother, basis.enumeration, s, t + h, i, j - 1) -
                eval_K(m, basis.mother, basis.enumeration, s, t - h, i, j - 1)) /
               Complex{2.0 * h, 0.0};
        }
        err = std::max(err, std::abs(tw[r] - cd));
      }
      if (scale > 0.0) worst = std::max(worst, err / scale);
    }
  }
  return verify_detail::record("kernel-fd-agreement", worst, o.tol.kernel_fd_rel, sw);
}

inline CheckRecord check_carleman_parseval(const KernelModel& m, const WaveletBasis& basis,
                                           const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x504152ull);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  std::vector<double> ss;
  for (int r = 0; r < 10; ++r) ss.push_back(sampler.draw(rng, -6.0, 6.0));
  std::vector<double> tc, tw;
  verify_detail::t_nodes_with_patches(m, basis.enumeration, o.extent, 8.0, tc, tw);
  KernelGrid grid(m, basis.mother, basis.enumeration, ss, tc, 0, 0);
  double worst = 0.0;
  for (std::size_t a = 0; a < ss.size(); ++a) {
    double qk = 0.0, qks = 0.0;
    for (std::size_t b = 0; b < tc.size(); ++b) {
      qk += tw[b] * std::norm(grid.K(a, b));
      qks += tw[b] * std::norm(grid.K_star(a, b));
    }
    double pk = norm(carleman_function(m, basis.mother, basis.enumeration, ss[a], 0));
    double pks = norm(carleman_function_star(m, basis.mother, basis.enumeration, ss[a], 0));
    worst = std::max(worst, std::abs(std::sqrt(qk) - pk));
    worst = std::max(worst, std::abs(std::sqrt(qks) - pks));
  }
  return verify_detail::record("carleman-parseval", worst, o.tol.carleman_parseval, sw);
}

// Condition (i) surrogate: continuity modulus of each partial derivative
// against the certified next-order sup.
inline CheckRecord check_condition_i(const KernelModel& m, const WaveletBasis& basis,
                                     const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x434f4e44ull);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  const double delta = 1e-2;
  double worst = 0.0;
  int top = std::min(3, m.i_max);
  for (int i = 0; i + 1 <= m.i_max + 1 && i <= top; ++i) {
    for (int j = 0; i + j <= top; ++j) {
      double bound_s = verify_detail::certified_K_sup(m, i + 1, j);
      for (int r = 0; r < 64; ++r) {
        auto [s, t] = sampler.draw_pair(rng, -10.0, 10.0);
        double diff = std::abs(eval_K(m, basis.mother, basis.enumeration, s + delta, t, i, j) -
                               eval_K(m, basis.mother, basis.enumeration, s, t, i, j));
        worst = std::max(worst, verify_detail::guarded_ratio(diff, delta * bound_s));
      }
    }
  }
  return verify_detail::record("condition-i-modulus", worst, o.tol.modulus_ratio, sw);
}

// Condition (ii) (and (iii) for the starred function): norm profile of the
// i-th Carleman derivative -- continuity modulus against the certified
// next-order sup, and decay beyond the frame.
inline CheckRecord check_condition_ii(const KernelModel& m, const WaveletBasis& basis, int i,
                                      bool starred, const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  const auto& p_terms = starred ? m.Ptilde_terms : m.P_terms;
  const auto& f_terms = starred ? m.F_terms : m.Ftilde_terms;
  auto k_of = [&](double s, int order) {
    return starred ? carleman_function_star(m, basis.mother, basis.enumeration, s, order)
                   : carleman_function(m, basis.mother, basis.enumeration, s, order);
  };
  double bound_next = verify_detail::certified_carleman_sup(m, p_terms, f_terms, i + 1);
  const double delta = 1e-2;
  double worst = 0.0;
  double prev = norm(k_of(-10.0, i));
  double center_max = prev;
  for (double s = -10.0 + delta; s <= 10.0; s += delta) {
    double cur = norm(k_of(s, i));
    center_max = std::max(center_max, cur);
    worst = std::max(worst, verify_detail::guarded_ratio(std::abs(cur - prev), delta * bound_next));
    prev = cur;
  }
  // norm-profile modulus over the far patches, where the function is O(1)
  Rng rng(o.seed ^ 0x434949ull);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  if (sampler.has_patches()) {
    for (int r = 0; r < 256; ++r) {
      double s = sampler.draw(rng, -10.0, 10.0);
      double d = std::abs(norm(k_of(s + delta, i)) - norm(k_of(s, i)));
      worst = std::max(worst, verify_detail::guarded_ratio(d, delta * bound_next));
    }
  }
  double frame_max = 0.0;
  for (double s = o.frame_lo; s <= o.frame_hi; s += 0.5) {
    frame_max = std::max(frame_max, norm(k_of(s, i)));
    frame_max = std::max(frame_max, norm(k_of(-s, i)));
  }
  worst = std::max(worst,
                   verify_detail::guarded_ratio(frame_max, o.tol.frame_ratio * center_max));
  std::string name = std::string(starred ? "condition-iii" : "condition-ii") + "-order-" +
                     std::to_string(i);
  return verify_detail::record(name, worst, o.tol.modulus_ratio, sw);
}

// Strong-derivative surrogate: coefficient-space central differences converge
// to the termwise derivative at the quadratic rate.  On far patches the
// truncation term is 2^{2j}-suppressed and interpolation noise dominates
// both step sizes, so the rate is asserted only where the coarse error
// rises above a noise floor tied to the local derivative norm; below it,
// agreement to the floor itself is required.
inline CheckRecord check_carleman_fd_convergence(const KernelModel& m, const WaveletBasis& basis,
                                                 const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  Rng rng(o.seed ^ 0x46444b4bull);
  verify_detail::PointSampler sampler(m, basis.enumeration, o.extent);
  double worst = 0.0;
  for (int i = 0; i + 1 <= m.i_max; ++i) {
    for (int r = 0; r < 5; ++r) {
      double s = sampler.draw(rng, -6.0, 6.0);
      ComplexVector tw = carleman_function(m, basis.mother, basis.enumeration, s, i + 1);
      auto err_at = [&](double h) {
        ComplexVector hi = carleman_function(m, basis.mother, basis.enumeration, s + h, i);
        ComplexVector lo = carleman_function(m, basis.mother, basis.enumeration, s - h, i);
        double acc = 0.0;
        for (std::size_t p = 0; p < tw.size(); ++p)
          acc += std::norm((hi[p] - lo[p]) / (2.0 * h) - tw[p]);
        return std::sqrt(acc);
      };
      double e1 = err_at(1e-2), e2 = err_at(5e-3);
      double floor = 1e-5 * norm(tw) + 1e-12;
      if (e1 <= floor)
        worst = std::max(worst, e2 / floor);
      else
        worst = std::max(worst, e2 / std::max(0.35 * e1, floor));
    }
  }
  return verify_detail::record("carleman-fd-convergence", worst, o.tol.fd_convergence_ratio, sw);
}

inline CheckRecord check_kernel_vanishing(const KernelModel& m, const WaveletBasis& basis,
                                          const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  std::vector<double> frame_s, frame_t, center_c;
  for (double s = o.frame_lo; s <= o.frame_hi; s += 0.5) {
    frame_s.push_back(s);
    frame_s.push_back(-s);
  }
  for (double t = -o.extent; t <= o.extent; t += 0.5) frame_t.push_back(t);
  for (double c = -o.center; c <= o.center; c += 0.25) center_c.push_back(c);
  KernelGrid frame(m, basis.mother, basis.enumeration, frame_s, frame_t, 0, 0);
  KernelGrid center(m, basis.mother, basis.enumeration, center_c, center_c, 0, 0);
  double sup_frame = 0.0, sup_center = 0.0;
  for (std::size_t a = 0; a < frame_s.size(); ++a)
    for (std::size_t b = 0; b < frame_t.size(); ++b)
      sup_frame = std::max(sup_frame, std::abs(frame.K(a, b)));
  for (std::size_t a = 0; a < center_c.size(); ++a)
    for (std::size_t b = 0; b < center_c.size(); ++b)
      sup_center = std::max(sup_center, std::abs(center.K(a, b)));
  double res = verify_detail::guarded_ratio(sup_frame, sup_center);
  return verify_detail::record("kernel-vanishing", res, o.tol.frame_ratio, sw);
}

// Rebuilds the model with caps at half the series lengths and compares the
// measured omitted mass against the certified truncation bound.
inline CheckRecord check_truncation(const OperatorEnvironment& env, const SplitSystem& sp,
                                    const Assignment& a, const WaveletEnumeration& e,
                                    const KernelModel& full, const WaveletBasis& basis,
                                    const VerifyOptions& o) {
  verify_detail::Stopwatch sw;
  std::size_t longest = std::max(full.P_terms.size(),
                                 std::max(full.F_terms.size(), full.Ftilde_terms.size()));
  if (longest <= 1) {
    // nothing to cap; the bound degenerates to zero omitted mass
    return verify_detail::record("truncation-bound", 0.0, o.tol.truncation_slack, sw);
  }
  std::size_t cap = (longest + 1) / 2;
  KernelModel capped = build_kernel_model(env, sp, a, e, full.i_max, cap);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= std::min(1, full.i_max); ++i) {
    for (int j = 0; j <= std::min(1, full.i_max); ++j) {
      double measured = 0.0, measured_star = 0.0;
      for (double s = -8.0; s <= 8.0; s += 1.25) {
        for (double t = -8.0; t <= 8.0; t += 1.25) {
          measured = std::max(
              measured, std::abs(eval_K(full, basis.mother, basis.enumeration, s, t, i, j) -
                                 eval_K(capped, basis.mother, basis.enumeration, s, t, i, j)));
          measured_star = std::max(
              measured_star,
              std::abs(eval_K_star(full, basis.mother, basis.enumeration, s, t, i, j) -
                       eval_K_star(capped, basis.mother, basis.enumeration, s, t, i, j)));
        }
      }
      worst = std::max(worst, measured - truncation_bound(capped, i, j));
      worst = std::max(worst, measured_star - truncation_bound_star(capped, i, j));
    }
  }
  return verify_detail::record("truncation-bound", worst, o.tol.truncation_slack, sw);
}

// ---------------------------------------------------------------------------

inline VerificationReport run_all(const OperatorEnvironment& env, const SplitSystem& split,
                                  const Assignment& a, const KernelModel& model,
                                  const WaveletBasis& basis, const VerifyOptions& o) {
  VerificationReport rep;
  rep.checks.push_back(check_wavelet_l2(basis, o));
  rep.checks.push_back(check_wavelet_orthonormality(basis, o));
  rep.checks.push_back(check_wavelet_bound_certificates(basis, &a, o));
  rep.checks.push_back(check_wavelet_derivative_consistency(basis, o));
  rep.checks.push_back(check_wavelet_vanishing(basis, o));
  rep.checks.push_back(check_wavelet_interpolation(basis, o));
  rep.checks.push_back(check_wavelet_quadrature_doubling(basis, o));
  rep.checks.push_back(check_svd_reconstruction(split, o));
  rep.checks.push_back(check_schwarz_chain(split, o));
  rep.checks.push_back(check_split_identity(env, split, o));
  rep.checks.push_back(check_adjoint_relation(env, split, o));
  rep.checks.push_back(check_q_representation(env, split, o));
  rep.checks.push_back(check_nuclearity(split, o));
  rep.checks.push_back(check_unitary_permutation(a, o));
  rep.checks.push_back(check_unitary_inner_products(a, o));
  rep.checks.push_back(check_assignment_indices(a, o));
  rep.checks.push_back(check_summability(a, env, split, basis.enumeration, o));
  rep.checks.push_back(check_transfer_norms(model, o));
  rep.checks.push_back(check_f_vector_norms(model, split, o));
  rep.checks.push_back(check_action_agreement(env, a, model, basis, o));
  rep.checks.push_back(check_action_pointwise(env, a, model, basis, o));
  rep.checks.push_back(check_decomposition(model, basis, o));
  rep.checks.push_back(check_conjugate_symmetry(model, basis, o));
  rep.checks.push_back(check_kernel_fd_agreement(model, basis, o));
  rep.checks.push_back(check_carleman_parseval(model, basis, o));
  rep.checks.push_back(check_condition_i(model, basis, o));
  for (int i = 0; i <= std::min(2, model.i_max); ++i) {
    rep.checks.push_back(check_condition_ii(model, basis, i, false, o));
    rep.checks.push_back(check_condition_ii(model, basis, i, true, o));
  }
  rep.checks.push_back(check_carleman_fd_convergence(model, basis, o));
  rep.checks.push_back(check_kernel_vanishing(model, basis, o));
  rep.checks.push_back(check_truncation(env, split, a, basis.enumeration, model, basis, o));
  return rep;
}

}  // namespace bicarleman
