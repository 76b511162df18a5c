#pragma once

// Step 2 of the construction: split the null sequence {e_k} into {x_k} and
// {v_k}, pick the wavelet subsequences {n(k)}, {m(k)} and the g candidates,
// certify the summability conditions at every configured derivative order,
// and realize the unitary U as an explicit basis permutation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bicarleman/errors.hpp"
#include "bicarleman/linalg.hpp"
#include "bicarleman/splitting.hpp"
#include "bicarleman/wavelet.hpp"

namespace bicarleman {

// g candidates: enumeration order with the h pool removed.  The pool is the
// maximal h subsequence the environment could need (one slot per null and
// complement index), so candidate slots are stable under the later x/v split.
inline std::vector<std::size_t> g_candidates(const OperatorEnvironment& env,
                                             const WaveletEnumeration& e,
                                             const HPlacementPolicy& policy,
                                             std::size_t needed) {
  std::size_t pool = env.null_indices.size() + env.complement_indices.size();
  std::set<std::size_t> h_all;
  for (std::size_t idx : choose_h_subsequence(e, pool, policy)) h_all.insert(idx);
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < e.size() && out.size() < needed; ++n)
    if (!h_all.count(n)) out.push_back(n);
  if (out.size() < needed)
    throw range_error("g_candidates: enumeration exhausted after " +
                      std::to_string(out.size()) + " of " + std::to_string(needed) +
                      " slots; enlarge the enumeration");
  return out;
}

// Greedy diagonal split: the slot-r candidate joins {x_k} when
//   d(e) <= 2^{-r} / (1 + max_{i <= min(r, i_max)} G_{r,i}),
// with G the certified sup bound D * A_i of the slot's g candidate.  Each
// admitted term of sum_k d(x_k)(G_{k,i}+1) is then <= 2^{-k} for k >= i.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_x_v(
    const OperatorEnvironment& env, const SplitSystem& split, const WaveletEnumeration& e,
    int i_max, const HPlacementPolicy& policy = {}) {
  std::vector<std::size_t> gc = g_candidates(env, e, policy, env.null_indices.size());
  std::vector<std::size_t> xs, vs;
  for (std::size_t idx : env.null_indices) {
    std::size_t slot = xs.size() + 1;
    double d = d_functional(split, env.basis_vector(idx));
    double gmax = 0.0;
    int top = std::min<int>(static_cast<int>(slot), i_max);
    for (int i = 0; i <= top; ++i) gmax = std::max(gmax, e.sup_bound(gc[slot - 1], i));
    double threshold = std::exp2(-static_cast<double>(slot)) / (1.0 + gmax);
    if (d <= threshold)
      xs.push_back(idx);
    else
      vs.push_back(idx);
  }
  return {xs, vs};
}

// The index bookkeeping of U: which wavelet each basis vector maps to, and
// the permutation matrix over the assigned coefficient slots.
struct Assignment {
  std::vector<std::size_t> x_indices, v_indices;  // ambient labels, null split
  std::vector<std::size_t> complement_indices;    // copied from the environment
  std::vector<std::size_t> g_wavelets;            // per x slot
  std::vector<std::size_t> h_wavelets;            // used h subsequence, selection order
  std::vector<std::size_t> m_of_v;                // per v slot: h_{m(k)}
  std::vector<std::size_t> n_of_complement;       // per complement slot: h_{n(k)}
  std::vector<std::size_t> assigned_wavelets;     // sorted; image coefficient order
  std::vector<std::size_t> source_of;             // image position -> ambient index
  std::vector<std::size_t> wavelet_of_source;     // ambient index -> wavelet
  ComplexMatrix U;                                // image position x ambient source

  std::size_t dim() const { return source_of.size(); }

  std::size_t image_position(std::size_t wavelet) const {
    auto it = std::lower_bound(assigned_wavelets.begin(), assigned_wavelets.end(), wavelet);
    if (it == assigned_wavelets.end() || *it != wavelet)
      throw range_error("assignment: wavelet " + std::to_string(wavelet) + " not assigned");
    return static_cast<std::size_t>(it - assigned_wavelets.begin());
  }

  // y = U_inf^{-1} h: the ambient basis label a wavelet pulls back to.
  std::size_t preimage_of_wavelet(std::size_t wavelet) const {
    return source_of[image_position(wavelet)];
  }

  ComplexVector apply_U(const ComplexVector& f) const {
    if (f.size() != dim()) throw dimension_error("apply_U: dimension mismatch");
    ComplexVector g(dim());
    for (std::size_t p = 0; p < dim(); ++p) g[p] = f[source_of[p]];
    return g;
  }

  ComplexVector apply_U_inverse(const ComplexVector& g) const {
    if (g.size() != dim()) throw dimension_error("apply_U_inverse: dimension mismatch");
    ComplexVector f(dim());
    for (std::size_t p = 0; p < dim(); ++p) f[source_of[p]] = g[p];
    return f;
  }
};

// Build the full assignment: x/v split, h slots (the complement takes the
// deepest-j tail, where the D decay is fastest, since z(e_k^p) need not
// decay; v takes the head), g slots in enumeration order, and the
// permutation U sending x_k -> g_k, v_k -> h_{m(k)}, e_k^p -> h_{n(k)}.
inline Assignment assign(const OperatorEnvironment& env, const SplitSystem& split,
                         const WaveletEnumeration& e, int i_max,
                         const HPlacementPolicy& policy = {}) {
  env.validate();
  Assignment a;
  a.complement_indices = env.complement_indices;
  std::tie(a.x_indices, a.v_indices) = split_x_v(env, split, e, i_max, policy);

  std::size_t h_needed = a.v_indices.size() + env.complement_indices.size();
  if (h_needed > 0) a.h_wavelets = choose_h_subsequence(e, h_needed, policy);
  a.m_of_v.assign(a.h_wavelets.begin(),
                  a.h_wavelets.begin() + static_cast<std::ptrdiff_t>(a.v_indices.size()));
  a.n_of_complement.assign(
      a.h_wavelets.begin() + static_cast<std::ptrdiff_t>(a.v_indices.size()),
      a.h_wavelets.end());
  a.g_wavelets = g_candidates(env, e, policy, a.x_indices.size());

  a.wavelet_of_source.assign(env.dim, 0);
  for (std::size_t k = 0; k < a.x_indices.size(); ++k)
    a.wavelet_of_source[a.x_indices[k]] = a.g_wavelets[k];
  for (std::size_t k = 0; k < a.v_indices.size(); ++k)
    a.wavelet_of_source[a.v_indices[k]] = a.m_of_v[k];
  for (std::size_t k = 0; k < env.complement_indices.size(); ++k)
    a.wavelet_of_source[env.complement_indices[k]] = a.n_of_complement[k];

  a.assigned_wavelets = a.wavelet_of_source;
  std::sort(a.assigned_wavelets.begin(), a.assigned_wavelets.end());
  a.source_of.assign(env.dim, 0);
  a.U = ComplexMatrix(env.dim, env.dim);
  for (std::size_t src = 0; src < env.dim; ++src) {
    std::size_t p = a.image_position(a.wavelet_of_source[src]);
    a.source_of[p] = src;
    a.U(p, src) = Complex{1.0, 0.0};
  }
  return a;
}

// Certified partial sums of the four summability families at each order
// i <= i_max, with geometric upper bounds.  H and G values come from the
// certified tables D_n * A_i, so each reported sum is a rigorous bound on
// the corresponding sup-norm series.
struct SummabilityReport {
  int i_max = 0;
  std::vector<double> h_sum, h_bound;        // sum_k H_{k,i}
  std::vector<double> v_sum, v_bound;        // sum_k z(v_k) H_{m(k),i}
  std::vector<double> perp_sum, perp_bound;  // sum_k z(e_k^p) H_{n(k),i}
  std::vector<double> x_sum, x_bound;        // sum_k d(x_k) (G_{k,i}+1)

  bool all_within(double slack = 1e-12) const {
    for (int i = 0; i <= i_max; ++i) {
      std::size_t u = static_cast<std::size_t>(i);
      if (h_sum[u] > h_bound[u] + slack || v_sum[u] > v_bound[u] + slack ||
          perp_sum[u] > perp_bound[u] + slack || x_sum[u] > x_bound[u] + slack)
        return false;
    }
    return true;
  }
};

inline SummabilityReport summability_report(const Assignment& a, const OperatorEnvironment& env,
                                            const SplitSystem& split,
                                            const WaveletEnumeration& e, int i_max) {
  SummabilityReport rep;
  rep.i_max = i_max;
  const double geometric = 1.0 / (std::sqrt(2.0) - 1.0);  // sum_{k>=1} (1/sqrt2)^k

  std::vector<double> z_v, z_perp, d_x;
  for (std::size_t idx : a.v_indices)
    z_v.push_back(z_functional(split, env, env.basis_vector(idx)));
  for (std::size_t idx : a.complement_indices)
    z_perp.push_back(z_functional(split, env, env.basis_vector(idx)));
  for (std::size_t idx : a.x_indices)
    d_x.push_back(d_functional(split, env.basis_vector(idx)));
  double z_v_max = z_v.empty() ? 0.0 : *std::max_element(z_v.begin(), z_v.end());
  double z_perp_max = z_perp.empty() ? 0.0 : *std::max_element(z_perp.begin(), z_perp.end());

  for (int i = 0; i <= i_max; ++i) {
    double a_i = e.a_bound(i);
    double hs = 0.0;
    for (std::size_t w : a.h_wavelets) hs += e.sup_bound(w, i);
    rep.h_sum.push_back(hs);
    rep.h_bound.push_back(a_i * geometric);

    double vs = 0.0;
    for (std::size_t k = 0; k < a.v_indices.size(); ++k)
      vs += z_v[k] * e.sup_bound(a.m_of_v[k], i);
    rep.v_sum.push_back(vs);
    rep.v_bound.push_back(z_v_max * a_i * geometric);

    double ps = 0.0;
    for (std::size_t k = 0; k < a.complement_indices.size(); ++k)
      ps += z_perp[k] * e.sup_bound(a.n_of_complement[k], i);
    rep.perp_sum.push_back(ps);
    rep.perp_bound.push_back(z_perp_max * a_i * geometric);

    double xs = 0.0;
    for (std::size_t k = 0; k < a.x_indices.size(); ++k)
      xs += d_x[k] * (e.sup_bound(a.g_wavelets[k], i) + 1.0);
    rep.x_sum.push_back(xs);
    // slots k >= i are admitted under the 2^{-k} threshold; earlier slots
    // enter by their measured terms
    double xb = 0.0;
    for (std::size_t k = 1; k < static_cast<std::size_t>(std::max(i, 1)) && k <= a.x_indices.size();
         ++k)
      xb += d_x[k - 1] * (e.sup_bound(a.g_wavelets[k - 1], i) + 1.0);
    xb += std::exp2(1.0 - static_cast<double>(std::max(i, 1)));
    rep.x_bound.push_back(xb);
  }
  return rep;
}

}  // namespace bicarleman
