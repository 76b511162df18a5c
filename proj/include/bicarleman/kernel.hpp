#pragma once

// Step 3 of the construction: coefficient tables for the four series P, P~,
// F, F~, pointwise evaluation of K = P + F~ and K* = P~ + F with all partial
// derivatives up to the configured order, the Carleman functions, and
// certified truncation bounds for capped series.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bicarleman/assignment.hpp"
#include "bicarleman/errors.hpp"
#include "bicarleman/linalg.hpp"
#include "bicarleman/splitting.hpp"
#include "bicarleman/wavelet.hpp"

namespace bicarleman {

struct KernelModel {
  int i_max = 3;
  std::size_t p_cap = 0;  // active number of P/P~ terms
  std::size_t f_cap = 0;  // active number of F/F~ terms
  std::vector<std::size_t> assigned_wavelets;  // coefficient order of all vectors below
  std::vector<double> assigned_D;              // D_n per coefficient slot
  std::vector<double> A;                       // A_i, 0..i_max+1

  // One term per complement index k: the h_{n(k)} factor on the s side and
  // the transfer vector ([T* h_{n(k)}] resp. [T h_{n(k)}]) on the t side.
  struct PTerm {
    std::size_t wavelet = 0;   // n(k)
    double D = 0.0;            // D_{n(k)}
    double z_bound = 0.0;      // z(e_k^p), dominates the transfer vector norm
    ComplexVector coeffs;      // transfer vector in assigned coefficient order
  };
  std::vector<PTerm> P_terms;       // T* h_{n(k)}
  std::vector<PTerm> Ptilde_terms;  // T  h_{n(k)}

  // Rank-one Schmidt terms; F carries (U B* q_n, U B p_n) with weight
  // s_n^{1/2}, F~ the tilde data.
  struct FTerm {
    double weight = 0.0;
    ComplexVector s_side, t_side;
  };
  std::vector<FTerm> F_terms, Ftilde_terms;

  std::vector<double> C, C_star;  // sup bounds of [T h]^{(i)}, [T* h]^{(i)}

  // Certified sup bound of the pointwise function of a coefficient vector.
  double coeff_sup_bound(const ComplexVector& coeffs, int i) const {
    double acc = 0.0;
    for (std::size_t p = 0; p < coeffs.size(); ++p)
      acc += std::abs(coeffs[p]) * assigned_D[p];
    return acc * A[static_cast<std::size_t>(i)];
  }

  std::size_t coefficient_position(std::size_t wavelet) const {
    auto it = std::lower_bound(assigned_wavelets.begin(), assigned_wavelets.end(), wavelet);
    if (it == assigned_wavelets.end() || *it != wavelet)
      throw range_error("kernel model: wavelet not in assigned set");
    return static_cast<std::size_t>(it - assigned_wavelets.begin());
  }
};

// Transfer vectors in assigned coefficient order:
//   [T* h_{n(k)}]_p = <e_k^p, S f_{src(p)}>,  [T h_{n(k)}]_p = <e_k^p, S* f_{src(p)}>,
// equivalently the rows of U S U^{-1} at the complement image positions.
struct TransferVectors {
  std::vector<ComplexVector> t_star_h;
  std::vector<ComplexVector> t_h;
};

inline TransferVectors compute_transfer_vectors(const Assignment& a,
                                                const OperatorEnvironment& env) {
  TransferVectors tv;
  const std::size_t dim = env.dim;
  for (std::size_t c : a.complement_indices) {
    ComplexVector tstar(dim), th(dim);
    for (std::size_t p = 0; p < dim; ++p) {
      std::size_t src = a.source_of[p];
      tstar[p] = std::conj(env.S(c, src));
      th[p] = env.S(src, c);
    }
    tv.t_star_h.push_back(std::move(tstar));
    tv.t_h.push_back(std::move(th));
  }
  return tv;
}

// Coefficient vectors of U B p_n, U B* q_n and the tilde versions, one per
// positive singular value.
struct FVectors {
  std::vector<double> weights;  // s_n^{1/2}
  std::vector<ComplexVector> u_b_p, u_b_star_q;
  std::vector<double> tilde_weights;
  std::vector<ComplexVector> u_bt_p, u_bt_star_q;
};

inline FVectors compute_F_vectors(const Assignment& a, const SplitSystem& split) {
  FVectors fv;
  ComplexMatrix Bstar = split.B.adjoint();
  ComplexMatrix Btstar = split.B_tilde.adjoint();
  for (std::size_t n = 0; n < split.schmidt_J.size(); ++n) {
    double s = split.schmidt_J.singular_values[n];
    if (s <= 0.0) continue;
    fv.weights.push_back(std::sqrt(s));
    fv.u_b_p.push_back(a.apply_U(split.B.apply(split.schmidt_J.right_vectors[n])));
    fv.u_b_star_q.push_back(a.apply_U(Bstar.apply(split.schmidt_J.left_vectors[n])));
  }
  for (std::size_t n = 0; n < split.schmidt_J_tilde.size(); ++n) {
    double s = split.schmidt_J_tilde.singular_values[n];
    if (s <= 0.0) continue;
    fv.tilde_weights.push_back(std::sqrt(s));
    fv.u_bt_p.push_back(a.apply_U(split.B_tilde.apply(split.schmidt_J_tilde.right_vectors[n])));
    fv.u_bt_star_q.push_back(
        a.apply_U(Btstar.apply(split.schmidt_J_tilde.left_vectors[n])));
  }
  return fv;
}

// cap == 0 means no cap.
inline KernelModel build_kernel_model(const OperatorEnvironment& env, const SplitSystem& split,
                                      const Assignment& a, const WaveletEnumeration& e,
                                      int i_max, std::size_t cap_terms = 0) {
  KernelModel m;
  m.i_max = i_max;
  m.assigned_wavelets = a.assigned_wavelets;
  m.assigned_D.reserve(m.assigned_wavelets.size());
  for (std::size_t w : m.assigned_wavelets) m.assigned_D.push_back(e.d_bound(w));
  m.A.assign(e.A.begin(), e.A.end());

  TransferVectors tv = compute_transfer_vectors(a, env);
  for (std::size_t k = 0; k < a.complement_indices.size(); ++k) {
    double z = z_functional(split, env, env.basis_vector(a.complement_indices[k]));
    KernelModel::PTerm ps{a.n_of_complement[k], e.d_bound(a.n_of_complement[k]), z,
                          std::move(tv.t_star_h[k])};
    KernelModel::PTerm pt{a.n_of_complement[k], e.d_bound(a.n_of_complement[k]), z,
                          std::move(tv.t_h[k])};
    m.P_terms.push_back(std::move(ps));
    m.Ptilde_terms.push_back(std::move(pt));
  }

  FVectors fv = compute_F_vectors(a, split);
  for (std::size_t n = 0; n < fv.weights.size(); ++n)
    m.F_terms.push_back({fv.weights[n], fv.u_b_star_q[n], fv.u_b_p[n]});
  for (std::size_t n = 0; n < fv.tilde_weights.size(); ++n)
    m.Ftilde_terms.push_back({fv.tilde_weights[n], fv.u_bt_star_q[n], fv.u_bt_p[n]});

  // Uniform sup bounds via the dominating series: both transfer families are
  // bounded by sum_k d(x_k) G_{k,i} + sum_k z(v_k) H_{m(k),i}
  //            + sum_k z(e_k^p) H_{n(k),i} with certified G, H.
  for (int i = 0; i <= i_max + 1; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.x_indices.size(); ++k)
      acc += d_functional(split, env.basis_vector(a.x_indices[k])) *
             e.sup_bound(a.g_wavelets[k], i);
    for (std::size_t k = 0; k < a.v_indices.size(); ++k)
      acc += z_functional(split, env, env.basis_vector(a.v_indices[k])) *
             e.sup_bound(a.m_of_v[k], i);
    for (std::size_t k = 0; k < a.complement_indices.size(); ++k)
      acc += z_functional(split, env, env.basis_vector(a.complement_indices[k])) *
             e.sup_bound(a.n_of_complement[k], i);
    m.C.push_back(acc);
    m.C_star.push_back(acc);
  }

  m.p_cap = cap_terms == 0 ? m.P_terms.size() : std::min(cap_terms, m.P_terms.size());
  m.f_cap = cap_terms == 0 ? std::max(m.F_terms.size(), m.Ftilde_terms.size())
                           : cap_terms;
  return m;
}

namespace detail {

inline void require_orders(const KernelModel& m, int i, int j) {
  if (i < 0 || j < 0 || i > m.i_max || j > m.i_max)
    throw config_error("kernel eval: derivative order (" + std::to_string(i) + "," +
                       std::to_string(j) + ") exceeds i_max " + std::to_string(m.i_max));
}

}  // namespace detail

// Pointwise value of the function carried by a coefficient vector.
inline Complex eval_coefficients(const KernelModel& m, const MotherWavelet& mother,
                                 const WaveletEnumeration& e, const ComplexVector& coeffs,
                                 double t, int j) {
  Complex acc{0.0, 0.0};
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    if (coeffs[p] == Complex{0.0, 0.0}) continue;
    acc += coeffs[p] * basis_eval(mother, e, m.assigned_wavelets[p], t, j);
  }
  return acc;
}

inline Complex eval_P_part(const KernelModel& m, const MotherWavelet& mother,
                           const WaveletEnumeration& e, const std::vector<KernelModel::PTerm>& terms,
                           double s, double t, int i, int j) {
  Complex acc{0.0, 0.0};
  std::size_t count = std::min(m.p_cap, terms.size());
  for (std::size_t k = 0; k < count; ++k) {
    Complex hs = basis_eval(mother, e, terms[k].wavelet, s, i);
    if (hs == Complex{0.0, 0.0}) continue;
    acc += hs * std::conj(eval_coefficients(m, mother, e, terms[k].coeffs, t, j));
  }
  return acc;
}

inline Complex eval_F_part(const KernelModel& m, const MotherWavelet& mother,
                           const WaveletEnumeration& e, const std::vector<KernelModel::FTerm>& terms,
                           double s, double t, int i, int j) {
  Complex acc{0.0, 0.0};
  std::size_t count = std::min(m.f_cap, terms.size());
  for (std::size_t n = 0; n < count; ++n) {
    acc += terms[n].weight * eval_coefficients(m, mother, e, terms[n].s_side, s, i) *
           std::conj(eval_coefficients(m, mother, e, terms[n].t_side, t, j));
  }
  return acc;
}

// K(s,t) = P(s,t) + F~(s,t), derivatives termwise.
inline Complex eval_K(const KernelModel& m, const MotherWavelet& mother,
                      const WaveletEnumeration& e, double s, double t, int i = 0, int j = 0) {
  detail::require_orders(m, i, j);
  return eval_P_part(m, mother, e, m.P_terms, s, t, i, j) +
         eval_F_part(m, mother, e, m.Ftilde_terms, s, t, i, j);
}

// K*(s,t) = P~(s,t) + F(s,t).
inline Complex eval_K_star(const KernelModel& m, const MotherWavelet& mother,
                           const WaveletEnumeration& e, double s, double t, int i = 0,
                           int j = 0) {
  detail::require_orders(m, i, j);
  return eval_P_part(m, mother, e, m.Ptilde_terms, s, t, i, j) +
         eval_F_part(m, mother, e, m.F_terms, s, t, i, j);
}

namespace detail {

inline ComplexVector carleman_accumulate(const KernelModel& m, const MotherWavelet& mother,
                                         const WaveletEnumeration& e,
                                         const std::vector<KernelModel::PTerm>& p_terms,
                                         const std::vector<KernelModel::FTerm>& f_terms,
                                         double s, int i) {
  ComplexVector acc(m.assigned_wavelets.size(), Complex{0.0, 0.0});
  std::size_t pc = std::min(m.p_cap, p_terms.size());
  for (std::size_t k = 0; k < pc; ++k) {
    Complex w = std::conj(basis_eval(mother, e, p_terms[k].wavelet, s, i));
    if (w == Complex{0.0, 0.0}) continue;
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += w * p_terms[k].coeffs[p];
  }
  std::size_t fc = std::min(m.f_cap, f_terms.size());
  for (std::size_t n = 0; n < fc; ++n) {
    Complex w = f_terms[n].weight *
                std::conj(eval_coefficients(m, mother, e, f_terms[n].s_side, s, i));
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += w * f_terms[n].t_side[p];
  }
  return acc;
}

}  // namespace detail

// Coefficient vector (assigned order) of the i-th strong derivative of the
// Carleman function k(s) = conj(K(s,.)); its L2 norm follows by Parseval.
inline ComplexVector carleman_function(const KernelModel& m, const MotherWavelet& mother,
                                       const WaveletEnumeration& e, double s, int i = 0) {
  detail::require_orders(m, i, 0);
  return detail::carleman_accumulate(m, mother, e, m.P_terms, m.Ftilde_terms, s, i);
}

// Same for k*(s) = conj(K*(s,.)).
inline ComplexVector carleman_function_star(const KernelModel& m, const MotherWavelet& mother,
                                            const WaveletEnumeration& e, double s, int i = 0) {
  detail::require_orders(m, i, 0);
  return detail::carleman_accumulate(m, mother, e, m.Ptilde_terms, m.F_terms, s, i);
}

// Certified sup bound on the mass omitted by the active caps, for the
// (i, j)-derivative of K: tail of sum_k H_{n(k),i} C*_j plus the tail of
// sum_n s~_n^{1/2} (certified vector-bound products).
inline double truncation_bound(const KernelModel& m, int i, int j) {
  detail::require_orders(m, i, j);
  double acc = 0.0;
  for (std::size_t k = std::min(m.p_cap, m.P_terms.size()); k < m.P_terms.size(); ++k)
    acc += m.P_terms[k].D * m.A[static_cast<std::size_t>(i)] * m.C_star[static_cast<std::size_t>(j)];
  for (std::size_t n = std::min(m.f_cap, m.Ftilde_terms.size()); n < m.Ftilde_terms.size(); ++n)
    acc += m.Ftilde_terms[n].weight * m.coeff_sup_bound(m.Ftilde_terms[n].s_side, i) *
           m.coeff_sup_bound(m.Ftilde_terms[n].t_side, j);
  return acc;
}

// Mirror bound for K*.
inline double truncation_bound_star(const KernelModel& m, int i, int j) {
  detail::require_orders(m, i, j);
  double acc = 0.0;
  for (std::size_t k = std::min(m.p_cap, m.Ptilde_terms.size()); k < m.Ptilde_terms.size(); ++k)
    acc += m.Ptilde_terms[k].D * m.A[static_cast<std::size_t>(i)] * m.C[static_cast<std::size_t>(j)];
  for (std::size_t n = std::min(m.f_cap, m.F_terms.size()); n < m.F_terms.size(); ++n)
    acc += m.F_terms[n].weight * m.coeff_sup_bound(m.F_terms[n].s_side, i) *
           m.coeff_sup_bound(m.F_terms[n].t_side, j);
  return acc;
}

// Tabulated kernel values over coordinate grids: every wavelet is evaluated
// once per coordinate, then all series terms reduce to table sums.  This is
// the evaluation path for grid export and quadrature checks.
class KernelGrid {
 public:
  KernelGrid(const KernelModel& m, const MotherWavelet& mother, const WaveletEnumeration& e,
             std::vector<double> s_coords, std::vector<double> t_coords, int i = 0, int j = 0)
      : m_(m), s_(std::move(s_coords)), t_(std::move(t_coords)) {
    detail::require_orders(m, i, j);
    const std::size_t P = m.assigned_wavelets.size();
    std::vector<std::vector<Complex>> ws(P), wt(P);
    for (std::size_t p = 0; p < P; ++p) {
      ws[p].resize(s_.size());
      for (std::size_t x = 0; x < s_.size(); ++x)
        ws[p][x] = basis_eval(mother, e, m.assigned_wavelets[p], s_[x], i);
      wt[p].resize(t_.size());
      for (std::size_t x = 0; x < t_.size(); ++x)
        wt[p][x] = basis_eval(mother, e, m.assigned_wavelets[p], t_[x], j);
    }
    auto coeff_rows = [&](const ComplexVector& coeffs, const std::vector<std::vector<Complex>>& w,
                          std::size_t count) {
      std::vector<Complex> row(count, Complex{0.0, 0.0});
      for (std::size_t p = 0; p < coeffs.size(); ++p) {
        if (coeffs[p] == Complex{0.0, 0.0}) continue;
        for (std::size_t x = 0; x < count; ++x) row[x] += coeffs[p] * w[p][x];
      }
      return row;
    };
    std::size_t pc = std::min(m.p_cap, m.P_terms.size());
    for (std::size_t k = 0; k < pc; ++k) {
      h_s_.push_back(ws[m.coefficient_position(m.P_terms[k].wavelet)]);
      tstar_t_.push_back(coeff_rows(m.P_terms[k].coeffs, wt, t_.size()));
      th_t_.push_back(coeff_rows(m.Ptilde_terms[k].coeffs, wt, t_.size()));
    }
    std::size_t fc_t = std::min(m.f_cap, m.Ftilde_terms.size());
    for (std::size_t n = 0; n < fc_t; ++n) {
      ft_s_.push_back(coeff_rows(m.Ftilde_terms[n].s_side, ws, s_.size()));
      ft_t_.push_back(coeff_rows(m.Ftilde_terms[n].t_side, wt, t_.size()));
    }
    std::size_t fc = std::min(m.f_cap, m.F_terms.size());
    for (std::size_t n = 0; n < fc; ++n) {
      f_s_.push_back(coeff_rows(m.F_terms[n].s_side, ws, s_.size()));
      f_t_.push_back(coeff_rows(m.F_terms[n].t_side, wt, t_.size()));
    }
  }

  const std::vector<double>& s_coords() const { return s_; }
  const std::vector<double>& t_coords() const { return t_; }

  Complex K(std::size_t a, std::size_t b) const {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < h_s_.size(); ++k)
      acc += h_s_[k][a] * std::conj(tstar_t_[k][b]);
    for (std::size_t n = 0; n < ft_s_.size(); ++n)
      acc += m_.Ftilde_terms[n].weight * ft_s_[n][a] * std::conj(ft_t_[n][b]);
    return acc;
  }

  Complex K_star(std::size_t a, std::size_t b) const {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < h_s_.size(); ++k)
      acc += h_s_[k][a] * std::conj(th_t_[k][b]);
    for (std::size_t n = 0; n < f_s_.size(); ++n)
      acc += m_.F_terms[n].weight * f_s_[n][a] * std::conj(f_t_[n][b]);
    return acc;
  }

  // sum_a sum_b ws[a] wt[b] |K(a,b)|^2 through the factored term grams;
  // with quadrature weights this is the squared L2 mass of the kernel.
  double integral_abs2(const std::vector<double>& ws, const std::vector<double>& wt,
                       bool star = false) const {
    if (ws.size() != s_.size() || wt.size() != t_.size())
      throw dimension_error("integral_abs2: weight lengths do not match the grids");
    struct Term {
      Complex c;
      const std::vector<Complex>* s;
      const std::vector<Complex>* t;
    };
    std::vector<Term> terms;
    for (std::size_t k = 0; k < h_s_.size(); ++k)
      terms.push_back({Complex{1.0, 0.0}, &h_s_[k], star ? &th_t_[k] : &tstar_t_[k]});
    if (star) {
      for (std::size_t n = 0; n < f_s_.size(); ++n)
        terms.push_back({Complex{m_.F_terms[n].weight, 0.0}, &f_s_[n], &f_t_[n]});
    } else {
      for (std::size_t n = 0; n < ft_s_.size(); ++n)
        terms.push_back({Complex{m_.Ftilde_terms[n].weight, 0.0}, &ft_s_[n], &ft_t_[n]});
    }
    Complex acc{0.0, 0.0};
    for (const Term& t1 : terms) {
      for (const Term& t2 : terms) {
        Complex gs{0.0, 0.0}, gt{0.0, 0.0};
        for (std::size_t x = 0; x < ws.size(); ++x)
          gs += ws[x] * (*t1.s)[x] * std::conj((*t2.s)[x]);
        for (std::size_t x = 0; x < wt.size(); ++x)
          gt += wt[x] * std::conj((*t1.t)[x]) * (*t2.t)[x];
        acc += t1.c * std::conj(t2.c) * gs * gt;
      }
    }
    return acc.real();
  }

  // sum_a sum_b ws[a] K(a,b) wt[b] without forming the dense kernel table;
  // the series is a finite sum of products, so the double sum factors.
  Complex bilinear_K(const std::vector<Complex>& ws, const std::vector<Complex>& wt) const {
    if (ws.size() != s_.size() || wt.size() != t_.size())
      throw dimension_error("bilinear_K: weight lengths do not match the grids");
    auto dot = [](const std::vector<Complex>& w, const std::vector<Complex>& row) {
      Complex acc{0.0, 0.0};
      for (std::size_t x = 0; x < w.size(); ++x) acc += w[x] * row[x];
      return acc;
    };
    auto dot_conj = [](const std::vector<Complex>& w, const std::vector<Complex>& row) {
      Complex acc{0.0, 0.0};
      for (std::size_t x = 0; x < w.size(); ++x) acc += w[x] * std::conj(row[x]);
      return acc;
    };
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < h_s_.size(); ++k)
      acc += dot(ws, h_s_[k]) * dot_conj(wt, tstar_t_[k]);
    for (std::size_t n = 0; n < ft_s_.size(); ++n)
      acc += m_.Ftilde_terms[n].weight * dot(ws, ft_s_[n]) * dot_conj(wt, ft_t_[n]);
    return acc;
  }

 private:
  const KernelModel& m_;
  std::vector<double> s_, t_;
  std::vector<std::vector<Complex>> h_s_, tstar_t_, th_t_;
  std::vector<std::vector<Complex>> ft_s_, ft_t_, f_s_, f_t_;
};

}  // namespace bicarleman
