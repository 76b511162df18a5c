#pragma once

// Step 1 of the construction: verify the null-sequence data of the input
// operator, normalize it so sum_k (||S e_k||^(1/4) + ||S* e_k||^(1/4)) <= 1,
// split S along the projection E onto the null subspace, and take Schmidt
// decompositions of the nuclear parts J = SE and J~ = S*E.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bicarleman/errors.hpp"
#include "bicarleman/linalg.hpp"

namespace bicarleman {

// The input operator S as a matrix over a labeled orthonormal basis, with
// the coordinates split into the null sequence {e_k} and complement {e_k^p}.
struct OperatorEnvironment {
  std::size_t dim = 0;
  ComplexMatrix S;
  std::vector<std::size_t> null_indices;
  std::vector<std::size_t> complement_indices;

  void validate() const {
    if (S.rows() != dim || S.cols() != dim)
      throw dimension_error("environment: matrix shape does not match dim");
    if (!S.finite()) throw dimension_error("environment: non-finite matrix entries");
    if (null_indices.empty())
      throw dimension_error("environment: null_indices must be non-empty");
    std::vector<char> seen(dim, 0);
    auto mark = [&](std::size_t idx, const char* what) {
      if (idx >= dim)
        throw dimension_error(std::string("environment: ") + what + " index " +
                              std::to_string(idx) + " out of range");
      if (seen[idx]) throw dimension_error("environment: index " + std::to_string(idx) +
                                           " listed twice");
      seen[idx] = 1;
    };
    for (std::size_t idx : null_indices) mark(idx, "null");
    for (std::size_t idx : complement_indices) mark(idx, "complement");
    for (std::size_t i = 0; i < dim; ++i)
      if (!seen[i])
        throw dimension_error("environment: index " + std::to_string(i) +
                              " belongs to neither part");
  }

  ComplexVector basis_vector(std::size_t idx) const {
    ComplexVector e(dim, Complex{0.0, 0.0});
    e[idx] = Complex{1.0, 0.0};
    return e;
  }
};

struct C00Report {
  std::vector<double> s_norms;       // ||S e_k|| over null_indices, in order
  std::vector<double> s_star_norms;  // ||S* e_k||
  double tol = 0.0;
  bool member = false;
};

// Reports the null-sequence norms and whether both fall below tol by the
// final index.
inline C00Report check_c00(const OperatorEnvironment& env, double tol) {
  env.validate();
  C00Report rep;
  rep.tol = tol;
  ComplexMatrix Sstar = env.S.adjoint();
  for (std::size_t idx : env.null_indices) {
    ComplexVector e = env.basis_vector(idx);
    rep.s_norms.push_back(norm(env.S.apply(e)));
    rep.s_star_norms.push_back(norm(Sstar.apply(e)));
  }
  rep.member = rep.s_norms.back() <= tol && rep.s_star_norms.back() <= tol;
  return rep;
}

// Per-index contribution to the normalization sum.
inline double normalization_weight(const OperatorEnvironment& env, const ComplexMatrix& Sstar,
                                   std::size_t idx) {
  ComplexVector e = env.basis_vector(idx);
  return std::pow(norm(env.S.apply(e)), 0.25) + std::pow(norm(Sstar.apply(e)), 0.25);
}

// Keep the subsequence of null indices with the smallest contributions while
// the running sum stays <= 1 (ties broken toward earlier indices); on
// monotone decreasing data this keeps exactly the maximal admissible tail.
// Discarded null indices join the complement so the partition is preserved.
inline OperatorEnvironment normalize_null_sequence(const OperatorEnvironment& env) {
  env.validate();
  ComplexMatrix Sstar = env.S.adjoint();
  const std::size_t n = env.null_indices.size();
  std::vector<double> weight(n);
  for (std::size_t k = 0; k < n; ++k)
    weight[k] = normalization_weight(env, Sstar, env.null_indices[k]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weight[a] < weight[b]; });

  std::vector<char> keep(n, 0);
  double sum = 0.0;
  for (std::size_t pos : order) {
    if (sum + weight[pos] <= 1.0) {
      sum += weight[pos];
      keep[pos] = 1;
    } else {
      break;  // weights ascend, nothing later fits either
    }
  }
  OperatorEnvironment out;
  out.dim = env.dim;
  out.S = env.S;
  out.complement_indices = env.complement_indices;
  for (std::size_t k = 0; k < n; ++k) {
    if (keep[k])
      out.null_indices.push_back(env.null_indices[k]);
    else
      out.complement_indices.push_back(env.null_indices[k]);
  }
  if (out.null_indices.empty())
    throw infeasible_error(
        "normalize_null_sequence: no non-empty subsequence satisfies the unit bound; "
        "smallest contribution is " +
        std::to_string(weight[order[0]]));
  return out;
}

// E, the nuclear parts J = SE, J~ = S*E with their Schmidt systems, the
// quarter-power operators B, B~, and the complement parts Q, Q~.
struct SplitSystem {
  ComplexMatrix E;
  ComplexMatrix J, J_tilde;
  ComplexMatrix B, B_tilde;
  ComplexMatrix Q, Q_tilde;
  SchmidtSystem schmidt_J, schmidt_J_tilde;
};

inline SplitSystem build_split(const OperatorEnvironment& env) {
  env.validate();
  SplitSystem sp;
  std::set<std::size_t> nulls(env.null_indices.begin(), env.null_indices.end());
  sp.E = projector(nulls, env.dim);
  ComplexMatrix Sstar = env.S.adjoint();
  ComplexMatrix I_minus_E = ComplexMatrix::identity(env.dim) - sp.E;
  sp.J = env.S * sp.E;
  sp.J_tilde = Sstar * sp.E;
  sp.Q = I_minus_E * env.S;
  sp.Q_tilde = I_minus_E * Sstar;
  sp.schmidt_J = svd(sp.J);
  sp.schmidt_J_tilde = svd(sp.J_tilde);
  sp.B = fractional_power_operator(sp.schmidt_J, 0.25);
  sp.B_tilde = fractional_power_operator(sp.schmidt_J_tilde, 0.25);
  return sp;
}

// z(f) = ||S f|| + ||S* f||
inline double z_functional(const SplitSystem& split, const OperatorEnvironment& env,
                           const ComplexVector& f) {
  (void)split;
  if (f.size() != env.dim) throw dimension_error("z_functional: dimension mismatch");
  return norm(env.S.apply(f)) + norm(env.S.adjoint().apply(f));
}

// d(h) = ||J h||^(1/4) + ||J* h||^(1/4) + ||J~ h||^(1/4) + ||J~* h||^(1/4)
inline double d_functional(const SplitSystem& split, const ComplexVector& h) {
  if (h.size() != split.J.cols()) throw dimension_error("d_functional: dimension mismatch");
  return std::pow(norm(split.J.apply(h)), 0.25) +
         std::pow(norm(split.J.adjoint().apply(h)), 0.25) +
         std::pow(norm(split.J_tilde.apply(h)), 0.25) +
         std::pow(norm(split.J_tilde.adjoint().apply(h)), 0.25);
}

// sum_n s_n^(1/2); finite by construction at desk scale, reported for the
// dominating-series bounds.
inline double half_power_sum(const SchmidtSystem& sys) {
  double acc = 0.0;
  for (double s : sys.singular_values) acc += std::sqrt(s);
  return acc;
}

}  // namespace bicarleman
