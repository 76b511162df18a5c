#pragma once

// Configuration, operator-document I/O, stage orchestration, grid export and
// sample problem builders.  The operator document and the grid CSV formats
// are part of the tool's external contract and are kept byte-stable.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bicarleman/assignment.hpp"
#include "bicarleman/errors.hpp"
#include "bicarleman/kernel.hpp"
#include "bicarleman/random.hpp"
#include "bicarleman/splitting.hpp"
#include "bicarleman/verify.hpp"
#include "bicarleman/wavelet.hpp"

namespace bicarleman {

struct GridConfig {
  double extent = 60.0;
  std::size_t resolution = 64;
  int deriv_order = 0;  // export all (i, j) with i, j <= deriv_order
};

enum class FaultInjection {
  none,
  swap_u_rows,
  corrupt_transfer,
  corrupt_f_vector,
  corrupt_split,
};

struct PipelineConfig {
  int i_max = 3;
  int quad_nodes = 512;
  std::uint64_t seed = 20240817;
  std::size_t cap_terms = 0;  // 0 = full series
  double c00_tol = 1e-6;
  GridConfig grid;
  HPlacementPolicy placement;
  Tolerances tol;
  FaultInjection fault = FaultInjection::none;

  VerifyOptions verify_options() const {
    VerifyOptions o;
    o.seed = seed;
    o.i_max = i_max;
    o.extent = grid.extent;
    o.tol = tol;
    return o;
  }
};

// ---------------------------------------------------------------------------
// JSON parsing
// ---------------------------------------------------------------------------

namespace io_detail {

using nlohmann::json;

inline json parse_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(what + ": " + e.what());
  }
}

inline void check_keys(const json& j, const std::vector<std::string>& allowed,
                       const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw parse_error(where + ": unknown field '" + it.key() + "'");
  }
}

inline FaultInjection parse_fault(const std::string& s) {
  if (s == "none") return FaultInjection::none;
  if (s == "swap-u-rows") return FaultInjection::swap_u_rows;
  if (s == "corrupt-transfer") return FaultInjection::corrupt_transfer;
  if (s == "corrupt-f-vector") return FaultInjection::corrupt_f_vector;
  if (s == "corrupt-split") return FaultInjection::corrupt_split;
  throw parse_error("config: unknown fault '" + s + "'");
}

}  // namespace io_detail

inline OperatorEnvironment parse_operator(const std::string& text) {
  using nlohmann::json;
  json j = io_detail::parse_document(text, "operator file");
  io_detail::check_keys(j, {"dim", "matrix", "null_indices", "complement_indices"},
                        "operator file");
  OperatorEnvironment env;
  if (!j.contains("dim") || !j["dim"].is_number_unsigned())
    throw parse_error("operator file: field 'dim' must be a non-negative integer");
  env.dim = j["dim"].get<std::size_t>();
  if (!j.contains("matrix") || !j["matrix"].is_array())
    throw parse_error("operator file: field 'matrix' must be an array of rows");
  const json& rows = j["matrix"];
  std::size_t n = rows.size();
  if (n > env.dim)
    throw parse_error("operator file: matrix has more rows than 'dim'");
  env.S = ComplexMatrix(env.dim, env.dim);  // zero padding beyond the stored block
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != n)
      throw parse_error("operator file: matrix row " + std::to_string(r) +
                        " must hold exactly " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const json& ent = row[c];
      if (!ent.is_array() || ent.size() != 2 || !ent[0].is_number() || !ent[1].is_number())
        throw parse_error("operator file: matrix entry (" + std::to_string(r) + "," +
                          std::to_string(c) + ") must be a [re, im] pair");
      env.S(r, c) = Complex{ent[0].get<double>(), ent[1].get<double>()};
    }
  }
  auto read_indices = [&](const char* field, std::vector<std::size_t>& out) {
    if (!j.contains(field)) return;
    if (!j[field].is_array())
      throw parse_error(std::string("operator file: field '") + field + "' must be an array");
    for (const auto& ent : j[field]) {
      if (!ent.is_number_unsigned())
        throw parse_error(std::string("operator file: '") + field +
                          "' entries must be non-negative integers");
      out.push_back(ent.get<std::size_t>());
    }
  };
  read_indices("null_indices", env.null_indices);
  read_indices("complement_indices", env.complement_indices);
  // padded coordinates not listed anywhere join the complement
  std::vector<char> seen(env.dim, 0);
  for (std::size_t idx : env.null_indices)
    if (idx < env.dim) seen[idx] = 1;
  for (std::size_t idx : env.complement_indices)
    if (idx < env.dim) seen[idx] = 1;
  for (std::size_t idx = n; idx < env.dim; ++idx)
    if (!seen[idx]) env.complement_indices.push_back(idx);
  // the pipeline needs at least one complement coordinate; request a larger
  // `dim` to zero-pad when the stored block is all null
  if (env.complement_indices.empty())
    throw parse_error(
        "operator file: complement_indices must be non-empty (increase 'dim' to pad)");
  try {
    env.validate();
  } catch (const dimension_error& e) {
    throw parse_error(std::string("operator file: ") + e.what());
  }
  return env;
}

inline std::string serialize_operator(const OperatorEnvironment& env) {
  using nlohmann::json;
  json j;
  j["dim"] = env.dim;
  json rows = json::array();
  for (std::size_t r = 0; r < env.dim; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < env.dim; ++c)
      row.push_back({env.S(r, c).real(), env.S(r, c).imag()});
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  j["null_indices"] = env.null_indices;
  j["complement_indices"] = env.complement_indices;
  return j.dump(2) + "\n";
}

inline PipelineConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json j = io_detail::parse_document(text, "config file");
  io_detail::check_keys(j,
                        {"i_max", "quad_nodes", "seed", "cap_terms", "c00_tol", "grid",
                         "placement", "tolerances", "fault"},
                        "config file");
  PipelineConfig cfg;
  if (j.contains("i_max")) cfg.i_max = j["i_max"].get<int>();
  if (cfg.i_max < 0) throw parse_error("config: i_max must be >= 0");
  if (j.contains("quad_nodes")) cfg.quad_nodes = j["quad_nodes"].get<int>();
  if (cfg.quad_nodes < 16) throw parse_error("config: quad_nodes must be >= 16");
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("cap_terms")) cfg.cap_terms = j["cap_terms"].get<std::size_t>();
  if (j.contains("c00_tol")) cfg.c00_tol = j["c00_tol"].get<double>();
  if (j.contains("grid")) {
    const json& g = j["grid"];
    io_detail::check_keys(g, {"extent", "resolution", "deriv_order"}, "config.grid");
    if (g.contains("extent")) cfg.grid.extent = g["extent"].get<double>();
    if (g.contains("resolution")) cfg.grid.resolution = g["resolution"].get<std::size_t>();
    if (g.contains("deriv_order")) cfg.grid.deriv_order = g["deriv_order"].get<int>();
    if (!(cfg.grid.extent > 0.0)) throw parse_error("config: grid.extent must be positive");
    if (cfg.grid.resolution < 2) throw parse_error("config: grid.resolution must be >= 2");
    if (cfg.grid.deriv_order < 0) throw parse_error("config: grid.deriv_order must be >= 0");
  }
  if (j.contains("placement")) {
    const json& p = j["placement"];
    io_detail::check_keys(p, {"window", "margin"}, "config.placement");
    if (p.contains("window")) cfg.placement.window = p["window"].get<double>();
    if (p.contains("margin")) cfg.placement.margin = p["margin"].get<double>();
  }
  if (j.contains("fault")) cfg.fault = io_detail::parse_fault(j["fault"].get<std::string>());
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    std::vector<std::pair<std::string, double*>> keys = {
        {"l2_norm", &cfg.tol.l2_norm},
        {"gram", &cfg.tol.gram},
        {"bound_certificate", &cfg.tol.bound_certificate},
        {"wavelet_fd_rel", &cfg.tol.wavelet_fd_rel},
        {"wavelet_vanish", &cfg.tol.wavelet_vanish},
        {"interp_budget", &cfg.tol.interp_budget},
        {"quad_doubling", &cfg.tol.quad_doubling},
        {"svd_recon", &cfg.tol.svd_recon},
        {"schwarz_slack", &cfg.tol.schwarz_slack},
        {"split_recon", &cfg.tol.split_recon},
        {"adjoint_relation", &cfg.tol.adjoint_relation},
        {"q_repr", &cfg.tol.q_repr},
        {"unitary_inner", &cfg.tol.unitary_inner},
        {"summability_slack", &cfg.tol.summability_slack},
        {"transfer_norm_slack", &cfg.tol.transfer_norm_slack},
        {"f_vector_slack", &cfg.tol.f_vector_slack},
        {"action_agreement", &cfg.tol.action_agreement},
        {"decomposition", &cfg.tol.decomposition},
        {"conj_symmetry", &cfg.tol.conj_symmetry},
        {"kernel_fd_rel", &cfg.tol.kernel_fd_rel},
        {"carleman_parseval", &cfg.tol.carleman_parseval},
        {"modulus_ratio", &cfg.tol.modulus_ratio},
        {"fd_convergence_ratio", &cfg.tol.fd_convergence_ratio},
        {"frame_ratio", &cfg.tol.frame_ratio},
        {"truncation_slack", &cfg.tol.truncation_slack},
    };
    std::vector<std::string> allowed;
    for (const auto& [k, v] : keys) allowed.push_back(k);
    io_detail::check_keys(t, allowed, "config.tolerances");
    for (const auto& [k, v] : keys) {
      if (!t.contains(k)) continue;
      *v = t[k].get<double>();
      if (!(*v > 0.0)) throw parse_error("config: tolerance '" + k + "' must be positive");
    }
  }
  return cfg;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << text;
}

inline OperatorEnvironment load_operator(const std::string& path) {
  return parse_operator(read_file(path));
}

inline PipelineConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

// ---------------------------------------------------------------------------
// Pipeline stages
// ---------------------------------------------------------------------------

struct PipelineResult {
  PipelineConfig config;
  OperatorEnvironment raw;
  C00Report c00;
  OperatorEnvironment env;  // normalized
  SplitSystem split;
  std::shared_ptr<const WaveletBasis> basis;
  Assignment assignment;
  KernelModel model;
};

inline void inject_fault(PipelineResult& pr, FaultInjection fault) {
  switch (fault) {
    case FaultInjection::none:
      return;
    case FaultInjection::swap_u_rows: {
      if (pr.assignment.dim() < 2) return;
      for (std::size_t c = 0; c < pr.assignment.dim(); ++c)
        std::swap(pr.assignment.U(0, c), pr.assignment.U(1, c));
      return;
    }
    case FaultInjection::corrupt_transfer: {
      if (pr.model.P_terms.empty() || pr.model.P_terms[0].coeffs.empty()) return;
      pr.model.P_terms[0].coeffs[0] += Complex{pr.model.P_terms[0].z_bound + 1.0, 0.0};
      return;
    }
    case FaultInjection::corrupt_f_vector: {
      if (pr.model.Ftilde_terms.empty() || pr.model.Ftilde_terms[0].s_side.empty()) return;
      pr.model.Ftilde_terms[0].s_side[0] += Complex{0.5, 0.25};
      return;
    }
    case FaultInjection::corrupt_split: {
      if (pr.split.J.rows() == 0) return;
      pr.split.J(0, 0) += Complex{0.5, 0.0};
      return;
    }
  }
}

// A shared basis is reused when it covers the required enumeration range,
// derivative order and quadrature resolution; otherwise a fresh one is built.
inline PipelineResult run_pipeline(const OperatorEnvironment& raw, const PipelineConfig& cfg,
                                   std::shared_ptr<const WaveletBasis> basis = nullptr) {
  C00Report c00 = check_c00(raw, cfg.c00_tol);
  OperatorEnvironment env = normalize_null_sequence(raw);
  SplitSystem split = build_split(env);
  std::size_t pool = env.null_indices.size() + env.complement_indices.size();
  std::size_t count = std::max<std::size_t>(required_enumeration_count(pool, cfg.placement), 64);
  if (!basis || basis->enumeration.size() < count || basis->mother.i_max() < cfg.i_max ||
      basis->mother.base_nodes() != cfg.quad_nodes)
    basis = std::make_shared<const WaveletBasis>(count, cfg.i_max, cfg.quad_nodes);
  Assignment a = assign(env, split, basis->enumeration, cfg.i_max, cfg.placement);
  KernelModel model = build_kernel_model(env, split, a, basis->enumeration, cfg.i_max,
                                         cfg.cap_terms);
  PipelineResult pr{cfg,
                    raw,
                    std::move(c00),
                    std::move(env),
                    std::move(split),
                    std::move(basis),
                    std::move(a),
                    std::move(model)};
  inject_fault(pr, cfg.fault);
  return pr;
}

inline VerificationReport verify_pipeline(const PipelineResult& pr) {
  return run_all(pr.env, pr.split, pr.assignment, pr.model, *pr.basis,
                 pr.config.verify_options());
}

// ---------------------------------------------------------------------------
// Grid export
// ---------------------------------------------------------------------------

// CSV of kernel values: header s,t,deriv_s,deriv_t,re,im; rows ordered
// lexicographically by (s, t), then (deriv_s, deriv_t); 17 significant
// digits, byte-stable across reruns.
inline std::string export_grid_csv(const KernelModel& m, const WaveletBasis& basis,
                                   const GridConfig& grid) {
  if (grid.deriv_order > m.i_max)
    throw config_error("grid export: deriv_order exceeds the model's i_max");
  std::vector<double> coords(grid.resolution);
  for (std::size_t g = 0; g < grid.resolution; ++g)
    coords[g] = -grid.extent + 2.0 * grid.extent * static_cast<double>(g) /
                                   static_cast<double>(grid.resolution - 1);
  const int d = grid.deriv_order;
  std::vector<KernelGrid> grids;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j)
      grids.emplace_back(m, basis.mother, basis.enumeration, coords, coords, i, j);
  std::string out = "s,t,deriv_s,deriv_t,re,im\n";
  char buf[160];
  for (std::size_t a = 0; a < coords.size(); ++a) {
    for (std::size_t b = 0; b < coords.size(); ++b) {
      for (int i = 0; i <= d; ++i) {
        for (int j = 0; j <= d; ++j) {
          Complex v = grids[static_cast<std::size_t>(i * (d + 1) + j)].K(a, b);
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%d,%.17g,%.17g\n", coords[a],
                        coords[b], i, j, v.real(), v.imag());
          out += buf;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sample problems
// ---------------------------------------------------------------------------

namespace fixtures {

// S = 0 on a small space; everything in the pipeline degenerates cleanly.
inline OperatorEnvironment zero_operator(std::size_t dim = 6, std::size_t nulls = 4) {
  OperatorEnvironment env;
  env.dim = dim;
  env.S = ComplexMatrix(dim, dim);
  for (std::size_t k = dim - nulls; k < dim; ++k) env.null_indices.push_back(k);
  for (std::size_t k = 0; k < dim - nulls; ++k) env.complement_indices.push_back(k);
  return env;
}

// ||S e_k|| = ||S* e_k|| = 4^{-k} for k = 1..count on a diagonal operator;
// index 0 is the complement.  Normalization keeps exactly the tail k >= 6.
inline OperatorEnvironment geometric_operator(std::size_t count = 12) {
  OperatorEnvironment env;
  env.dim = count + 1;
  env.S = ComplexMatrix(env.dim, env.dim);
  env.complement_indices.push_back(0);
  for (std::size_t k = 1; k <= count; ++k) {
    env.S(k, k) = Complex{std::pow(4.0, -static_cast<double>(k)), 0.0};
    env.null_indices.push_back(k);
  }
  return env;
}

// Random operator of rank <= `rank` whose range/corange mostly live on the
// complement block, with weak geometrically-decaying coupling into the null
// block so that J and J~ are nonzero yet the normalization keeps every null
// index.  The first null coordinate is coupled weakly enough to pass the
// slot-1 x-admission threshold, so the assignment produces a non-empty
// {x_k} and the kernel carries mass on the near wavelets too.  This is the
// generic acceptance fixture.
inline OperatorEnvironment random_operator(Rng& rng, std::size_t dim, std::size_t rank,
                                           std::size_t nulls) {
  if (nulls + 1 > dim) throw config_error("random_operator: need at least one complement index");
  OperatorEnvironment env;
  env.dim = dim;
  env.S = ComplexMatrix(dim, dim);
  std::size_t comp = dim - nulls;
  for (std::size_t k = 0; k < comp; ++k) env.complement_indices.push_back(k);
  for (std::size_t k = comp; k < dim; ++k) env.null_indices.push_back(k);
  // coupling weights: 2 * delta_k^{1/4} summed over nulls stays below 1
  std::vector<double> delta(nulls);
  for (std::size_t k = 0; k < nulls; ++k)
    delta[k] = 1e-2 * std::pow(1e-2, static_cast<double>(k)) * rng.uniform(0.5, 1.0);
  delta[0] = 1e-11 * rng.uniform(0.5, 1.0);
  for (std::size_t r = 0; r < rank; ++r) {
    ComplexVector a(dim, Complex{0.0, 0.0}), b(dim, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < comp; ++k) {
      a[k] = rng.complex_uniform();
      b[k] = rng.complex_uniform();
    }
    double an = norm(a), bn = norm(b);
    for (std::size_t k = 0; k < comp; ++k) {
      a[k] /= an;
      b[k] /= bn;
    }
    for (std::size_t k = 0; k < nulls; ++k) {
      a[comp + k] = delta[k] * rng.complex_uniform();
      b[comp + k] = delta[k] * rng.complex_uniform();
    }
    double sigma = rng.uniform(0.4, 1.2);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) env.S(i, j) += sigma * a[i] * std::conj(b[j]);
  }
  return env;
}

}  // namespace fixtures

}  // namespace bicarleman
