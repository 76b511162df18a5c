// Command-line front end for the bi-Carleman kernel pipeline: ingest an
// operator document, drive the construction stage by stage, export kernel
// grids and verification reports.
//
// Exit codes: 0 success / all checks pass, 1 parse or usage error,
// 2 infeasible construction or numerical failure, 3 verification failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bicarleman/pipeline.hpp"

namespace {

using namespace bicarleman;

struct CommonArgs {
  std::string operator_path;
  std::string config_path;
  std::string out_path;
  std::optional<int> i_max;
  std::optional<std::size_t> grid_resolution;
  std::optional<double> extent;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap_terms;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--operator", args.operator_path, "operator document (JSON)")->required();
  cmd->add_option("--config", args.config_path, "pipeline configuration (JSON)");
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
  cmd->add_option("--imax", args.i_max, "derivative order the pipeline certifies");
  cmd->add_option("--grid", args.grid_resolution, "grid resolution per axis");
  cmd->add_option("--extent", args.extent, "grid half-width");
  cmd->add_option("--seed", args.seed, "seed for randomized checks");
  cmd->add_option("--cap-terms", args.cap_terms, "cap on series terms (0 = full)");
}

PipelineConfig make_config(const CommonArgs& args) {
  PipelineConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  if (args.i_max) cfg.i_max = *args.i_max;
  if (args.grid_resolution) cfg.grid.resolution = *args.grid_resolution;
  if (args.extent) cfg.grid.extent = *args.extent;
  if (args.seed) cfg.seed = *args.seed;
  if (args.cap_terms) cfg.cap_terms = *args.cap_terms;
  if (cfg.i_max < 0) throw parse_error("imax must be >= 0");
  if (cfg.grid.resolution < 2) throw parse_error("grid resolution must be >= 2");
  if (!(cfg.grid.extent > 0.0)) throw parse_error("extent must be positive");
  return cfg;
}

void emit(const CommonArgs& args, const std::string& text) {
  if (args.out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(args.out_path, text);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_inspect(const CommonArgs& args) {
  PipelineConfig cfg = make_config(args);
  OperatorEnvironment env = load_operator(args.operator_path);
  C00Report rep = check_c00(env, cfg.c00_tol);
  std::string out;
  for (std::size_t k = 0; k < env.null_indices.size(); ++k)
    out += "NULL index=" + std::to_string(env.null_indices[k]) +
           " norm_S=" + format_double(rep.s_norms[k]) +
           " norm_S_star=" + format_double(rep.s_star_norms[k]) + "\n";
  out += std::string("C00 ") + (rep.member ? "MEMBER" : "NOT-MEMBER") +
         " tol=" + format_double(rep.tol) + "\n";
  emit(args, out);
  return 0;
}

int cmd_split(const CommonArgs& args) {
  PipelineConfig cfg = make_config(args);
  OperatorEnvironment raw = load_operator(args.operator_path);
  OperatorEnvironment env = normalize_null_sequence(raw);
  SplitSystem sp = build_split(env);
  std::string out;
  out += "KEPT null_indices=";
  for (std::size_t idx : env.null_indices) out += std::to_string(idx) + " ";
  out += "\nDISCARDED count=" +
         std::to_string(raw.null_indices.size() - env.null_indices.size()) + "\n";
  out += "SINGULAR J:";
  for (double s : sp.schmidt_J.singular_values) out += " " + format_double(s);
  out += "\nSINGULAR J_tilde:";
  for (double s : sp.schmidt_J_tilde.singular_values) out += " " + format_double(s);
  out += "\nHALF-POWER-SUM J=" + format_double(half_power_sum(sp.schmidt_J)) +
         " J_tilde=" + format_double(half_power_sum(sp.schmidt_J_tilde)) + "\n";
  (void)cfg;
  emit(args, out);
  return 0;
}

int cmd_assign(const CommonArgs& args) {
  PipelineConfig cfg = make_config(args);
  OperatorEnvironment raw = load_operator(args.operator_path);
  PipelineResult pr = run_pipeline(raw, cfg);
  const Assignment& a = pr.assignment;
  const WaveletEnumeration& e = pr.basis->enumeration;
  std::string out;
  auto pair_str = [&](std::size_t w) {
    auto [j, k] = e.pair(w);
    return std::to_string(w + 1) + "(j=" + std::to_string(j) + ",k=" + std::to_string(k) + ")";
  };
  out += "X ->";
  for (std::size_t k = 0; k < a.x_indices.size(); ++k)
    out += " " + std::to_string(a.x_indices[k]) + ":g" + pair_str(a.g_wavelets[k]);
  out += "\nV ->";
  for (std::size_t k = 0; k < a.v_indices.size(); ++k)
    out += " " + std::to_string(a.v_indices[k]) + ":h" + pair_str(a.m_of_v[k]);
  out += "\nPERP ->";
  for (std::size_t k = 0; k < a.complement_indices.size(); ++k)
    out += " " + std::to_string(a.complement_indices[k]) + ":h" + pair_str(a.n_of_complement[k]);
  out += "\n";
  SummabilityReport rep = summability_report(a, pr.env, pr.split, e, cfg.i_max);
  for (int i = 0; i <= rep.i_max; ++i) {
    std::size_t u = static_cast<std::size_t>(i);
    out += "SUM order=" + std::to_string(i) + " h=" + format_double(rep.h_sum[u]) + "/" +
           format_double(rep.h_bound[u]) + " v=" + format_double(rep.v_sum[u]) + "/" +
           format_double(rep.v_bound[u]) + " perp=" + format_double(rep.perp_sum[u]) + "/" +
           format_double(rep.perp_bound[u]) + " x=" + format_double(rep.x_sum[u]) + "/" +
           format_double(rep.x_bound[u]) + "\n";
  }
  out += rep.all_within() ? "SUMMABILITY PASS\n" : "SUMMABILITY FAIL\n";
  emit(args, out);
  return rep.all_within() ? 0 : 3;
}

int cmd_kernel(const CommonArgs& args) {
  PipelineConfig cfg = make_config(args);
  OperatorEnvironment raw = load_operator(args.operator_path);
  PipelineResult pr = run_pipeline(raw, cfg);
  std::string out;
  out += "P-TERMS " + std::to_string(pr.model.P_terms.size()) + " cap " +
         std::to_string(pr.model.p_cap) + "\n";
  out += "F-TERMS " + std::to_string(pr.model.F_terms.size()) + " FTILDE-TERMS " +
         std::to_string(pr.model.Ftilde_terms.size()) + " cap " +
         std::to_string(pr.model.f_cap) + "\n";
  for (int i = 0; i <= cfg.i_max + 1; ++i)
    out += "BOUND order=" + std::to_string(i) +
           " C=" + format_double(pr.model.C[static_cast<std::size_t>(i)]) +
           " C_star=" + format_double(pr.model.C_star[static_cast<std::size_t>(i)]) + "\n";
  for (std::size_t k = 0; k < pr.model.P_terms.size(); ++k)
    out += "TRANSFER k=" + std::to_string(k) +
           " norm=" + format_double(norm(pr.model.P_terms[k].coeffs)) +
           " z=" + format_double(pr.model.P_terms[k].z_bound) + "\n";
  emit(args, out);
  return 0;
}

int cmd_eval(const CommonArgs& args) {
  PipelineConfig cfg = make_config(args);
  OperatorEnvironment raw = load_operator(args.operator_path);
  PipelineResult pr = run_pipeline(raw, cfg);
  emit(args, export_grid_csv(pr.model, *pr.basis, cfg.grid));
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  PipelineConfig cfg = make_config(args);
  OperatorEnvironment raw = load_operator(args.operator_path);
  PipelineResult pr = run_pipeline(raw, cfg);
  VerificationReport rep = verify_pipeline(pr);
  emit(args, rep.to_text());
  return rep.pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi-Carleman integral representation pipeline"};
  app.require_subcommand(1);
  CommonArgs args;

  CLI::App* inspect = app.add_subcommand("inspect", "report the null-sequence norms");
  CLI::App* split = app.add_subcommand("split", "normalize and split the operator");
  CLI::App* assign_cmd = app.add_subcommand("assign", "build the basis assignment and unitary");
  CLI::App* kernel = app.add_subcommand("kernel", "assemble the kernel coefficient tables");
  CLI::App* eval = app.add_subcommand("eval", "export a kernel grid as CSV");
  CLI::App* verify = app.add_subcommand("verify", "run the verification harness");
  for (CLI::App* cmd : {inspect, split, assign_cmd, kernel, eval, verify})
    add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(args);
    if (split->parsed()) return cmd_split(args);
    if (assign_cmd->parsed()) return cmd_assign(args);
    if (kernel->parsed()) return cmd_kernel(args);
    if (eval->parsed()) return cmd_eval(args);
    if (verify->parsed()) return cmd_verify(args);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dimension_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const range_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
