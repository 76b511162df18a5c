// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one pass/fail line per criterion.  Exit code is the number of
// failed criteria.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "bicarleman/pipeline.hpp"
#include "bicarleman/verify.hpp"

using namespace bicarleman;

namespace {

const std::string kCli = BICARLEMAN_CLI_PATH;
const std::string kFixtures = BICARLEMAN_FIXTURE_DIR;

int failures = 0;

void report(int idx, const std::string& name, bool pass, double residual, double bound) {
  std::printf("CRITERION %2d %-24s %s  residual=%.6g bound=%.6g\n", idx, name.c_str(),
              pass ? "PASS" : "FAIL", residual, bound);
  std::fflush(stdout);
  if (!pass) ++failures;
}


std::shared_ptr<const WaveletBasis> acceptance_basis() {
  static std::shared_ptr<const WaveletBasis> basis = [] {
    HPlacementPolicy policy;
    std::size_t count = std::max<std::size_t>(required_enumeration_count(16, policy), 64);
    return std::make_shared<const WaveletBasis>(count, 3, 512);
  }();
  return basis;
}

PipelineResult primary_pipeline() {
  Rng rng(20240702);
  OperatorEnvironment raw = fixtures::random_operator(rng, 8, 2, 4);
  PipelineConfig cfg;
  return run_pipeline(raw, cfg, acceptance_basis());
}

std::string run_cli_verify(const std::string& out_path) {
  std::string cmd = kCli + " verify --operator " + kFixtures + "/rank2_dim8.json --seed 7 --out " +
                    out_path + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  (void)rc;
  std::ifstream in(out_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  VerifyOptions opts;  // documented defaults; tolerances pinned below per criterion
  auto basis = acceptance_basis();

  // 1. wavelet orthonormality: Gram of the first 12 within 5e-6
  {
    CheckRecord rec = check_wavelet_orthonormality(*basis, opts);
    report(1, "wavelet-orthonormality", rec.pass && rec.bound == 5e-6, rec.residual, rec.bound);
  }

  PipelineResult pr = primary_pipeline();

  // 2. bound certificates with the exact D formulas
  {
    CheckRecord rec = check_wavelet_bound_certificates(*basis, &pr.assignment, opts);
    bool exact = dilation_bound(3) == 512.0 && dilation_bound(-4) == 0.25;
    report(2, "bound-certificates", rec.pass && exact, rec.residual, rec.bound);
  }

  // 3. normalization keeps exactly the geometric tail k >= 6 with sum <= 1
  {
    OperatorEnvironment env = fixtures::geometric_operator(12);
    OperatorEnvironment out = normalize_null_sequence(env);
    std::vector<std::size_t> expected{6, 7, 8, 9, 10, 11, 12};
    double sum = 0.0;
    ComplexMatrix Sstar = out.S.adjoint();
    for (std::size_t idx : out.null_indices)
      sum += std::pow(norm(out.S.apply(out.basis_vector(idx))), 0.25) +
             std::pow(norm(Sstar.apply(out.basis_vector(idx))), 0.25);
    bool pass = out.null_indices == expected && sum <= 1.0;
    report(3, "normalization-tail", pass, sum, 1.0);
  }

  // 4. Schwarz chain on 100 random unit vectors
  {
    CheckRecord rec = check_schwarz_chain(pr.split, opts);
    report(4, "schwarz-chain", rec.pass && rec.bound == 1e-9, rec.residual, rec.bound);
  }

  // 5. unitarity: exact permutation plus inner products within 1e-14
  {
    CheckRecord perm = check_unitary_permutation(pr.assignment, opts);
    CheckRecord ip = check_unitary_inner_products(pr.assignment, opts);
    report(5, "unitarity", perm.pass && ip.pass && ip.bound == 1e-14,
           std::max(perm.residual, ip.residual), ip.bound);
  }

  // 6. action agreement over 3 random rank-<=2 operators, 5 pairs each
  {
    double worst = 0.0;
    bool pass = true;
    for (std::uint64_t seed : {101ull, 102ull, 103ull}) {
      Rng rng(seed);
      std::size_t rank = 1 + static_cast<std::size_t>(seed % 2);
      OperatorEnvironment raw = fixtures::random_operator(rng, 8, rank, 4);
      PipelineConfig cfg;
      cfg.seed = seed;
      PipelineResult p = run_pipeline(raw, cfg, basis);
      CheckRecord rec =
          check_action_agreement(p.env, p.assignment, p.model, *p.basis, p.config.verify_options(), 5);
      worst = std::max(worst, rec.residual);
      pass = pass && rec.pass && rec.bound == 1e-4;
    }
    report(6, "action-agreement", pass, worst, 1e-4);
  }

  // 7. conjugate symmetry at 100 random points within 1e-9
  {
    CheckRecord rec = check_conjugate_symmetry(pr.model, *pr.basis, opts);
    report(7, "conjugate-symmetry", rec.pass && rec.bound == 1e-9, rec.residual, rec.bound);
  }

  // 8. termwise derivatives vs central differences, i+j <= 3, 1e-4 relative
  {
    CheckRecord rec = check_kernel_fd_agreement(pr.model, *pr.basis, opts);
    report(8, "smoothness-fd", rec.pass && rec.bound == 1e-4, rec.residual, rec.bound);
  }

  // 9. Carleman Parseval identity within 1e-5 at 10 random s (k and k*)
  {
    CheckRecord rec = check_carleman_parseval(pr.model, *pr.basis, opts);
    report(9, "carleman-parseval", rec.pass && rec.bound == 1e-5, rec.residual, rec.bound);
  }

  // 10. vanishing at infinity: frame sup <= 1e-5 of the center sup
  {
    CheckRecord rec = check_kernel_vanishing(pr.model, *pr.basis, opts);
    report(10, "kernel-vanishing", rec.pass && rec.bound == 1e-5, rec.residual, rec.bound);
  }

  // 11. truncation bounds dominate the measured omitted mass, (i,j) in {0,1}^2
  {
    CheckRecord rec = check_truncation(pr.env, pr.split, pr.assignment, pr.basis->enumeration,
                                       pr.model, *pr.basis, opts);
    report(11, "truncation-bounds", rec.pass, rec.residual, rec.bound);
  }

  // 12. determinism: two verify runs produce byte-identical reports
  {
    auto dir = std::filesystem::temp_directory_path();
    std::string p1 =
        (dir / ("bicarleman_acc_" + std::to_string(::getpid()) + "_a.txt")).string();
    std::string p2 =
        (dir / ("bicarleman_acc_" + std::to_string(::getpid()) + "_b.txt")).string();
    std::string r1 = run_cli_verify(p1);
    std::string r2 = run_cli_verify(p2);
    bool pass = !r1.empty() && r1 == r2;
    report(12, "verify-determinism", pass, pass ? 0.0 : 1.0, 0.0);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
  }

  std::printf("ACCEPTANCE %s (%d/12 passed)\n", failures == 0 ? "PASS" : "FAIL", 12 - failures);
  return failures;
}
