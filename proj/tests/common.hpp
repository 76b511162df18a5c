#pragma once

// Shared test scaffolding: one wavelet basis per test binary (the mother
// tables take a couple of seconds to build) and a helper running the
// construction stages against it.

#include <memory>
#include <utility>

#include "bicarleman/pipeline.hpp"

namespace bicarleman::testing {

inline std::shared_ptr<const WaveletBasis> shared_basis() {
  static std::shared_ptr<const WaveletBasis> basis = [] {
    HPlacementPolicy policy;
    std::size_t count = std::max<std::size_t>(required_enumeration_count(16, policy), 64);
    return std::make_shared<const WaveletBasis>(count, 3, 512);
  }();
  return basis;
}

struct Stage {
  OperatorEnvironment env;
  SplitSystem split;
  std::shared_ptr<const WaveletBasis> basis;
  Assignment assignment;
};

inline Stage build_stage(const OperatorEnvironment& raw, int i_max = 3) {
  HPlacementPolicy policy;
  OperatorEnvironment env = normalize_null_sequence(raw);
  SplitSystem split = build_split(env);
  auto basis = shared_basis();
  Assignment a = assign(env, split, basis->enumeration, i_max, policy);
  return Stage{std::move(env), std::move(split), std::move(basis), std::move(a)};
}

inline KernelModel build_model(const Stage& st, int i_max = 3, std::size_t cap = 0) {
  return build_kernel_model(st.env, st.split, st.assignment, st.basis->enumeration, i_max, cap);
}

}  // namespace bicarleman::testing
