#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bellpoly/dense_oracle.hpp"

namespace bellpoly {

inline constexpr int kMaxEnumerationParties = 12;

// Fixed +-1 outcome for each party's two settings. Encoded as a 2n-bit
// integer: bit 2j flips party j's first outcome, bit 2j+1 its second.
struct DeterministicStrategy {
  std::uint64_t index = 0;
  std::vector<std::array<int, 2>> outcomes;

  static DeterministicStrategy from_index(int parties, std::uint64_t index);
};

struct LocalBoundResult {
  double bound = 0.0;
  DeterministicStrategy witness;  // smallest index attaining the bound
};

// Exact maximum of the expression over all 4^n deterministic strategies.
LocalBoundResult local_bound_enumerate(const dense::BellExpression& expr);

double strategy_value(const dense::BellExpression& expr, const DeterministicStrategy& strategy);

// <psi| expression_operator(expr, observables) |psi> / local_bound_enumerate(expr).
double quantum_over_classical(const dense::BellExpression& expr,
                              std::span<const dense::SettingPair> observables,
                              const dense::DenseState& state);

}  // namespace bellpoly
