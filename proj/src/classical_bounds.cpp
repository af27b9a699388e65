#include "bellpoly/classical_bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "bellpoly/errors.hpp"
#include "bellpoly/parallel.hpp"

namespace bellpoly {

namespace {

// Bits of strategy index that a term's value depends on.
std::uint64_t term_mask(const dense::Settings& settings) {
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < settings.size(); ++j) {
    if (settings[j] != 0) mask |= std::uint64_t{1} << (2 * j + settings[j] - 1);
  }
  return mask;
}

// In-place unnormalized Walsh-Hadamard transform: out[x] = sum_m in[m] (-1)^{popcount(x&m)}.
void walsh_hadamard(std::vector<double>& v) {
  for (std::size_t len = 1; len < v.size(); len <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * len) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = v[j];
        const double b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
}

struct MaskedTerm {
  std::uint64_t hi;
  std::uint32_t lo;
  double coefficient;
};

// Strategy x = (x_hi << lo_bits) | x_lo. A chunk fixes x_hi, folds the high
// parity into the coefficients and transforms the remaining 2^lo_bits values.
class ChunkedEvaluator {
 public:
  explicit ChunkedEvaluator(const dense::BellExpression& expr) {
    const int bits = 2 * expr.parties();
    lo_bits_ = std::min(bits, 16);
    hi_bits_ = bits - lo_bits_;
    const std::uint64_t lo_mask = (std::uint64_t{1} << lo_bits_) - 1;
    for (const auto& [settings, c] : expr.terms()) {
      const std::uint64_t m = term_mask(settings);
      terms_.push_back({m >> lo_bits_, static_cast<std::uint32_t>(m & lo_mask), c});
    }
  }

  std::uint64_t chunk_count() const { return std::uint64_t{1} << hi_bits_; }
  std::uint64_t chunk_size() const { return std::uint64_t{1} << lo_bits_; }

  void values(std::uint64_t x_hi, std::vector<double>& out) const {
    out.assign(chunk_size(), 0.0);
    for (const auto& t : terms_) {
      const double sign = (std::popcount(x_hi & t.hi) & 1) ? -1.0 : 1.0;
      out[t.lo] += sign * t.coefficient;
    }
    walsh_hadamard(out);
  }

 private:
  int lo_bits_ = 0;
  int hi_bits_ = 0;
  std::vector<MaskedTerm> terms_;
};

}  // namespace

DeterministicStrategy DeterministicStrategy::from_index(int parties, std::uint64_t index) {
  DeterministicStrategy s;
  s.index = index;
  for (int j = 0; j < parties; ++j) {
    const int a1 = ((index >> (2 * j)) & 1U) ? -1 : 1;
    const int a2 = ((index >> (2 * j + 1)) & 1U) ? -1 : 1;
    s.outcomes.push_back({a1, a2});
  }
  return s;
}

LocalBoundResult local_bound_enumerate(const dense::BellExpression& expr) {
  const int n = expr.parties();
  if (n > kMaxEnumerationParties) {
    throw ResourceError("local_bound_enumerate: " + std::to_string(n) + " parties exceeds " +
                        std::to_string(kMaxEnumerationParties));
  }
  const ChunkedEvaluator eval(expr);
  const std::uint64_t chunks = eval.chunk_count();

  std::vector<double> chunk_max(chunks, -std::numeric_limits<double>::infinity());
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> v;
    eval.values(c, v);
    chunk_max[c] = *std::max_element(v.begin(), v.end());
  });
  const double bound = *std::max_element(chunk_max.begin(), chunk_max.end());

  // Ties are decided in integer order, up to rounding of the transform.
  const double floor_value = bound - 1e-12 * (1.0 + std::abs(bound));
  std::vector<double> v;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    if (chunk_max[c] < floor_value) continue;
    eval.values(c, v);
    for (std::uint64_t x = 0; x < v.size(); ++x) {
      if (v[x] >= floor_value) {
        return {bound, DeterministicStrategy::from_index(n, c * eval.chunk_size() + x)};
      }
    }
  }
  throw std::logic_error("local_bound_enumerate: witness not found");
}

double strategy_value(const dense::BellExpression& expr, const DeterministicStrategy& strategy) {
  if (static_cast<int>(strategy.outcomes.size()) != expr.parties()) {
    throw DomainError("strategy_value: party count mismatch");
  }
  double total = 0.0;
  for (const auto& [settings, c] : expr.terms()) {
    double product = c;
    for (std::size_t j = 0; j < settings.size(); ++j) {
      if (settings[j] != 0) product *= strategy.outcomes[j][settings[j] - 1];
    }
    total += product;
  }
  return total;
}

double quantum_over_classical(const dense::BellExpression& expr,
                              std::span<const dense::SettingPair> observables,
                              const dense::DenseState& state) {
  if (state.n != expr.parties()) {
    throw DomainError("quantum_over_classical: state and expression sizes differ");
  }
  const double quantum = dense::expression_operator(expr, observables).expectation(state);
  return quantum / local_bound_enumerate(expr).bound;
}

}  // namespace bellpoly
