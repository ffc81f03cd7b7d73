#include <minent/loop_growth.hpp>

#include <cmath>
#include <stdexcept>

namespace minent {

std::vector<BigInt> tor_betti_sequence(std::int64_t a, int n) {
  if (a < 0) throw std::invalid_argument("tor_betti_sequence: a must be >= 0");
  if (n < 0) throw std::invalid_argument("tor_betti_sequence: negative length");
  std::vector<BigInt> b(static_cast<std::size_t>(n) + 1);
  if (a == 0) {
    // Degenerate seeds: the resolution is periodic and every term is one.
    for (auto& v : b) v = 1;
    return b;
  }
  b[0] = 1;
  if (n >= 1) b[1] = 2 * a;
  for (int i = 2; i <= n; ++i) b[i] = 2 * a * b[i - 1] - b[i - 2];
  return b;
}

GrowthClass growth_class(std::int64_t a) {
  if (a < 0) throw std::invalid_argument("growth_class: a must be >= 0");
  if (a <= 1) return {GrowthClass::polynomial, 1.0};
  const double ad = static_cast<double>(a);
  return {GrowthClass::exponential, ad + std::sqrt(ad * ad - 1.0)};
}

std::int64_t field_dimension(const AbelianGroup& h2, std::int64_t p) {
  if (!h2.chain_valid())
    throw std::invalid_argument("field_dimension: invalid invariant-factor chain");
  if (p == 0) return h2.rank;
  if (p < 2) throw std::invalid_argument("field_dimension: p must be prime or 0");
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("field_dimension: p must be prime or 0");
  std::int64_t a = h2.rank;
  for (std::int64_t d : h2.factors)
    if (d % p == 0) ++a;
  return a;
}

bool elliptic_5m(const AbelianGroup& h2) {
  if (!h2.chain_valid()) throw std::invalid_argument("elliptic_5m: invalid group");
  if (h2.trivial()) return true;
  if (h2.rank == 1 && h2.factors.empty()) return true;
  if (h2.rank == 0 && h2.factors == std::vector<std::int64_t>{2}) return true;
  return false;
}

bool rationally_elliptic_4m(std::int64_t b2) {
  if (b2 < 0) throw std::invalid_argument("rationally_elliptic_4m: b2 must be >= 0");
  return b2 <= 2;
}

}  // namespace minent
