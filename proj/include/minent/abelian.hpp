#pragma once
// Finitely generated abelian groups in invariant-factor form,
//   G = Z^r + Z_{d1} + ... + Z_{dm},   d1 | d2 | ... | dm,  d_i >= 2,
// with helpers for primary decomposition and parsing of compact specs
// such as "Z^2+Z4+Z4", "Z2+Z2", "Z", "0".

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace minent {

struct AbelianGroup {
  int rank = 0;
  std::vector<std::int64_t> factors;  // invariant factors, ascending divisibility chain

  // Normalizes an arbitrary list of cyclic torsion summands (any order, not
  // necessarily a chain) into invariant-factor form.
  static AbelianGroup from_summands(int rank, std::vector<std::int64_t> summands);

  // Accepts '+'-separated tokens: "Z", "Z^r", "Zn", "Z_n", "Zn^m", or "0".
  static AbelianGroup parse(const std::string& text);

  bool operator==(const AbelianGroup&) const = default;

  bool trivial() const { return rank == 0 && factors.empty(); }
  bool chain_valid() const;  // d1 | d2 | ... | dm with all d_i >= 2

  // prime -> exponent multiset (ascending), e.g. Z2+Z12+Z12 -> {2:[1,2,2], 3:[1,1]}
  std::map<std::int64_t, std::vector<int>> primary() const;

  std::string str() const;
};

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

}  // namespace minent
