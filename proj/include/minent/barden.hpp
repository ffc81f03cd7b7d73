#pragma once
// Closed simply connected 5-manifolds via their classifying invariants
// (H_2(M,Z), i(M)), block decompositions over
//   X_{-1} (= SU(3)/SO(3)), X_0 (= S^5), X_j (j >= 1), X_inf,
//   M_k (k > 1), M_inf (= S^3 x S^2),
// minimal-entropy decisions, T-structure flags, and Brieskorn weights.
//
// Constraints implemented:
//   torsion(H_2) is G+G (manifold bounds) or Z_2+G+G (does not bound);
//   i = 0 (spin) needs G+G; finite i >= 1 needs a Z_{2^i} pair inside a G+G
//   torsion, or i = 1 with the lone-Z_2 shape; i = inf needs rank >= 1 and
//   G+G torsion. Blocks satisfy k_1 | k_2 | ... in the M-chain.

#include <minent/abelian.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace minent {

// i(M) in {0, 1, 2, ...} U {inf}. Comparisons treat inf as larger than every
// finite value and not less than itself.
struct SpinIndex {
  bool infinite = false;
  int value = 0;

  static SpinIndex inf() { return {true, 0}; }
  static SpinIndex of(int v);
  static SpinIndex parse(const std::string& text);  // "0", "3", "inf"

  bool operator==(const SpinIndex&) const = default;
  std::string str() const;
};

enum class TorsionShape { doubled, z2_plus_doubled, invalid };
TorsionShape torsion_shape(const AbelianGroup& g);

struct BardenCheck {
  bool valid = false;
  std::string reason;  // human-readable when invalid
};
BardenCheck barden_validate(const AbelianGroup& h2, SpinIndex i);

struct BardenBlock {
  enum Kind { Wu, X, Xinf, M, Minf } kind;
  std::int64_t param = 0;  // j for X, k for M

  bool operator==(const BardenBlock&) const = default;
  std::string str() const;  // "X_-1", "X_2", "X_inf", "M_4", "M_inf"
};

// Decomposition word (X block first when nontrivial, then M_k ascending,
// then M_inf copies). X_0 = S^5 is the empty word.
std::vector<BardenBlock> barden_decompose(const AbelianGroup& h2, SpinIndex i);

// Round-trip: (H_2, i) of a decomposition word.
std::pair<AbelianGroup, SpinIndex> barden_reconstruct(const std::vector<BardenBlock>& word);

struct Decision5 {
  double minimal_entropy = 0.0;
  bool solvable = false;
  std::string witness;  // "S^5", "S^3 x S^2", "nontrivial S^3-bundle over S^2", "SU(3)/SO(3)"
};
// Solvable exactly for (0,0), (Z,0), (Z,inf), (Z_2,1).
Decision5 entropy_decision_5m(const AbelianGroup& h2, SpinIndex i);

enum class Flag { yes, unknown };
std::string flag_name(Flag f);

struct TStructureFlags {
  bool t_structure = true;  // every closed simply connected 5-manifold
  Flag polarized = Flag::yes;
  Flag minvol_zero = Flag::yes;
};
// polarized/minvol_zero are "unknown" exactly when the manifold bounds,
// is non-spin, and 1 < i < inf.
TStructureFlags tstructure_flags(const AbelianGroup& h2, SpinIndex i);

struct BrieskornWeights {
  std::int64_t lcm = 1;
  std::array<std::int64_t, 4> q{};  // q_i = lcm(a1..a4)/a_i
  std::int64_t gcd = 1;             // gcd(q1..q4)
};
BrieskornWeights brieskorn_weights(std::int64_t a1, std::int64_t a2, std::int64_t a3,
                                   std::int64_t a4);

}  // namespace minent
