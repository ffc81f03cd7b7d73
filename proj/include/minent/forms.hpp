#pragma once
// Unimodular symmetric bilinear forms over Z and connected-sum words of
// closed simply connected 4-manifolds.
//
// Building blocks:
//   <1>, <-1>     CP^2 and its orientation reversal
//   H  = [0 1; 1 0]                            S^2 x S^2
//   E8            the even positive-definite rank-8 form
//   -2E8 + 3H     the K3 surface (rank 22, signature -16, even)

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace minent {

struct IntersectionForm {
  Eigen::MatrixXi Q;  // symmetric

  int rank() const { return static_cast<int>(Q.rows()); }
  int signature() const;      // #positive - #negative eigenvalues
  bool even() const;          // all diagonal entries even
  bool unimodular() const;    // |det Q| = 1, evaluated exactly
  bool definite() const;      // |signature| = rank > 0
};

IntersectionForm diag_form(const std::vector<int>& entries);
IntersectionForm hyperbolic_form();  // H
IntersectionForm e8_form();          // E8
IntersectionForm k3_form();          // -2E8 + 3H
IntersectionForm negate(const IntersectionForm& f);
IntersectionForm direct_sum(const IntersectionForm& a, const IntersectionForm& b);
// k*E8 + l*H (k may be negative: |k| copies of -E8); l >= 0.
IntersectionForm e8h_sum(long long k, long long l);

// Type equality by (rank, signature, parity). Complete for the zero form,
// rank <= 2, and indefinite unimodular forms; definite forms of rank >= 3
// are rejected (std::domain_error) rather than misclassified.
bool same_form_type(const IntersectionForm& a, const IntersectionForm& b);

enum class Gen4 { S4, CP2, CP2r, S2xS2, K3 };  // CP2r = orientation-reversed CP^2
using Word4 = std::vector<Gen4>;               // multiset; order irrelevant

std::string gen4_name(Gen4 g);
Gen4 parse_gen4(const std::string& token);     // "S4","CP2","CP2~","S2xS2","K3"
Word4 parse_word4(const std::string& csv);     // comma-separated tokens; "" = empty word

IntersectionForm form_of_word(const Word4& word);

// Homeomorphism-type label of a closed simply connected 4-manifold with
// b2 <= 2, read off the intersection form (up to orientation reversal):
// "S^4", "CP^2", "S^2 x S^2", "CP^2 # -CP^2", "CP^2 # CP^2".
std::string homeotype_b2le2(const IntersectionForm& form);

enum class EvenFormVerdict { realizable, rokhlin_violation, open_under_11_8 };
std::string verdict_name(EvenFormVerdict v);

struct EvenFormResult {
  EvenFormVerdict verdict;
  Word4 witness;          // realizable only: |k|/2 K3 copies + (l - 3|k|/2) S^2xS^2
  bool reversed = false;  // witness realizes the form after a global orientation flip (k > 0)
};
// Smooth realizability of the even form k*E8 + l*H (l >= 0).
EvenFormResult even_form_realizable(long long k, long long l);

struct Decision4 {
  double minimal_entropy = 0.0;  // all words over these generators admit T-structures
  bool solvable = false;         // infimum attained by an explicit smooth metric
  std::string witness;           // connected-sum label of the S^4-reduced word
};
// Minimal-entropy solvability for connected sums of the five generators.
// Solvable exactly when the S^4-reduced word is one of (up to global
// orientation reversal): empty, [CP^2], [S^2xS^2], [CP^2,CP^2~], [CP^2,CP^2].
Decision4 entropy_decision_4m(const Word4& word);

}  // namespace minent
