#pragma once
// Loop-space homology growth over a prime field, driven by the
// minimal-resolution recurrence
//   b_0 = 1,  b_1 = 2a,  b_i = 2a b_{i-1} - b_{i-2}
// where a = dim_k H_2(M; k). Growth is exponential iff a > 1, with rate
// a + sqrt(a^2 - 1); a <= 1 gives at most linear growth (a = 0 degenerates
// to the constant sequence 1, 1, 1, ...).

#include <minent/abelian.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace minent {

using BigInt = boost::multiprecision::cpp_int;

// b_0 .. b_n inclusive (n + 1 terms), exact integers.
std::vector<BigInt> tor_betti_sequence(std::int64_t a, int n);

struct GrowthClass {
  enum Kind { polynomial, exponential } kind;
  double rate;  // a + sqrt(a^2-1) when exponential; 1.0 otherwise
};
GrowthClass growth_class(std::int64_t a);

// a = dim_{F_p} H_2 for p prime, or dim_Q H_2 for p = 0:
// p = 0 -> rank; p prime -> rank + #{i : p | d_i}.
std::int64_t field_dimension(const AbelianGroup& h2, std::int64_t p);

// Elliptic (polynomial loop-space homology growth over every field)
// iff H_2 is 0, Z, or Z_2.
bool elliptic_5m(const AbelianGroup& h2);

// Necessary condition for rational ellipticity of a closed simply
// connected 4-manifold: b_2 <= 2.
bool rationally_elliptic_4m(std::int64_t b2);

}  // namespace minent
