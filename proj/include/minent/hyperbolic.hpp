#pragma once

#include <array>
#include <complex>
#include <vector>

namespace minent::hyp {

using cplx = std::complex<double>;

// Isometry of the Poincare disk: z -> (a z + b) / (conj(b) z + conj(a)),
// |a|^2 - |b|^2 = 1.
struct Mobius {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
};

Mobius compose(const Mobius& s, const Mobius& t);  // s after t
Mobius inverse(const Mobius& s);
cplx apply(const Mobius& s, cplx z);
cplx deriv(const Mobius& s, cplx z);  // complex derivative at z

double dist(cplx z, cplx w);  // hyperbolic distance, curvature -1
double dist0(cplx z);

// Regular-octagon surface group (genus 2): eight side-pairing translations
// T_k with axis direction e^{ik pi/4} and translation length 2m,
// cosh m = 1 + sqrt(2); T_{k+4} = T_k^{-1}.
const std::array<Mobius, 8>& octagon_generators();
double octagon_circumradius();  // arccosh(3 + 2 sqrt(2))

// Dirichlet-domain membership about the origin.
bool in_octagon(cplx z, double tol = 1e-9);

// Moves z into the Dirichlet domain; returns the deck element applied
// (z_out = apply(result, z_in)).
Mobius wrap_octagon(cplx& z);

// All deck elements g with d(0, g0) <= radius (small radii only).
std::vector<Mobius> short_elements(double radius);

// Quotient distance estimate: exact whenever the true value is at most
// (radius used for the short-element list) - 2 circumradius.
double quotient_dist(cplx z, cplx w, const std::vector<Mobius>& shorts);

// #{ deck g : d(p, g q) <= T_j } for each grid value, by breadth-first
// word enumeration pruned at T_max + 2 circumradius + slack. p, q are
// wrapped into the Dirichlet domain first.
std::vector<long long> orbit_counts(cplx p, cplx q, const std::vector<double>& Ts);
long long orbit_count(cplx p, cplx q, double T);

// The elements themselves, for arc listings (moderate T only).
std::vector<Mobius> orbit_elements(cplx p, cplx q, double T);

}  // namespace minent::hyp
