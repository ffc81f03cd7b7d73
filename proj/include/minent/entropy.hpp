#pragma once

#include <minent/geodesic.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace minent {

// Least-squares fit of log(count) against [1, log T, T] over a T-grid;
// the T coefficient is the exponential growth rate, the log T regressor
// absorbs polynomial factors.
struct GrowthFit {
  std::vector<double> Ts;
  std::vector<double> logs;
  double slope = 0.0;
  double residual = 0.0;  // rms misfit
};

struct EntropyEstimate {
  double value = 0.0;
  std::string method;  // "mane" | "separated" | "volume_entropy" | "analytic"
  std::optional<double> lower_bracket;  // volume entropy, when the cover is known
  std::optional<double> upper_bracket;  // coarse curvature bound (n-1) sqrt(k)
  GrowthFit fit;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
};

// Growth rate of the averaged arc count n_T(p,q) over random endpoint
// pairs, fitted on a 16-point grid spanning [T_max/2, T_max].
// pre: pairs >= 8, T_max >= 5 injectivity radii.
EntropyEstimate mane_estimate(const ChartedMetric& m, int pairs, double T_max,
                              std::uint64_t seed);

// Growth rate of maximal (T, eps)-separated subsets of sampled orbit
// segments, d_T(x, y) = max_{0<=t<=T} d(orbit_x(t), orbit_y(t)).
// Lower-biased consistency signal; `speed` rescales the flow.
EntropyEstimate separated_set_estimate(const ChartedMetric& m, double eps, double T,
                                       int samples, std::uint64_t seed, double speed = 1.0);

// Exponential growth rate of universal-cover ball volume. Exact on
// catalogs; throws for custom metrics (the cover is catalog knowledge).
double volume_entropy(const ChartedMetric& m);

// h(c g) = h(g) / sqrt(c) for a metric scaled by c > 0.
double scale_entropy(double h, double c);

// Entropy of a Riemannian product: sqrt(h1^2 + h2^2).
double product_entropy(double h1, double h2);

struct ManningBound {
  double coarse = 0.0;                  // (n-1) sqrt(k)
  std::optional<double> refined;        // (n-1)/2 sqrt(Kmax) - ric_min / (2 sqrt(Kmax))
};

// Curvature upper bounds for the entropy; the refined bound needs
// K_max > 0.
ManningBound manning_upper_bound(const CurvatureReport& rep);

struct Verdict {
  bool evaluated = false;
  bool holds = true;
  double slack = 0.0;  // rhs - lhs at the compared scale
};

struct ChainInputs {
  double lambda = 0.0;
  double h = 0.0;
  int n = 2;
  std::optional<double> simplicial_volume;  // ||M||
  std::optional<double> c_n;                // user-supplied dimensional constant
  std::optional<double> min_vol;
};

// c(n)||M|| <= lambda^n <= h^n <= (n-1)^n MinVol, each link checked with
// additive tolerance 0.1 where its inputs are supplied.
struct ChainReport {
  ChainInputs inputs;
  Verdict norm_vs_lambda;
  Verdict lambda_vs_h;
  Verdict h_vs_minvol;
  bool all_hold() const {
    return (!norm_vs_lambda.evaluated || norm_vs_lambda.holds) &&
           (!lambda_vs_h.evaluated || lambda_vs_h.holds) &&
           (!h_vs_minvol.evaluated || h_vs_minvol.holds);
  }
};

ChainReport chain_check(const ChainInputs& in);

}  // namespace minent
