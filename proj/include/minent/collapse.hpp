#pragma once

#include <minent/geometry.hpp>

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace minent {

// Circle action on a charted manifold: phi_theta is the action of
// e^{i theta}, V its generator field. fixed_distance(x) measures the
// metric distance to the fixed set (empty fixed set: omit).
struct CircleAction {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> generator;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> flow;
  std::function<double(const Eigen::VectorXd&)> fixed_distance;  // optional

  bool fixed(const Eigen::VectorXd& x) const { return generator(x).norm() <= 1e-9; }
};

// Azimuthal rotation of the polar sphere chart; fixed set = the poles.
CircleAction rotation_action(double radius);

// Unit-period translation x -> x + theta/(2 pi) * (winding .* sides); free.
CircleAction translation_action(const std::vector<double>& sides,
                                const std::vector<int>& winding);

// Checks 2 pi-periodicity of the flow on chart sample points (1e-6).
void validate_action(const ChartedMetric& m, const CircleAction& a);

// Orbit-average of a metric: (1/2pi) Int g(dphi_theta u, dphi_theta w) dtheta,
// by the trapezoid rule on `theta_points` nodes (spectral on periodic data).
// Differentials of the flow are taken by central differences.
ChartedMetric average_metric(const ChartedMetric& m, const CircleAction& a,
                             int theta_points = 64);

// One-parameter quotient family of an invariant metric: g_delta equals g
// on the orthogonal complement of the orbit direction and shrinks the
// orbit direction by delta/(delta + eps_x), eps_x = g(V,V).
struct CollapseFamily {
  ChartedMetric base;
  CircleAction action;
  std::vector<double> deltas;

  // quotient tensor at x (no invariance re-check; see make_collapse_family)
  Eigen::MatrixXd at(double delta, const Eigen::VectorXd& x) const;
  // pointwise volume-density factor sqrt(delta / (delta + eps_x))
  double density(double delta, const Eigen::VectorXd& x) const;
};

// Validates the action (2 pi-periodic flow) and the invariance of `base`
// (residual <= 1e-4), then packages the family. deltas must be positive.
CollapseFamily make_collapse_family(ChartedMetric base, CircleAction action,
                                    std::vector<double> deltas);

// Pointwise quotient tensor with a per-call invariance check of g
// (residual above 1e-4 throws).
Eigen::MatrixXd quotient_metric_at(const ChartedMetric& g, const CircleAction& a, double delta,
                                   const Eigen::VectorXd& x);

inline QuadratureSpec sweep_quadrature() {
  QuadratureSpec q;
  q.max_refine = 5;
  return q;
}

// (delta, Vol(g_delta)) per family delta, via the closed-form density
// against the base volume element.
std::vector<std::pair<double, double>> volume_sweep(const CollapseFamily& f,
                                                    const QuadratureSpec& quad = sweep_quadrature());

// Curvature of g_delta per family delta, on a chart grid kept at distance
// >= rho from the fixed set. Throws when the grid touches the fixed set.
std::vector<CurvatureReport> curvature_sweep(const CollapseFamily& f, double rho,
                                             const GridSpec& grid = {});

struct SweepRow {
  double delta = 0.0;
  double vol = 0.0;
  CurvatureReport curv;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // deltas ascending
  double base_volume = 0.0;
  double rho = 0.0;
  bool vol_nondecreasing = false;
  bool vol_below_base = false;
};

SweepResult collapse_sweep(const CollapseFamily& f, double rho = 0.1,
                           const QuadratureSpec& quad = sweep_quadrature(),
                           const GridSpec& grid = {});

// CSV: delta,vol,K_min,K_max,ricci_min
void write_sweep_csv(std::ostream& os, const SweepResult& s);

// ---------------------------------------------------------------------------
// Linear-algebra facts behind the quotient-volume comparison. F is an
// l-dimensional subspace of V1 (+) V2 spanned by the columns of [A; B],
// meeting V1 and V2 trivially, with h1(v,v) <= h2(w,w) for all (v,w) in F.

struct Lemma61Projection {
  double det_I_sq = 0.0;  // squared determinant of v -> proj_1 proj_F (v, 0) on proj_1(F)
  double bound = 0.0;     // 4^{-l} (det of the graph map V2 -> V1)^{4l}
  bool hypothesis_ok = false;
  bool holds = false;  // det_I_sq >= bound (asserted only when hypothesis_ok)
};

Lemma61Projection lemma61_projection_bound(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                           const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2);

struct Lemma61Quotient {
  double ratio = 0.0;  // sqrt(det h_lambda / det h1)
  bool hypothesis_ok = false;
  bool holds = false;  // ratio <= 1 (asserted only when hypothesis_ok)
};

// Rescales h1 (+) h2 by lambda on F, keeps it on the orthogonal complement,
// then pushes the result down to V1 and compares volume densities.
Lemma61Quotient lemma61_quotient_volume(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                        const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2,
                                        double lambda);

}  // namespace minent
