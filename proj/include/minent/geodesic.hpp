#pragma once

#include <minent/geometry.hpp>

#include <iosfwd>
#include <vector>

namespace minent {

struct GeodesicState {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

struct GeodesicArc {
  Eigen::VectorXd p, q;
  double length = 0.0;
  double angle = 0.0;           // initial chart angle of the unit velocity
  Eigen::VectorXd direction;    // unit initial velocity in the chart
  std::vector<Eigen::VectorXd> samples;
};

// |v|_g at the state's base point.
double speed(const ChartedMetric& m, const GeodesicState& s);

// Applies the catalog identifications (lattice translation, polar
// reflection, deck transformation) so the state lies in a chart again.
void wrap_state(const ChartedMetric& m, GeodesicState& s);

// Classical 4th-order integration of the geodesic equation with
// chart wrapping after every step. Throws when a custom-metric
// trajectory leaves the atlas.
GeodesicState integrate(const ChartedMetric& m, GeodesicState s, double t, double step = 1e-3);

struct ShootSpec {
  int directions = 1024;  // angular grid size
  double step = 0.02;
  double endpoint_tol = 1e-6;
  bool stability_check = false;  // re-run at doubled resolution, compare counts
};

struct ArcQuery {
  std::vector<GeodesicArc> arcs;
  bool resolution_warning = false;
};

// Sweeps initial directions at p, detects near-hits of q, refines each
// candidate on the initial angle, deduplicates. 2-dimensional charts only;
// hyperbolic quotients delegate to deck-orbit enumeration.
ArcQuery shoot_arcs(const ChartedMetric& m, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                    double T, const ShootSpec& spec = {});

// n_T(p,q). Exact on catalogs (lattice translates, great-circle windings,
// deck orbits); otherwise the cardinality of shoot_arcs.
long long count_arcs(const ChartedMetric& m, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                     double T, const ShootSpec& spec = {});

// Distance in the quotient/catalog geometry (chart Euclidean for custom).
double catalog_distance(const ChartedMetric& m, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q);

void write_arcs_csv(std::ostream& os, const std::vector<GeodesicArc>& arcs);

}  // namespace minent
