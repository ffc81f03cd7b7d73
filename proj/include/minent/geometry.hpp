#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace minent {

// Open coordinate box, optionally cut down by a membership predicate
// (used for fundamental domains that are not boxes).
struct Chart {
  Eigen::VectorXd lo, hi;
  std::function<bool(const Eigen::VectorXd&)> extra;

  bool contains(const Eigen::VectorXd& x) const;
};

enum class Catalog { round_sphere, flat_torus, hyperbolic_quotient, product, custom };

using MetricField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using PartialsField = std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>;

// Chart-based Riemannian metric. Components are a matrix field per chart
// (catalogs use a single almost-everywhere chart); `partials` optionally
// supplies the analytic derivatives d_k g, otherwise central differences
// are used.
struct ChartedMetric {
  int dim = 0;
  Catalog tag = Catalog::custom;
  std::vector<Chart> charts;
  MetricField g;
  PartialsField partials;

  double radius = 0.0;                                // round_sphere
  std::vector<double> sides;                          // flat_torus
  std::shared_ptr<const ChartedMetric> left, right;   // product factors
  std::vector<Eigen::Matrix2cd> deck;                 // quotient deck generators

  bool in_chart(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd metric(const Eigen::VectorXd& x) const;
};

ChartedMetric round_sphere(double radius);
ChartedMetric flat_torus(std::vector<double> sides);
ChartedMetric hyperbolic_halfplane();
ChartedMetric hyperbolic_genus2();  // octagon quotient, curvature -1
ChartedMetric product_metric(const ChartedMetric& a, const ChartedMetric& b);
ChartedMetric custom_metric(int dim, std::vector<Chart> charts, MetricField g,
                            PartialsField partials = {});

// Compact text form: sphere:r=1 | torus:1,1 | hyperbolic:genus2-octagon |
// hyperbolic:halfplane | product:(spec)x(spec)
ChartedMetric parse_metric_spec(const std::string& text);

// out[k](i,j) = Gamma^k_ij
void christoffel_into(const ChartedMetric& m, const Eigen::VectorXd& x,
                      std::vector<Eigen::MatrixXd>& out);
std::vector<Eigen::MatrixXd> christoffel(const ChartedMetric& m, const Eigen::VectorXd& x);

namespace detail {
// Same computation without the chart-membership precondition. Integrator
// stage points fall a fraction of a step outside the chart box before the
// wrap is applied; the component formulas extend there.
void christoffel_raw_into(const ChartedMetric& m, const Eigen::VectorXd& x,
                          std::vector<Eigen::MatrixXd>& out);
}  // namespace detail

// Curvature tensor with first index lowered, flattened as r[((i*n+j)*n+k)*n+l].
std::vector<double> riemann_lowered(const ChartedMetric& m, const Eigen::VectorXd& x);

double sectional_curvature(const ChartedMetric& m, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& w);

struct GridSpec {
  int per_dim = 9;
  double margin = 0.05;  // relative inset from chart edges
};

struct CurvatureReport {
  int dimension = 0;
  double K_min = 0.0;
  double K_max = 0.0;
  double ricci_min = 0.0;
  double scalar_min = 0.0;
  double scalar_max = 0.0;
  double k_bound = 0.0;  // max(|K_min|, |K_max|)
};

CurvatureReport curvature_bounds(const ChartedMetric& m, const GridSpec& grid = {});

struct QuadratureSpec {
  int points_per_dim = 65;
  int max_refine = 3;
  double tol = 1e-6;
};

// integral of f dvol_g over the charts (composite Simpson, refined until the
// value stabilizes; throws when it does not)
double chart_integral(const ChartedMetric& m, const std::function<double(const Eigen::VectorXd&)>& f,
                      const QuadratureSpec& quad = {});
double volume(const ChartedMetric& m, const QuadratureSpec& quad = {});

}  // namespace minent
