#include <minent/collapse.hpp>

#include <minent/geodesic.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace minent {

namespace {

Eigen::MatrixXd flow_jacobian(const CircleAction& a, double theta, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd xp = x, xm = x;
  for (int j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    J.col(j) = (a.flow(theta, xp) - a.flow(theta, xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

double invariance_residual(const ChartedMetric& m, const CircleAction& a,
                           const Eigen::VectorXd& x) {
  const Eigen::MatrixXd G = m.g(x);
  double worst = 0.0;
  for (double theta : {0.7, 2.1}) {
    const Eigen::MatrixXd J = flow_jacobian(a, theta, x);
    const Eigen::MatrixXd R = J.transpose() * m.g(a.flow(theta, x)) * J - G;
    worst = std::max(worst, R.cwiseAbs().maxCoeff());
  }
  return worst / (1.0 + G.cwiseAbs().maxCoeff());
}

std::vector<Eigen::VectorXd> chart_probes(const ChartedMetric& m, int per_dim) {
  std::vector<Eigen::VectorXd> pts;
  for (const Chart& c : m.charts) {
    const int n = static_cast<int>(c.lo.size());
    std::vector<int> idx(n, 0);
    while (true) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) {
        const double t = (idx[i] + 1.0) / (per_dim + 1.0);
        x[i] = c.lo[i] + t * (c.hi[i] - c.lo[i]);
      }
      if (c.contains(x)) pts.push_back(x);
      int i = 0;
      for (; i < n; ++i) {
        if (++idx[i] < per_dim) break;
        idx[i] = 0;
      }
      if (i == n) break;
    }
  }
  return pts;
}

Eigen::MatrixXd quotient_tensor(const Eigen::MatrixXd& G, const Eigen::VectorXd& V,
                                double delta) {
  const Eigen::VectorXd w = G * V;
  const double eps = V.dot(w);
  return G - w * w.transpose() / (delta + eps);
}

}  // namespace

CircleAction rotation_action(double radius) {
  if (radius <= 0) throw std::invalid_argument("rotation_action: radius must be positive");
  CircleAction a;
  a.generator = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
    v[1] = 1.0;
    return v;
  };
  a.flow = [](double theta, const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y[1] += theta;
    return y;
  };
  a.fixed_distance = [radius](const Eigen::VectorXd& x) {
    return radius * std::min(x[0], M_PI - x[0]);
  };
  return a;
}

CircleAction translation_action(const std::vector<double>& sides,
                                const std::vector<int>& winding) {
  if (sides.size() != winding.size() || sides.empty())
    throw std::invalid_argument("translation_action: winding/sides size mismatch");
  Eigen::VectorXd w(sides.size());
  for (std::size_t i = 0; i < sides.size(); ++i) w[i] = winding[i] * sides[i] / (2.0 * M_PI);
  if (w.norm() == 0) throw std::invalid_argument("translation_action: trivial winding");
  CircleAction a;
  a.generator = [w](const Eigen::VectorXd&) { return w; };
  a.flow = [w](double theta, const Eigen::VectorXd& x) { return (x + theta * w).eval(); };
  return a;
}

void validate_action(const ChartedMetric& m, const CircleAction& a) {
  if (!a.generator || !a.flow)
    throw std::invalid_argument("validate_action: generator and flow are required");
  const auto pts = chart_probes(m, 4);
  if (pts.empty()) throw std::invalid_argument("validate_action: no chart sample points");
  for (const Eigen::VectorXd& x : pts) {
    const Eigen::VectorXd y = a.flow(2.0 * M_PI, x);
    if (catalog_distance(m, x, y) > 1e-6)
      throw std::invalid_argument("validate_action: flow is not 2 pi-periodic");
  }
}

ChartedMetric average_metric(const ChartedMetric& m, const CircleAction& a, int theta_points) {
  if (theta_points < 8) throw std::invalid_argument("average_metric: too few theta points");
  if (!a.flow) throw std::invalid_argument("average_metric: action flow required");
  ChartedMetric out = m;
  out.partials = nullptr;
  const MetricField gf = m.g;
  const CircleAction act = a;
  const int K = theta_points;
  out.g = [gf, act, K](const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < K; ++k) {
      const double theta = 2.0 * M_PI * k / K;
      const Eigen::MatrixXd J = flow_jacobian(act, theta, x);
      acc += J.transpose() * gf(act.flow(theta, x)) * J;
    }
    return Eigen::MatrixXd(acc / K);
  };
  return out;
}

Eigen::MatrixXd CollapseFamily::at(double delta, const Eigen::VectorXd& x) const {
  return quotient_tensor(base.g(x), action.generator(x), delta);
}

double CollapseFamily::density(double delta, const Eigen::VectorXd& x) const {
  const Eigen::VectorXd V = action.generator(x);
  const double eps = V.dot(base.g(x) * V);
  return std::sqrt(delta / (delta + eps));
}

CollapseFamily make_collapse_family(ChartedMetric base, CircleAction action,
                                    std::vector<double> deltas) {
  if (deltas.empty()) throw std::invalid_argument("make_collapse_family: empty delta grid");
  for (double d : deltas)
    if (!(d > 0)) throw std::invalid_argument("make_collapse_family: deltas must be positive");
  std::sort(deltas.begin(), deltas.end());
  validate_action(base, action);
  for (const Eigen::VectorXd& x : chart_probes(base, 4))
    if (invariance_residual(base, action, x) > 1e-4)
      throw std::runtime_error("make_collapse_family: base metric is not action-invariant");
  return CollapseFamily{std::move(base), std::move(action), std::move(deltas)};
}

Eigen::MatrixXd quotient_metric_at(const ChartedMetric& g, const CircleAction& a, double delta,
                                   const Eigen::VectorXd& x) {
  if (!(delta > 0)) throw std::invalid_argument("quotient_metric_at: delta must be positive");
  if (invariance_residual(g, a, x) > 1e-4)
    throw std::runtime_error("quotient_metric_at: base metric is not action-invariant");
  return quotient_tensor(g.g(x), a.generator(x), delta);
}

std::vector<std::pair<double, double>> volume_sweep(const CollapseFamily& f,
                                                    const QuadratureSpec& quad) {
  std::vector<std::pair<double, double>> out;
  out.reserve(f.deltas.size());
  for (double delta : f.deltas) {
    const double vol = chart_integral(
        f.base, [&](const Eigen::VectorXd& x) { return f.density(delta, x); }, quad);
    out.emplace_back(delta, vol);
  }
  return out;
}

std::vector<CurvatureReport> curvature_sweep(const CollapseFamily& f, double rho,
                                             const GridSpec& grid) {
  if (f.action.fixed_distance && !(rho > 0))
    throw std::invalid_argument("curvature_sweep: rho must be positive near a fixed set");
  std::vector<CurvatureReport> out;
  out.reserve(f.deltas.size());
  for (double delta : f.deltas) {
    ChartedMetric md;
    md.dim = f.base.dim;
    md.tag = Catalog::custom;
    md.charts = f.base.charts;
    if (f.action.fixed_distance) {
      for (Chart& c : md.charts) {
        const auto old = c.extra;
        const auto fd = f.action.fixed_distance;
        c.extra = [old, fd, rho](const Eigen::VectorXd& x) {
          if (old && !old(x)) return false;
          return fd(x) >= rho;
        };
      }
    }
    const CollapseFamily fam = f;
    md.g = [fam, delta](const Eigen::VectorXd& x) { return fam.at(delta, x); };
    try {
      out.push_back(curvature_bounds(md, grid));
    } catch (const std::runtime_error&) {
      throw std::runtime_error("curvature_sweep: grid touches the fixed set");
    } catch (const std::logic_error&) {
      // the rho margin filtered out every sample point
      throw std::runtime_error("curvature_sweep: grid touches the fixed set");
    }
  }
  return out;
}

SweepResult collapse_sweep(const CollapseFamily& f, double rho, const QuadratureSpec& quad,
                           const GridSpec& grid) {
  SweepResult res;
  res.rho = rho;
  res.base_volume = volume(f.base, quad);
  const auto vols = volume_sweep(f, quad);
  const auto curvs = curvature_sweep(f, rho, grid);
  res.rows.resize(f.deltas.size());
  for (std::size_t i = 0; i < f.deltas.size(); ++i) {
    res.rows[i].delta = f.deltas[i];
    res.rows[i].vol = vols[i].second;
    res.rows[i].curv = curvs[i];
  }
  res.vol_nondecreasing = true;
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (res.rows[i].vol < res.rows[i - 1].vol - 1e-12) res.vol_nondecreasing = false;
  res.vol_below_base = true;
  for (const SweepRow& r : res.rows)
    if (r.vol > res.base_volume + 1e-9) res.vol_below_base = false;
  return res;
}

void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  os << "delta,vol,K_min,K_max,ricci_min\n";
  for (const SweepRow& r : s.rows)
    os << r.delta << ',' << r.vol << ',' << r.curv.K_min << ',' << r.curv.K_max << ','
       << r.curv.ricci_min << '\n';
}

// ---------------------------------------------------------------------------
// Subspace volume comparisons

namespace {

struct GramPair {
  Eigen::MatrixXd g1, g2;  // A^T h1 A, B^T h2 B
  bool hypothesis_ok;
};

GramPair prepare_grams(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                       const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2) {
  const auto l = A.cols();
  if (B.cols() != l || l < 1)
    throw std::invalid_argument("lemma61: A and B must have the same positive column count");
  if (h1.rows() != A.rows() || h1.cols() != A.rows() || h2.rows() != B.rows() ||
      h2.cols() != B.rows())
    throw std::invalid_argument("lemma61: inner-product dimensions do not match the bases");

  GramPair gp;
  gp.g1 = A.transpose() * h1 * A;
  gp.g2 = B.transpose() * h2 * B;

  // F must meet V1 and V2 trivially, i.e. both projections injective
  const double s1 = gp.g1.cwiseAbs().maxCoeff(), s2 = gp.g2.cwiseAbs().maxCoeff();
  if (gp.g1.determinant() <= 1e-12 * std::pow(std::max(s1, 1e-30), static_cast<double>(l)) ||
      gp.g2.determinant() <= 1e-12 * std::pow(std::max(s2, 1e-30), static_cast<double>(l)))
    throw std::invalid_argument("lemma61: F meets a factor nontrivially");

  // norm hypothesis: h1(v,v) <= h2(w,w) on F, i.e. g2 - g1 >= 0
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gp.g2 - gp.g1);
  gp.hypothesis_ok = es.eigenvalues().minCoeff() >= -1e-9 * (1.0 + s2);
  return gp;
}

}  // namespace

Lemma61Projection lemma61_projection_bound(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                           const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2) {
  const GramPair gp = prepare_grams(A, B, h1, h2);
  const double l = static_cast<double>(A.cols());

  Lemma61Projection out;
  out.hypothesis_ok = gp.hypothesis_ok;
  const double det_I = gp.g1.determinant() / (gp.g1 + gp.g2).determinant();
  out.det_I_sq = det_I * det_I;
  const double det_F = std::sqrt(gp.g1.determinant() / gp.g2.determinant());
  out.bound = std::pow(4.0, -l) * std::pow(det_F, 4.0 * l);
  out.holds = out.hypothesis_ok && out.det_I_sq >= out.bound - 1e-12 * (1.0 + out.bound);
  return out;
}

Lemma61Quotient lemma61_quotient_volume(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                        const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2,
                                        double lambda) {
  if (!(lambda > 0) || lambda > 1.0)
    throw std::invalid_argument("lemma61_quotient_volume: lambda must lie in (0, 1]");
  const GramPair gp = prepare_grams(A, B, h1, h2);

  const auto n1 = A.rows(), n2 = B.rows(), l = A.cols();
  const auto n = n1 + n2;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  H.topLeftCorner(n1, n1) = h1;
  H.bottomRightCorner(n2, n2) = h2;
  Eigen::MatrixXd C(n, l);
  C.topRows(n1) = A;
  C.bottomRows(n2) = B;

  const Eigen::MatrixXd P = C * (C.transpose() * H * C).ldlt().solve(C.transpose() * H);
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n) - P;
  const Eigen::MatrixXd hbar =
      lambda * P.transpose() * H * P + Q.transpose() * H * Q;

  const Eigen::MatrixXd S11 = hbar.topLeftCorner(n1, n1);
  const Eigen::MatrixXd S12 = hbar.topRightCorner(n1, n2);
  const Eigen::MatrixXd S22 = hbar.bottomRightCorner(n2, n2);
  const Eigen::MatrixXd hq = S11 - S12 * S22.ldlt().solve(S12.transpose());

  Lemma61Quotient out;
  out.hypothesis_ok = gp.hypothesis_ok;
  out.ratio = std::sqrt(hq.determinant() / h1.determinant());
  out.holds = out.hypothesis_ok && out.ratio <= 1.0 + 1e-9;
  return out;
}

}  // namespace minent
