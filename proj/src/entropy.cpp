#include <minent/entropy.hpp>

#include <minent/hyperbolic.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace minent {

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double u() { return (eng() >> 11) * 0x1.0p-53; }
};

double pairwise_sum(const double* a, std::size_t n) {
  if (n <= 4) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}

double pairwise_sum(const std::vector<double>& a) { return pairwise_sum(a.data(), a.size()); }

double injectivity_scale(const ChartedMetric& m) {
  switch (m.tag) {
    case Catalog::flat_torus:
      return *std::min_element(m.sides.begin(), m.sides.end()) / 2.0;
    case Catalog::round_sphere:
      return M_PI * m.radius;
    case Catalog::hyperbolic_quotient:
      return std::acosh(1.0 + std::sqrt(2.0));  // half the systole
    case Catalog::product:
      return std::min(injectivity_scale(*m.left), injectivity_scale(*m.right));
    case Catalog::custom:
      return 1.0;
  }
  return 1.0;
}

Eigen::VectorXd sample_point(const ChartedMetric& m, Rng& rng) {
  switch (m.tag) {
    case Catalog::flat_torus: {
      Eigen::VectorXd x(m.dim);
      for (int i = 0; i < m.dim; ++i) x[i] = rng.u() * m.sides[i];
      return x;
    }
    case Catalog::round_sphere: {
      Eigen::VectorXd x(2);
      x[0] = std::acos(1.0 - 2.0 * rng.u());
      x[1] = 2.0 * M_PI * rng.u();
      return x;
    }
    case Catalog::hyperbolic_quotient: {
      const double R = hyp::octagon_circumradius();
      for (int tries = 0; tries < 100000; ++tries) {
        const double r = std::acosh(1.0 + rng.u() * (std::cosh(R) - 1.0));
        const double th = 2.0 * M_PI * rng.u();
        const double rho = std::tanh(r / 2.0);
        const hyp::cplx z = std::polar(rho, th);
        if (hyp::in_octagon(z))
          return Eigen::Vector2d(z.real(), z.imag());
      }
      throw std::runtime_error("sample_point: rejection sampling failed");
    }
    case Catalog::product: {
      Eigen::VectorXd x(m.dim);
      x << sample_point(*m.left, rng), sample_point(*m.right, rng);
      return x;
    }
    case Catalog::custom: {
      const Chart& c = m.charts.at(0);
      Eigen::VectorXd x(m.dim);
      for (int i = 0; i < m.dim; ++i) x[i] = c.lo[i] + rng.u() * (c.hi[i] - c.lo[i]);
      return x;
    }
  }
  throw std::logic_error("sample_point");
}

bool degenerate_pair(const ChartedMetric& m, const Eigen::VectorXd& p,
                     const Eigen::VectorXd& q) {
  const double d = catalog_distance(m, p, q);
  if (d < 1e-3) return true;
  if (m.tag == Catalog::round_sphere && std::abs(d - M_PI * m.radius) < 1e-3) return true;
  return false;
}

GrowthFit fit_growth(const std::vector<double>& Ts, const std::vector<double>& logs) {
  GrowthFit fit;
  fit.Ts = Ts;
  fit.logs = logs;
  const int k = static_cast<int>(Ts.size());
  if (k < 3) {
    fit.slope = 0.0;
    fit.residual = std::numeric_limits<double>::infinity();
    return fit;
  }
  Eigen::MatrixXd A(k, 3);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(Ts[i]);
    A(i, 2) = Ts[i];
    b[i] = logs[i];
  }
  const Eigen::Vector3d x = A.colPivHouseholderQr().solve(b);
  fit.slope = x[2];
  fit.residual = (A * x - b).norm() / std::sqrt(static_cast<double>(k));
  return fit;
}

std::vector<double> t_grid(double t_lo, double t_hi, int k) {
  std::vector<double> Ts(k);
  for (int i = 0; i < k; ++i) Ts[i] = t_lo + (t_hi - t_lo) * i / (k - 1);
  return Ts;
}

void attach_brackets(const ChartedMetric& m, EntropyEstimate& est) {
  try {
    est.lower_bracket = volume_entropy(m);
  } catch (const std::invalid_argument&) {
    // custom metric: universal cover unknown
  }
  const CurvatureReport rep = curvature_bounds(m);
  est.upper_bracket = manning_upper_bound(rep).coarse;
}

}  // namespace

EntropyEstimate mane_estimate(const ChartedMetric& m, int pairs, double T_max,
                              std::uint64_t seed) {
  if (pairs < 8) throw std::invalid_argument("mane_estimate: need at least 8 pairs");
  if (T_max < 5.0 * injectivity_scale(m))
    throw std::invalid_argument("mane_estimate: T_max below five injectivity radii");

  Rng rng(seed);
  const std::vector<double> Ts = t_grid(T_max / 2.0, T_max, 16);
  std::vector<std::vector<double>> counts(Ts.size());

  EntropyEstimate est;
  est.method = "mane";
  est.seed = seed;

  for (int pair = 0; pair < pairs; ++pair) {
    Eigen::VectorXd p = sample_point(m, rng), q = sample_point(m, rng);
    for (int guard = 0; guard < 1000 && degenerate_pair(m, p, q); ++guard)
      q = sample_point(m, rng);

    if (m.tag == Catalog::hyperbolic_quotient) {
      const auto c =
          hyp::orbit_counts(hyp::cplx(p[0], p[1]), hyp::cplx(q[0], q[1]), Ts);
      for (std::size_t i = 0; i < Ts.size(); ++i)
        counts[i].push_back(static_cast<double>(c[i]));
    } else if (m.tag == Catalog::custom) {
      ShootSpec spec;
      spec.stability_check = (pair == 0);
      const ArcQuery arcs = shoot_arcs(m, p, q, T_max, spec);
      if (arcs.resolution_warning) est.warnings.push_back("non-stabilized-counts");
      for (std::size_t i = 0; i < Ts.size(); ++i) {
        long long n = 0;
        for (const GeodesicArc& a : arcs.arcs)
          if (a.length <= Ts[i]) ++n;
        counts[i].push_back(static_cast<double>(n));
      }
    } else {
      for (std::size_t i = 0; i < Ts.size(); ++i)
        counts[i].push_back(static_cast<double>(count_arcs(m, p, q, Ts[i])));
    }
  }

  std::vector<double> gridT, gridLog;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const double avg = pairwise_sum(counts[i]) / pairs;
    if (avg <= 0.0) continue;
    gridT.push_back(Ts[i]);
    gridLog.push_back(std::log(avg));
  }
  est.fit = fit_growth(gridT, gridLog);
  est.value = std::max(est.fit.slope, 0.0);
  if (!(est.fit.residual <= 0.5)) est.warnings.push_back("insufficient-T");
  attach_brackets(m, est);
  return est;
}

EntropyEstimate separated_set_estimate(const ChartedMetric& m, double eps, double T,
                                       int samples, std::uint64_t seed, double speed) {
  if (eps <= 0) throw std::invalid_argument("separated_set_estimate: eps must be positive");
  if (samples < 2) throw std::invalid_argument("separated_set_estimate: need >= 2 samples");
  if (speed == 0) throw std::invalid_argument("separated_set_estimate: zero flow speed");
  if (T <= 0) throw std::invalid_argument("separated_set_estimate: T must be positive");

  Rng rng(seed);
  constexpr int kCheckpoints = 64;
  const std::vector<double> Ts = t_grid(T / 2.0, T, 16);

  // sample unit-tangent states and record orbit checkpoints
  std::vector<std::vector<Eigen::VectorXd>> orbit(samples);
  for (int s = 0; s < samples; ++s) {
    GeodesicState st;
    st.x = sample_point(m, rng);
    Eigen::VectorXd v(m.dim);
    for (int i = 0; i < m.dim; ++i) {
      // Box-Muller; isotropic directions in any dimension
      const double u1 = std::max(rng.u(), 1e-300), u2 = rng.u();
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    st.v = v * (speed / std::sqrt(v.dot(m.g(st.x) * v)));
    orbit[s].reserve(kCheckpoints);
    orbit[s].push_back(st.x);
    const double dt = T / (kCheckpoints - 1);
    for (int j = 1; j < kCheckpoints; ++j) {
      st = integrate(m, st, dt, 0.02);
      orbit[s].push_back(st.x);
    }
  }

  // prefix-max orbit distances at the grid checkpoints
  std::vector<int> grid_idx(Ts.size());
  for (std::size_t g = 0; g < Ts.size(); ++g)
    grid_idx[g] =
        std::min<int>(kCheckpoints - 1, static_cast<int>(std::llround(Ts[g] / T * (kCheckpoints - 1))));

  const int N = samples;
  std::vector<std::vector<double>> sep(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      std::vector<double>& row = sep[static_cast<std::size_t>(i) * N + j];
      row.resize(Ts.size());
      double run = 0.0;
      std::size_t g = 0;
      for (int k = 0; k < kCheckpoints && g < Ts.size(); ++k) {
        run = std::max(run, catalog_distance(m, orbit[i][k], orbit[j][k]));
        while (g < Ts.size() && grid_idx[g] == k) row[g++] = run;
      }
    }

  EntropyEstimate est;
  est.method = "separated";
  est.seed = seed;

  std::vector<double> logs(Ts.size());
  long long last_card = 0;
  for (std::size_t g = 0; g < Ts.size(); ++g) {
    std::vector<int> kept;
    for (int i = 0; i < N; ++i) {
      bool ok = true;
      for (int j : kept)
        if (sep[static_cast<std::size_t>(j) * N + i][g] < eps) {
          ok = false;
          break;
        }
      if (ok) kept.push_back(i);
    }
    last_card = static_cast<long long>(kept.size());
    logs[g] = std::log(static_cast<double>(kept.size()));
  }
  if (last_card == samples) est.warnings.push_back("sample-starvation");

  est.fit = fit_growth(Ts, logs);
  est.value = std::max(est.fit.slope, 0.0);
  attach_brackets(m, est);
  return est;
}

double volume_entropy(const ChartedMetric& m) {
  switch (m.tag) {
    case Catalog::round_sphere:
    case Catalog::flat_torus:
      return 0.0;
    case Catalog::hyperbolic_quotient: {
      // log-derivative of the hyperbolic disk area 2 pi (cosh r - 1)
      const double r = 40.0;
      return std::sinh(r) / (std::cosh(r) - 1.0);
    }
    case Catalog::product:
      return std::hypot(volume_entropy(*m.left), volume_entropy(*m.right));
    case Catalog::custom:
      throw std::invalid_argument("volume_entropy: universal cover unknown for custom metrics");
  }
  throw std::logic_error("volume_entropy");
}

double scale_entropy(double h, double c) {
  if (c <= 0) throw std::invalid_argument("scale_entropy: scale must be positive");
  return h / std::sqrt(c);
}

double product_entropy(double h1, double h2) {
  if (h1 < 0 || h2 < 0) throw std::invalid_argument("product_entropy: negative entropy");
  return std::hypot(h1, h2);
}

ManningBound manning_upper_bound(const CurvatureReport& rep) {
  ManningBound out;
  const double n1 = rep.dimension - 1;
  out.coarse = n1 * std::sqrt(std::max(rep.k_bound, 0.0));
  if (rep.K_max > 0) {
    const double s = std::sqrt(rep.K_max);
    out.refined = n1 / 2.0 * s - rep.ricci_min / (2.0 * s);
  }
  return out;
}

ChainReport chain_check(const ChainInputs& in) {
  ChainReport rep;
  rep.inputs = in;
  constexpr double tol = 0.1;
  const double ln = std::pow(in.lambda, in.n);
  const double hn = std::pow(in.h, in.n);

  if (in.simplicial_volume && in.c_n) {
    rep.norm_vs_lambda.evaluated = true;
    rep.norm_vs_lambda.slack = ln - *in.c_n * *in.simplicial_volume;
    rep.norm_vs_lambda.holds = rep.norm_vs_lambda.slack >= -tol;
  }
  rep.lambda_vs_h.evaluated = true;
  rep.lambda_vs_h.slack = in.h - in.lambda;
  rep.lambda_vs_h.holds = rep.lambda_vs_h.slack >= -tol;

  if (in.min_vol) {
    rep.h_vs_minvol.evaluated = true;
    rep.h_vs_minvol.slack = std::pow(static_cast<double>(in.n - 1), in.n) * *in.min_vol - hn;
    rep.h_vs_minvol.holds = rep.h_vs_minvol.slack >= -tol;
  }
  return rep;
}

}  // namespace minent
