#include <minent/geometry.hpp>

#include <cmath>
#include <stdexcept>

namespace minent {

bool Chart::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  return !extra || extra(x);
}

bool ChartedMetric::in_chart(const Eigen::VectorXd& x) const {
  for (const Chart& c : charts)
    if (c.contains(x)) return true;
  return false;
}

Eigen::MatrixXd ChartedMetric::metric(const Eigen::VectorXd& x) const { return g(x); }

// ---------------------------------------------------------------------------
// Catalog constructors

ChartedMetric round_sphere(double radius) {
  if (radius <= 0) throw std::invalid_argument("round_sphere: radius must be positive");
  ChartedMetric m;
  m.dim = 2;
  m.tag = Catalog::round_sphere;
  m.radius = radius;
  Chart c;
  c.lo = Eigen::Vector2d(0.0, 0.0);
  c.hi = Eigen::Vector2d(M_PI, 2.0 * M_PI);
  m.charts.push_back(c);
  const double r2 = radius * radius;
  m.g = [r2](const Eigen::VectorXd& x) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2, 2);
    const double s = std::sin(x[0]);
    G(0, 0) = r2;
    G(1, 1) = r2 * s * s;
    return G;
  };
  m.partials = [r2](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> d(2, Eigen::MatrixXd::Zero(2, 2));
    d[0](1, 1) = 2.0 * r2 * std::sin(x[0]) * std::cos(x[0]);
    return d;
  };
  return m;
}

ChartedMetric flat_torus(std::vector<double> sides) {
  if (sides.empty()) throw std::invalid_argument("flat_torus: need side lengths");
  for (double s : sides)
    if (s <= 0) throw std::invalid_argument("flat_torus: sides must be positive");
  ChartedMetric m;
  m.dim = static_cast<int>(sides.size());
  m.tag = Catalog::flat_torus;
  m.sides = sides;
  Chart c;
  c.lo = Eigen::VectorXd::Zero(m.dim);
  c.hi = Eigen::Map<const Eigen::VectorXd>(sides.data(), m.dim);
  m.charts.push_back(c);
  const int n = m.dim;
  m.g = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n); };
  m.partials = [n](const Eigen::VectorXd&) {
    return std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n));
  };
  return m;
}

ChartedMetric hyperbolic_halfplane() {
  ChartedMetric m;
  m.dim = 2;
  m.tag = Catalog::custom;
  Chart c;
  c.lo = Eigen::Vector2d(-1e3, 1e-6);
  c.hi = Eigen::Vector2d(1e3, 1e6);
  m.charts.push_back(c);
  m.g = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(Eigen::Matrix2d::Identity() / (x[1] * x[1]));
  };
  m.partials = [](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> d(2, Eigen::MatrixXd::Zero(2, 2));
    const double y = x[1];
    d[1] = -2.0 / (y * y * y) * Eigen::Matrix2d::Identity();
    return d;
  };
  return m;
}

ChartedMetric product_metric(const ChartedMetric& a, const ChartedMetric& b) {
  ChartedMetric m;
  m.dim = a.dim + b.dim;
  m.tag = Catalog::product;
  m.left = std::make_shared<const ChartedMetric>(a);
  m.right = std::make_shared<const ChartedMetric>(b);
  const int na = a.dim, nb = b.dim;
  for (const Chart& ca : a.charts)
    for (const Chart& cb : b.charts) {
      Chart c;
      c.lo.resize(m.dim);
      c.hi.resize(m.dim);
      c.lo << ca.lo, cb.lo;
      c.hi << ca.hi, cb.hi;
      if (ca.extra || cb.extra) {
        auto ea = ca.extra, eb = cb.extra;
        c.extra = [ea, eb, na, nb](const Eigen::VectorXd& x) {
          if (ea && !ea(x.head(na))) return false;
          if (eb && !eb(x.tail(nb))) return false;
          return true;
        };
      }
      m.charts.push_back(c);
    }
  auto ga = m.left, gb = m.right;
  m.g = [ga, gb, na, nb](const Eigen::VectorXd& x) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(na + nb, na + nb);
    G.topLeftCorner(na, na) = ga->g(x.head(na));
    G.bottomRightCorner(nb, nb) = gb->g(x.tail(nb));
    return G;
  };
  if (a.partials && b.partials) {
    m.partials = [ga, gb, na, nb](const Eigen::VectorXd& x) {
      std::vector<Eigen::MatrixXd> d(na + nb, Eigen::MatrixXd::Zero(na + nb, na + nb));
      auto da = ga->partials(x.head(na));
      auto db = gb->partials(x.tail(nb));
      for (int k = 0; k < na; ++k) d[k].topLeftCorner(na, na) = da[k];
      for (int k = 0; k < nb; ++k) d[na + k].bottomRightCorner(nb, nb) = db[k];
      return d;
    };
  }
  return m;
}

ChartedMetric custom_metric(int dim, std::vector<Chart> charts, MetricField g,
                            PartialsField partials) {
  if (dim < 1) throw std::invalid_argument("custom_metric: bad dimension");
  if (charts.empty()) throw std::invalid_argument("custom_metric: need at least one chart");
  if (!g) throw std::invalid_argument("custom_metric: need a metric field");
  ChartedMetric m;
  m.dim = dim;
  m.tag = Catalog::custom;
  m.charts = std::move(charts);
  m.g = std::move(g);
  m.partials = std::move(partials);
  return m;
}

// ---------------------------------------------------------------------------
// Text specs

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> parse_csv(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = strip(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (!tok.empty()) {
      if (auto eq = tok.find('='); eq != std::string::npos) tok = tok.substr(eq + 1);
      out.push_back(std::stod(tok));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

ChartedMetric parse_metric_spec(const std::string& text) {
  const std::string s = strip(text);
  if (s.rfind("sphere:", 0) == 0) {
    auto vals = parse_csv(s.substr(7));
    if (vals.size() != 1) throw std::invalid_argument("sphere spec wants one radius");
    return round_sphere(vals[0]);
  }
  if (s.rfind("torus:", 0) == 0) {
    auto vals = parse_csv(s.substr(6));
    if (vals.empty()) throw std::invalid_argument("torus spec wants side lengths");
    return flat_torus(vals);
  }
  if (s.rfind("hyperbolic:", 0) == 0) {
    const std::string which = strip(s.substr(11));
    if (which == "genus2-octagon") return hyperbolic_genus2();
    if (which == "halfplane") return hyperbolic_halfplane();
    throw std::invalid_argument("unknown hyperbolic catalog '" + which + "'");
  }
  if (s.rfind("product:", 0) == 0) {
    const std::string body = strip(s.substr(8));
    if (body.empty() || body[0] != '(')
      throw std::invalid_argument("product spec wants (left)x(right)");
    int depth = 0;
    std::size_t split = std::string::npos;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '(') ++depth;
      else if (body[i] == ')') {
        --depth;
        if (depth == 0) {
          split = i;
          break;
        }
      }
    }
    if (split == std::string::npos) throw std::invalid_argument("unbalanced product spec");
    std::string rest = strip(body.substr(split + 1));
    if (rest.size() < 3 || (rest[0] != 'x' && rest[0] != 'X'))
      throw std::invalid_argument("product spec wants (left)x(right)");
    std::string right = strip(rest.substr(1));
    if (right.empty() || right.front() != '(' || right.back() != ')')
      throw std::invalid_argument("product spec wants (left)x(right)");
    return product_metric(parse_metric_spec(body.substr(1, split - 1)),
                          parse_metric_spec(right.substr(1, right.size() - 2)));
  }
  throw std::invalid_argument("unknown metric spec '" + text + "'");
}

// ---------------------------------------------------------------------------
// Christoffel symbols and curvature

namespace {

double fd_step(const Eigen::VectorXd& x, double base) { return base * (1.0 + x.norm()); }

std::vector<Eigen::MatrixXd> metric_partials(const ChartedMetric& m, const Eigen::VectorXd& x) {
  if (m.partials) return m.partials(x);
  const int n = m.dim;
  const double h = fd_step(x, 1e-5);
  std::vector<Eigen::MatrixXd> d(n);
  Eigen::VectorXd xp = x, xm = x;
  for (int k = 0; k < n; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    d[k] = (m.g(xp) - m.g(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return d;
}

}  // namespace

void christoffel_into(const ChartedMetric& m, const Eigen::VectorXd& x,
                      std::vector<Eigen::MatrixXd>& out) {
  if (!m.in_chart(x)) throw std::domain_error("christoffel: point outside charts");
  detail::christoffel_raw_into(m, x, out);
}

void detail::christoffel_raw_into(const ChartedMetric& m, const Eigen::VectorXd& x,
                                  std::vector<Eigen::MatrixXd>& out) {
  const int n = m.dim;
  const Eigen::MatrixXd G = m.g(x);
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("christoffel: metric not positive definite at point");
  const Eigen::MatrixXd Ginv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  const auto dg = metric_partials(m, x);

  out.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += Ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out[k](i, j) = 0.5 * acc;
        out[k](j, i) = out[k](i, j);
      }
}

std::vector<Eigen::MatrixXd> christoffel(const ChartedMetric& m, const Eigen::VectorXd& x) {
  std::vector<Eigen::MatrixXd> out;
  christoffel_into(m, x, out);
  return out;
}

std::vector<double> riemann_lowered(const ChartedMetric& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  const auto gamma = christoffel(m, x);

  // dgamma[mu][k](i,j) = d_mu Gamma^k_ij; the outer difference step is larger
  // when the inner Christoffels themselves come from differences.
  const double h = fd_step(x, m.partials ? 1e-5 : 1e-4);
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(n);
  Eigen::VectorXd xp = x, xm = x;
  std::vector<Eigen::MatrixXd> gp, gm;
  for (int mu = 0; mu < n; ++mu) {
    xp[mu] = x[mu] + h;
    xm[mu] = x[mu] - h;
    christoffel_into(m, xp, gp);
    christoffel_into(m, xm, gm);
    dgamma[mu].resize(n);
    for (int k = 0; k < n; ++k) dgamma[mu][k] = (gp[k] - gm[k]) / (2.0 * h);
    xp[mu] = x[mu];
    xm[mu] = x[mu];
  }

  const Eigen::MatrixXd G = m.g(x);
  auto up = [&](int r, int s, int mu, int nu) {
    double v = dgamma[mu][r](nu, s) - dgamma[nu][r](mu, s);
    for (int l = 0; l < n; ++l)
      v += gamma[r](mu, l) * gamma[l](nu, s) - gamma[r](nu, l) * gamma[l](mu, s);
    return v;
  };

  std::vector<double> R(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < n; ++s)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          double v = 0.0;
          for (int r = 0; r < n; ++r) v += G(a, r) * up(r, s, mu, nu);
          R[((static_cast<std::size_t>(a) * n + s) * n + mu) * n + nu] = v;
        }
  return R;
}

namespace {

double riemann_quad(const std::vector<double>& R, int n, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& w) {
  // R(u, w, u, w)
  double acc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < n; ++s)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
          acc += R[((static_cast<std::size_t>(a) * n + s) * n + mu) * n + nu] * u[a] * w[s] *
                 u[mu] * w[nu];
  return acc;
}

}  // namespace

double sectional_curvature(const ChartedMetric& m, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd G = m.g(x);
  const double uu = u.dot(G * u), ww = w.dot(G * w), uw = u.dot(G * w);
  const double area2 = uu * ww - uw * uw;
  if (area2 <= 1e-12 * std::max(1.0, uu * ww))
    throw std::invalid_argument("sectional_curvature: degenerate plane");
  return riemann_quad(riemann_lowered(m, x), m.dim, u, w) / area2;
}

CurvatureReport curvature_bounds(const ChartedMetric& m, const GridSpec& grid) {
  if (grid.per_dim < 2) throw std::invalid_argument("curvature_bounds: grid too small");
  const int n = m.dim;
  CurvatureReport rep;
  rep.dimension = n;
  bool any = false;

  for (const Chart& chart : m.charts) {
    std::vector<int> idx(n, 0);
    while (true) {
      Eigen::VectorXd x(n);
      for (int d = 0; d < n; ++d) {
        const double t = grid.margin + (1.0 - 2.0 * grid.margin) * idx[d] / (grid.per_dim - 1.0);
        x[d] = chart.lo[d] + (chart.hi[d] - chart.lo[d]) * t;
      }
      if (!chart.extra || chart.extra(x)) {
        const auto R = riemann_lowered(m, x);
        const Eigen::MatrixXd G = m.g(x);
        const Eigen::MatrixXd Ginv = G.inverse();

        double kmin = 0.0, kmax = 0.0;
        bool firstplane = true;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            const double den = G(i, i) * G(j, j) - G(i, j) * G(i, j);
            const double K =
                R[((static_cast<std::size_t>(i) * n + j) * n + i) * n + j] / den;
            kmin = firstplane ? K : std::min(kmin, K);
            kmax = firstplane ? K : std::max(kmax, K);
            firstplane = false;
          }

        Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
        for (int s = 0; s < n; ++s)
          for (int nu = 0; nu < n; ++nu) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a)
              for (int mu = 0; mu < n; ++mu)
                acc += Ginv(a, mu) * R[((static_cast<std::size_t>(a) * n + s) * n + mu) * n + nu];
            ric(s, nu) = acc;
          }
        ric = 0.5 * (ric + ric.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ric, G);
        const double rmin = es.eigenvalues().minCoeff();
        const double scalar = (Ginv * ric).trace();

        if (!any) {
          rep.K_min = kmin;
          rep.K_max = kmax;
          rep.ricci_min = rmin;
          rep.scalar_min = rep.scalar_max = scalar;
          any = true;
        } else {
          rep.K_min = std::min(rep.K_min, kmin);
          rep.K_max = std::max(rep.K_max, kmax);
          rep.ricci_min = std::min(rep.ricci_min, rmin);
          rep.scalar_min = std::min(rep.scalar_min, scalar);
          rep.scalar_max = std::max(rep.scalar_max, scalar);
        }
      }

      int d = 0;
      while (d < n && ++idx[d] == grid.per_dim) idx[d++] = 0;
      if (d == n) break;
    }
  }
  if (!any) throw std::invalid_argument("curvature_bounds: empty sample grid");
  rep.k_bound = std::max(std::abs(rep.K_min), std::abs(rep.K_max));
  return rep;
}

double chart_integral(const ChartedMetric& m,
                      const std::function<double(const Eigen::VectorXd&)>& f,
                      const QuadratureSpec& quad) {
  const int n = m.dim;
  auto pass = [&](int pts) {
    double total = 0.0;
    for (const Chart& chart : m.charts) {
      std::vector<double> w1(pts);
      for (int i = 0; i < pts; ++i)
        w1[i] = (i == 0 || i == pts - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      Eigen::VectorXd h(n);
      double cell = 1.0;
      for (int d = 0; d < n; ++d) {
        h[d] = (chart.hi[d] - chart.lo[d]) / (pts - 1);
        cell *= h[d] / 3.0;
      }
      std::vector<int> idx(n, 0);
      Eigen::VectorXd x(n);
      double acc = 0.0;
      while (true) {
        double w = 1.0;
        for (int d = 0; d < n; ++d) {
          x[d] = chart.lo[d] + idx[d] * h[d];
          w *= w1[idx[d]];
        }
        if (!chart.extra || chart.extra(x)) {
          const double det = m.g(x).determinant();
          acc += w * f(x) * std::sqrt(std::max(det, 0.0));
        }
        int d = 0;
        while (d < n && ++idx[d] == pts) idx[d++] = 0;
        if (d == n) break;
      }
      total += acc * cell;
    }
    return total;
  };

  int pts = std::max(3, quad.points_per_dim | 1);
  double value = pass(pts);
  for (int r = 0; r < quad.max_refine; ++r) {
    const int fine = 2 * pts - 1;
    const double next = pass(fine);
    const bool settled = std::abs(next - value) <= quad.tol * std::max(1.0, std::abs(next));
    value = next;
    pts = fine;
    if (settled) return value;
  }
  throw std::runtime_error("chart_integral: quadrature too coarse, value did not stabilize");
}

double volume(const ChartedMetric& m, const QuadratureSpec& quad) {
  return chart_integral(m, [](const Eigen::VectorXd&) { return 1.0; }, quad);
}

}  // namespace minent
