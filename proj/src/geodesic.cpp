#include <minent/geodesic.hpp>

#include <minent/hyperbolic.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace minent {

namespace {

struct Force {
  const ChartedMetric& m;
  std::vector<Eigen::MatrixXd> gamma;

  void accel(const Eigen::VectorXd& x, const Eigen::VectorXd& v, Eigen::VectorXd& a) {
    detail::christoffel_raw_into(m, x, gamma);
    const int n = m.dim;
    a.resize(n);
    for (int k = 0; k < n; ++k) a[k] = -v.dot(gamma[k] * v);
  }
};

struct Rk4Work {
  Eigen::VectorXd k1v, k2v, k3v, k4v, xt, vt, xacc, vacc;
};

// one classical step of the geodesic equation; k1v must hold accel(x, v)
void rk4_step(Force& F, Eigen::VectorXd& x, Eigen::VectorXd& v, double h, Rk4Work& w) {
  w.xt = x + 0.5 * h * v;
  w.vt = v + 0.5 * h * w.k1v;
  w.xacc = v + 2.0 * w.vt;
  F.accel(w.xt, w.vt, w.k2v);

  w.xt = x + 0.5 * h * w.vt;
  w.vt = v + 0.5 * h * w.k2v;
  w.xacc += 2.0 * w.vt;
  F.accel(w.xt, w.vt, w.k3v);

  w.xt = x + h * w.vt;
  w.vt = v + h * w.k3v;
  w.xacc += w.vt;
  F.accel(w.xt, w.vt, w.k4v);

  x += (h / 6.0) * w.xacc;
  v += (h / 6.0) * (w.k1v + 2.0 * w.k2v + 2.0 * w.k3v + w.k4v);
}

const std::vector<hyp::Mobius>& genus2_shorts() {
  static const std::vector<hyp::Mobius> v =
      hyp::short_elements(2.0 * hyp::octagon_circumradius() + 1.0);
  return v;
}

Eigen::Vector3d sphere_embed(const Eigen::VectorXd& x) {
  const double st = std::sin(x[0]), ct = std::cos(x[0]);
  return {st * std::cos(x[1]), st * std::sin(x[1]), ct};
}

}  // namespace

double speed(const ChartedMetric& m, const GeodesicState& s) {
  return std::sqrt(s.v.dot(m.g(s.x) * s.v));
}

void wrap_state(const ChartedMetric& m, GeodesicState& s) {
  switch (m.tag) {
    case Catalog::flat_torus: {
      for (int i = 0; i < m.dim; ++i) {
        s.x[i] = std::fmod(s.x[i], m.sides[i]);
        if (s.x[i] < 0) s.x[i] += m.sides[i];
      }
      break;
    }
    case Catalog::round_sphere: {
      double& th = s.x[0];
      double& ph = s.x[1];
      for (int guard = 0; guard < 16 && (th < 0.0 || th > M_PI); ++guard) {
        if (th < 0.0) {
          th = -th;
          ph += M_PI;
          s.v[0] = -s.v[0];
        } else {
          th = 2.0 * M_PI - th;
          ph += M_PI;
          s.v[0] = -s.v[0];
        }
      }
      ph = std::fmod(ph, 2.0 * M_PI);
      if (ph < 0) ph += 2.0 * M_PI;
      break;
    }
    case Catalog::hyperbolic_quotient: {
      hyp::cplx z(s.x[0], s.x[1]);
      const hyp::cplx z0 = z;
      const hyp::Mobius g = hyp::wrap_octagon(z);
      const hyp::cplx w = hyp::deriv(g, z0) * hyp::cplx(s.v[0], s.v[1]);
      s.x[0] = z.real();
      s.x[1] = z.imag();
      s.v[0] = w.real();
      s.v[1] = w.imag();
      break;
    }
    case Catalog::product: {
      const int na = m.left->dim;
      GeodesicState a{s.x.head(na), s.v.head(na)};
      GeodesicState b{s.x.tail(m.dim - na), s.v.tail(m.dim - na)};
      wrap_state(*m.left, a);
      wrap_state(*m.right, b);
      s.x << a.x, b.x;
      s.v << a.v, b.v;
      break;
    }
    case Catalog::custom:
      break;
  }
}

GeodesicState integrate(const ChartedMetric& m, GeodesicState s, double t, double step) {
  if (step <= 0) throw std::invalid_argument("integrate: step must be positive");
  if (t < 0) throw std::invalid_argument("integrate: negative duration");
  if (m.tag == Catalog::custom) {
    if (!m.in_chart(s.x)) throw std::domain_error("integrate: start outside charts");
  } else {
    wrap_state(m, s);  // canonical representative; seam points are legitimate
  }
  if (t == 0) return s;

  Force F{m, {}};
  Rk4Work w;
  const long nsteps = static_cast<long>(std::ceil(t / step));
  const double h0 = t / nsteps;
  for (long i = 0; i < nsteps; ++i) {
    F.accel(s.x, s.v, w.k1v);
    // near chart singularities (polar axis) the forcing blows up; subdivide
    int sub = 1;
    const double load = h0 * h0 * w.k1v.lpNorm<Eigen::Infinity>();
    if (load > 0.05) sub = std::min(256, static_cast<int>(std::ceil(std::sqrt(load / 0.05))));
    const double h = h0 / sub;
    for (int j = 0; j < sub; ++j) {
      if (j > 0) F.accel(s.x, s.v, w.k1v);
      rk4_step(F, s.x, s.v, h, w);
    }
    wrap_state(m, s);
    if (m.tag == Catalog::custom && !m.in_chart(s.x))
      throw std::domain_error("integrate: trajectory left the atlas");
  }
  return s;
}

double catalog_distance(const ChartedMetric& m, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q) {
  switch (m.tag) {
    case Catalog::flat_torus: {
      double acc = 0.0;
      for (int i = 0; i < m.dim; ++i) {
        const double L = m.sides[i];
        const double d = std::abs(p[i] - q[i] - std::round((p[i] - q[i]) / L) * L);
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Catalog::round_sphere: {
      const double c = std::clamp(sphere_embed(p).dot(sphere_embed(q)), -1.0, 1.0);
      return m.radius * std::acos(c);
    }
    case Catalog::hyperbolic_quotient:
      return hyp::quotient_dist(hyp::cplx(p[0], p[1]), hyp::cplx(q[0], q[1]), genus2_shorts());
    case Catalog::product: {
      const int na = m.left->dim;
      const double dl = catalog_distance(*m.left, p.head(na), q.head(na));
      const double dr = catalog_distance(*m.right, p.tail(m.dim - na), q.tail(m.dim - na));
      return std::hypot(dl, dr);
    }
    case Catalog::custom:
      return (p - q).norm();
  }
  throw std::logic_error("catalog_distance");
}

// ---------------------------------------------------------------------------
// Arc shooting

namespace {

// unit initial velocity for a chart angle
Eigen::VectorXd unit_dir(const ChartedMetric& m, const Eigen::VectorXd& p, double alpha) {
  Eigen::VectorXd u(2);
  u << std::cos(alpha), std::sin(alpha);
  return u / std::sqrt(u.dot(m.g(p) * u));
}

struct Candidate {
  double alpha;
  double t_hint;
  Eigen::Vector2d q_rep;  // unwrapped lattice representative (torus only)
  int winding = 0;        // sphere only
};

// --- flat torus: chart geodesics are straight lines -----------------------

std::vector<GeodesicArc> shoot_torus(const ChartedMetric& m, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& q, double T, const ShootSpec& spec) {
  const int N = spec.directions;
  const double dalpha = 2.0 * M_PI / N;
  const double band = std::max(2.0 * T * dalpha, 4.0 * spec.step);
  const Eigen::Vector2d a(m.sides[0], m.sides[1]);

  auto nearest_rep = [&](const Eigen::Vector2d& x) {
    Eigen::Vector2d r;
    for (int i = 0; i < 2; ++i) r[i] = q[i] + std::round((x[i] - q[i]) / a[i]) * a[i];
    return r;
  };

  std::vector<Candidate> cands;
  const int K = static_cast<int>(std::ceil(T / spec.step));
  std::vector<double> D(K + 1);
  for (int i = 0; i < N; ++i) {
    const double alpha = i * dalpha;
    const Eigen::Vector2d v(std::cos(alpha), std::sin(alpha));
    for (int k = 0; k <= K; ++k) {
      const Eigen::Vector2d x = p.head<2>() + std::min(k * spec.step, T) * v;
      D[k] = (x - nearest_rep(x)).norm();
    }
    for (int k = 1; k <= K; ++k) {
      const bool interior_min = k < K && D[k] <= D[k - 1] && D[k] < D[k + 1];
      const bool end_min = k == K && D[k] < D[k - 1];
      if ((interior_min || end_min) && D[k] <= band) {
        const Eigen::Vector2d x = p.head<2>() + std::min(k * spec.step, T) * v;
        cands.push_back({alpha, k * spec.step, nearest_rep(x), 0});
      }
    }
  }

  std::vector<GeodesicArc> arcs;
  for (const Candidate& c : cands) {
    // secant on the signed perpendicular miss of the straight line
    auto miss = [&](double alpha) {
      const Eigen::Vector2d v(std::cos(alpha), std::sin(alpha));
      const Eigen::Vector2d d = c.q_rep - p.head<2>();
      return v[0] * d[1] - v[1] * d[0];
    };
    double a0 = c.alpha, a1 = c.alpha + 0.25 * dalpha;
    double m0 = miss(a0), m1 = miss(a1);
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      if (std::abs(m1) <= spec.endpoint_tol) {
        ok = true;
        break;
      }
      const double den = m1 - m0;
      if (den == 0.0) break;
      const double a2 = a1 - m1 * (a1 - a0) / den;
      a0 = a1;
      m0 = m1;
      a1 = a2;
      m1 = miss(a1);
    }
    if (!ok) continue;
    const Eigen::Vector2d d = c.q_rep - p.head<2>();
    const double L = d.norm();
    if (L > T + 1e-9 || d.dot(Eigen::Vector2d(std::cos(a1), std::sin(a1))) < 0) continue;
    GeodesicArc arc;
    arc.p = p;
    arc.q = q;
    arc.length = L;
    arc.angle = std::atan2(d[1], d[0]);
    arc.direction = unit_dir(m, p, arc.angle);
    const int nsamp = 16;
    for (int s = 0; s <= nsamp; ++s) {
      Eigen::VectorXd x = p + (L * s / nsamp) * (d / L);
      GeodesicState st{x, arc.direction};
      wrap_state(m, st);
      arc.samples.push_back(st.x);
    }
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

// --- round sphere ----------------------------------------------------------

std::vector<GeodesicArc> shoot_sphere(const ChartedMetric& m, const Eigen::VectorXd& p,
                                      const Eigen::VectorXd& q, double T, const ShootSpec& spec) {
  const int N = spec.directions;
  const double dalpha = 2.0 * M_PI / N;
  const double band = std::max(2.0 * T * dalpha, 4.0 * spec.step);
  const double r = m.radius;
  const double d0 = catalog_distance(m, p, q);
  const Eigen::Vector3d P = sphere_embed(p), Q = sphere_embed(q);

  auto frame = [&](double alpha) {
    // unit tangent in the embedding for chart angle alpha
    const double st = std::sin(p[0]), ct = std::cos(p[0]);
    const double cp = std::cos(p[1]), sp = std::sin(p[1]);
    const Eigen::Vector3d eth(ct * cp, ct * sp, -st);
    const Eigen::Vector3d eph(-sp, cp, 0.0);
    const Eigen::VectorXd u = unit_dir(m, p, alpha);
    return (r * u[0] * eth + r * std::sin(p[0]) * u[1] * eph).normalized();
  };
  auto miss = [&](double alpha) {
    const Eigen::Vector3d n = P.cross(frame(alpha)).normalized();
    return r * std::asin(std::clamp(Q.dot(n), -1.0, 1.0));
  };
  auto arc_angle = [&](double alpha) {
    // position of q along the oriented great circle, in [0, 2 pi)
    const double c = std::clamp(Q.dot(P), -1.0, 1.0);
    const double s = Q.dot(frame(alpha));
    double ang = std::atan2(s, c);
    if (ang < 0) ang += 2.0 * M_PI;
    return ang;
  };

  std::vector<Candidate> cands;
  const int K = static_cast<int>(std::ceil(T / spec.step));
  std::vector<double> D(K + 1);
  Force F{m, {}};
  Rk4Work w;
  for (int i = 0; i < N; ++i) {
    const double alpha = i * dalpha;
    GeodesicState s{p, unit_dir(m, p, alpha)};
    D[0] = catalog_distance(m, s.x, q);
    for (int k = 1; k <= K; ++k) {
      const double h = std::min(spec.step, T - (k - 1) * spec.step);
      F.accel(s.x, s.v, w.k1v);
      int sub = 1;
      const double load = h * h * w.k1v.lpNorm<Eigen::Infinity>();
      if (load > 0.05) sub = std::min(256, static_cast<int>(std::ceil(std::sqrt(load / 0.05))));
      for (int j = 0; j < sub; ++j) {
        if (j > 0) F.accel(s.x, s.v, w.k1v);
        rk4_step(F, s.x, s.v, h / sub, w);
      }
      wrap_state(m, s);
      D[k] = catalog_distance(m, s.x, q);
    }
    for (int k = 1; k <= K; ++k) {
      const bool interior_min = k < K && D[k] <= D[k - 1] && D[k] < D[k + 1];
      const bool end_min = k == K && D[k] < D[k - 1];
      if ((interior_min || end_min) && D[k] <= band) {
        Candidate c{alpha, k * spec.step, Eigen::Vector2d::Zero(), 0};
        c.winding = static_cast<int>(
            std::llround((k * spec.step - r * arc_angle(alpha)) / (2.0 * M_PI * r)));
        cands.push_back(c);
      }
    }
  }

  std::vector<GeodesicArc> arcs;
  for (const Candidate& c : cands) {
    double a0 = c.alpha, a1 = c.alpha + 0.25 * dalpha;
    double m0 = miss(a0), m1 = miss(a1);
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      if (std::abs(m1) <= spec.endpoint_tol) {
        ok = true;
        break;
      }
      const double den = m1 - m0;
      if (den == 0.0) break;
      const double a2 = a1 - m1 * (a1 - a0) / den;
      a0 = a1;
      m0 = m1;
      a1 = a2;
      m1 = miss(a1);
    }
    if (!ok) continue;
    const double L = r * arc_angle(a1) + c.winding * 2.0 * M_PI * r;
    if (L < d0 - 1e-6 || L > T + 1e-9) continue;
    GeodesicArc arc;
    arc.p = p;
    arc.q = q;
    arc.length = L;
    arc.angle = std::fmod(a1 + 2.0 * M_PI, 2.0 * M_PI);
    arc.direction = unit_dir(m, p, a1);
    const int nsamp = 32;
    for (int s = 0; s <= nsamp; ++s)
      arc.samples.push_back(integrate(m, {p, arc.direction}, L * s / nsamp, spec.step).x);
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

// --- generic 2d chart (no identifications) ---------------------------------

std::vector<GeodesicArc> shoot_plain(const ChartedMetric& m, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& q, double T, const ShootSpec& spec) {
  const int N = spec.directions;
  const double dalpha = 2.0 * M_PI / N;
  const double band = std::max(2.0 * T * dalpha, 4.0 * spec.step);

  const int K = static_cast<int>(std::ceil(T / spec.step));
  std::vector<Eigen::Vector2d> traj(K + 1);
  std::vector<double> D(K + 1);
  Force F{m, {}};
  Rk4Work w;

  auto trace = [&](double alpha) {
    GeodesicState s{p, unit_dir(m, p, alpha)};
    traj[0] = s.x;
    D[0] = (s.x - q).norm();
    for (int k = 1; k <= K; ++k) {
      const double h = std::min(spec.step, T - (k - 1) * spec.step);
      F.accel(s.x, s.v, w.k1v);
      rk4_step(F, s.x, s.v, h, w);
      if (!m.in_chart(s.x)) {
        for (int rest = k; rest <= K; ++rest) {
          traj[rest] = s.x;
          D[rest] = 1e100;
        }
        return;
      }
      traj[k] = s.x;
      D[k] = (s.x - q).norm();
    }
  };
  auto miss_at = [&](double alpha, double t_hint) {
    trace(alpha);
    int k = std::clamp(static_cast<int>(std::llround(t_hint / spec.step)), 1, K - 1);
    while (k > 1 && D[k - 1] < D[k]) --k;
    while (k < K - 1 && D[k + 1] < D[k]) ++k;
    const Eigen::Vector2d d = Eigen::Vector2d(q) - traj[k];
    const Eigen::Vector2d v = (traj[std::min(k + 1, K)] - traj[k - 1]).normalized();
    return std::make_pair(v[0] * d[1] - v[1] * d[0], k * spec.step);
  };

  std::vector<Candidate> cands;
  for (int i = 0; i < N; ++i) {
    const double alpha = i * dalpha;
    trace(alpha);
    for (int k = 1; k <= K; ++k) {
      const bool interior_min = k < K && D[k] <= D[k - 1] && D[k] < D[k + 1];
      const bool end_min = k == K && D[k] < D[k - 1];
      if ((interior_min || end_min) && D[k] <= band)
        cands.push_back({alpha, k * spec.step, Eigen::Vector2d::Zero(), 0});
    }
  }

  std::vector<GeodesicArc> arcs;
  for (const Candidate& c : cands) {
    double a0 = c.alpha, a1 = c.alpha + 0.25 * dalpha;
    double t_hint = c.t_hint;
    double m0 = miss_at(a0, t_hint).first;
    auto r1 = miss_at(a1, t_hint);
    double m1 = r1.first;
    t_hint = r1.second;
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      if (std::abs(m1) <= spec.endpoint_tol) {
        ok = true;
        break;
      }
      const double den = m1 - m0;
      if (den == 0.0) break;
      const double a2 = a1 - m1 * (a1 - a0) / den;
      a0 = a1;
      m0 = m1;
      a1 = a2;
      const auto rn = miss_at(a1, t_hint);
      m1 = rn.first;
      t_hint = rn.second;
    }
    if (!ok) continue;

    // Newton refinement of the closest-approach time on the final trajectory
    double t = t_hint;
    GeodesicState s{p, unit_dir(m, p, a1)};
    for (int it = 0; it < 4; ++it) {
      GeodesicState st = integrate(m, s, t, spec.step);
      Eigen::VectorXd d = st.x - q;
      Eigen::VectorXd a;
      F.accel(st.x, st.v, a);
      const double den = st.v.squaredNorm() + a.dot(d);
      if (den <= 0) break;
      t -= st.v.dot(d) / den;
      t = std::clamp(t, 0.0, T + spec.step);
    }
    GeodesicState fin = integrate(m, s, t, spec.step);
    if ((fin.x - q).norm() > 1e-4) continue;
    if (t > T + 1e-9) continue;
    GeodesicArc arc;
    arc.p = p;
    arc.q = q;
    arc.length = t;  // unit initial speed
    arc.angle = std::fmod(a1 + 2.0 * M_PI, 2.0 * M_PI);
    arc.direction = s.v;
    const int nsamp = 32;
    for (int k = 0; k <= nsamp; ++k)
      arc.samples.push_back(integrate(m, s, t * k / nsamp, spec.step).x);
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

// --- hyperbolic quotient: one arc per deck element -------------------------

std::vector<GeodesicArc> deck_arcs(const ChartedMetric& m, const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q, double T) {
  hyp::cplx zp(p[0], p[1]), zq(q[0], q[1]);
  hyp::wrap_octagon(zp);
  hyp::wrap_octagon(zq);

  // translate zp to the origin to read off initial directions
  const double s = std::sqrt(1.0 - std::norm(zp));
  const hyp::Mobius to0{hyp::cplx(1.0 / s, 0.0), -zp / s};
  const hyp::Mobius from0 = hyp::inverse(to0);
  const double conf = 2.0 / (1.0 - std::norm(zp));  // |dz|_g = conf |dz|

  std::vector<GeodesicArc> arcs;
  for (const hyp::Mobius& g : hyp::orbit_elements(zp, zq, T)) {
    const hyp::cplx w = hyp::apply(g, zq);
    const double L = hyp::dist(zp, w);
    if (L < 1e-12) continue;
    const hyp::cplx u0 = hyp::apply(to0, w);
    const hyp::cplx dir0 = u0 / std::abs(u0);
    hyp::cplx v = hyp::deriv(from0, hyp::cplx(0.0, 0.0)) * dir0;
    v /= std::abs(v) * conf;  // unit g-speed
    GeodesicArc arc;
    arc.p = p;
    arc.q = q;
    arc.length = L;
    arc.angle = std::atan2(v.imag(), v.real());
    arc.direction = Eigen::Vector2d(v.real(), v.imag());
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

std::vector<GeodesicArc> shoot_once(const ChartedMetric& m, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& q, double T, const ShootSpec& spec) {
  switch (m.tag) {
    case Catalog::flat_torus:
      return shoot_torus(m, p, q, T, spec);
    case Catalog::round_sphere:
      return shoot_sphere(m, p, q, T, spec);
    default:
      return shoot_plain(m, p, q, T, spec);
  }
}

void dedup_arcs(std::vector<GeodesicArc>& arcs, int directions) {
  const double half_cell = M_PI / directions;
  std::sort(arcs.begin(), arcs.end(), [](const GeodesicArc& a, const GeodesicArc& b) {
    return a.length != b.length ? a.length < b.length : a.angle < b.angle;
  });
  std::vector<GeodesicArc> keep;
  for (GeodesicArc& a : arcs) {
    bool dup = false;
    for (const GeodesicArc& b : keep) {
      double da = std::abs(a.angle - b.angle);
      da = std::min(da, 2.0 * M_PI - da);
      if (da < half_cell && std::abs(a.length - b.length) < 1e-4) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(std::move(a));
  }
  arcs.swap(keep);
}

}  // namespace

ArcQuery shoot_arcs(const ChartedMetric& m, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                    double T, const ShootSpec& spec) {
  if (m.dim != 2) throw std::invalid_argument("shoot_arcs: 2-dimensional charts only");
  if (T <= 0) throw std::invalid_argument("shoot_arcs: T must be positive");
  if (catalog_distance(m, p, q) < 1e-3)
    throw std::invalid_argument("shoot_arcs: p and q coincide up to tolerance");
  if (m.tag == Catalog::round_sphere &&
      std::abs(catalog_distance(m, p, q) - M_PI * m.radius) < 1e-6)
    throw std::invalid_argument("shoot_arcs: antipodal endpoints are conjugate");

  ArcQuery out;
  if (m.tag == Catalog::hyperbolic_quotient) {
    out.arcs = deck_arcs(m, p, q, T);
    return out;
  }
  out.arcs = shoot_once(m, p, q, T, spec);
  dedup_arcs(out.arcs, spec.directions);
  if (spec.stability_check) {
    ShootSpec fine = spec;
    fine.directions *= 2;
    fine.stability_check = false;
    auto check = shoot_once(m, p, q, T, fine);
    dedup_arcs(check, fine.directions);
    if (check.size() != out.arcs.size()) out.resolution_warning = true;
  }
  return out;
}

long long count_arcs(const ChartedMetric& m, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                     double T, const ShootSpec& spec) {
  if (T <= 0) return 0;
  switch (m.tag) {
    case Catalog::flat_torus: {
      // lattice translates within radius T
      const int n = m.dim;
      Eigen::VectorXd delta = q - p;
      long long count = 0;
      std::vector<long long> lo(n), hi(n), k(n);
      for (int i = 0; i < n; ++i) {
        lo[i] = static_cast<long long>(std::ceil((-T - delta[i]) / m.sides[i]));
        hi[i] = static_cast<long long>(std::floor((T - delta[i]) / m.sides[i]));
        if (lo[i] > hi[i]) return 0;
        k[i] = lo[i];
      }
      while (true) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          const double d = delta[i] + k[i] * m.sides[i];
          acc += d * d;
        }
        if (acc <= T * T) ++count;
        int i = 0;
        for (; i < n; ++i) {
          if (++k[i] <= hi[i]) break;
          k[i] = lo[i];
        }
        if (i == n) break;
      }
      return count;
    }
    case Catalog::round_sphere: {
      const double d = catalog_distance(m, p, q);
      const double C = 2.0 * M_PI * m.radius;
      if (d < 1e-9) throw std::invalid_argument("count_arcs: coincident endpoints");
      if (std::abs(d - C / 2.0) < 1e-9)
        throw std::invalid_argument("count_arcs: antipodal endpoints are conjugate");
      long long count = 0;
      if (T >= d) count += static_cast<long long>(std::floor((T - d) / C)) + 1;
      if (T >= C - d) count += static_cast<long long>(std::floor((T - (C - d)) / C)) + 1;
      return count;
    }
    case Catalog::hyperbolic_quotient: {
      hyp::cplx zp(p[0], p[1]), zq(q[0], q[1]);
      return hyp::orbit_count(zp, zq, T);
    }
    default:
      return static_cast<long long>(shoot_arcs(m, p, q, T, spec).arcs.size());
  }
}

void write_arcs_csv(std::ostream& os, const std::vector<GeodesicArc>& arcs) {
  os << "px,py,qx,qy,length,angle\n";
  for (const GeodesicArc& a : arcs)
    os << a.p[0] << ',' << a.p[1] << ',' << a.q[0] << ',' << a.q[1] << ',' << a.length << ','
       << a.angle << '\n';
}

}  // namespace minent
