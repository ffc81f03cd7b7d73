#include <minent/hyperbolic.hpp>

#include <minent/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace minent::hyp {

Mobius compose(const Mobius& s, const Mobius& t) {
  Mobius r;
  r.a = s.a * t.a + s.b * std::conj(t.b);
  r.b = s.a * t.b + s.b * std::conj(t.a);
  const double det = std::norm(r.a) - std::norm(r.b);
  const double f = 1.0 / std::sqrt(det);
  r.a *= f;
  r.b *= f;
  return r;
}

Mobius inverse(const Mobius& s) { return {std::conj(s.a), -s.b}; }

cplx apply(const Mobius& s, cplx z) {
  return (s.a * z + s.b) / (std::conj(s.b) * z + std::conj(s.a));
}

cplx deriv(const Mobius& s, cplx z) {
  const cplx d = std::conj(s.b) * z + std::conj(s.a);
  return 1.0 / (d * d);
}

double dist(cplx z, cplx w) {
  const double den = (1.0 - std::norm(z)) * (1.0 - std::norm(w));
  return std::acosh(1.0 + 2.0 * std::norm(z - w) / den);
}

double dist0(cplx z) { return 2.0 * std::atanh(std::abs(z)); }

const std::array<Mobius, 8>& octagon_generators() {
  static const std::array<Mobius, 8> gens = [] {
    std::array<Mobius, 8> g;
    const double ch = 1.0 + std::sqrt(2.0);
    const double sh = std::sqrt(ch * ch - 1.0);
    for (int k = 0; k < 8; ++k) {
      const double th = k * M_PI / 4.0;
      g[k].a = cplx(ch, 0.0);
      g[k].b = std::polar(sh, th);
    }
    return g;
  }();
  return gens;
}

double octagon_circumradius() {
  static const double r = std::acosh(3.0 + 2.0 * std::sqrt(2.0));
  return r;
}

namespace {

const std::array<cplx, 8>& octagon_centers() {
  static const std::array<cplx, 8> c = [] {
    std::array<cplx, 8> out;
    for (int k = 0; k < 8; ++k) out[k] = apply(octagon_generators()[k], cplx(0.0, 0.0));
    return out;
  }();
  return c;
}

}  // namespace

bool in_octagon(cplx z, double tol) {
  const double d0 = dist0(z);
  for (const cplx& c : octagon_centers())
    if (dist(z, c) < d0 - tol) return false;
  return true;
}

Mobius wrap_octagon(cplx& z) {
  Mobius acc;
  for (int iter = 0; iter < 256; ++iter) {
    const double d0 = dist0(z);
    int best = -1;
    double bestd = d0 - 1e-13;
    for (int k = 0; k < 8; ++k) {
      const double d = dist(z, octagon_centers()[k]);
      if (d < bestd) {
        bestd = d;
        best = k;
      }
    }
    if (best < 0) return acc;
    const Mobius inv = inverse(octagon_generators()[best]);
    z = apply(inv, z);
    acc = compose(inv, acc);
  }
  return acc;  // boundary ping-pong; z is within tolerance of the domain
}

std::vector<Mobius> short_elements(double radius) {
  std::vector<Mobius> out;
  std::set<std::pair<long long, long long>> seen;
  auto key = [](cplx z) {
    return std::make_pair(llround(z.real() * 1e9), llround(z.imag() * 1e9));
  };
  std::vector<Mobius> cur{Mobius{}};
  out.push_back(Mobius{});
  seen.insert(key(cplx(0.0, 0.0)));
  while (!cur.empty()) {
    std::vector<Mobius> nxt;
    for (const Mobius& g : cur)
      for (const Mobius& t : octagon_generators()) {
        const Mobius h = compose(g, t);
        const cplx z = apply(h, cplx(0.0, 0.0));
        if (dist0(z) > radius) continue;
        if (!seen.insert(key(z)).second) continue;
        out.push_back(h);
        nxt.push_back(h);
      }
    cur.swap(nxt);
  }
  return out;
}

double quotient_dist(cplx z, cplx w, const std::vector<Mobius>& shorts) {
  double best = dist(z, w);
  for (const Mobius& g : shorts) best = std::min(best, dist(z, apply(g, w)));
  return best;
}

// ---------------------------------------------------------------------------
// Breadth-first orbit counting

namespace {

constexpr double kGrid = 1e-9;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t cell_fp(long long kx, long long ky) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(kx)) ^
                    (mix64(static_cast<std::uint64_t>(ky)) << 1 |
                     mix64(static_cast<std::uint64_t>(ky)) >> 63);
  return h ? h : 1;
}

struct FpTable {
  std::vector<std::uint64_t> slots;
  std::uint64_t mask;

  explicit FpTable(std::size_t want) {
    std::size_t n = 1 << 16;
    while (n < want) n <<= 1;
    slots.assign(n, 0);
    mask = n - 1;
  }
  bool contains(std::uint64_t fp) const {
    for (std::uint64_t i = fp & mask;; i = (i + 1) & mask) {
      if (slots[i] == 0) return false;
      if (slots[i] == fp) return true;
    }
  }
  void insert(std::uint64_t fp) {
    for (std::uint64_t i = fp & mask;; i = (i + 1) & mask) {
      if (slots[i] == fp) return;
      if (slots[i] == 0) {
        slots[i] = fp;
        return;
      }
    }
  }
};

// Positions of one orbit point computed along different words agree to
// ~1e-13; distinct orbit points are >= 5e-8 apart at the radii used. A
// point within 2.5e-12 of a cell wall is looked up in the wall-side
// neighbors too, so revisits can never slip into a fresh cell unnoticed.
bool seen_or_mark(FpTable& table, cplx z) {
  const double rx = z.real() / kGrid, ry = z.imag() / kGrid;
  const long long kx = llround(rx), ky = llround(ry);
  const double fx = rx - kx, fy = ry - ky;
  constexpr double near = 0.5 - 2.5e-3;

  long long xs[2] = {kx, 0}, ys[2] = {ky, 0};
  int nx = 1, ny = 1;
  if (fx > near) xs[nx++] = kx + 1;
  else if (fx < -near) xs[nx++] = kx - 1;
  if (fy > near) ys[ny++] = ky + 1;
  else if (fy < -near) ys[ny++] = ky - 1;

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (table.contains(cell_fp(xs[i], ys[j]))) return true;
  table.insert(cell_fp(kx, ky));
  return false;
}

}  // namespace

std::vector<long long> orbit_counts(cplx p, cplx q, const std::vector<double>& Ts) {
  if (Ts.empty()) return {};
  wrap_octagon(p);
  wrap_octagon(q);
  const double tmax = *std::max_element(Ts.begin(), Ts.end());
  const double accept = tmax + 2.0 * octagon_circumradius() + 0.5;

  // element count ~ area growth / covolume = e^R / 4
  const double est = std::exp(std::min(accept, 19.0)) / 4.0 * 1.4 + 1024.0;
  FpTable table(static_cast<std::size_t>(2.5 * est));

  std::vector<long long> counts(Ts.size(), 0);
  auto tally = [&](double L) {
    for (std::size_t j = 0; j < Ts.size(); ++j)
      if (L <= Ts[j]) ++counts[j];
  };

  std::vector<Mobius> cur, nxt;
  cur.push_back(Mobius{});
  seen_or_mark(table, q);
  tally(dist(p, q));

  while (!cur.empty()) {
    nxt.clear();
    for (const Mobius& g : cur)
      for (const Mobius& t : octagon_generators()) {
        const Mobius h = compose(g, t);
        const cplx z = apply(h, q);
        const double L = dist(p, z);
        if (L > accept) continue;
        if (seen_or_mark(table, z)) continue;
        tally(L);
        nxt.push_back(h);
      }
    cur.swap(nxt);
  }
  return counts;
}

long long orbit_count(cplx p, cplx q, double T) {
  return orbit_counts(p, q, {T}).front();
}

std::vector<Mobius> orbit_elements(cplx p, cplx q, double T) {
  wrap_octagon(p);
  wrap_octagon(q);
  const double accept = T + 2.0 * octagon_circumradius() + 0.5;
  if (accept > 19.0) throw std::invalid_argument("orbit_elements: T too large to enumerate");

  const double est = std::exp(accept) / 4.0 * 1.4 + 1024.0;
  FpTable table(static_cast<std::size_t>(2.5 * est));

  std::vector<Mobius> out;
  std::vector<Mobius> cur, nxt;
  cur.push_back(Mobius{});
  seen_or_mark(table, q);
  if (dist(p, q) <= T) out.push_back(Mobius{});

  while (!cur.empty()) {
    nxt.clear();
    for (const Mobius& g : cur)
      for (const Mobius& t : octagon_generators()) {
        const Mobius h = compose(g, t);
        const cplx z = apply(h, q);
        const double L = dist(p, z);
        if (L > accept) continue;
        if (seen_or_mark(table, z)) continue;
        if (L <= T) out.push_back(h);
        nxt.push_back(h);
      }
    cur.swap(nxt);
  }
  return out;
}

}  // namespace minent::hyp

// ---------------------------------------------------------------------------
// Catalog constructor (declared in geometry.hpp)

namespace minent {

ChartedMetric hyperbolic_genus2() {
  ChartedMetric m;
  m.dim = 2;
  m.tag = Catalog::hyperbolic_quotient;
  Chart c;
  const double lim = std::tanh(hyp::octagon_circumradius() / 2.0) + 1e-3;
  c.lo = Eigen::Vector2d(-lim, -lim);
  c.hi = Eigen::Vector2d(lim, lim);
  c.extra = [](const Eigen::VectorXd& x) {
    return hyp::in_octagon(hyp::cplx(x[0], x[1]), 1e-9);
  };
  m.charts.push_back(c);
  for (const hyp::Mobius& g : hyp::octagon_generators()) {
    Eigen::Matrix2cd M;
    M << g.a, g.b, std::conj(g.b), std::conj(g.a);
    m.deck.push_back(M);
  }
  m.g = [](const Eigen::VectorXd& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    const double f = 4.0 / ((1.0 - s) * (1.0 - s));
    return Eigen::MatrixXd(f * Eigen::Matrix2d::Identity());
  };
  m.partials = [](const Eigen::VectorXd& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    const double dfds = 8.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s));
    std::vector<Eigen::MatrixXd> d(2);
    d[0] = 2.0 * x[0] * dfds * Eigen::Matrix2d::Identity();
    d[1] = 2.0 * x[1] * dfds * Eigen::Matrix2d::Identity();
    return d;
  };
  return m;
}

}  // namespace minent
