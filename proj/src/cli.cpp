#include <minent/cli.hpp>

#include <minent/barden.hpp>
#include <minent/collapse.hpp>
#include <minent/entropy.hpp>
#include <minent/forms.hpp>
#include <minent/loop_growth.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace minent {

namespace {

using nlohmann::json;

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << content;
  if (content.empty() || content.back() != '\n') f << '\n';
}

json fit_json(const GrowthFit& fit) {
  json j;
  j["Ts"] = fit.Ts;
  j["logs"] = fit.logs;
  j["slope"] = fit.slope;
  j["residual"] = fit.residual;
  return j;
}

json estimate_json(const EntropyEstimate& est) {
  json j;
  j["method"] = est.method;
  j["h"] = est.value;
  j["lambda"] = est.lower_bracket ? json(*est.lower_bracket) : json();
  j["upper"] = est.upper_bracket ? json(*est.upper_bracket) : json();
  j["fit"] = fit_json(est.fit);
  j["seed"] = est.seed;
  j["warnings"] = est.warnings;
  j["timestamp"] = timestamp_utc();
  return j;
}

std::string estimate_csv(const EntropyEstimate& est) {
  std::ostringstream os;
  os << "T,log_avg\n";
  for (std::size_t i = 0; i < est.fit.Ts.size(); ++i)
    os << est.fit.Ts[i] << ',' << est.fit.logs[i] << '\n';
  return os.str();
}

json verdict_json(const Verdict& v) {
  json j;
  j["evaluated"] = v.evaluated;
  j["holds"] = v.holds;
  j["slack"] = v.slack;
  return j;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad number in list: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// shared state for one invocation
struct RunState {
  std::string out_path;
  std::string format = "json";
  bool strict = false;
  int rc = 0;

  void finish(const json& j) const { emit(out_path, j.dump(2)); }
  void need_json() const {
    if (format != "json")
      throw std::invalid_argument("--format csv is not available for this subcommand");
  }
  void escalate() {
    if (strict) rc = 3;
  }
};

CircleAction action_for(const ChartedMetric& m, const std::string& spec) {
  if (spec == "rotation") {
    if (m.tag != Catalog::round_sphere)
      throw std::invalid_argument("rotation action needs a sphere catalog metric");
    return rotation_action(m.radius);
  }
  const std::string key = "translation:";
  if (spec.rfind(key, 0) == 0) {
    if (m.tag != Catalog::flat_torus)
      throw std::invalid_argument("translation action needs a torus catalog metric");
    return translation_action(m.sides, parse_int_list(spec.substr(key.size())));
  }
  if (spec.empty()) {
    if (m.tag == Catalog::round_sphere) return rotation_action(m.radius);
    if (m.tag == Catalog::flat_torus) {
      std::vector<int> w(m.sides.size(), 0);
      w[0] = 1;
      return translation_action(m.sides, w);
    }
  }
  throw std::invalid_argument("unknown action spec: " + spec);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "minent: geodesic-flow entropy estimators, circle-collapse metric sweeps, and\n"
      "minimal-entropy classification of simply connected 4- and 5-manifolds"};
  app.require_subcommand(1);
  app.fallthrough();

  RunState st;
  app.add_option("--out", st.out_path, "write the report to this file (default: stdout)");
  app.add_option("--format", st.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--strict", st.strict, "escalate numerical warnings to exit code 3");

  // --- entropy ---------------------------------------------------------
  auto* entropy = app.add_subcommand(
      "entropy", "topological entropy of a geodesic flow: Mane averaged arc counts, "
                 "Bowen separated sets, or volume entropy of the universal cover");
  entropy->require_subcommand(1);

  struct {
    std::string metric;
    double tmax = 20.0;
    int pairs = 8;
    std::uint64_t seed = 0;
  } mane_cfg;
  auto* mane = entropy->add_subcommand(
      "mane", "growth rate of the averaged count of geodesic arcs joining random "
              "endpoint pairs (Mane's entropy formula)");
  mane->add_option("--metric", mane_cfg.metric, "metric spec, e.g. torus:1,1 or sphere:r=1")
      ->required();
  mane->add_option("--Tmax", mane_cfg.tmax, "largest arc length; fit window is [Tmax/2, Tmax]")
      ->required();
  mane->add_option("--pairs", mane_cfg.pairs, "number of sampled endpoint pairs (>= 8)");
  mane->add_option("--seed", mane_cfg.seed, "RNG seed");
  mane->callback([&] {
    const ChartedMetric m = parse_metric_spec(mane_cfg.metric);
    const EntropyEstimate est = mane_estimate(m, mane_cfg.pairs, mane_cfg.tmax, mane_cfg.seed);
    if (!est.warnings.empty()) st.escalate();
    if (st.format == "csv")
      emit(st.out_path, estimate_csv(est));
    else
      st.finish(estimate_json(est));
  });

  struct {
    std::string metric;
    double eps = 0.1;
    double T = 20.0;
    int samples = 64;
    double speed = 1.0;
    std::uint64_t seed = 0;
  } sep_cfg;
  auto* sep = entropy->add_subcommand(
      "separated", "growth rate of maximal (T, eps)-separated orbit sets under the "
                   "Bowen metric d_T");
  sep->add_option("--metric", sep_cfg.metric, "metric spec")->required();
  sep->add_option("--eps", sep_cfg.eps, "separation threshold");
  sep->add_option("--T", sep_cfg.T, "observation time")->required();
  sep->add_option("--samples", sep_cfg.samples, "sampled unit-tangent states");
  sep->add_option("--speed", sep_cfg.speed, "flow-speed rescaling (entropy scales by |c|)");
  sep->add_option("--seed", sep_cfg.seed, "RNG seed");
  sep->callback([&] {
    const ChartedMetric m = parse_metric_spec(sep_cfg.metric);
    const EntropyEstimate est = separated_set_estimate(m, sep_cfg.eps, sep_cfg.T,
                                                       sep_cfg.samples, sep_cfg.seed,
                                                       sep_cfg.speed);
    if (!est.warnings.empty()) st.escalate();
    if (st.format == "csv")
      emit(st.out_path, estimate_csv(est));
    else
      st.finish(estimate_json(est));
  });

  struct {
    std::string metric;
  } vol_cfg;
  auto* vol = entropy->add_subcommand(
      "volume", "volume entropy: exponential growth rate of universal-cover ball volume");
  vol->add_option("--metric", vol_cfg.metric, "catalog metric spec")->required();
  vol->callback([&] {
    const ChartedMetric m = parse_metric_spec(vol_cfg.metric);
    const double lam = volume_entropy(m);
    EntropyEstimate est;
    est.method = "volume_entropy";
    est.value = lam;
    est.lower_bracket = lam;
    st.need_json();
    st.finish(estimate_json(est));
  });

  // --- collapse-sweep ---------------------------------------------------
  struct {
    std::string metric = "sphere:r=1";
    std::string action = "";
    std::string deltas = "0.0001,0.001,0.01,0.1,1";
    double rho = 0.1;
    int grid_points = 9;
  } sweep_cfg;
  auto* sweep = app.add_subcommand(
      "collapse-sweep", "volumes and curvature of the circle-collapse family g_delta "
                        "(orbit direction shrunk by delta/(delta+eps))");
  sweep->add_option("--metric", sweep_cfg.metric, "invariant base metric (sphere/torus catalog)");
  sweep->add_option("--action", sweep_cfg.action,
                    "circle action: rotation | translation:k1,k2 (default by catalog)");
  sweep->add_option("--deltas", sweep_cfg.deltas, "comma-separated collapse parameters");
  sweep->add_option("--rho", sweep_cfg.rho, "fixed-set clearance for the curvature grid");
  sweep->add_option("--grid-points", sweep_cfg.grid_points, "curvature grid points per dim");
  sweep->callback([&] {
    const ChartedMetric m = parse_metric_spec(sweep_cfg.metric);
    const CircleAction act = action_for(m, sweep_cfg.action);
    const CollapseFamily fam =
        make_collapse_family(m, act, parse_double_list(sweep_cfg.deltas));
    GridSpec grid;
    grid.per_dim = sweep_cfg.grid_points;
    const SweepResult res = collapse_sweep(fam, sweep_cfg.rho, sweep_quadrature(), grid);
    if (!res.vol_nondecreasing || !res.vol_below_base) st.escalate();
    if (st.format == "csv") {
      std::ostringstream os;
      write_sweep_csv(os, res);
      emit(st.out_path, os.str());
      return;
    }
    json j;
    j["rho"] = res.rho;
    j["base_volume"] = res.base_volume;
    j["vol_nondecreasing"] = res.vol_nondecreasing;
    j["vol_below_base"] = res.vol_below_base;
    j["rows"] = json::array();
    for (const SweepRow& r : res.rows) {
      json row;
      row["delta"] = r.delta;
      row["vol"] = r.vol;
      row["K_min"] = r.curv.K_min;
      row["K_max"] = r.curv.K_max;
      row["ricci_min"] = r.curv.ricci_min;
      j["rows"].push_back(row);
    }
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  // --- lemma61-check ----------------------------------------------------
  struct {
    int l = 1;
    int n1 = 3;
    int n2 = 3;
    int count = 1000;
    double lambda = 0.5;
    std::uint64_t seed = 0;
  } lem_cfg;
  auto* lem = app.add_subcommand(
      "lemma61-check", "randomized check of the subspace volume comparisons behind the "
                       "collapse estimates: projection determinant bound and quotient "
                       "volume contraction");
  lem->add_option("--l", lem_cfg.l, "subspace dimension (1..5)")->check(CLI::Range(1, 5));
  lem->add_option("--n1", lem_cfg.n1, "dimension of the first factor");
  lem->add_option("--n2", lem_cfg.n2, "dimension of the second factor");
  lem->add_option("--count", lem_cfg.count, "random trials");
  lem->add_option("--lambda", lem_cfg.lambda, "rescaling parameter in (0, 1]");
  lem->add_option("--seed", lem_cfg.seed, "RNG seed");
  lem->callback([&] {
    if (lem_cfg.l > lem_cfg.n1 || lem_cfg.l > lem_cfg.n2)
      throw std::invalid_argument("lemma61-check: l must not exceed n1, n2");
    std::mt19937_64 eng(lem_cfg.seed);
    auto uni = [&] { return (eng() >> 11) * 0x1.0p-53; };
    auto rand_mat = [&](int r, int c) {
      Eigen::MatrixXd M(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = 2.0 * uni() - 1.0;
      return M;
    };
    auto rand_spd = [&](int n) {
      const Eigen::MatrixXd L = rand_mat(n, n);
      return Eigen::MatrixXd(L.transpose() * L + 0.2 * Eigen::MatrixXd::Identity(n, n));
    };
    int fail_a = 0, fail_b = 0;
    for (int trial = 0; trial < lem_cfg.count; ++trial) {
      const Eigen::MatrixXd h1 = rand_spd(lem_cfg.n1), h2 = rand_spd(lem_cfg.n2);
      const Eigen::MatrixXd L1 = Eigen::LLT<Eigen::MatrixXd>(h1).matrixL().transpose();
      const Eigen::MatrixXd L2 = Eigen::LLT<Eigen::MatrixXd>(h2).matrixL().transpose();
      Eigen::MatrixXd B = rand_mat(lem_cfg.n2, lem_cfg.l);
      Eigen::MatrixXd Phi = rand_mat(lem_cfg.n1, lem_cfg.n2);
      const double smax = Phi.jacobiSvd().singularValues()(0);
      Phi *= (0.05 + 0.95 * uni()) / smax;
      const Eigen::MatrixXd A = L1.triangularView<Eigen::Upper>().solve(Phi * L2 * B);
      if (!lemma61_projection_bound(A, B, h1, h2).holds) ++fail_a;
      if (!lemma61_quotient_volume(A, B, h1, h2, lem_cfg.lambda).holds) ++fail_b;
    }
    // l = 1 equality case: unit vectors on both sides
    Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(lem_cfg.n1, 1);
    e1(0, 0) = 1.0;
    Eigen::MatrixXd e2 = Eigen::MatrixXd::Zero(lem_cfg.n2, 1);
    e2(0, 0) = 1.0;
    const Lemma61Projection eq = lemma61_projection_bound(
        e1, e2, Eigen::MatrixXd::Identity(lem_cfg.n1, lem_cfg.n1),
        Eigen::MatrixXd::Identity(lem_cfg.n2, lem_cfg.n2));
    if (fail_a + fail_b > 0) st.escalate();
    st.need_json();
    json j;
    j["l"] = lem_cfg.l;
    j["n1"] = lem_cfg.n1;
    j["n2"] = lem_cfg.n2;
    j["count"] = lem_cfg.count;
    j["lambda"] = lem_cfg.lambda;
    j["projection_failures"] = fail_a;
    j["quotient_failures"] = fail_b;
    j["equality_case"] = {{"det_I_sq", eq.det_I_sq}, {"bound", eq.bound}};
    j["seed"] = lem_cfg.seed;
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  // --- tor-growth -------------------------------------------------------
  struct {
    std::int64_t a = 2;
    int n = 10;
  } tor_cfg;
  auto* tor = app.add_subcommand(
      "tor-growth", "loop-space homology growth: the Tor recurrence b_i = 2a b_{i-1} - "
                    "b_{i-2} and its exponential rate a + sqrt(a^2 - 1)");
  tor->add_option("--a", tor_cfg.a, "field dimension of H_2")->required();
  tor->add_option("--n", tor_cfg.n, "last index to print");
  tor->callback([&] {
    const std::vector<BigInt> b = tor_betti_sequence(tor_cfg.a, tor_cfg.n);
    if (st.format == "csv") {
      std::ostringstream os;
      os << "i,b\n";
      for (std::size_t i = 0; i < b.size(); ++i) os << i << ',' << b[i].str() << '\n';
      emit(st.out_path, os.str());
      return;
    }
    const GrowthClass gc = growth_class(tor_cfg.a);
    json j;
    j["a"] = tor_cfg.a;
    j["n"] = tor_cfg.n;
    j["terms"] = json::array();
    for (const BigInt& v : b) j["terms"].push_back(v.str());
    j["growth"] = {{"kind", gc.kind == GrowthClass::exponential ? "exponential" : "polynomial"},
                   {"rate", gc.rate}};
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  // --- classify4 --------------------------------------------------------
  struct {
    std::string word;
  } c4_cfg;
  auto* c4 = app.add_subcommand(
      "classify4", "simply connected 4-manifold connected sums: intersection form, "
                   "homeomorphism type, rational ellipticity, minimal entropy");
  c4->add_option("--word", c4_cfg.word,
                 "comma-separated generators among S4, CP2, CP2~, S2xS2, K3 (empty = S^4)");
  c4->callback([&] {
    const Word4 word = parse_word4(c4_cfg.word);
    const IntersectionForm form = form_of_word(word);
    const Decision4 dec = entropy_decision_4m(word);
    st.need_json();
    json j;
    j["input"] = c4_cfg.word;
    j["form"] = {{"rank", form.rank()},
                 {"signature", form.signature()},
                 {"even", form.even()}};
    j["homeotype"] = form.rank() <= 2 ? json(homeotype_b2le2(form)) : json();
    j["rationally_elliptic"] = rationally_elliptic_4m(form.rank());
    j["minimal_entropy"] = dec.minimal_entropy;
    j["solvable"] = dec.solvable;
    j["witness"] = dec.witness;
    j["t_structure"] = true;
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  // --- classify5 --------------------------------------------------------
  struct {
    std::string h2;
    std::string i = "0";
  } c5_cfg;
  auto* c5 = app.add_subcommand(
      "classify5", "simply connected 5-manifolds by the Barden invariants (H_2, i): "
                   "block decomposition, ellipticity, minimal entropy");
  c5->add_option("--h2", c5_cfg.h2, "H_2 as Z^r + torsion, e.g. \"Z2\" or \"Z^2+Z4+Z4\"")
      ->required();
  c5->add_option("--i", c5_cfg.i, "spin-type invariant: 0, 1, 2, ... or inf");
  c5->callback([&] {
    const AbelianGroup h2 = AbelianGroup::parse(c5_cfg.h2);
    const SpinIndex i = SpinIndex::parse(c5_cfg.i);
    const BardenCheck chk = barden_validate(h2, i);
    if (!chk.valid)
      throw std::invalid_argument("invalid (H_2, i) pair: " + chk.reason);
    const auto word = barden_decompose(h2, i);
    const Decision5 dec = entropy_decision_5m(h2, i);
    const TStructureFlags fl = tstructure_flags(h2, i);
    st.need_json();
    json j;
    j["input"] = {{"h2", h2.str()}, {"i", i.str()}};
    j["barden_word"] = json::array();
    for (const BardenBlock& blk : word) j["barden_word"].push_back(blk.str());
    j["elliptic"] = elliptic_5m(h2);
    j["minimal_entropy"] = dec.minimal_entropy;
    j["solvable"] = dec.solvable;
    j["witness"] = dec.witness;
    j["t_structure"] = fl.t_structure;
    j["polarized"] = flag_name(fl.polarized);
    j["minvol_zero"] = flag_name(fl.minvol_zero);
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  // --- brieskorn --------------------------------------------------------
  struct {
    std::string a;
  } br_cfg;
  auto* br = app.add_subcommand(
      "brieskorn", "circle-action weights q_i = lcm(a)/a_i on the Brieskorn variety of "
                   "exponents a1..a4");
  br->add_option("--a", br_cfg.a, "four exponents, e.g. 2,3,7,11")->required();
  br->callback([&] {
    const std::vector<int> a = parse_int_list(br_cfg.a);
    if (a.size() != 4) throw std::invalid_argument("brieskorn: need exactly four exponents");
    const BrieskornWeights w = brieskorn_weights(a[0], a[1], a[2], a[3]);
    st.need_json();
    json j;
    j["a"] = a;
    j["lcm"] = w.lcm;
    j["weights"] = std::vector<std::int64_t>(w.q.begin(), w.q.end());
    j["gcd"] = w.gcd;
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  // --- chain-check ------------------------------------------------------
  struct {
    double lambda = 0.0;
    double h = 0.0;
    int n = 2;
    double norm = -1.0;
    double cn = -1.0;
    double minvol = -1.0;
  } ch_cfg;
  auto* ch = app.add_subcommand(
      "chain-check", "consistency chain c(n)||M|| <= lambda^n <= h^n <= (n-1)^n MinVol "
                     "linking simplicial volume, volume entropy, topological entropy, "
                     "and minimal volume");
  ch->set_help_flag("--help", "print help");  // frees -h so --h can name the entropy
  ch->add_option("--lambda", ch_cfg.lambda, "volume entropy")->required();
  ch->add_option("--h", ch_cfg.h, "topological entropy")->required();
  ch->add_option("--n", ch_cfg.n, "dimension")->required();
  auto* norm_opt = ch->add_option("--norm", ch_cfg.norm, "simplicial volume ||M||");
  auto* cn_opt = ch->add_option("--cn", ch_cfg.cn, "user constant c(n)");
  auto* mv_opt = ch->add_option("--minvol", ch_cfg.minvol, "minimal volume");
  ch->callback([&] {
    ChainInputs in;
    in.lambda = ch_cfg.lambda;
    in.h = ch_cfg.h;
    in.n = ch_cfg.n;
    if (norm_opt->count()) in.simplicial_volume = ch_cfg.norm;
    if (cn_opt->count()) in.c_n = ch_cfg.cn;
    if (mv_opt->count()) in.min_vol = ch_cfg.minvol;
    const ChainReport rep = chain_check(in);
    if (!rep.all_hold()) st.escalate();
    st.need_json();
    json j;
    j["inputs"] = {{"lambda", in.lambda},
                   {"h", in.h},
                   {"n", in.n},
                   {"norm", in.simplicial_volume ? json(*in.simplicial_volume) : json()},
                   {"c_n", in.c_n ? json(*in.c_n) : json()},
                   {"min_vol", in.min_vol ? json(*in.min_vol) : json()}};
    j["norm_vs_lambda"] = verdict_json(rep.norm_vs_lambda);
    j["lambda_vs_h"] = verdict_json(rep.lambda_vs_h);
    j["h_vs_minvol"] = verdict_json(rep.h_vs_minvol);
    j["all_hold"] = rep.all_hold();
    j["timestamp"] = timestamp_utc();
    st.finish(j);
  });

  try {
    app.parse(argc, argv);
    return st.rc;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("minent");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace minent
