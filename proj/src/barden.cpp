#include <minent/barden.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace minent {

namespace {

std::map<std::int64_t, int> factorize(std::int64_t n) {
  std::map<std::int64_t, int> out;
  for (std::int64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  if (n > 1) ++out[n];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// AbelianGroup

AbelianGroup AbelianGroup::from_summands(int rank, std::vector<std::int64_t> summands) {
  if (rank < 0) throw std::invalid_argument("AbelianGroup: negative rank");
  // prime -> exponents, largest first
  std::map<std::int64_t, std::vector<int>> primes;
  for (std::int64_t s : summands) {
    if (s < 1) throw std::invalid_argument("AbelianGroup: torsion summand must be >= 1");
    if (s == 1) continue;
    for (auto& [p, e] : factorize(s)) primes[p].push_back(e);
  }
  std::size_t chain_len = 0;
  for (auto& [p, es] : primes) {
    std::sort(es.begin(), es.end(), std::greater<int>());
    chain_len = std::max(chain_len, es.size());
  }
  AbelianGroup g;
  g.rank = rank;
  g.factors.assign(chain_len, 1);
  for (auto& [p, es] : primes)
    for (std::size_t j = 0; j < es.size(); ++j) {
      std::int64_t pw = 1;
      for (int e = 0; e < es[j]; ++e) pw *= p;
      g.factors[chain_len - 1 - j] *= pw;  // largest exponents into the last factor
    }
  return g;
}

bool AbelianGroup::chain_valid() const {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] < 2) return false;
    if (i > 0 && factors[i] % factors[i - 1] != 0) return false;
  }
  return rank >= 0;
}

std::map<std::int64_t, std::vector<int>> AbelianGroup::primary() const {
  std::map<std::int64_t, std::vector<int>> out;
  for (std::int64_t d : factors)
    for (auto& [p, e] : factorize(d)) out[p].push_back(e);
  for (auto& [p, es] : out) std::sort(es.begin(), es.end());
  return out;
}

AbelianGroup AbelianGroup::parse(const std::string& text) {
  std::vector<std::int64_t> summands;
  int rank = 0;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](char c) { return std::isspace(c); }),
              tok.end());
    if (tok.empty()) continue;
    if (tok == "0") continue;
    if (tok[0] != 'Z') throw std::invalid_argument("AbelianGroup: bad token '" + tok + "'");
    std::string body = tok.substr(1);
    if (!body.empty() && body[0] == '_') body = body.substr(1);
    long long repeat = 1;
    if (auto caret = body.find('^'); caret != std::string::npos) {
      repeat = std::stoll(body.substr(caret + 1));
      body = body.substr(0, caret);
      if (repeat < 0) throw std::invalid_argument("AbelianGroup: negative exponent");
    }
    if (body.empty()) {
      rank += static_cast<int>(repeat);
    } else {
      const std::int64_t n = std::stoll(body);
      if (n < 1) throw std::invalid_argument("AbelianGroup: bad torsion order");
      for (long long r = 0; r < repeat; ++r) summands.push_back(n);
    }
  }
  return from_summands(rank, std::move(summands));
}

std::string AbelianGroup::str() const {
  if (trivial()) return "0";
  std::string out;
  auto add = [&out](const std::string& piece) {
    if (!out.empty()) out += " + ";
    out += piece;
  };
  if (rank == 1) add("Z");
  else if (rank > 1) add("Z^" + std::to_string(rank));
  for (std::int64_t d : factors) add("Z" + std::to_string(d));
  return out;
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  std::vector<std::int64_t> summands = a.factors;
  summands.insert(summands.end(), b.factors.begin(), b.factors.end());
  return AbelianGroup::from_summands(a.rank + b.rank, std::move(summands));
}

// ---------------------------------------------------------------------------
// SpinIndex

SpinIndex SpinIndex::of(int v) {
  if (v < 0) throw std::invalid_argument("SpinIndex: negative value");
  return {false, v};
}

SpinIndex SpinIndex::parse(const std::string& text) {
  if (text == "inf" || text == "infty" || text == "oo") return inf();
  return of(std::stoi(text));
}

std::string SpinIndex::str() const { return infinite ? "inf" : std::to_string(value); }

// ---------------------------------------------------------------------------
// Torsion shape and validation

TorsionShape torsion_shape(const AbelianGroup& g) {
  // count multiplicity of each prime-power summand (p, e)
  std::map<std::pair<std::int64_t, int>, int> counts;
  for (auto& [p, es] : g.primary())
    for (int e : es) ++counts[{p, e}];

  std::vector<std::pair<std::int64_t, int>> odd;
  for (auto& [pe, c] : counts)
    if (c % 2 != 0) odd.push_back(pe);

  if (odd.empty()) return TorsionShape::doubled;
  if (odd.size() == 1 && odd[0] == std::make_pair<std::int64_t, int>(2, 1))
    return TorsionShape::z2_plus_doubled;
  return TorsionShape::invalid;
}

BardenCheck barden_validate(const AbelianGroup& h2, SpinIndex i) {
  if (!h2.chain_valid())
    return {false, "invariant factors violate the divisibility chain"};
  const TorsionShape shape = torsion_shape(h2);
  if (shape == TorsionShape::invalid)
    return {false, "torsion is neither G+G nor Z2+G+G"};

  auto pair_count = [&h2](int e) {
    auto primary = h2.primary();
    auto it = primary.find(2);
    if (it == primary.end()) return 0;
    return static_cast<int>(std::count(it->second.begin(), it->second.end(), e));
  };

  if (i.infinite) {
    if (h2.rank < 1) return {false, "i = inf needs rank >= 1"};
    if (shape != TorsionShape::doubled)
      return {false, "i = inf needs G+G torsion (lone Z2 forces i = 1)"};
    return {true, ""};
  }
  if (i.value == 0) {
    if (shape != TorsionShape::doubled)
      return {false, "spin (i = 0) needs G+G torsion"};
    return {true, ""};
  }
  if (shape == TorsionShape::z2_plus_doubled) {
    if (i.value != 1) return {false, "lone-Z2 torsion forces i = 1"};
    return {true, ""};
  }
  if (pair_count(i.value) < 2)
    return {false, "no Z_{2^i} pair in torsion for i = " + std::to_string(i.value)};
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Decomposition

std::string BardenBlock::str() const {
  switch (kind) {
    case Wu: return "X_-1";
    case X: return "X_" + std::to_string(param);
    case Xinf: return "X_inf";
    case M: return "M_" + std::to_string(param);
    case Minf: return "M_inf";
  }
  throw std::logic_error("BardenBlock::str");
}

std::vector<BardenBlock> barden_decompose(const AbelianGroup& h2, SpinIndex i) {
  if (auto chk = barden_validate(h2, i); !chk.valid)
    throw std::invalid_argument("barden_decompose: " + chk.reason);

  // Mutable primary decomposition: (p, e) -> multiplicity.
  std::map<std::pair<std::int64_t, int>, int> counts;
  for (auto& [p, es] : h2.primary())
    for (int e : es) ++counts[{p, e}];
  int rank = h2.rank;

  std::vector<BardenBlock> word;
  const TorsionShape shape = torsion_shape(h2);
  if (shape == TorsionShape::z2_plus_doubled) {
    word.push_back({BardenBlock::Wu, 0});
    counts[{2, 1}] -= 1;
  } else if (i.infinite) {
    word.push_back({BardenBlock::Xinf, 0});
    rank -= 1;
  } else if (i.value >= 1) {
    std::int64_t pw = 1;
    for (int e = 0; e < i.value; ++e) pw *= 2;
    word.push_back({BardenBlock::X, pw});
    counts[{2, i.value}] -= 2;
  }
  // i = 0: the X block is S^5, omitted.

  // Remaining torsion pairs become M_k blocks with k read off the
  // invariant-factor chain of the remainder.
  std::vector<std::int64_t> leftover;
  for (auto& [pe, c] : counts) {
    std::int64_t pw = 1;
    for (int e = 0; e < pe.second; ++e) pw *= pe.first;
    for (int r = 0; r < c; ++r) leftover.push_back(pw);
  }
  AbelianGroup remainder = AbelianGroup::from_summands(0, leftover);
  if (remainder.factors.size() % 2 != 0)
    throw std::logic_error("barden_decompose: remainder torsion failed to pair");
  for (std::size_t j = 0; j + 1 < remainder.factors.size(); j += 2) {
    if (remainder.factors[j] != remainder.factors[j + 1])
      throw std::logic_error("barden_decompose: remainder torsion failed to pair");
    word.push_back({BardenBlock::M, remainder.factors[j]});
  }
  for (int r = 0; r < rank; ++r) word.push_back({BardenBlock::Minf, 0});
  return word;
}

std::pair<AbelianGroup, SpinIndex> barden_reconstruct(const std::vector<BardenBlock>& word) {
  int rank = 0;
  std::vector<std::int64_t> summands;
  SpinIndex i = SpinIndex::of(0);
  int x_blocks = 0;
  for (const BardenBlock& b : word) {
    switch (b.kind) {
      case BardenBlock::Wu:
        summands.push_back(2);
        i = SpinIndex::of(1);
        ++x_blocks;
        break;
      case BardenBlock::X: {
        summands.push_back(b.param);
        summands.push_back(b.param);
        int e = 0;
        for (std::int64_t v = b.param; v > 1; v /= 2) ++e;
        i = SpinIndex::of(e);
        ++x_blocks;
        break;
      }
      case BardenBlock::Xinf:
        rank += 1;
        i = SpinIndex::inf();
        ++x_blocks;
        break;
      case BardenBlock::M:
        summands.push_back(b.param);
        summands.push_back(b.param);
        break;
      case BardenBlock::Minf:
        rank += 1;
        break;
    }
  }
  if (x_blocks > 1)
    throw std::invalid_argument("barden_reconstruct: more than one X-type block");
  return {AbelianGroup::from_summands(rank, std::move(summands)), i};
}

// ---------------------------------------------------------------------------
// Decisions and flags

Decision5 entropy_decision_5m(const AbelianGroup& h2, SpinIndex i) {
  if (auto chk = barden_validate(h2, i); !chk.valid)
    throw std::invalid_argument("entropy_decision_5m: " + chk.reason);
  Decision5 d;
  d.minimal_entropy = 0.0;

  const AbelianGroup z = AbelianGroup::from_summands(1, {});
  const AbelianGroup z2 = AbelianGroup::from_summands(0, {2});
  if (h2.trivial() && i == SpinIndex::of(0)) {
    d.solvable = true;
    d.witness = "S^5";
  } else if (h2 == z && i == SpinIndex::of(0)) {
    d.solvable = true;
    d.witness = "S^3 x S^2";
  } else if (h2 == z && i.infinite) {
    d.solvable = true;
    d.witness = "nontrivial S^3-bundle over S^2";
  } else if (h2 == z2 && i == SpinIndex::of(1)) {
    d.solvable = true;
    d.witness = "SU(3)/SO(3)";
  } else {
    d.solvable = false;
    std::string label;
    for (const BardenBlock& b : barden_decompose(h2, i)) {
      if (!label.empty()) label += " # ";
      label += b.str();
    }
    d.witness = label;
  }
  return d;
}

std::string flag_name(Flag f) { return f == Flag::yes ? "yes" : "unknown"; }

TStructureFlags tstructure_flags(const AbelianGroup& h2, SpinIndex i) {
  if (auto chk = barden_validate(h2, i); !chk.valid)
    throw std::invalid_argument("tstructure_flags: " + chk.reason);
  TStructureFlags f;
  f.t_structure = true;
  const bool bounds = torsion_shape(h2) == TorsionShape::doubled;
  const bool awkward = bounds && !i.infinite && i.value >= 2;  // non-spin, 1 < i < inf
  f.polarized = awkward ? Flag::unknown : Flag::yes;
  f.minvol_zero = f.polarized;
  return f;
}

BrieskornWeights brieskorn_weights(std::int64_t a1, std::int64_t a2, std::int64_t a3,
                                   std::int64_t a4) {
  const std::array<std::int64_t, 4> a{a1, a2, a3, a4};
  for (std::int64_t v : a)
    if (v < 2) throw std::invalid_argument("brieskorn_weights: exponents must be >= 2");
  BrieskornWeights w;
  w.lcm = 1;
  for (std::int64_t v : a) w.lcm = std::lcm(w.lcm, v);
  for (int i = 0; i < 4; ++i) w.q[i] = w.lcm / a[i];
  w.gcd = w.q[0];
  for (int i = 1; i < 4; ++i) w.gcd = std::gcd(w.gcd, w.q[i]);
  return w;
}

}  // namespace minent
