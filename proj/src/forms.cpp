#include <minent/forms.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace minent {

namespace {

// Exact determinant by fraction-free (Bareiss) elimination.
boost::multiprecision::cpp_int exact_det(const Eigen::MatrixXi& m) {
  using boost::multiprecision::cpp_int;
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1;
  std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);

  cpp_int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

int IntersectionForm::signature() const {
  if (rank() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.cast<double>());
  int pos = 0, neg = 0;
  for (double v : es.eigenvalues()) {
    if (v > 1e-9) ++pos;
    else if (v < -1e-9) ++neg;
  }
  return pos - neg;
}

bool IntersectionForm::even() const {
  for (int i = 0; i < rank(); ++i)
    if (Q(i, i) % 2 != 0) return false;
  return true;
}

bool IntersectionForm::unimodular() const {
  auto d = exact_det(Q);
  return d == 1 || d == -1;
}

bool IntersectionForm::definite() const {
  return rank() > 0 && std::abs(signature()) == rank();
}

IntersectionForm diag_form(const std::vector<int>& entries) {
  IntersectionForm f;
  const int n = static_cast<int>(entries.size());
  f.Q = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) f.Q(i, i) = entries[i];
  return f;
}

IntersectionForm hyperbolic_form() {
  IntersectionForm f;
  f.Q.resize(2, 2);
  f.Q << 0, 1, 1, 0;
  return f;
}

IntersectionForm e8_form() {
  IntersectionForm f;
  f.Q.resize(8, 8);
  f.Q << 2, 1, 0, 0, 0, 0, 0, 0,
         1, 2, 1, 0, 0, 0, 0, 0,
         0, 1, 2, 1, 0, 0, 0, 0,
         0, 0, 1, 2, 1, 0, 0, 0,
         0, 0, 0, 1, 2, 1, 0, 1,
         0, 0, 0, 0, 1, 2, 1, 0,
         0, 0, 0, 0, 0, 1, 2, 0,
         0, 0, 0, 0, 1, 0, 0, 2;
  return f;
}

IntersectionForm negate(const IntersectionForm& f) { return {(-f.Q).eval()}; }

IntersectionForm direct_sum(const IntersectionForm& a, const IntersectionForm& b) {
  IntersectionForm f;
  f.Q = Eigen::MatrixXi::Zero(a.rank() + b.rank(), a.rank() + b.rank());
  f.Q.topLeftCorner(a.rank(), a.rank()) = a.Q;
  f.Q.bottomRightCorner(b.rank(), b.rank()) = b.Q;
  return f;
}

IntersectionForm e8h_sum(long long k, long long l) {
  if (l < 0) throw std::invalid_argument("e8h_sum: l must be >= 0");
  IntersectionForm f{Eigen::MatrixXi(0, 0)};
  const IntersectionForm block = k >= 0 ? e8_form() : negate(e8_form());
  for (long long i = 0; i < std::abs(k); ++i) f = direct_sum(f, block);
  for (long long i = 0; i < l; ++i) f = direct_sum(f, hyperbolic_form());
  return f;
}

IntersectionForm k3_form() { return e8h_sum(-2, 3); }

bool same_form_type(const IntersectionForm& a, const IntersectionForm& b) {
  auto classify_supported = [](const IntersectionForm& f) {
    if (f.rank() > 2 && f.definite()) {
      bool diag_pm1 = true;
      for (int i = 0; i < f.rank() && diag_pm1; ++i)
        for (int j = 0; j < f.rank() && diag_pm1; ++j)
          if ((i == j && std::abs(f.Q(i, j)) != 1) || (i != j && f.Q(i, j) != 0))
            diag_pm1 = false;
      if (!diag_pm1)
        throw std::domain_error(
            "same_form_type: definite forms of rank > 2 beyond diag(+-1,...) unsupported");
    }
  };
  classify_supported(a);
  classify_supported(b);
  return a.rank() == b.rank() && a.signature() == b.signature() && a.even() == b.even();
}

std::string gen4_name(Gen4 g) {
  switch (g) {
    case Gen4::S4: return "S4";
    case Gen4::CP2: return "CP2";
    case Gen4::CP2r: return "CP2~";
    case Gen4::S2xS2: return "S2xS2";
    case Gen4::K3: return "K3";
  }
  throw std::logic_error("gen4_name");
}

Gen4 parse_gen4(const std::string& token) {
  if (token == "S4") return Gen4::S4;
  if (token == "CP2") return Gen4::CP2;
  if (token == "CP2~" || token == "CP2r" || token == "-CP2") return Gen4::CP2r;
  if (token == "S2xS2") return Gen4::S2xS2;
  if (token == "K3") return Gen4::K3;
  throw std::invalid_argument("unknown 4-manifold generator: " + token);
}

Word4 parse_word4(const std::string& csv) {
  Word4 word;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (!tok.empty()) word.push_back(parse_gen4(tok));
  }
  return word;
}

IntersectionForm form_of_word(const Word4& word) {
  IntersectionForm f{Eigen::MatrixXi(0, 0)};
  for (Gen4 g : word) {
    switch (g) {
      case Gen4::S4: break;
      case Gen4::CP2: f = direct_sum(f, diag_form({1})); break;
      case Gen4::CP2r: f = direct_sum(f, diag_form({-1})); break;
      case Gen4::S2xS2: f = direct_sum(f, hyperbolic_form()); break;
      case Gen4::K3: f = direct_sum(f, k3_form()); break;
    }
  }
  return f;
}

std::string homeotype_b2le2(const IntersectionForm& form) {
  if (form.rank() > 2) throw std::invalid_argument("homeotype_b2le2: rank > 2");
  if (!form.unimodular() && form.rank() > 0)
    throw std::invalid_argument("homeotype_b2le2: form is not unimodular");
  const int r = form.rank();
  const int s = form.signature();
  const bool ev = form.even();
  if (r == 0) return "S^4";
  if (r == 1) return "CP^2";  // up to orientation reversal
  if (r == 2 && ev && s == 0) return "S^2 x S^2";
  if (r == 2 && !ev && s == 0) return "CP^2 # -CP^2";
  if (r == 2 && !ev && std::abs(s) == 2) return "CP^2 # CP^2";
  return "rank-<=2 form not in list";
}

std::string verdict_name(EvenFormVerdict v) {
  switch (v) {
    case EvenFormVerdict::realizable: return "realizable";
    case EvenFormVerdict::rokhlin_violation: return "rokhlin_violation";
    case EvenFormVerdict::open_under_11_8: return "open_under_11_8";
  }
  throw std::logic_error("verdict_name");
}

EvenFormResult even_form_realizable(long long k, long long l) {
  if (l < 0) throw std::invalid_argument("even_form_realizable: l must be >= 0");
  EvenFormResult r;
  if (k % 2 != 0) {
    r.verdict = EvenFormVerdict::rokhlin_violation;
    return r;
  }
  if (2 * l < 3 * std::abs(k)) {
    r.verdict = EvenFormVerdict::open_under_11_8;
    return r;
  }
  r.verdict = EvenFormVerdict::realizable;
  const long long m = std::abs(k) / 2;
  for (long long i = 0; i < m; ++i) r.witness.push_back(Gen4::K3);
  for (long long i = 0; i < l - 3 * m; ++i) r.witness.push_back(Gen4::S2xS2);
  r.reversed = k > 0;  // K3 contributes -2E8; positive k needs the mirror
  return r;
}

Decision4 entropy_decision_4m(const Word4& word) {
  std::map<Gen4, int> counts;
  for (Gen4 g : word)
    if (g != Gen4::S4) ++counts[g];

  const int cp = counts[Gen4::CP2];
  const int cpr = counts[Gen4::CP2r];
  const int s2 = counts[Gen4::S2xS2];
  const int k3 = counts[Gen4::K3];
  const int total = cp + cpr + s2 + k3;

  Decision4 d;
  d.minimal_entropy = 0.0;
  if (total == 0) {
    d.solvable = true;
    d.witness = "S^4";
    return d;
  }

  // Solvable list, compared up to global orientation reversal (CP2 <-> CP2~).
  if (k3 == 0 && s2 == 0 && cp + cpr == 1) {
    d.solvable = true;
    d.witness = "CP^2";
  } else if (k3 == 0 && cp == 0 && cpr == 0 && s2 == 1) {
    d.solvable = true;
    d.witness = "S^2 x S^2";
  } else if (k3 == 0 && s2 == 0 && cp == 1 && cpr == 1) {
    d.solvable = true;
    d.witness = "CP^2 # -CP^2";
  } else if (k3 == 0 && s2 == 0 && ((cp == 2 && cpr == 0) || (cp == 0 && cpr == 2))) {
    d.solvable = true;
    d.witness = "CP^2 # CP^2";
  } else {
    d.solvable = false;
    std::string label;
    auto append = [&label](const std::string& piece, int n) {
      for (int i = 0; i < n; ++i) {
        if (!label.empty()) label += " # ";
        label += piece;
      }
    };
    append("CP^2", cp);
    append("-CP^2", cpr);
    append("S^2 x S^2", s2);
    append("K3", k3);
    d.witness = label;
  }
  return d;
}

}  // namespace minent
