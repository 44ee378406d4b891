#include "gulps/monodromy.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <string>

#include "gulps/constants.hpp"
#include "gulps/errors.hpp"

namespace gulps {

namespace {

constexpr int kN = 4;

// Affine log-spectrum map as a matrix: spectrum_j = Σ_k kAffine[j][k] c_k.
constexpr int kAffine[4][3] = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}, {-1, -1, -1}};

Partition trimmed(std::vector<int> parts) {
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  return Partition{std::move(parts)};
}

// Partitions of n with at most max_len parts, parts unbounded.
std::vector<Partition> partitions_of(int n, int max_len) {
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int cap) {
    if (rem == 0) {
      out.push_back(Partition{cur});
      return;
    }
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int v = std::min(rem, cap); v >= 1; --v) {
      cur.push_back(v);
      rec(rem - v, v);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

// Strip rim hooks of size 4 until the shape fits r × k. Uses beta numbers
// β_i = λ_i + r − 1 − i: removing a 4-hook lowers one β by 4, and the hook's
// height is one more than the number of betas it slides past. Returns nullopt
// when no hook can be removed (the class vanishes).
struct Reduced {
  Partition shape;
  int degree;
  int sign;
};

std::optional<Reduced> rim_hook_reduce(const Partition& lam, int r, int k) {
  std::vector<int> parts(static_cast<std::size_t>(r), 0);
  for (int i = 0; i < lam.length(); ++i) parts[static_cast<std::size_t>(i)] = lam.at(i);
  int sign = 1;
  int degree = 0;
  while (parts[0] > k) {
    std::vector<int> beta(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) beta[static_cast<std::size_t>(i)] = parts[static_cast<std::size_t>(i)] + r - 1 - i;
    bool removed = false;
    for (int i = 0; i < r && !removed; ++i) {
      const int nb = beta[static_cast<std::size_t>(i)] - kN;
      if (nb < 0 || std::find(beta.begin(), beta.end(), nb) != beta.end()) continue;
      // nb slides down past the betas it is now smaller than
      int passed = 0;
      for (int j = i + 1; j < r; ++j)
        if (beta[static_cast<std::size_t>(j)] > nb) ++passed;
      beta[static_cast<std::size_t>(i)] = nb;
      std::sort(beta.begin(), beta.end(), std::greater<>());
      for (int t = 0; t < r; ++t)
        parts[static_cast<std::size_t>(t)] = beta[static_cast<std::size_t>(t)] - (r - 1 - t);
      // a hook of height h contributes (−1)^(r − h), and h = passed + 1
      if ((r - 1 - passed) % 2) sign = -sign;
      ++degree;
      removed = true;
    }
    if (!removed) return std::nullopt;
  }
  return Reduced{trimmed(parts), degree, sign};
}

}  // namespace

int Partition::size() const {
  int s = 0;
  for (int p : parts) s += p;
  return s;
}

double IneqRow::evaluate(const LogSpec& a, const LogSpec& b, const LogSpec& d) const {
  double v = constant;
  for (std::size_t j = 0; j < 4; ++j) v += alpha[j] * a[j] + beta[j] * b[j] + delta[j] * d[j];
  return v;
}

double AffineRow::evaluate(const std::vector<double>& x) const {
  double v = constant;
  for (std::size_t j = 0; j < coef.size(); ++j) v += coef[j] * x[j];
  return v;
}

std::vector<Partition> partitions_in_box(int r, int k) {
  if (r < 1 || k < 1 || r + k != kN) throw InvalidBox("partitions_in_box: need r, k >= 1 and r + k = 4");
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int cap) {
    out.push_back(Partition{cur});
    if (static_cast<int>(cur.size()) == r) return;
    for (int v = 1; v <= cap; ++v) {
      cur.push_back(v);
      rec(v);
      cur.pop_back();
    }
  };
  rec(k);
  std::sort(out.begin(), out.end());
  return out;
}

long lr_coefficient(const Partition& a, const Partition& b, const Partition& c) {
  if (a.size() + b.size() != c.size()) return 0;
  if (a.length() > c.length()) return 0;
  for (int i = 0; i < a.length(); ++i)
    if (a.at(i) > c.at(i)) return 0;

  // cells of the skew shape c/a, row by row, left to right
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < c.length(); ++i)
    for (int j = a.at(i); j < c.at(i); ++j) cells.emplace_back(i, j);

  const int rows = c.length();
  const int cols = c.length() ? c.at(0) : 0;
  std::vector<int> fill(static_cast<std::size_t>(rows * cols), -1);
  auto at = [&](int i, int j) -> int& { return fill[static_cast<std::size_t>(i * cols + j)]; };
  std::vector<int> remaining = b.parts;
  const int letters = b.length();

  // reverse reading word (right to left, top to bottom) must be a lattice word
  auto lattice_ok = [&] {
    std::vector<int> counts(static_cast<std::size_t>(letters), 0);
    for (int i = 0; i < rows; ++i)
      for (int j = c.at(i) - 1; j >= a.at(i); --j) {
        const int v = at(i, j);
        ++counts[static_cast<std::size_t>(v)];
        if (v > 0 && counts[static_cast<std::size_t>(v)] > counts[static_cast<std::size_t>(v - 1)]) return false;
      }
    return true;
  };

  long count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (idx == cells.size()) {
      if (lattice_ok()) ++count;
      return;
    }
    const auto [i, j] = cells[idx];
    for (int v = 0; v < letters; ++v) {
      if (remaining[static_cast<std::size_t>(v)] == 0) continue;
      if (j > a.at(i) && at(i, j - 1) > v) continue;             // rows weakly increase
      if (i > 0 && j >= a.at(i - 1) && at(i - 1, j) >= v) continue;   // columns strictly increase
      at(i, j) = v;
      --remaining[static_cast<std::size_t>(v)];
      rec(idx + 1);
      ++remaining[static_cast<std::size_t>(v)];
      at(i, j) = -1;
    }
  };
  rec(0);
  return count;
}

std::map<std::pair<Partition, int>, long> qlr_products(int r, int k, const Partition& a,
                                                        const Partition& b) {
  std::map<std::pair<Partition, int>, long> out;
  for (const Partition& lam : partitions_of(a.size() + b.size(), r)) {
    const long cf = lr_coefficient(a, b, lam);
    if (cf == 0) continue;
    const auto red = rim_hook_reduce(lam, r, k);
    if (!red) continue;
    out[{red->shape, red->degree}] += red->sign * cf;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

long qlr_coefficient(const QlrTriple& t) {
  const auto products = qlr_products(t.r, t.k, t.a, t.b);
  const auto it = products.find({t.c, t.d});
  return it == products.end() ? 0 : it->second;
}

const std::vector<IneqRow>& qlr_rows() {
  static std::once_flag once;
  static std::vector<IneqRow> table;
  std::call_once(once, [] {
    std::set<std::array<int, 13>> seen;
    for (int r = 1; r <= 3; ++r) {
      const int k = kN - r;
      const auto box = partitions_in_box(r, k);
      for (const Partition& a : box)
        for (const Partition& b : box)
          for (const auto& [key, coefficient] : qlr_products(r, k, a, b)) {
            if (coefficient != 1 || key.second > 2) continue;
            IneqRow row;
            row.source = QlrTriple{r, k, a, b, key.first, key.second};
            row.constant = key.second;
            // d − Σ α_{k+i−a_i} − Σ β_{k+i−b_i} + Σ δ_{k+i−c_i} ≥ 0, 1-based i
            for (int i = 1; i <= r; ++i) {
              row.alpha[static_cast<std::size_t>(k + i - a.at(i - 1) - 1)] -= 1;
              row.beta[static_cast<std::size_t>(k + i - b.at(i - 1) - 1)] -= 1;
              row.delta[static_cast<std::size_t>(k + i - key.first.at(i - 1) - 1)] += 1;
            }
            std::array<int, 13> flat{};
            for (int j = 0; j < 4; ++j) {
              flat[static_cast<std::size_t>(j)] = row.alpha[static_cast<std::size_t>(j)];
              flat[static_cast<std::size_t>(4 + j)] = row.beta[static_cast<std::size_t>(j)];
              flat[static_cast<std::size_t>(8 + j)] = row.delta[static_cast<std::size_t>(j)];
            }
            flat[12] = row.constant;
            if (seen.insert(flat).second) table.push_back(row);
          }
    }
  });
  return table;
}

std::vector<AffineRow> domain_rows(FreeDomain domain, int num_vars, int offset) {
  auto row = [&](std::array<double, 3> c, double constant) {
    AffineRow r;
    r.coef.assign(static_cast<std::size_t>(num_vars), 0.0);
    for (int k = 0; k < 3; ++k) r.coef[static_cast<std::size_t>(offset + k)] = c[static_cast<std::size_t>(k)];
    r.constant = constant;
    return r;
  };
  std::vector<AffineRow> out;
  out.push_back(row({1, -1, 0}, 0.0));
  out.push_back(row({0, 1, -1}, 0.0));
  out.push_back(domain == FreeDomain::Chamber ? row({0, 0, 1}, 0.0) : row({0, 1, 1}, 0.0));
  out.push_back(row({-1, -1, 0}, 0.5));
  return out;
}

SegmentConstraints instantiate_segment(const std::optional<LogSpec>& before, const LogSpec& gate,
                                       const std::optional<LogSpec>& after, FreeDomain domain) {
  SegmentConstraints s;
  s.before_free = !before.has_value();
  s.after_free = !after.has_value();
  s.num_vars = 3 * (static_cast<int>(s.before_free) + static_cast<int>(s.after_free));
  const int before_offset = 0;
  const int after_offset = s.before_free ? 3 : 0;

  auto fold = [&](AffineRow& out, const std::array<int, 4>& coef, const std::optional<LogSpec>& fixed,
                  int offset) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (coef[j] == 0) continue;
      if (fixed) {
        out.constant += coef[j] * (*fixed)[j];
      } else {
        for (int c = 0; c < 3; ++c)
          out.coef[static_cast<std::size_t>(offset + c)] += coef[j] * kAffine[j][c];
      }
    }
  };

  for (const IneqRow& row : qlr_rows()) {
    AffineRow out;
    out.coef.assign(static_cast<std::size_t>(s.num_vars), 0.0);
    out.constant = row.constant;
    fold(out, row.alpha, before, before_offset);
    for (std::size_t j = 0; j < 4; ++j) out.constant += row.beta[j] * gate[j];
    fold(out, row.delta, after, after_offset);
    s.qlr_rows.push_back(std::move(out));
  }
  if (s.before_free) {
    auto d = domain_rows(domain, s.num_vars, before_offset);
    s.domain_rows.insert(s.domain_rows.end(), d.begin(), d.end());
  }
  if (s.after_free) {
    auto d = domain_rows(domain, s.num_vars, after_offset);
    s.domain_rows.insert(s.domain_rows.end(), d.begin(), d.end());
  }
  return s;
}

double polytope_slack(const LogSpec& g1, const LogSpec& g2, const CanonicalCoord& target) {
  double best = -std::numeric_limits<double>::infinity();
  for (const RawCoord& lift : {target.raw(), rho_reflect(target)}) {
    const LogSpec d = coords_to_logspec(lift);
    double worst = std::numeric_limits<double>::infinity();
    for (const IneqRow& row : qlr_rows()) worst = std::min(worst, row.evaluate(g1, g2, d));
    best = std::max(best, worst);
  }
  return best;
}

bool polytope_contains(const LogSpec& g1, const LogSpec& g2, const CanonicalCoord& target) {
  return polytope_slack(g1, g2, target) >= -tol::row_slack;
}

void write_row_table_csv(std::ostream& os) {
  auto part = [](const Partition& p) {
    std::string s;
    for (int v : p.parts) {
      if (!s.empty()) s += ' ';
      s += std::to_string(v);
    }
    return s;
  };
  os << "# monodromy rows: alpha.a + beta.b + delta.d + constant >= 0\n"
     << "# alpha, beta: sorted log spectra (non-increasing, full turns) of the two composed gates;"
        " delta: spectrum of their product\n"
     << "# index for part i (1-based) is k + i - part_i; constant = quantum degree d (no period scaling)\n"
     << "a1,a2,a3,a4,b1,b2,b3,b4,d1,d2,d3,d4,constant,r,k,part_a,part_b,part_c,degree\n";
  for (const IneqRow& row : qlr_rows()) {
    for (int v : row.alpha) os << v << ',';
    for (int v : row.beta) os << v << ',';
    for (int v : row.delta) os << v << ',';
    os << row.constant << ',' << row.source.r << ',' << row.source.k << ",\"" << part(row.source.a)
       << "\",\"" << part(row.source.b) << "\",\"" << part(row.source.c) << "\"," << row.source.d
       << '\n';
  }
}

}  // namespace gulps
