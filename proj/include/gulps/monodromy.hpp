#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gulps/invariants.hpp"

namespace gulps {

/// Non-increasing positive parts; trailing zeros are never stored.
struct Partition {
  std::vector<int> parts;

  int size() const;
  int length() const { return static_cast<int>(parts.size()); }
  /// Part i (0-based), zero past the end.
  int at(int i) const { return i < length() ? parts[static_cast<std::size_t>(i)] : 0; }

  auto operator<=>(const Partition&) const = default;
};

struct QlrTriple {
  int r = 0;
  int k = 0;
  Partition a;
  Partition b;
  Partition c;
  int d = 0;
};

/// coef·(α, β, δ) + constant ≥ 0 over three sorted log spectra. All entries
/// are small integers, so the table is exact.
struct IneqRow {
  std::array<int, 4> alpha{};
  std::array<int, 4> beta{};
  std::array<int, 4> delta{};
  int constant = 0;
  QlrTriple source;

  double evaluate(const LogSpec& a, const LogSpec& b, const LogSpec& d) const;
};

/// coef·x + constant ≥ 0 over a segment's free coordinate variables.
struct AffineRow {
  std::vector<double> coef;
  double constant = 0.0;

  double evaluate(const std::vector<double>& x) const;
};

/// Which region a free coordinate triple is confined to.
///   Chamber: c1 ≥ c2 ≥ c3 ≥ 0, c1 + c2 ≤ 1/2.
///   Alcove:  c1 ≥ c2 ≥ |c3|, c1 + c2 ≤ 1/2 — the chamber together with its
///            reflected lift (1/2 − c1, c2, −c3), where the affine log-spectrum
///            map is still sorted.
enum class FreeDomain { Chamber, Alcove };

/// Rows of one trajectory segment. Variables are the free slots' (c1, c2, c3),
/// "before" first.
struct SegmentConstraints {
  bool before_free = false;
  bool after_free = false;
  int num_vars = 0;
  std::vector<AffineRow> qlr_rows;
  std::vector<AffineRow> domain_rows;

  std::size_t row_count() const { return qlr_rows.size() + domain_rows.size(); }
};

/// Partitions fitting in an r × k box, lexicographic. Throws InvalidBox
/// unless r, k ≥ 1 and r + k = 4.
std::vector<Partition> partitions_in_box(int r, int k);

/// Classical Littlewood–Richardson coefficient by LR-tableau enumeration.
long lr_coefficient(const Partition& a, const Partition& b, const Partition& c);

/// All nonzero quantum LR coefficients for σ_a · σ_b in QH*(Gr(r, 4)),
/// keyed by (c, d).
std::map<std::pair<Partition, int>, long> qlr_products(int r, int k, const Partition& a,
                                                        const Partition& b);

long qlr_coefficient(const QlrTriple& t);

/// The cached symbolic inequality table (72 rows at n = 4).
const std::vector<IneqRow>& qlr_rows();

/// Substitutes fixed spectra and rewrites free slots through coords_affine.
SegmentConstraints instantiate_segment(const std::optional<LogSpec>& before, const LogSpec& gate,
                                       const std::optional<LogSpec>& after,
                                       FreeDomain domain = FreeDomain::Chamber);

/// Domain rows for one free coordinate triple at variable offset `offset`.
std::vector<AffineRow> domain_rows(FreeDomain domain, int num_vars, int offset);

/// Least row value over both lifts of the target, maximized over the lifts.
/// Non-negative (within slack) exactly when the target class is reachable.
double polytope_slack(const LogSpec& g1, const LogSpec& g2, const CanonicalCoord& target);

/// Depth-2 circuit polytope membership with slack ≥ −tol::row_slack.
bool polytope_contains(const LogSpec& g1, const LogSpec& g2, const CanonicalCoord& target);

/// CSV export of the symbolic table.
void write_row_table_csv(std::ostream& os);

}  // namespace gulps
