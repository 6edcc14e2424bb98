#pragma once

// Index sets, the feasible cone families and the (Λ, b) type classifier.
//
//   Unconstrained(d)  K(∅,d):  w(1) != 0, w(d) != 0
//   Zero(Λ, d)        K0:      additionally w(Λ) = 0
//   Coded(Λ, b, d)    Kb:      additionally w(Λ) = c b for some c != 0
//                              (b = 1 is the repetition cone K1)

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "ambiglab/convolution.hpp"

namespace ambiglab {

inline constexpr double kDefaultConeTol = 1e-9;
inline constexpr double kSampleMargin = 1e-3;

/// Sorted set of distinct 1-based indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> indices);
  explicit IndexSet(std::vector<int> indices);

  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static IndexSet range(int lo, int hi);

  const std::vector<int>& indices() const noexcept { return idx_; }
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  int operator[](std::size_t i) const { return idx_[i]; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  bool contains(int j) const;
  /// 1-based position of j within the sorted set, 0 if absent.
  int position_of(int j) const;
  bool within(int lo, int hi) const;
  bool contiguous() const;

  IndexSet shifted(int delta) const;
  IndexSet unite(const IndexSet& other) const;
  IndexSet intersect(const IndexSet& other) const;

  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> idx_;
};

/// {j-1 : j ∈ Λ}
IndexSet shift_minus_one(const IndexSet& lambda);

/// |Λ ∪ (Λ-1)|
int p_of(const IndexSet& lambda);

/// Λ ∩ (Λ-1): indices j with j+1 also in Λ.
IndexSet adjacent_part(const IndexSet& lambda);

enum class ConeKind { Unconstrained, Zero, Coded };

const char* to_string(ConeKind kind);

struct ConeSpec {
  ConeKind kind = ConeKind::Unconstrained;
  int d = 0;
  IndexSet lambda;
  RealVec b;  // Coded only, |b| = |Λ|

  static ConeSpec unconstrained(int d);
  static ConeSpec zero(IndexSet lambda, int d);
  /// b = 0 normalizes to Zero(Λ, d).
  static ConeSpec coded(IndexSet lambda, RealVec b, int d);

  /// Coded with b collinear to the all-ones vector.
  bool is_repetition(double tol = kDefaultConeTol) const;
};

bool member(const RealVec& w, const ConeSpec& spec, double tol = kDefaultConeTol);

/// Deterministic draw from the cone: free entries i.i.d. N(0,1), resampled
/// below kSampleMargin where nonzero is required.
RealVec sample(const ConeSpec& spec, std::uint64_t seed);

enum class PairTypeLabel { Type0, Type1, Type2, Unclassified };

const char* to_string(PairTypeLabel label);

struct PairType {
  PairTypeLabel value = PairTypeLabel::Unclassified;
  /// Positions (1-based, within sorted Λ) of the elements of Λ ∩ (Λ-1).
  IndexSet lambda_star;
  /// b(Λ★+1) = r b(Λ★); Type1 only.
  std::optional<double> r;

  /// The t in the dimension count (0, 1 or 2); -1 if unclassified.
  int t() const;
};

/// Second-over-first singular value of the 2 x k matrix [a^T; b^T] is at
/// most tol. Zero rows count as not collinear.
bool collinear(const RealVec& a, const RealVec& b, double tol);

PairType classify_pair(const IndexSet& lambda, const RealVec& b, int d, double tol = kDefaultConeTol);

/// Coded spec with b = (1, r, r^2, ...) on a contiguous Λ, 0 < |r| < 1.
ConeSpec geometric_profile(const IndexSet& lambda, double r, int d);

}  // namespace ambiglab
