#include "ambiglab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "ambiglab/rng.hpp"

namespace ambiglab {

IndexSet::IndexSet(std::initializer_list<int> indices) : IndexSet(std::vector<int>(indices)) {}

IndexSet::IndexSet(std::vector<int> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  require(std::adjacent_find(idx_.begin(), idx_.end()) == idx_.end(), "IndexSet: duplicate index");
}

IndexSet IndexSet::range(int lo, int hi) {
  std::vector<int> v;
  for (int j = lo; j <= hi; ++j) v.push_back(j);
  return IndexSet(std::move(v));
}

bool IndexSet::contains(int j) const { return std::binary_search(idx_.begin(), idx_.end(), j); }

int IndexSet::position_of(int j) const {
  auto it = std::lower_bound(idx_.begin(), idx_.end(), j);
  if (it == idx_.end() || *it != j) return 0;
  return static_cast<int>(it - idx_.begin()) + 1;
}

bool IndexSet::within(int lo, int hi) const {
  return empty() || (idx_.front() >= lo && idx_.back() <= hi);
}

bool IndexSet::contiguous() const {
  return empty() || idx_.back() - idx_.front() + 1 == static_cast<int>(idx_.size());
}

IndexSet IndexSet::shifted(int delta) const {
  std::vector<int> v(idx_);
  for (int& j : v) j += delta;
  return IndexSet(std::move(v));
}

IndexSet IndexSet::unite(const IndexSet& other) const {
  std::vector<int> v;
  std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(), std::back_inserter(v));
  return IndexSet(std::move(v));
}

IndexSet IndexSet::intersect(const IndexSet& other) const {
  std::vector<int> v;
  std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                        std::back_inserter(v));
  return IndexSet(std::move(v));
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < idx_.size(); ++i) os << (i ? "," : "") << idx_[i];
  os << '}';
  return os.str();
}

IndexSet shift_minus_one(const IndexSet& lambda) { return lambda.shifted(-1); }

int p_of(const IndexSet& lambda) { return static_cast<int>(lambda.unite(shift_minus_one(lambda)).size()); }

IndexSet adjacent_part(const IndexSet& lambda) { return lambda.intersect(shift_minus_one(lambda)); }

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Unconstrained: return "unconstrained";
    case ConeKind::Zero: return "zero";
    case ConeKind::Coded: return "coded";
  }
  return "unknown";
}

ConeSpec ConeSpec::unconstrained(int d) {
  require(d >= 1, "ConeSpec: d must be >= 1");
  return ConeSpec{ConeKind::Unconstrained, d, {}, {}};
}

ConeSpec ConeSpec::zero(IndexSet lambda, int d) {
  require(d >= 1, "ConeSpec: d must be >= 1");
  require(lambda.within(1, d), "ConeSpec: index set outside [1, d]");
  return ConeSpec{ConeKind::Zero, d, std::move(lambda), {}};
}

ConeSpec ConeSpec::coded(IndexSet lambda, RealVec b, int d) {
  require(d >= 1, "ConeSpec: d must be >= 1");
  require(lambda.within(1, d), "ConeSpec: index set outside [1, d]");
  require(static_cast<std::size_t>(b.size()) == lambda.size(), "ConeSpec: |b| != |lambda|");
  require(b.allFinite(), "ConeSpec: non-finite code vector");
  if (b.size() == 0 || b.isZero(0.0)) return zero(std::move(lambda), d);
  return ConeSpec{ConeKind::Coded, d, std::move(lambda), std::move(b)};
}

bool ConeSpec::is_repetition(double tol) const {
  if (kind != ConeKind::Coded) return false;
  return collinear(b, RealVec::Ones(b.size()), tol);
}

namespace {

RealVec gather(const RealVec& w, const IndexSet& lambda) {
  RealVec out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) out(i) = w(lambda[i] - 1);
  return out;
}

}  // namespace

bool member(const RealVec& w, const ConeSpec& spec, double tol) {
  require(w.size() == spec.d, "member: length(w) != d");
  if (!w.allFinite()) return false;
  const int d = spec.d;
  if (!(std::abs(w(0)) > tol) || !(std::abs(w(d - 1)) > tol)) return false;
  switch (spec.kind) {
    case ConeKind::Unconstrained:
      return true;
    case ConeKind::Zero:
      return spec.lambda.empty() || gather(w, spec.lambda).lpNorm<Eigen::Infinity>() <= tol;
    case ConeKind::Coded: {
      const RealVec wl = gather(w, spec.lambda);
      const double c = wl.dot(spec.b) / spec.b.squaredNorm();
      if (!(std::abs(c) > tol)) return false;
      const double bound = tol * (1.0 + std::abs(c) * spec.b.lpNorm<Eigen::Infinity>());
      return (wl - c * spec.b).lpNorm<Eigen::Infinity>() <= bound;
    }
  }
  return false;
}

RealVec sample(const ConeSpec& spec, std::uint64_t seed) {
  const int d = spec.d;
  require(d >= 1, "sample: d must be >= 1");
  if (spec.kind == ConeKind::Zero && (spec.lambda.contains(1) || spec.lambda.contains(d)))
    fail(ErrorCode::InfeasibleSpec, "Zero cone forces an endpoint to zero");
  if (spec.kind == ConeKind::Coded) {
    for (int end : {1, d}) {
      const int pos = spec.lambda.position_of(end);
      if (pos > 0 && spec.b(pos - 1) == 0.0)
        fail(ErrorCode::InfeasibleSpec, "code vector is zero at an endpoint");
    }
  }

  Rng rng(seed);
  RealVec w(d);
  for (int j = 0; j < d; ++j) w(j) = rng.normal();
  for (int end : {0, d - 1})
    while (std::abs(w(end)) < kSampleMargin) w(end) = rng.normal();

  if (spec.kind == ConeKind::Zero) {
    for (int j : spec.lambda) w(j - 1) = 0.0;
  } else if (spec.kind == ConeKind::Coded) {
    const double c = rng.normal_away_from_zero(kSampleMargin);
    for (std::size_t i = 0; i < spec.lambda.size(); ++i) w(spec.lambda[i] - 1) = c * spec.b(i);
  }
  return w;
}

const char* to_string(PairTypeLabel label) {
  switch (label) {
    case PairTypeLabel::Type0: return "type0";
    case PairTypeLabel::Type1: return "type1";
    case PairTypeLabel::Type2: return "type2";
    case PairTypeLabel::Unclassified: return "unclassified";
  }
  return "unknown";
}

int PairType::t() const {
  switch (value) {
    case PairTypeLabel::Type0: return 0;
    case PairTypeLabel::Type1: return 1;
    case PairTypeLabel::Type2: return 2;
    case PairTypeLabel::Unclassified: return -1;
  }
  return -1;
}

bool collinear(const RealVec& a, const RealVec& b, double tol) {
  require(a.size() == b.size(), "collinear: length mismatch");
  if (a.size() == 0) return false;
  if (a.isZero(0.0) || b.isZero(0.0)) return false;
  Eigen::MatrixXd m(2, a.size());
  m.row(0) = a.transpose();
  m.row(1) = b.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() < 2) return true;
  return s(1) <= tol * s(0);
}

PairType classify_pair(const IndexSet& lambda, const RealVec& b, int d, double tol) {
  require(d >= 3, "classify_pair: d must be >= 3");
  require(!lambda.empty(), "classify_pair: empty index set");
  require(lambda.within(2, d - 1), "classify_pair: index set must lie in {2,...,d-1}");
  require(static_cast<std::size_t>(b.size()) == lambda.size(), "classify_pair: |b| != |lambda|");

  PairType out;
  const bool b_zero = b.isZero(0.0);
  const IndexSet overlap = adjacent_part(lambda);

  if (b_zero) {
    if (d >= 5 && lambda.within(3, d - 2)) out.value = PairTypeLabel::Type0;
    return out;
  }
  if (overlap.empty()) {
    out.value = PairTypeLabel::Type2;
    return out;
  }

  std::vector<int> positions;
  for (int j : overlap) positions.push_back(lambda.position_of(j));
  out.lambda_star = IndexSet(positions);

  RealVec lo(positions.size()), hi(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    lo(i) = b(positions[i] - 1);
    hi(i) = b(positions[i]);  // position + 1, 1-based
  }
  if (collinear(b, RealVec::Ones(b.size()), tol) || collinear(lo, hi, tol)) {
    const double r = hi.dot(lo) / lo.squaredNorm();
    if (std::isfinite(r) && r != 0.0) {
      out.value = PairTypeLabel::Type1;
      out.r = r;
    }
  }
  return out;
}

ConeSpec geometric_profile(const IndexSet& lambda, double r, int d) {
  require(!lambda.empty() && lambda.contiguous(), "geometric_profile: index set must be contiguous");
  require(std::abs(r) > 0.0 && std::abs(r) < 1.0, "geometric_profile: need 0 < |r| < 1");
  RealVec b(lambda.size());
  double v = 1.0;
  for (Eigen::Index i = 0; i < b.size(); ++i, v *= r) b(i) = v;
  return ConeSpec::coded(lambda, std::move(b), d);
}

}  // namespace ambiglab
