#include "ambiglab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ambiglab/quotient.hpp"

namespace ambiglab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSampleAttempts = 10000;

RealVec pad_last(const RealVec& u) {
  RealVec out = RealVec::Zero(u.size() + 1);
  out.head(u.size()) = u;
  return out;
}

RealVec pad_first(const RealVec& u) {
  RealVec out = RealVec::Zero(u.size() + 1);
  out.tail(u.size()) = u;
  return out;
}

RealVec rotate_x(const RealVec& u, double angle) {
  return std::cos(angle) * pad_last(u) - std::sin(angle) * pad_first(u);
}

RealVec rotate_y(const RealVec& v, double angle) {
  return std::sin(angle) * pad_first(v) - std::cos(angle) * pad_last(v);
}

/// Writes coef_lambda * b onto Λ and coef_shift * b onto Λ-1, returning the
/// relative disagreement on entries that receive both assignments.
double assign_coded(RealVec& u, const SideModel& side, double coef_lambda, double coef_shift) {
  const auto& lam = side.lambda;
  for (std::size_t i = 0; i < lam.size(); ++i) u(lam[i] - 1) = coef_lambda * side.b(i);
  double worst = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const int target = lam[i] - 1;  // element of Λ-1, 1-based index into u
    const double value = coef_shift * side.b(i);
    if (lam.contains(target)) worst = std::max(worst, std::abs(u(target - 1) - value));
    u(target - 1) = value;
  }
  const double scale = std::max(u.lpNorm<Eigen::Infinity>(), std::numeric_limits<double>::min());
  return worst / scale;
}

}  // namespace

SignalPair build_pair_from_params(const RealVec& u, const RealVec& v, double theta, double phi) {
  require(u.size() >= 1 && v.size() >= 1, "build_pair_from_params: need m,n >= 2");
  return {rotate_x(u, theta), rotate_y(v, phi)};
}

SignalPair certificate_from_params(const RealVec& u, const RealVec& v, double theta, double phi) {
  require(u.size() >= 1 && v.size() >= 1, "certificate_from_params: need m,n >= 2");
  return {rotate_x(u, phi), rotate_y(v, theta)};
}

double distance_to_lattice(double a, double offset, double period) {
  const double t = a - offset;
  return std::abs(t - period * std::round(t / period));
}

// ---------------------------------------------------------------------------

SideModel SideModel::make(int d, IndexSet lambda, RealVec b, PairType type) {
  SideModel s;
  s.d = d;
  s.constrained = lambda.unite(shift_minus_one(lambda));
  s.lambda = std::move(lambda);
  s.b = std::move(b);
  s.type = std::move(type);
  for (int j = 1; j <= d - 1; ++j)
    if (!s.constrained.contains(j)) s.free_indices.push_back(j);
  return s;
}

int SideModel::scalar_count() const {
  switch (type.value) {
    case PairTypeLabel::Type1: return 1;
    case PairTypeLabel::Type2: return 2;
    default: return 0;
  }
}

std::optional<double> SideModel::angle_offset() const {
  if (type.value != PairTypeLabel::Type1) return std::nullopt;
  return std::atan(*type.r);
}

ConeSpec SideModel::cone() const {
  if (type.value == PairTypeLabel::Type0) return ConeSpec::zero(lambda, d);
  return ConeSpec::coded(lambda, b, d);
}

// ---------------------------------------------------------------------------

GeneratorFamily GeneratorFamily::sparse(const IndexSet& lambda1, const IndexSet& lambda2, int m, int n) {
  require(m >= 5 && n >= 5, "sparse family: need m,n >= 5");
  require(!lambda1.empty() && lambda1.within(3, m - 2), "sparse family: need non-empty Λ1 ⊆ {3,...,m-2}");
  require(!lambda2.empty() && lambda2.within(3, n - 2), "sparse family: need non-empty Λ2 ⊆ {3,...,n-2}");
  RealVec b0 = RealVec::Zero(lambda1.size());
  RealVec b0p = RealVec::Zero(lambda2.size());
  auto t1 = classify_pair(lambda1, b0, m);
  auto t2 = classify_pair(lambda2, b0p, n);
  return GeneratorFamily(m, n, SideModel::make(m, lambda1, b0, t1), SideModel::make(n, lambda2, b0p, t2));
}

GeneratorFamily GeneratorFamily::coded(const IndexSet& lambda1, const RealVec& b, const IndexSet& lambda2,
                                       const RealVec& bprime, int m, int n, double classify_tol) {
  require(m >= 3 && n >= 3, "coded family: need m,n >= 3");
  require(!lambda1.empty() && lambda1.within(2, m - 1), "coded family: need non-empty Λ' ⊆ {2,...,m-1}");
  require(!lambda2.empty() && lambda2.within(2, n - 1), "coded family: need non-empty Λ'' ⊆ {2,...,n-1}");
  require(static_cast<std::size_t>(b.size()) == lambda1.size(), "coded family: |b| != |Λ'|");
  require(static_cast<std::size_t>(bprime.size()) == lambda2.size(), "coded family: |b'| != |Λ''|");
  auto t1 = classify_pair(lambda1, b, m, classify_tol);
  auto t2 = classify_pair(lambda2, bprime, n, classify_tol);
  if (t1.value == PairTypeLabel::Unclassified)
    fail(ErrorCode::UnsupportedType, "x-side pair (" + lambda1.to_string() + ", b) is unclassified");
  if (t2.value == PairTypeLabel::Unclassified)
    fail(ErrorCode::UnsupportedType, "y-side pair (" + lambda2.to_string() + ", b') is unclassified");
  return GeneratorFamily(m, n, SideModel::make(m, lambda1, b, t1), SideModel::make(n, lambda2, bprime, t2));
}

GeneratorFamily GeneratorFamily::mixed(const IndexSet& lambda, int m, int n) {
  require(m >= 5, "mixed family: need m >= 5");
  require(n >= 3, "mixed family: need n >= 3");
  return coded(lambda, RealVec::Zero(lambda.size()), IndexSet{2}, RealVec::Ones(1), m, n);
}

int GeneratorFamily::parameter_count() const { return x_.vector_dim() + 1 + y_.vector_dim() + 1; }

double GeneratorFamily::theta_of(const RealVec& point) const {
  return point(static_cast<Eigen::Index>(x_.free_indices.size()) + x_.scalar_count());
}

double GeneratorFamily::phi_of(const RealVec& point) const { return point(point.size() - 1); }

void GeneratorFamily::check_admissible(const RealVec& point) const {
  require(point.size() == parameter_count(), "parameter vector has the wrong length");
  const double theta = theta_of(point), phi = phi_of(point);
  auto bad = [](const std::string& what) { fail(ErrorCode::IllConditionedPoint, what); };
  if (distance_to_lattice(theta, 0.0, kPi / 2) < kAngleMargin) bad("θ near lπ/2");
  if (distance_to_lattice(phi, 0.0, kPi / 2) < kAngleMargin) bad("φ near lπ/2");
  if (distance_to_lattice(phi - theta, 0.0, kPi) < kAngleMargin) bad("φ - θ near lπ");
  for (const SideModel* side : {&x_, &y_}) {
    if (auto offset = side->angle_offset()) {
      if (distance_to_lattice(theta, *offset, kPi) < kAngleMargin) bad("θ near lπ + arctan(r)");
      if (distance_to_lattice(phi, *offset, kPi) < kAngleMargin) bad("φ near lπ + arctan(r)");
    }
  }
}

Realization GeneratorFamily::realize(const RealVec& point) const {
  require(point.size() == parameter_count(), "parameter vector has the wrong length");
  Realization out;
  Eigen::Index k = 0;

  out.u = RealVec::Zero(m_ - 1);
  for (int j : x_.free_indices) out.u(j - 1) = point(k++);
  const Eigen::Index x_scalars = k;
  k += x_.scalar_count();
  out.theta = point(k++);

  out.v = RealVec::Zero(n_ - 1);
  for (int j : y_.free_indices) out.v(j - 1) = point(k++);
  const Eigen::Index y_scalars = k;
  k += y_.scalar_count();
  out.phi = point(k++);

  const double st = std::sin(out.theta), ct = std::cos(out.theta);
  const double sp = std::sin(out.phi), cp = std::cos(out.phi);
  const double s_diff = std::sin(out.phi - out.theta);

  // x(Λ') = c1 b and x'(Λ') = c2 b  <=>  u(Λ') = α b, u(Λ'-1) = β b.
  if (x_.type.value != PairTypeLabel::Type0) {
    const double c1 = point(x_scalars);
    double c2;
    if (x_.type.value == PairTypeLabel::Type2) {
      c2 = point(x_scalars + 1);
    } else {
      const double big_b = *x_.angle_offset();
      c2 = c1 * std::sin(out.phi - big_b) / std::sin(out.theta - big_b);
    }
    const double alpha = (c1 * sp - c2 * st) / s_diff;
    const double beta = (c1 * cp - c2 * ct) / s_diff;
    out.overlap_residual_x = assign_coded(out.u, x_, alpha, beta);
    out.c1 = c1;
    out.c2 = c2;
  }

  // y(Λ'') = c1' b' and y'(Λ'') = c2' b'  <=>  v(Λ'') = A b', v(Λ''-1) = Q b'.
  if (y_.type.value != PairTypeLabel::Type0) {
    const double c1p = point(y_scalars);
    double c2p;
    if (y_.type.value == PairTypeLabel::Type2) {
      c2p = point(y_scalars + 1);
    } else {
      const double big_b = *y_.angle_offset();
      c2p = c1p * std::sin(out.theta - big_b) / std::sin(out.phi - big_b);
    }
    const double a = (c1p * st - c2p * sp) / s_diff;
    const double q = (c1p * ct - c2p * cp) / s_diff;
    out.overlap_residual_y = assign_coded(out.v, y_, a, q);
    out.c1p = c1p;
    out.c2p = c2p;
  }
  return out;
}

RealVec GeneratorFamily::map(const RealVec& point) const {
  const Realization r = realize(point);
  RealVec out(m_ + n_);
  out.head(m_) = rotate_x(r.u, r.theta);
  out.tail(n_) = rotate_y(r.v, r.phi);
  return out;
}

RealVec GeneratorFamily::sample_point(Rng& rng) const {
  const int count = parameter_count();
  auto angle_ok = [&](double a) {
    if (distance_to_lattice(a, 0.0, kPi / 2) < kAngleMargin) return false;
    for (const SideModel* side : {&x_, &y_})
      if (auto offset = side->angle_offset(); offset && distance_to_lattice(a, *offset, kPi) < kAngleMargin)
        return false;
    return true;
  };
  auto fill_side = [&](const SideModel& side, RealVec& point, Eigen::Index& k) {
    for (int j : side.free_indices) {
      const bool endpoint = (j == 1 || j == side.d - 1);
      point(k++) = endpoint ? rng.normal_away_from_zero(kSampleMargin) : rng.normal();
    }
    for (int i = 0; i < side.scalar_count(); ++i) point(k++) = rng.normal_away_from_zero(kSampleMargin);
  };

  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    RealVec point(count);
    Eigen::Index k = 0;
    fill_side(x_, point, k);
    const Eigen::Index theta_at = k++;
    fill_side(y_, point, k);
    const Eigen::Index phi_at = k++;

    double theta, phi;
    do theta = rng.uniform(0.0, kPi);
    while (!angle_ok(theta));
    do phi = rng.uniform(0.0, kPi);
    while (!angle_ok(phi) || distance_to_lattice(phi - theta, 0.0, kPi) < kAngleMargin);
    point(theta_at) = theta;
    point(phi_at) = phi;

    const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
    bool ok = true;
    if (x_.type.value == PairTypeLabel::Type2) {
      const double c1 = point(theta_at - 2), c2 = point(theta_at - 1);
      ok = ok && std::abs(c1 * sp - c2 * st) >= kSampleMargin && std::abs(c1 * cp - c2 * ct) >= kSampleMargin;
    }
    if (y_.type.value == PairTypeLabel::Type2) {
      const double c1p = point(phi_at - 2), c2p = point(phi_at - 1);
      ok = ok && std::abs(c1p * st - c2p * sp) >= kSampleMargin && std::abs(c1p * ct - c2p * cp) >= kSampleMargin;
    }
    if (!ok) continue;

    const Realization r = realize(point);
    if (std::abs(r.u(0)) < kSampleMargin || std::abs(r.u(m_ - 2)) < kSampleMargin) continue;
    if (std::abs(r.v(0)) < kSampleMargin || std::abs(r.v(n_ - 2)) < kSampleMargin) continue;
    for (auto c : {r.c1, r.c2, r.c1p, r.c2p})
      if (c && std::abs(*c) < kSampleMargin) ok = false;
    if (ok) return point;
  }
  fail(ErrorCode::InfeasibleSpec, "could not sample an admissible parameter point");
}

AdversarialInstance GeneratorFamily::instance(const RealVec& point) const {
  check_admissible(point);
  Realization r = realize(point);
  if (r.overlap_residual_x > kConsistencyTol || r.overlap_residual_y > kConsistencyTol)
    fail(ErrorCode::InternalConsistency, "Type-1 overlap assignments disagree");

  // Canonical representative of the scaling class: ||x||_2 = 1.
  const double s = 1.0 / rotate_x(r.u, r.theta).norm();
  AdversarialInstance inst;
  inst.m = m_;
  inst.n = n_;
  inst.params.u = r.u * s;
  inst.params.v = r.v / s;
  inst.params.angles = {r.theta, r.phi};
  if (r.c1) inst.params.c1 = *r.c1 * s;
  if (r.c2) inst.params.c2 = *r.c2 * s;
  if (r.c1p) inst.params.c1p = *r.c1p / s;
  if (r.c2p) inst.params.c2p = *r.c2p / s;
  inst.pair1 = build_pair_from_params(inst.params.u, inst.params.v, r.theta, r.phi);
  inst.pair2 = certificate_from_params(inst.params.u, inst.params.v, r.theta, r.phi);
  inst.cones = {x_.cone(), y_.cone()};
  inst.claimed_dim = claimed_dim();
  return inst;
}

// ---------------------------------------------------------------------------

AdversarialInstance gen_sparse_instance(const IndexSet& lambda1, const IndexSet& lambda2, int m, int n,
                                        std::uint64_t seed) {
  const auto family = GeneratorFamily::sparse(lambda1, lambda2, m, n);
  Rng rng(seed);
  return family.instance(family.sample_point(rng));
}

AdversarialInstance gen_coded_instance(const IndexSet& lambda1, const RealVec& b, const IndexSet& lambda2,
                                       const RealVec& bprime, int m, int n, std::uint64_t seed,
                                       double classify_tol) {
  const auto family = GeneratorFamily::coded(lambda1, b, lambda2, bprime, m, n, classify_tol);
  Rng rng(seed);
  return family.instance(family.sample_point(rng));
}

AdversarialInstance gen_mixed_instance(const IndexSet& lambda, int m, const RealVec& y, std::uint64_t seed) {
  const int n = static_cast<int>(y.size());
  require(m >= 5, "gen_mixed_instance: need m >= 5");
  require(n >= 4 && n % 2 == 0, "gen_mixed_instance: n must be even and >= 4");
  require(!lambda.empty() && lambda.within(3, m - 2), "gen_mixed_instance: need non-empty Λ ⊆ {3,...,m-2}");
  require(y.allFinite() && y(0) != 0.0 && y(n - 1) != 0.0, "gen_mixed_instance: y must have nonzero endpoints");

  // y = sin φ (0;v) - cos φ (v;0) is the quotient form with γ = φ, w★ = -v.
  std::optional<QuotientElement> chosen;
  for (auto& e : decompose(y)) {
    if (distance_to_lattice(e.gamma, 0.0, kPi / 2) >= kAngleMargin) {
      chosen = std::move(e);
      break;
    }
  }
  if (!chosen) fail(ErrorCode::NoCertificateFound, "no quotient element of y has an admissible angle");
  const double phi = chosen->gamma;
  const RealVec v = -chosen->w_star;

  Rng rng(seed);
  double theta;
  do theta = rng.uniform(0.0, kPi);
  while (distance_to_lattice(theta, 0.0, kPi / 2) < kAngleMargin ||
         distance_to_lattice(phi - theta, 0.0, kPi) < kAngleMargin);

  const IndexSet constrained = lambda.unite(shift_minus_one(lambda));
  RealVec u = sample(ConeSpec::zero(constrained, m - 1), rng.next());
  u /= rotate_x(u, theta).norm();

  AdversarialInstance inst;
  inst.m = m;
  inst.n = n;
  inst.params.u = u;
  inst.params.v = v;
  inst.params.angles = {theta, phi};
  inst.pair1 = {rotate_x(u, theta), y};
  inst.pair2 = certificate_from_params(u, v, theta, phi);
  inst.cones = {ConeSpec::zero(lambda, m), ConeSpec::unconstrained(n)};
  inst.claimed_dim = m + n - p_of(lambda) - 1;
  return inst;
}

std::pair<IndexSet, RealVec> random_side_config(PairTypeLabel type, int d, Rng& rng) {
  auto random_subset = [&](int lo, int hi) {
    std::vector<int> idx;
    for (int j = lo; j <= hi; ++j)
      if (rng.coin()) idx.push_back(j);
    return idx;
  };
  switch (type) {
    case PairTypeLabel::Type0: {
      require(d >= 5, "random_side_config: Type0 needs d >= 5");
      std::vector<int> idx;
      while (idx.empty()) idx = random_subset(3, d - 2);
      return {IndexSet(idx), RealVec::Zero(static_cast<Eigen::Index>(idx.size()))};
    }
    case PairTypeLabel::Type1: {
      require(d >= 4, "random_side_config: Type1 needs d >= 4");
      const int start = rng.uniform_int(2, d - 2);
      std::vector<int> idx = random_subset(2, d - 1);
      for (int j : {start, start + 1})
        if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
      IndexSet lambda(idx);
      double r = 1.0;
      if (rng.coin()) {
        r = rng.uniform(0.3, 2.0);
        if (rng.coin()) r = -r;
      }
      RealVec b(static_cast<Eigen::Index>(lambda.size()));
      double v = 1.0;
      for (Eigen::Index i = 0; i < b.size(); ++i, v *= r) b(i) = v;
      return {std::move(lambda), std::move(b)};
    }
    case PairTypeLabel::Type2: {
      require(d >= 3, "random_side_config: Type2 needs d >= 3");
      std::vector<int> idx;
      for (int j = 2; j <= d - 1; ++j)
        if ((idx.empty() || idx.back() != j - 1) && rng.coin()) idx.push_back(j);
      if (idx.empty()) idx.push_back(rng.uniform_int(2, d - 1));
      RealVec b(static_cast<Eigen::Index>(idx.size()));
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.normal_away_from_zero(kSampleMargin);
      return {IndexSet(idx), std::move(b)};
    }
    case PairTypeLabel::Unclassified: break;
  }
  fail(ErrorCode::InvalidArgument, "random_side_config: no configurations of unclassified type");
}

// ---------------------------------------------------------------------------

RealVec rotational_closed_form(const RealVec& x1, const RealVec& y1, const RealVec& x2, const RealVec& y2,
                               double theta, double phi) {
  const RealVec z0 = convolve(x1, y1);
  return z0 * std::sin(theta + phi) - convolve(x2, y1) * std::sin(theta) * std::sin(phi) -
         convolve(x1, y2) * std::cos(theta) * std::cos(phi);
}

std::pair<SignalPair, SignalPair> rotational_family(const RealVec& x1, const RealVec& y1, const RealVec& x2,
                                                    const RealVec& y2, double theta, double phi, double tol) {
  require(x1.size() == x2.size() && y1.size() == y2.size(), "rotational_family: seed length mismatch");
  const RealVec z1 = convolve(x1, y1), z2 = convolve(x2, y2);
  require((z1 - z2).lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, z1.lpNorm<Eigen::Infinity>()),
          "rotational_family: seed pairs do not share a convolution");
  require(!collinear(x1, x2, 1e-9), "rotational_family: x1 and x2 are collinear");
  require(std::abs(std::sin(theta - phi)) > 1e-12, "rotational_family: θ = φ mod π");
  SignalPair first{x1 * std::cos(theta) - x2 * std::sin(theta), y1 * std::sin(phi) - y2 * std::cos(phi)};
  SignalPair second{x1 * std::cos(phi) - x2 * std::sin(phi), y1 * std::sin(theta) - y2 * std::cos(theta)};
  return {std::move(first), std::move(second)};
}

}  // namespace ambiglab
