#include "ambiglab/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>
#include <vector>

#include <Eigen/SVD>

namespace ambiglab {

namespace {

RealVec inf_normalized(const RealVec& w) {
  const double s = w.lpNorm<Eigen::Infinity>();
  return s > 0.0 ? RealVec(w / s) : w;
}

/// Tests (x2, y2) = (α x1, y1 / α) with α fitted on whichever factor of pair
/// one has the larger magnitude.
bool equivalent_one_way(const SignalPair& p1, const SignalPair& p2, double tol) {
  const double nx = p1.x.lpNorm<Eigen::Infinity>(), ny = p1.y.lpNorm<Eigen::Infinity>();
  if (nx == 0.0 || ny == 0.0) return false;
  double alpha;
  if (nx >= ny) {
    alpha = p1.x.dot(p2.x) / p1.x.squaredNorm();
  } else {
    const double inv = p1.y.dot(p2.y) / p1.y.squaredNorm();
    alpha = 1.0 / inv;
  }
  if (!std::isfinite(alpha) || alpha == 0.0) return false;
  const double rx = (p2.x - alpha * p1.x).lpNorm<Eigen::Infinity>();
  const double ry = (p2.y - p1.y / alpha).lpNorm<Eigen::Infinity>();
  const double sx = std::max(p2.x.lpNorm<Eigen::Infinity>(), std::abs(alpha) * nx);
  const double sy = std::max(p2.y.lpNorm<Eigen::Infinity>(), ny / std::abs(alpha));
  return rx <= tol * sx && ry <= tol * sy;
}

struct RankInfo {
  int rank = 0;
  int loose_rank = 0;
  bool scaling_in_range = false;
};

RankInfo analyze(const RealMat& j, const RealVec& scaling_dir, double svd_tol) {
  Eigen::JacobiSVD<RealMat> svd(j, Eigen::ComputeThinU);
  const RealVec& s = svd.singularValues();
  RankInfo info;
  if (s.size() == 0 || s(0) == 0.0) return info;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > svd_tol * s(0)) ++info.rank;
    if (s(i) > 100.0 * svd_tol * s(0)) ++info.loose_rank;
  }
  const RealMat ur = svd.matrixU().leftCols(info.rank);
  const RealVec resid = scaling_dir - ur * (ur.transpose() * scaling_dir);
  info.scaling_in_range = resid.norm() <= 1e-6 * scaling_dir.norm();
  return info;
}

}  // namespace

bool check_pathology(const RealVec& x, const RealVec& y, double tol) {
  if (x.size() == 0 || y.size() == 0) return false;
  return std::abs(x(0)) > tol && std::abs(x(x.size() - 1)) > tol && std::abs(y(0)) > tol &&
         std::abs(y(y.size() - 1)) > tol;
}

bool equivalent_pairs(const SignalPair& p1, const SignalPair& p2, double tol) {
  if (p1.x.size() != p2.x.size() || p1.y.size() != p2.y.size()) return false;
  return equivalent_one_way(p1, p2, tol) || equivalent_one_way(p2, p1, tol);
}

VerificationReport verify_instance(const AdversarialInstance& inst, double tol) {
  const auto& [x1, y1] = inst.pair1;
  const auto& [x2, y2] = inst.pair2;
  require(x1.size() == inst.m && x2.size() == inst.m, "verify_instance: x length != m");
  require(y1.size() == inst.n && y2.size() == inst.n, "verify_instance: y length != n");
  require(inst.cones[0].d == inst.m && inst.cones[1].d == inst.n, "verify_instance: cone dimension mismatch");

  VerificationReport r;
  const RealVec z1 = convolve(x1, y1), z2 = convolve(x2, y2);
  const double scale = std::max(z1.lpNorm<Eigen::Infinity>(), z2.lpNorm<Eigen::Infinity>());
  const double diff = (z1 - z2).lpNorm<Eigen::Infinity>();
  r.conv_residual = scale > 0.0 ? diff / scale : diff;
  if (!std::isfinite(r.conv_residual)) r.conv_residual = std::numeric_limits<double>::infinity();

  const RealVec nx1 = inf_normalized(x1), ny1 = inf_normalized(y1);
  const RealVec nx2 = inf_normalized(x2), ny2 = inf_normalized(y2);
  r.membership = {member(nx1, inst.cones[0], tol), member(ny1, inst.cones[1], tol),
                  member(nx2, inst.cones[0], tol), member(ny2, inst.cones[1], tol)};

  if (x1.allFinite() && x2.allFinite() && !x1.isZero(0.0) && !x2.isZero(0.0))
    r.noncollinear = !collinear(x1, x2, kNoncollinearTol);
  r.pathology_free = check_pathology(nx1, ny1, tol) && check_pathology(nx2, ny2, tol);
  r.equivalent_pairs = equivalent_pairs(inst.pair1, inst.pair2, tol);
  r.pass = r.conv_residual <= tol && std::all_of(r.membership.begin(), r.membership.end(), [](bool b) { return b; }) &&
           r.noncollinear && r.pathology_free && !r.equivalent_pairs;
  return r;
}

RealMat jacobian(const GeneratorFamily& family, const RealVec& point, double fd_step) {
  require(fd_step > 0.0, "jacobian: fd_step must be positive");
  const int rows = family.m() + family.n();
  RealMat j(rows, point.size());
  RealVec p = point;
  for (Eigen::Index k = 0; k < point.size(); ++k) {
    p(k) = point(k) + fd_step;
    const RealVec fp = family.map(p);
    p(k) = point(k) - fd_step;
    const RealVec fm = family.map(p);
    p(k) = point(k);
    j.col(k) = (fp - fm) / (2.0 * fd_step);
  }
  return j;
}

int jacobian_rank(const GeneratorFamily& family, const RealVec& point, double fd_step, double svd_tol) {
  family.check_admissible(point);
  const RealVec f = family.map(point);
  RealVec dir(f.size());
  dir << f.head(family.m()), -f.tail(family.n());
  return analyze(jacobian(family, point, fd_step), dir, svd_tol).rank;
}

TrialRank probe_trial(const GeneratorFamily& family, std::uint64_t seed, const DimProbeOptions& opts) {
  TrialRank out;
  try {
    Rng rng(seed);
    const RealVec point = family.sample_point(rng);
    family.check_admissible(point);
    const RealVec f = family.map(point);
    RealVec dir(f.size());
    dir << f.head(family.m()), -f.tail(family.n());

    const RankInfo full = analyze(jacobian(family, point, opts.fd_step), dir, opts.svd_tol);
    const RankInfo half = analyze(jacobian(family, point, opts.fd_step / 2), dir, opts.svd_tol);
    if (full.rank != full.loose_rank || full.rank != half.rank) return out;
    out.pre = full.rank;
    out.post = full.rank - (full.scaling_in_range ? 1 : 0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditionedPoint && e.code() != ErrorCode::InfeasibleSpec) throw;
  }
  return out;
}

DimProbeResult estimate_unidentifiable_dim(const GeneratorFamily& family, int trials, std::uint64_t seed,
                                           const DimProbeOptions& opts) {
  require(trials >= 1, "estimate_unidentifiable_dim: trials must be >= 1");
  std::vector<TrialRank> ranks(trials);

  const int threads = std::clamp(opts.threads, 1, trials);
  if (threads == 1) {
    for (int i = 0; i < trials; ++i) ranks[i] = probe_trial(family, derive_seed(seed, i), opts);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (int i = next++; i < trials; i = next++) ranks[i] = probe_trial(family, derive_seed(seed, i), opts);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  DimProbeResult res;
  res.claimed = family.claimed_dim();
  res.samples = trials;
  std::map<std::pair<int, int>, int> votes;
  for (const auto& r : ranks) {
    if (r.pre < 0) {
      ++res.inconclusive;
      continue;
    }
    ++res.conclusive;
    ++votes[{r.pre, r.post}];
    if (opts.lower_bound ? r.post >= res.claimed : r.post == res.claimed) ++res.agreeing;
  }
  if (2 * res.inconclusive > trials)
    fail(ErrorCode::Inconclusive, "more than half of the probe trials were inconclusive");

  int best = 0;
  bool tied = false;
  for (const auto& [key, count] : votes) {
    if (count > best) {
      best = count;
      tied = false;
      res.measured_pre_quotient = key.first;
      res.measured_post_quotient = key.second;
    } else if (count == best) {
      tied = true;
    }
  }
  if (tied) fail(ErrorCode::Inconclusive, "tied majority vote over probe ranks");
  res.agreement = opts.lower_bound ? res.measured_post_quotient >= res.claimed
                                   : res.measured_post_quotient == res.claimed;
  return res;
}

}  // namespace ambiglab
