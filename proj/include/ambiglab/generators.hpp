#pragma once

// Certified unidentifiable instances.
//
// Every generator works from a 4-tuple (u, v, θ, φ):
//
//   x  = cos θ (u;0) - sin θ (0;u),   y  = sin φ (0;v) - cos φ (v;0)
//   x' = cos φ (u;0) - sin φ (0;u),   y' = sin θ (0;v) - cos θ (v;0)
//
// so that x y^T - x' y'^T = sin(φ - θ) Q(u, v) lies in the rank-two null
// space of the lifted convolution operator. The cone constraints on (x, y)
// become linear constraints on u and v (see GeneratorFamily).

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "ambiglab/cones.hpp"
#include "ambiglab/convolution.hpp"
#include "ambiglab/rng.hpp"

namespace ambiglab {

/// Angles closer than this to an excluded set are rejected by samplers and
/// treated as ill-conditioned by the Jacobian probe.
inline constexpr double kAngleMargin = 1e-3;
inline constexpr double kConsistencyTol = 1e-10;

struct SignalPair {
  RealVec x;
  RealVec y;
};

struct AngleParams {
  double theta = 0.0;
  double phi = 0.0;
};

struct GeneratorParams {
  RealVec u;
  RealVec v;
  AngleParams angles;
  std::optional<double> c1, c2, c1p, c2p;
};

struct AdversarialInstance {
  int m = 0;
  int n = 0;
  SignalPair pair1;
  SignalPair pair2;
  GeneratorParams params;
  std::array<ConeSpec, 2> cones;
  int claimed_dim = 0;
};

SignalPair build_pair_from_params(const RealVec& u, const RealVec& v, double theta, double phi);
SignalPair certificate_from_params(const RealVec& u, const RealVec& v, double theta, double phi);

/// Distance from a to the nearest point of {offset + lπ/k}.
double distance_to_lattice(double a, double offset, double period);

/// One side (x or y) of a generator family: which entries of u (or v) are
/// free and how the constrained entries Λ ∪ (Λ-1) are tied to the code b.
struct SideModel {
  int d = 0;  // signal length (m or n); u has length d-1
  IndexSet lambda;
  RealVec b;
  PairType type;
  IndexSet constrained;            // Λ ∪ (Λ-1), indices into u
  std::vector<int> free_indices;   // complement in {1,...,d-1}

  static SideModel make(int d, IndexSet lambda, RealVec b, PairType type);

  int p() const { return static_cast<int>(constrained.size()); }
  int t() const { return type.t(); }
  /// Number of free code scalars: Type0 none, Type1 c1, Type2 (c1, c2).
  int scalar_count() const;
  /// d - 1 - p + t, the generic dimension of the admissible u (or v).
  int vector_dim() const { return d - 1 - p() + t(); }
  std::optional<double> angle_offset() const;  // B = arctan(r) for Type1
  ConeSpec cone() const;
};

/// Parameter vector layout: [u free | x scalars | θ | v free | y scalars | φ].
struct Realization {
  RealVec u, v;
  double theta = 0.0, phi = 0.0;
  std::optional<double> c1, c2, c1p, c2p;
  /// Relative disagreement between the two assignments of the overlap
  /// entries u(Λ ∩ (Λ-1)) (Type1 only; 0 otherwise).
  double overlap_residual_x = 0.0;
  double overlap_residual_y = 0.0;
};

class GeneratorFamily {
 public:
  /// Canonical-sparse family: both sides zero cones (Type0).
  static GeneratorFamily sparse(const IndexSet& lambda1, const IndexSet& lambda2, int m, int n);
  /// Coded family; both (Λ, b) pairs classified, Unclassified rejected.
  static GeneratorFamily coded(const IndexSet& lambda1, const RealVec& b, const IndexSet& lambda2,
                               const RealVec& bprime, int m, int n, double classify_tol = kDefaultConeTol);
  /// Zero cone on x, unconstrained y. The y side is encoded as the Type2
  /// singleton ({2}, b' = 1), which only asks y(2) != 0 and so is generic.
  static GeneratorFamily mixed(const IndexSet& lambda, int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  const SideModel& x_side() const { return x_; }
  const SideModel& y_side() const { return y_; }

  int parameter_count() const;
  /// Generic dimension after quotienting by scaling: m+n-1-p-p'+t+t'.
  int claimed_dim() const { return parameter_count() - 1; }

  RealVec sample_point(Rng& rng) const;
  /// Throws ill-conditioned-point if an angle is within kAngleMargin of an
  /// excluded set.
  void check_admissible(const RealVec& point) const;
  Realization realize(const RealVec& point) const;
  /// (x; y) for the parameter point.
  RealVec map(const RealVec& point) const;
  /// Normalized instance (||x||_2 = 1) with its certificate pair.
  AdversarialInstance instance(const RealVec& point) const;

  double theta_of(const RealVec& point) const;
  double phi_of(const RealVec& point) const;

 private:
  GeneratorFamily(int m, int n, SideModel x, SideModel y) : m_(m), n_(n), x_(std::move(x)), y_(std::move(y)) {}

  int m_, n_;
  SideModel x_, y_;
};

AdversarialInstance gen_sparse_instance(const IndexSet& lambda1, const IndexSet& lambda2, int m, int n,
                                        std::uint64_t seed);

/// y is taken as given; n = |y| must be even and >= 4.
AdversarialInstance gen_mixed_instance(const IndexSet& lambda, int m, const RealVec& y, std::uint64_t seed);

AdversarialInstance gen_coded_instance(const IndexSet& lambda1, const RealVec& b, const IndexSet& lambda2,
                                       const RealVec& bprime, int m, int n, std::uint64_t seed,
                                       double classify_tol = kDefaultConeTol);

/// Random (Λ, b) on {2,...,d-1} of the requested type: Type0 has b = 0 and
/// Λ ⊆ {3,...,d-2}; Type1 has an adjacent pair in Λ and a geometric code
/// b(i) = r^(i-1); Type2 has no adjacent pair and a Gaussian code.
std::pair<IndexSet, RealVec> random_side_config(PairTypeLabel type, int d, Rng& rng);

/// x1' = x1 cos θ - x2 sin θ, y1' = y1 sin φ - y2 cos φ,
/// x2' = x1 cos φ - x2 sin φ, y2' = y1 sin θ - y2 cos θ.
std::pair<SignalPair, SignalPair> rotational_family(const RealVec& x1, const RealVec& y1, const RealVec& x2,
                                                    const RealVec& y2, double theta, double phi,
                                                    double tol = 1e-12);

/// z0 sin(θ+φ) - (x2⋆y1) sin θ sin φ - (x1⋆y2) cos θ cos φ.
RealVec rotational_closed_form(const RealVec& x1, const RealVec& y1, const RealVec& x2, const RealVec& y2,
                               double theta, double phi);

}  // namespace ambiglab
