#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "specflow/symreal.hpp"

namespace specflow {

/// Piecewise-constant roof on the circle. f = v_i on [xi_i, xi_{i+1}) (cyclic),
/// right-continuous, jump d_i = (left limit) - (right limit) at xi_i, so
/// v_{i+1} = v_i - d_{i+1}.
class RoofPC {
 public:
  /// Validates p >= 2, sorted distinct xi in [0,1), every d_i != 0, S(f) = 0 and
  /// positivity of every value. Throws Error(Precondition) otherwise.
  static RoofPC make(std::vector<SymReal> xi, std::vector<SymReal> d, SymReal v1);

  std::size_t p() const { return xi_.size(); }
  const BasisPtr& basis() const { return xi_.front().basis(); }
  const cf::CFContext& ctx() const { return basis()->ctx(); }
  const std::vector<SymReal>& xi() const { return xi_; }
  const std::vector<SymReal>& d() const { return d_; }
  /// Value on [xi_i, xi_{i+1}), 0-based.
  const std::vector<SymReal>& values() const { return v_; }
  const SymReal& a() const { return v_[min_index_]; }
  const SymReal& max_value() const { return v_[max_index_]; }
  /// Var f = sum |d_i|, exact.
  const SymReal& variation() const { return variation_; }
  double variation_double() const { return variation_double_; }
  /// Exact integral; throws InsufficientStructure when xi_i * v_i leaves the basis.
  SymReal integral() const;
  double integral_double() const { return integral_double_; }

  const std::vector<Fixed>& xi_fixed() const { return xi_fixed_; }
  const std::vector<double>& values_double() const { return v_double_; }

  /// Index i with x in [xi_i, xi_{i+1}) cyclically; x is reduced mod 1 first.
  std::size_t locate(const SymReal& x) const;
  /// Same for a fixed-point position; nullopt when within the guard band of a breakpoint.
  std::optional<std::size_t> locate_fixed(Fixed x) const;

 private:
  std::vector<SymReal> xi_, d_, v_;
  std::size_t min_index_ = 0, max_index_ = 0;
  SymReal variation_;
  double variation_double_ = 0;
  double integral_double_ = 0;
  std::vector<Fixed> xi_fixed_;
  std::vector<double> v_double_;
};

SymReal value_at(const RoofPC& f, const SymReal& x);
/// The orbit point x + j*alpha reduced mod 1.
SymReal orbit_point(const SymReal& x, long j);

/// Visit counts per roof interval of x + j*alpha for j in [j0, j0 + n).
std::vector<long> interval_counts(const RoofPC& f, const SymReal& x, long j0, long n);

/// interval_counts(f, k/grid, 0, q) for every k < grid, computed by sweeping x
/// across the discontinuities xi_i - j*alpha of f^{(q)}.
std::vector<std::vector<long>> grid_interval_counts(const RoofPC& f, long q, std::size_t grid);

/// f^{(n)}(x); n may be negative.
SymReal birkhoff(const RoofPC& f, const SymReal& x, long n);

/// Hits of xi_i - j*alpha in the forward arc (x, y], evaluated per j with
/// fixed-point arithmetic and exact fallback near the arc ends.
class ArcCounter {
 public:
  ArcCounter(const RoofPC& f, const SymReal& x, const SymReal& y);
  /// Appends every i with xi_i - j*alpha in (x, y].
  void hits(long j, std::vector<std::size_t>& out) const;
  /// Counts per i over j in [0, n).
  std::vector<long> counts(long n) const;
  std::size_t exact_fallbacks() const { return fallbacks_; }

 private:
  bool exact_hit(std::size_t i, long j) const;

  const RoofPC& f_;
  SymReal x_, arc_;
  Fixed x_fixed_, arc_fixed_, alpha_fixed_;
  mutable std::size_t fallbacks_ = 0;
};

/// f^{(n)}(x) - f^{(n)}(y) = sum_i d_i #{0 <= j < n : xi_i - j alpha in (x, y]}.
SymReal birkhoff_diff(const RoofPC& f, const SymReal& x, const SymReal& y, long n);

struct DiscontinuityPoint {
  SymReal point;                                  // in [0,1)
  std::vector<std::pair<std::size_t, long>> src;  // (i, j) with xi_i - j alpha = point
  SymReal jump;                                   // jump of f^{(n)} there
  bool genuine() const { return !jump.is_zero(); }
};

struct DiscontinuityAudit {
  std::vector<SymReal> multiset;  // all p*n points, ordered by (j, i)
  std::vector<DiscontinuityPoint> distinct;
  std::size_t genuine_count = 0;
};

DiscontinuityAudit discontinuities(const RoofPC& f, long n);

struct EquivalenceStructure {
  std::vector<std::vector<std::size_t>> classes_sim;  // xi_i - xi_j in Z + Z alpha
  std::vector<std::vector<std::size_t>> classes_q;    // xi_i - xi_j in Q + Q alpha
  std::vector<std::size_t> sim_of;                    // class index per point
  std::vector<std::size_t> q_of;
  std::vector<SymReal> class_sums;                    // per sim class
};

EquivalenceStructure equivalence_structure(const RoofPC& f);

struct P1Verdict {
  bool holds = false;
  std::optional<linalg::IntVector> witness;      // in Z^p
  std::vector<std::size_t> witness_selection;    // index set carrying the witness
  std::size_t selections_checked = 0;
  std::vector<linalg::IntVector> lattice;        // relation lattice of all d
};

P1Verdict check_p1(const RoofPC& f);

struct P2Verdict {
  bool holds = false;
  Membership qalpha_span;   // a in sum (Q + Q alpha) d_i
  bool rational_span_member = false;  // a in sum Q d_i (necessary check)
  /// Integer coefficients n with integral - a - sum d_i xi_i = sum n_i d_i, when
  /// the integral is representable.
  std::optional<linalg::IntVector> identity_coefficients;
  std::string identity_note;
};

P2Verdict check_p2(const RoofPC& f);

/// Residual integral - a - sum d_i xi_i.
SymReal remnien_residual(const RoofPC& f);

struct EigenReport {
  bool solvable = false;
  std::vector<SymReal> class_sums;
  std::vector<bool> class_ok;
  bool clause_classes = false;
  bool clause_integral = false;
  SymReal scaled_integral;
};

EigenReport eigenvalue_criterion(const RoofPC& f, const SymReal& r);

struct WeakMixingVerdict {
  bool weakly_mixing = false;
  std::string reason;
};

WeakMixingVerdict weak_mixing_verdict(const RoofPC& f);

struct TrigMode {
  long n;
  std::complex<double> c;
};

struct CoboundaryResult {
  std::vector<TrigMode> u;
  double residual = 0;
  std::size_t grid_points = 0;
  bool within_tolerance = false;
};

/// Solves u(x + alpha) - u(x) = zeta(x) mode by mode for 0 < |n| <= n_modes and
/// reports the sup residual on a uniform grid. zeta must have zero mean.
CoboundaryResult coboundary_reduce(const std::vector<TrigMode>& zeta, const cf::CFContext& ctx, long n_modes,
                                   std::size_t grid = 1000, double tolerance = 1e-10);

std::complex<double> eval_trig(const std::vector<TrigMode>& modes, double x);

}  // namespace specflow
