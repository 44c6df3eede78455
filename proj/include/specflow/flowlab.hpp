#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specflow/roof.hpp"

namespace specflow {

/// Phase point (x, s) of the special flow, 0 <= s < f(x).
struct FlowPoint {
  SymReal x;
  SymReal s;
};

/// Float-mode phase point: exact fixed-point circle coordinate, double height.
struct FlowPointF {
  Fixed x;
  double s;
};

/// Exact flow map T^f_t. Throws Precondition when pt is not under the roof.
FlowPoint flow_map(const RoofPC& f, const FlowPoint& pt, const SymReal& t);
FlowPointF flow_map(const RoofPC& f, const FlowPointF& pt, double t);

double roof_value(const RoofPC& f, Fixed x);

/// Product of a circle interval [x0, x1) (no wrap) and a height interval [s0, s1).
struct Rect {
  SymReal x0, x1, s0, s1;
  double dx0 = 0, dx1 = 0, ds0 = 0, ds1 = 0;
  bool contains(const FlowPointF& p) const;
};

/// Validates the rectangle (ordered, inside [0,1], under the roof).
Rect make_rect(const RoofPC& f, SymReal x0, SymReal x1, SymReal s0, SymReal s1);

struct PhaseMeasure {
  SymReal area;
  SymReal integral;
  double ratio = 0;
};

/// Normalized measure of a union of pairwise disjoint rectangles.
PhaseMeasure phase_measure(const RoofPC& f, const std::vector<Rect>& rects);

bool in_union(const std::vector<Rect>& rects, const FlowPointF& p);

/// Uniform samples of the phase space by rejection from [0,1) x [0, max f).
std::vector<FlowPointF> sample_phase(const RoofPC& f, std::size_t n, std::uint64_t seed, unsigned shards = 8);

struct CorrelationEstimate {
  double t = 0;
  double estimate = 0;
  double radius = 0;  // 95% binomial radius
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of the normalized measure of T_{-t}A intersected with B.
CorrelationEstimate correlation(const RoofPC& f, const std::vector<Rect>& a, const std::vector<Rect>& b, double t,
                                std::size_t n_samples, std::uint64_t seed);

struct Atom {
  SymReal value;
  double value_double = 0;
  mpq_class mass;
};

struct RigidityReport {
  long n = 0;
  mpz_class q_n;
  double t_n = 0;  // q_n * integral
  SymReal gamma;   // f^{(q_n)}(0) - q_n * integral
  std::vector<SymReal> d_set;  // D = sum d_i {-2..2}
  std::vector<Atom> atoms;     // sorted by decreasing mass, then value
  std::size_t grid = 0;
  bool all_in_predicted = false;
  mpq_class u;  // heaviest atom mass
};

RigidityReport qn_distribution(const RoofPC& f, long n, std::size_t grid);

struct DkRow {
  long n = 0;
  mpz_class q_n;
  SymReal max_deviation;
  double max_deviation_double = 0;
  double max_float_gap = 0;  // |exact - float| over the grid
  bool within_variation = false;
};

struct DkAudit {
  SymReal variation;
  std::vector<DkRow> rows;
  bool all_within = false;
  bool float_agrees = false;
};

DkAudit dk_audit(const RoofPC& f, long n_max, std::size_t grid, double float_tol = 1e-9);

}  // namespace specflow
