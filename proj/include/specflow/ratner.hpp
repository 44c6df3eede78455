#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specflow/roof.hpp"

namespace specflow {

struct RatnerConstants {
  mpq_class c;
  long big_c = 0;
  std::size_t p = 0;
  long h = 1;
  mpq_class r;      // 2/c^5 + 1
  long r_int = 0;   // floor(r), the coefficient bound in V
  mpq_class kappa;  // c^10 / (4 p H^2 (1 + c^5))
  std::vector<linalg::IntVector> lattice;  // relations among the jumps
  /// delta(N) = c^7 / (2 p H^2 (1 + c^5) N)
  mpq_class delta(long n) const;
};

/// Requires (P1); throws Precondition otherwise.
RatnerConstants ratner_constants(const RoofPC& f, long j_max = 10000);

/// Membership of sum r_i d_i in V. The given integer vector is one
/// representation; other representations differ by the relation lattice.
bool in_v(const RatnerConstants& k, const std::vector<long>& r);

struct RunSegment {
  long n_begin = 0;  // inclusive
  long n_end = 0;    // inclusive
  std::vector<long> r;  // signed counts, Delta = sum r_i d_i
};

struct WitnessReport {
  long s = 0;
  mpz_class q_s, q_s4;
  long m = 0;
  long l = 0;
  SymReal rho;
  std::vector<long> rho_coeffs;
  std::vector<RunSegment> trace;  // run-length trace over [q_s, q_{s+4})
  long j_length = 0;              // longest stretch with Delta != 0
  long disc_in_arc = 0;           // discontinuities of f^{(q_{s+4})} in the short arc
  bool all_in_v = false;
  bool kappa_ok = false;
  bool n_ok = false;
  bool rho_in_f = false;
  bool split_ok = false;
  bool start_maximal = false;
};

/// Scans n in [q_s, q_{s+4}) and returns the longest run on which
/// f^{(n)}(x) - f^{(n)}(y) is a nonzero constant. Throws AssertionFailed when a
/// guarantee fails and Precondition when ||x - y|| >= delta(N).
WitnessReport find_witness(const RoofPC& f, const RatnerConstants& k, const SymReal& x, const SymReal& y, long n_min);

/// Recomputes f^{(n)}(x) - f^{(n)}(y) for n in [M, M+L] by walking both orbits
/// through the roof intervals, independently of the arc counter.
bool recheck_witness(const RoofPC& f, const SymReal& x, const SymReal& y, const WitnessReport& w);

struct ClosePair {
  SymReal x, y;
  mpq_class gap;  // y - x mod 1, in [delta/32, delta)
};

/// Random symbolic pairs at distance below delta(n_min): x is a 40-bit dyadic
/// plus a small rational multiple of the first non-alpha symbol when one exists.
std::vector<ClosePair> sample_close_pairs(const RoofPC& f, const RatnerConstants& k, long n_min, std::size_t count,
                                          std::uint64_t seed);

struct RPropertyOptions {
  double t0 = 1.0;
  std::vector<double> p_set;
  double eps = 0.1;
  long n_min = 5;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  double rho_offset = 0;  // nonzero for the negative control
};

struct RPairResult {
  double distance = 0;
  long base_m = 0, base_l = 0;
  long m = 0, l = 0;
  double shift = 0;
  bool shift_in_p = false;
  double fraction = 0;
  bool pass = false;
};

struct RPropertyStats {
  std::vector<RPairResult> pairs;
  std::size_t passing = 0;
  double pass_rate = 0;
  bool verdict = false;  // passing >= (1 - eps) * trials
};

RPropertyStats verify_r_property(const RoofPC& f, const RatnerConstants& k, const RPropertyOptions& opt);

}  // namespace specflow
