#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "specflow/cf_arith.hpp"
#include "specflow/expression.hpp"
#include "specflow/interval.hpp"
#include "specflow/linalg.hpp"

namespace specflow {

class SymReal;

/// Ordered list of real symbols declared linearly independent over Q. The
/// first two are always "1" and "alpha". Independence is an axiom of the
/// instance; nothing here tries to prove it.
class Basis {
 public:
  struct SymbolSpec {
    std::string name;
    std::string eval;  // Expression text, may reference alpha
  };

  /// alpha_action maps a symbol name to the linear expression of alpha * symbol,
  /// e.g. {"b": "alpha_b"}. alpha * 1 = alpha is built in.
  static std::shared_ptr<const Basis> create(cf::CFContext ctx, std::vector<SymbolSpec> extra = {},
                                             const std::map<std::string, std::string>& alpha_action = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(const std::string& name) const;
  const cf::CFContext& ctx() const { return ctx_; }
  const std::vector<SymbolSpec>& extra_symbols() const { return specs_; }
  const std::map<std::string, std::string>& alpha_action_text() const { return alpha_action_text_; }

  /// Enclosure of symbol i with width <= 2^-bits (cached).
  RationalInterval symbol_enclosure(std::size_t i, unsigned bits) const;
  /// Coordinates of alpha * symbol_i when known.
  const std::optional<linalg::RatVector>& alpha_action(std::size_t i) const { return alpha_action_.at(i); }

 private:
  Basis(cf::CFContext ctx) : ctx_(std::move(ctx)) {}

  cf::CFContext ctx_;
  std::vector<std::string> names_;
  std::vector<SymbolSpec> specs_;
  std::vector<std::optional<Expression>> exprs_;
  std::vector<std::optional<linalg::RatVector>> alpha_action_;
  std::map<std::string, std::string> alpha_action_text_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::size_t, unsigned>, RationalInterval> cache_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// Exact real number as a rational combination of basis symbols.
class SymReal {
 public:
  SymReal() = default;
  SymReal(BasisPtr basis, linalg::RatVector coords);

  static SymReal zero(const BasisPtr& basis);
  static SymReal rational(const BasisPtr& basis, const mpq_class& q);
  static SymReal symbol(const BasisPtr& basis, const std::string& name);
  /// Linear literal such as "1 + b", "-2*b + alpha/3", "1/3", "0.25*alpha_b".
  static SymReal parse(const BasisPtr& basis, const std::string& text);

  const BasisPtr& basis() const { return basis_; }
  const linalg::RatVector& coords() const { return coords_; }
  const mpq_class& coord(std::size_t i) const { return coords_.at(i); }
  bool valid() const { return basis_ != nullptr; }

  bool is_zero() const;
  bool is_rational() const;  // only the coordinate of 1 may be nonzero
  bool in_q_alpha() const;   // only 1 and alpha coordinates may be nonzero

  SymReal& operator+=(const SymReal& o);
  SymReal& operator-=(const SymReal& o);
  SymReal& operator*=(const mpq_class& k);
  friend SymReal operator+(SymReal a, const SymReal& b) { return a += b; }
  friend SymReal operator-(SymReal a, const SymReal& b) { return a -= b; }
  friend SymReal operator*(SymReal a, const mpq_class& k) { return a *= k; }
  friend SymReal operator*(const mpq_class& k, SymReal a) { return a *= k; }
  SymReal operator-() const;
  friend bool operator==(const SymReal& a, const SymReal& b);
  friend bool operator!=(const SymReal& a, const SymReal& b) { return !(a == b); }

  /// Certified enclosure of width <= 2^-bits.
  RationalInterval eval(unsigned bits) const;
  /// Exact sign (the basis is independent, so zero iff all coordinates vanish).
  int sign() const;
  double to_double() const;
  std::string to_string() const;

 private:
  BasisPtr basis_;
  linalg::RatVector coords_;
};

/// Lexicographic order on coordinates; only for use as a map key.
struct SymRealKeyLess {
  bool operator()(const SymReal& a, const SymReal& b) const;
};

int compare(const SymReal& a, const SymReal& b);
SymReal abs(const SymReal& x);
SymReal times_alpha(const SymReal& x);
/// x * y when one factor lies in Q + Q alpha; otherwise InsufficientStructure.
SymReal multiply(const SymReal& x, const SymReal& y);

mpz_class floor_exact(const SymReal& x);
/// Representative in [0, 1).
SymReal circle_normalize(const SymReal& x);
/// (a - b) mod 1 in [0, 1).
SymReal circle_sub(const SymReal& a, const SymReal& b);
Fixed to_fixed(const SymReal& x);

enum class TargetKind { ZPlusZAlphaMod1, QPlusQAlpha, QSpan, QAlphaSpan };

struct Target {
  TargetKind kind;
  std::vector<SymReal> set;

  static Target z_plus_z_alpha_mod1() { return {TargetKind::ZPlusZAlphaMod1, {}}; }
  static Target q_plus_q_alpha() { return {TargetKind::QPlusQAlpha, {}}; }
  static Target q_span(std::vector<SymReal> s) { return {TargetKind::QSpan, std::move(s)}; }
  static Target q_alpha_span(std::vector<SymReal> s) { return {TargetKind::QAlphaSpan, std::move(s)}; }
};

struct Membership {
  bool member = false;
  /// Span targets: coefficients reconstructing x. For QAlphaSpan the first
  /// |S| entries multiply S, the next |S| multiply alpha*S.
  linalg::RatVector coefficients;
  /// Span targets, non-members: functional on basis coordinates vanishing on
  /// the spanning set but not on x.
  linalg::RatVector separating;
  std::string detail;
};

Membership membership(const SymReal& x, const Target& target);

/// Basis of {n in Z^p : sum n_i values_i = 0}; empty when the values are independent.
std::vector<linalg::IntVector> relation_lattice(const std::vector<SymReal>& values);

/// Integer coefficients n with sum n_i values_i = x, if any.
std::optional<linalg::IntVector> integer_combination(const std::vector<SymReal>& values, const SymReal& x);

/// sum n_i values_i.
SymReal combine(const std::vector<SymReal>& values, const std::vector<long>& n);
SymReal combine(const std::vector<SymReal>& values, const linalg::IntVector& n);

}  // namespace specflow
