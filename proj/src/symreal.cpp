#include "specflow/symreal.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "specflow/error.hpp"

namespace specflow {

namespace {

unsigned cache_bits(unsigned bits) {
  unsigned b = 64;
  while (b < bits) b *= 2;
  return b;
}

// Recursive-descent parser for linear literals over a basis.
class LinearParser {
 public:
  LinearParser(const Basis& basis, const std::string& text) : basis_(basis), text_(text) {}

  linalg::RatVector parse() {
    linalg::RatVector v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidArgument, "value '" + text_ + "': " + why);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static bool constant(const linalg::RatVector& v, mpq_class* out) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] != 0) return false;
    *out = v[0];
    return true;
  }

  linalg::RatVector expr() {
    linalg::RatVector lhs = term();
    for (;;) {
      if (eat('+')) {
        const auto r = term();
        for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += r[i];
      } else if (eat('-')) {
        const auto r = term();
        for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= r[i];
      } else {
        return lhs;
      }
    }
  }
  linalg::RatVector term() {
    linalg::RatVector lhs = factor();
    for (;;) {
      if (eat('*')) {
        linalg::RatVector rhs = factor();
        mpq_class k;
        if (constant(lhs, &k)) {
          for (auto& x : rhs) x *= k;
          lhs = std::move(rhs);
        } else if (constant(rhs, &k)) {
          for (auto& x : lhs) x *= k;
        } else {
          fail("product of two non-rational terms is not linear");
        }
      } else if (eat('/')) {
        mpq_class k;
        if (!constant(factor(), &k)) fail("division by a non-rational term");
        if (k == 0) fail("division by zero");
        for (auto& x : lhs) x /= k;
      } else {
        return lhs;
      }
    }
  }
  linalg::RatVector factor() {
    skip();
    linalg::RatVector v(basis_.size(), 0);
    if (eat('-')) {
      v = factor();
      for (auto& x : v) x = -x;
      return v;
    }
    if (eat('+')) return factor();
    if (eat('(')) {
      v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
      v[0] = parse_rational(text_.substr(start, pos_ - start));
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name.empty()) fail("expected a term");
    const auto idx = basis_.index_of(name);
    if (!idx) fail("unknown symbol '" + name + "'");
    v[*idx] = 1;
    return v;
  }

  const Basis& basis_;
  const std::string& text_;
  std::size_t pos_ = 0;
};

void require_same(const SymReal& a, const SymReal& b) {
  if (!a.valid() || !b.valid()) throw Error(ErrorKind::InvalidArgument, "uninitialized SymReal");
  if (a.basis() != b.basis()) throw Error(ErrorKind::InvalidArgument, "SymReal values over different bases");
}

linalg::RatMatrix coordinate_matrix(const std::vector<SymReal>& values, std::size_t dim) {
  linalg::RatMatrix m(dim, linalg::RatVector(values.size(), 0));
  for (std::size_t c = 0; c < values.size(); ++c)
    for (std::size_t r = 0; r < dim; ++r) m[r][c] = values[c].coord(r);
  return m;
}

Membership span_membership(const SymReal& x, const std::vector<SymReal>& set, const std::string& label) {
  Membership out;
  const std::size_t dim = x.basis()->size();
  for (const auto& s : set) require_same(x, s);
  const linalg::RatMatrix m = coordinate_matrix(set, dim);
  if (auto sol = linalg::solve(m, x.coords(), set.size())) {
    out.member = true;
    out.coefficients = std::move(*sol);
    out.detail = "x is a rational combination of " + label;
    return out;
  }
  for (const auto& y : linalg::left_kernel(m, set.size())) {
    mpq_class v = 0;
    for (std::size_t i = 0; i < dim; ++i) v += y[i] * x.coord(i);
    if (v != 0) {
      out.separating = y;
      break;
    }
  }
  out.detail = "separating functional vanishes on " + label + " but not on x";
  return out;
}

}  // namespace

std::shared_ptr<const Basis> Basis::create(cf::CFContext ctx, std::vector<SymbolSpec> extra,
                                           const std::map<std::string, std::string>& alpha_action) {
  std::shared_ptr<Basis> b(new Basis(std::move(ctx)));
  b->names_ = {"1", "alpha"};
  b->exprs_.resize(2);
  for (auto& spec : extra) {
    if (spec.name.empty() || !(std::isalpha(static_cast<unsigned char>(spec.name[0])) || spec.name[0] == '_'))
      throw Error(ErrorKind::InvalidArgument, "invalid symbol name '" + spec.name + "'");
    if (b->index_of(spec.name) || spec.name == "sqrt")
      throw Error(ErrorKind::InvalidArgument, "duplicate or reserved symbol '" + spec.name + "'");
    b->names_.push_back(spec.name);
    b->exprs_.push_back(Expression::parse(spec.eval));
  }
  b->specs_ = std::move(extra);
  b->alpha_action_.assign(b->names_.size(), std::nullopt);
  linalg::RatVector alpha_coords(b->names_.size(), 0);
  alpha_coords[1] = 1;
  b->alpha_action_[0] = alpha_coords;
  for (const auto& [name, text] : alpha_action) {
    const auto idx = b->index_of(name);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "alpha_action for unknown symbol '" + name + "'");
    if (*idx == 0) throw Error(ErrorKind::InvalidArgument, "alpha_action for the symbol 1 is fixed");
    b->alpha_action_[*idx] = LinearParser(*b, text).parse();
  }
  b->alpha_action_text_ = alpha_action;
  return b;
}

std::optional<std::size_t> Basis::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

RationalInterval Basis::symbol_enclosure(std::size_t i, unsigned bits) const {
  if (i == 0) return RationalInterval::point(1);
  if (i == 1) return ctx_.alpha_enclosure(bits);
  const unsigned b = cache_bits(bits);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find({i, b});
    if (it != cache_.end()) return it->second;
  }
  RationalInterval v = exprs_.at(i)->evaluate(ctx_, b);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.emplace(std::make_pair(i, b), v);
  return v;
}

SymReal::SymReal(BasisPtr basis, linalg::RatVector coords) : basis_(std::move(basis)), coords_(std::move(coords)) {
  if (!basis_) throw Error(ErrorKind::InvalidArgument, "SymReal without a basis");
  if (coords_.size() != basis_->size()) throw Error(ErrorKind::InvalidArgument, "SymReal coordinate count mismatch");
}

SymReal SymReal::zero(const BasisPtr& basis) { return SymReal(basis, linalg::RatVector(basis->size(), 0)); }

SymReal SymReal::rational(const BasisPtr& basis, const mpq_class& q) {
  SymReal s = zero(basis);
  s.coords_[0] = q;
  return s;
}

SymReal SymReal::symbol(const BasisPtr& basis, const std::string& name) {
  const auto idx = basis->index_of(name);
  if (!idx) throw Error(ErrorKind::InvalidArgument, "unknown symbol '" + name + "'");
  SymReal s = zero(basis);
  s.coords_[*idx] = 1;
  return s;
}

SymReal SymReal::parse(const BasisPtr& basis, const std::string& text) {
  return SymReal(basis, LinearParser(*basis, text).parse());
}

bool SymReal::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

bool SymReal::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

bool SymReal::in_q_alpha() const {
  for (std::size_t i = 2; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

SymReal& SymReal::operator+=(const SymReal& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

SymReal& SymReal::operator-=(const SymReal& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

SymReal& SymReal::operator*=(const mpq_class& k) {
  for (auto& c : coords_) c *= k;
  return *this;
}

SymReal SymReal::operator-() const {
  SymReal s = *this;
  for (auto& c : s.coords_) c = -c;
  return s;
}

bool operator==(const SymReal& a, const SymReal& b) {
  require_same(a, b);
  return a.coords_ == b.coords_;
}

RationalInterval SymReal::eval(unsigned bits) const {
  if (!valid()) throw Error(ErrorKind::InvalidArgument, "uninitialized SymReal");
  if (bits > precision_cap_bits())
    throw Error(ErrorKind::PrecisionExhausted, "requested " + std::to_string(bits) + " bits exceeds the cap");
  mpq_class total = 0;
  for (std::size_t i = 1; i < coords_.size(); ++i) total += abs_q(coords_[i]);
  RationalInterval acc = RationalInterval::point(coords_[0]);
  if (total == 0) return acc;
  const long extra = static_cast<long>(mpz_sizeinbase(ceil_q(total).get_mpz_t(), 2));
  const unsigned sym_bits = bits + static_cast<unsigned>(extra) + 4;
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    acc = acc + coords_[i] * basis_->symbol_enclosure(i, sym_bits);
  }
  return round_outward(acc, bits + 4);
}

int SymReal::sign() const {
  if (is_zero()) return 0;
  if (is_rational()) return sgn(coords_[0]);
  if (in_q_alpha()) return cf::sign_linear(basis_->ctx(), coords_[0], coords_[1]);
  for (unsigned bits = 64; bits <= precision_cap_bits(); bits *= 2) {
    const RationalInterval v = eval(bits);
    if (sgn(v.lo) > 0) return 1;
    if (sgn(v.hi) < 0) return -1;
  }
  throw Error(ErrorKind::PrecisionExhausted, "sign of " + to_string() + " undecided at the precision cap");
}

double SymReal::to_double() const { return eval(64).midpoint().get_d(); }

std::string SymReal::to_string() const {
  if (!valid()) return "<invalid>";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const mpq_class& c = coords_[i];
    if (c == 0) continue;
    const bool neg = sgn(c) < 0;
    const mpq_class a = neg ? mpq_class(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    if (i == 0) {
      os << specflow::to_string(a);
    } else {
      if (a != 1) os << specflow::to_string(a) << "*";
      os << basis_->name(i);
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

bool SymRealKeyLess::operator()(const SymReal& a, const SymReal& b) const {
  const auto& x = a.coords();
  const auto& y = b.coords();
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int c = cmp(x[i], y[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

int compare(const SymReal& a, const SymReal& b) { return (a - b).sign(); }

SymReal abs(const SymReal& x) { return x.sign() < 0 ? -x : x; }

SymReal times_alpha(const SymReal& x) {
  const Basis& basis = *x.basis();
  SymReal out = SymReal::zero(x.basis());
  linalg::RatVector acc(basis.size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (x.coord(i) == 0) continue;
    const auto& act = basis.alpha_action(i);
    if (!act)
      throw Error(ErrorKind::InsufficientStructure, "alpha_action undefined for symbol '" + basis.name(i) + "'");
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += x.coord(i) * (*act)[j];
  }
  return SymReal(x.basis(), std::move(acc));
}

SymReal multiply(const SymReal& x, const SymReal& y) {
  require_same(x, y);
  const SymReal* lin = nullptr;
  const SymReal* other = nullptr;
  if (x.in_q_alpha()) {
    lin = &x;
    other = &y;
  } else if (y.in_q_alpha()) {
    lin = &y;
    other = &x;
  } else {
    throw Error(ErrorKind::InsufficientStructure, "product of " + x.to_string() + " and " + y.to_string() +
                                                      " leaves the declared basis");
  }
  SymReal out = lin->coord(0) * *other;
  if (lin->coord(1) != 0) out += lin->coord(1) * times_alpha(*other);
  return out;
}

mpz_class floor_exact(const SymReal& x) {
  if (x.is_rational()) return floor_q(x.coord(0));
  if (x.in_q_alpha()) return cf::floor_linear(x.basis()->ctx(), x.coord(0), x.coord(1));
  for (unsigned bits = 64; bits <= precision_cap_bits(); bits *= 2) {
    const RationalInterval v = x.eval(bits);
    const mpz_class lo = floor_q(v.lo);
    if (lo == floor_q(v.hi) && !(v.hi == mpq_class(lo + 1))) return lo;
  }
  throw Error(ErrorKind::PrecisionExhausted, "floor of " + x.to_string() + " undecided at the precision cap");
}

SymReal circle_normalize(const SymReal& x) {
  const mpz_class n = floor_exact(x);
  if (n == 0) return x;
  SymReal out = x;
  out -= SymReal::rational(x.basis(), mpq_class(n));
  return out;
}

SymReal circle_sub(const SymReal& a, const SymReal& b) { return circle_normalize(a - b); }

Fixed to_fixed(const SymReal& x) {
  if (x.is_rational()) return to_fixed(x.coord(0));
  return to_fixed(x.eval(160));
}

Membership membership(const SymReal& x, const Target& target) {
  if (!x.valid()) throw Error(ErrorKind::InvalidArgument, "uninitialized SymReal");
  Membership out;
  switch (target.kind) {
    case TargetKind::ZPlusZAlphaMod1: {
      bool ok = x.in_q_alpha() && x.coord(1).get_den() == 1 && x.coord(0).get_den() == 1;
      out.member = ok;
      out.coefficients = {x.coord(0), x.coord(1)};
      if (!x.in_q_alpha()) out.detail = "has coordinates outside 1, alpha";
      else if (x.coord(1).get_den() != 1) out.detail = "alpha coordinate is not an integer";
      else if (x.coord(0).get_den() != 1) out.detail = "nonzero modulo 1 after removing the alpha part";
      else out.detail = "integer combination of 1 and alpha";
      return out;
    }
    case TargetKind::QPlusQAlpha: {
      out.member = x.in_q_alpha();
      out.coefficients = {x.coord(0), x.coord(1)};
      out.detail = out.member ? "rational combination of 1 and alpha" : "has coordinates outside 1, alpha";
      return out;
    }
    case TargetKind::QSpan: return span_membership(x, target.set, "S");
    case TargetKind::QAlphaSpan: {
      std::vector<SymReal> ext = target.set;
      for (const auto& s : target.set) ext.push_back(times_alpha(s));
      return span_membership(x, ext, "S and alpha*S");
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown membership target");
}

std::vector<linalg::IntVector> relation_lattice(const std::vector<SymReal>& values) {
  if (values.empty()) return {};
  for (const auto& v : values) require_same(values[0], v);
  const std::size_t dim = values[0].basis()->size();
  return linalg::integer_kernel(coordinate_matrix(values, dim), values.size());
}

std::optional<linalg::IntVector> integer_combination(const std::vector<SymReal>& values, const SymReal& x) {
  for (const auto& v : values) require_same(x, v);
  const std::size_t dim = x.basis()->size();
  return linalg::integer_solve(coordinate_matrix(values, dim), x.coords(), values.size());
}

SymReal combine(const std::vector<SymReal>& values, const std::vector<long>& n) {
  if (values.empty() || values.size() != n.size()) throw Error(ErrorKind::InvalidArgument, "combine: size mismatch");
  SymReal out = SymReal::zero(values[0].basis());
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] != 0) out += mpq_class(n[i]) * values[i];
  return out;
}

SymReal combine(const std::vector<SymReal>& values, const linalg::IntVector& n) {
  if (values.empty() || values.size() != n.size()) throw Error(ErrorKind::InvalidArgument, "combine: size mismatch");
  SymReal out = SymReal::zero(values[0].basis());
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] != 0) out += mpq_class(n[i]) * values[i];
  return out;
}

}  // namespace specflow
