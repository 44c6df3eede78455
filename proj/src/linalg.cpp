#include "specflow/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "specflow/error.hpp"
#include "specflow/interval.hpp"

namespace specflow::linalg {

namespace {

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const mpq_class inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const mpq_class f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<RatVector> kernel(const RatMatrix& a, std::size_t cols) {
  RatMatrix m = a;
  const auto pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    out.push_back(std::move(v));
  }
  return out;
}

mpz_class row_scale(const RatVector& row, const mpq_class* extra) {
  mpz_class l = 1;
  for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  if (extra) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), extra->get_den_mpz_t());
  return l;
}

struct ColumnEchelon {
  IntMatrix b;  // rows x cols, transformed
  IntMatrix u;  // cols x cols unimodular transform, b = A_int * u
  std::vector<long> pivot_of_row;  // column index or -1
  std::size_t rank = 0;
};

void column_combine(IntMatrix& m, std::size_t a, std::size_t b, const mpz_class& s, const mpz_class& t,
                    const mpz_class& u, const mpz_class& v) {
  // (col_a, col_b) <- (s col_a + t col_b, u col_a + v col_b)
  for (auto& row : m) {
    const mpz_class x = row[a], y = row[b];
    row[a] = s * x + t * y;
    row[b] = u * x + v * y;
  }
}

ColumnEchelon column_echelon(const IntMatrix& a_int, std::size_t cols) {
  ColumnEchelon e;
  e.b = a_int;
  e.u.assign(cols, IntVector(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) e.u[i][i] = 1;
  e.pivot_of_row.assign(a_int.size(), -1);
  std::size_t piv = 0;
  for (std::size_t r = 0; r < e.b.size() && piv < cols; ++r) {
    for (std::size_t j = piv + 1; j < cols; ++j) {
      const mpz_class x = e.b[r][piv], y = e.b[r][j];
      if (y == 0) continue;
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      const mpz_class yg = y / g, xg = x / g;
      column_combine(e.b, piv, j, s, t, -yg, xg);
      column_combine(e.u, piv, j, s, t, -yg, xg);
    }
    if (e.b[r][piv] != 0) {
      e.pivot_of_row[r] = static_cast<long>(piv);
      ++piv;
    }
  }
  e.rank = piv;
  return e;
}

IntMatrix integer_rows(const RatMatrix& a, std::size_t cols, const RatVector* rhs, IntVector* rhs_out) {
  IntMatrix out;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const mpz_class l = row_scale(a[r], rhs ? &(*rhs)[r] : nullptr);
    IntVector row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const mpq_class v = a[r][c] * l;
      row[c] = v.get_num();
    }
    out.push_back(std::move(row));
    if (rhs_out) rhs_out->push_back(mpq_class((*rhs)[r] * l).get_num());
  }
  return out;
}

mpz_class dot(const IntVector& a, const IntVector& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Pairwise size reduction; unimodular so the lattice is unchanged.
void size_reduce(std::vector<IntVector>& basis) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        const mpz_class nj = dot(basis[j], basis[j]);
        if (nj == 0) continue;
        mpq_class ratio(dot(basis[i], basis[j]), nj);
        ratio.canonicalize();
        const mpz_class k = specflow::floor_q(ratio + mpq_class(1, 2));
        if (k == 0) continue;
        IntVector cand = basis[i];
        for (std::size_t c = 0; c < cand.size(); ++c) cand[c] -= k * basis[j][c];
        if (dot(cand, cand) < dot(basis[i], basis[i])) {
          basis[i] = std::move(cand);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  for (auto& v : basis) {
    auto it = std::find_if(v.begin(), v.end(), [](const mpz_class& x) { return x != 0; });
    if (it != v.end() && *it < 0)
      for (auto& x : v) x = -x;
  }
  std::sort(basis.begin(), basis.end(), [](const IntVector& a, const IntVector& b) {
    const mpz_class na = dot(a, a), nb = dot(b, b);
    if (na != nb) return na < nb;
    return a > b;
  });
}

}  // namespace

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b, std::size_t cols) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "solve: dimension mismatch");
  RatMatrix m = a;
  for (std::size_t r = 0; r < m.size(); ++r) m[r].push_back(b[r]);
  const auto pivots = rref(m, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RatVector x(cols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
  return x;
}

std::vector<RatVector> left_kernel(const RatMatrix& a, std::size_t cols) {
  RatMatrix t(cols, RatVector(a.size()));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c][r] = a[r][c];
  return kernel(t, a.size());
}

std::vector<IntVector> integer_kernel(const RatMatrix& a, std::size_t cols) {
  if (cols == 0) return {};
  const IntMatrix a_int = integer_rows(a, cols, nullptr, nullptr);
  const ColumnEchelon e = column_echelon(a_int, cols);
  std::vector<IntVector> basis;
  for (std::size_t k = e.rank; k < cols; ++k) {
    IntVector v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = e.u[i][k];
    basis.push_back(std::move(v));
  }
  size_reduce(basis);
  return basis;
}

std::optional<IntVector> integer_solve(const RatMatrix& a, const RatVector& b, std::size_t cols) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "integer_solve: dimension mismatch");
  IntVector rhs;
  const IntMatrix a_int = integer_rows(a, cols, &b, &rhs);
  if (cols == 0) {
    for (const auto& v : rhs)
      if (v != 0) return std::nullopt;
    return IntVector{};
  }
  const ColumnEchelon e = column_echelon(a_int, cols);
  IntVector y(cols, 0);
  for (std::size_t r = 0; r < e.b.size(); ++r) {
    mpz_class acc = rhs[r];
    const long p = e.pivot_of_row[r];
    const std::size_t known = p >= 0 ? static_cast<std::size_t>(p) : e.rank;
    for (std::size_t c = 0; c < known; ++c) acc -= e.b[r][c] * y[c];
    if (p < 0) {
      // no new pivot: remaining entries of this row are zero beyond the rank
      for (std::size_t c = known; c < e.rank; ++c) acc -= e.b[r][c] * y[c];
      if (acc != 0) return std::nullopt;
      continue;
    }
    const mpz_class& piv = e.b[r][static_cast<std::size_t>(p)];
    if (!mpz_divisible_p(acc.get_mpz_t(), piv.get_mpz_t())) return std::nullopt;
    y[static_cast<std::size_t>(p)] = acc / piv;
  }
  IntVector n(cols, 0);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t k = 0; k < cols; ++k) n[i] += e.u[i][k] * y[k];
  return n;
}

}  // namespace specflow::linalg
