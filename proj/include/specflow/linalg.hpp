#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace specflow::linalg {

using RatVector = std::vector<mpq_class>;
using IntVector = std::vector<mpz_class>;
/// Row-major dense matrix: rows[r][c].
using RatMatrix = std::vector<RatVector>;
using IntMatrix = std::vector<IntVector>;

/// Solves A u = b over Q (A is rows x cols). Returns one solution or nullopt.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b, std::size_t cols);

/// Basis of {y : y^T A = 0} (left kernel), each vector has rows(A) entries.
std::vector<RatVector> left_kernel(const RatMatrix& a, std::size_t cols);

/// Basis of the integer lattice {n in Z^cols : A n = 0}. The basis comes from a
/// unimodular column transform, so it generates the whole lattice and every
/// vector is primitive. Vectors are size-reduced and sign-normalized (first
/// nonzero entry positive).
std::vector<IntVector> integer_kernel(const RatMatrix& a, std::size_t cols);

/// Some n in Z^cols with A n = b, or nullopt when b is outside the integer span
/// of the columns.
std::optional<IntVector> integer_solve(const RatMatrix& a, const RatVector& b, std::size_t cols);

}  // namespace specflow::linalg
