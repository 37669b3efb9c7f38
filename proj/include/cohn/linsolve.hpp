#pragma once

// Linear solving over the rings that support it: elimination over fields,
// Smith normal form over Z. The free algebra and Q[t] report Unsupported.

#include "cohn/matrix.hpp"

#include <optional>

namespace cohn {

enum class SolveStatus { Solved, NoSolution, Unsupported };

struct SolveResult {
  SolveStatus status;
  Matrix x;  // cols(A) x cols(B) when Solved
};

/// Find X with A X = B (every column of B at once).
SolveResult solve_linear(const Matrix& a, const Matrix& b);

/// Columns spanning the right kernel (a Z-basis over Z); nullopt if unsupported.
std::optional<Matrix> kernel_basis(const Matrix& a);

/// Rank over a field (or over Q for Z input); nullopt for other rings.
std::optional<std::size_t> rank_of(const Matrix& a);

/// U * A * V = D with U, V unimodular and D diagonal with d1 | d2 | ..., d_i >= 0.
struct SmithForm {
  Matrix u, d, v;
  std::size_t rank = 0;
};
SmithForm smith_normal_form(const Matrix& a);

/// Reduced row echelon form over a field, with the pivot columns.
struct Echelon {
  Matrix r;
  std::vector<std::size_t> pivots;
};
Echelon rref(const Matrix& a);

}  // namespace cohn
