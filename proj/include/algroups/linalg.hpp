#pragma once

#include <vector>

#include "algroups/gf.hpp"

namespace algroups::linalg {

using Vec = std::vector<Fel>;

// In-place reduced row echelon form of the rows x cols row-major matrix.
// Returns the rank; the first `rank` rows carry the echelon basis, the rest
// are zeroed.
int rref(const Field& k, std::vector<Fel>& a, int rows, int cols);

// Basis of the right kernel {x : a x = 0}.
std::vector<Vec> kernel(const Field& k, const std::vector<Fel>& a, int rows, int cols);

int rank(const Field& k, std::vector<Fel> a, int rows, int cols);

// Inverse of a square matrix; false when singular.
bool invert(const Field& k, std::vector<Fel> a, int n, std::vector<Fel>& out);

// y = a x for row-major a (rows x cols), x of length cols.
Vec apply(const Field& k, const std::vector<Fel>& a, int rows, int cols, const Vec& x);

}  // namespace algroups::linalg
