#include "algroups/linalg.hpp"

namespace algroups::linalg {

int rref(const Field& k, std::vector<Fel>& a, int rows, int cols) {
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[(size_t)i * cols + c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(a[(size_t)piv * cols + j], a[(size_t)r * cols + j]);
    Fel pi = k.inv(a[(size_t)r * cols + c]);
    for (int j = 0; j < cols; ++j) a[(size_t)r * cols + j] = k.mul(pi, a[(size_t)r * cols + j]);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      Fel f = a[(size_t)i * cols + c];
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j)
        a[(size_t)i * cols + j] = k.sub(a[(size_t)i * cols + j], k.mul(f, a[(size_t)r * cols + j]));
    }
    ++r;
  }
  for (int i = r; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[(size_t)i * cols + j] = 0;
  return r;
}

int rank(const Field& k, std::vector<Fel> a, int rows, int cols) { return rref(k, a, rows, cols); }

std::vector<Vec> kernel(const Field& k, const std::vector<Fel>& a, int rows, int cols) {
  std::vector<Fel> m = a;
  int r = rref(k, m, rows, cols);
  std::vector<int> pivot_col(r, -1);
  std::vector<bool> is_pivot(cols, false);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < cols; ++j)
      if (m[(size_t)i * cols + j] != 0) {
        pivot_col[i] = j;
        is_pivot[j] = true;
        break;
      }
  }
  std::vector<Vec> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (int i = 0; i < r; ++i) v[pivot_col[i]] = k.neg(m[(size_t)i * cols + f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool invert(const Field& k, std::vector<Fel> a, int n, std::vector<Fel>& out) {
  std::vector<Fel> aug((size_t)n * 2 * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[(size_t)i * 2 * n + j] = a[(size_t)i * n + j];
    aug[(size_t)i * 2 * n + n + i] = 1;
  }
  int r = rref(k, aug, n, 2 * n);
  if (r < n) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (aug[(size_t)i * 2 * n + j] != (Fel)(i == j ? 1 : 0)) return false;
  out.assign((size_t)n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[(size_t)i * n + j] = aug[(size_t)i * 2 * n + n + j];
  return true;
}

Vec apply(const Field& k, const std::vector<Fel>& a, int rows, int cols, const Vec& x) {
  Vec y(rows, 0);
  for (int i = 0; i < rows; ++i) {
    Fel acc = 0;
    for (int j = 0; j < cols; ++j) acc = k.add(acc, k.mul(a[(size_t)i * cols + j], x[j]));
    y[i] = acc;
  }
  return y;
}

}  // namespace algroups::linalg
