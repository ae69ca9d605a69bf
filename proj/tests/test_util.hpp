#pragma once

// Shared helpers for the test suites.

#include <random>

#include "ppcert/matqz.hpp"

namespace ppcert::testutil {

// Random unimodular matrix as a short product of elementary and signed
// permutation matrices; entries stay small for short products.
inline matqz::IntMatrix random_unimodular(std::mt19937_64& rng, int n, int ops = 6,
                                          long entry_cap = 5) {
  std::uniform_int_distribution<int> idx(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  while (true) {
    matqz::IntMatrix m = matqz::IntMatrix::identity(n);
    for (int step = 0; step < ops; ++step) {
      int i = idx(rng), j = idx(rng);
      if (i == j) continue;
      matqz::IntMatrix e = matqz::IntMatrix::identity(n);
      e.at(i, j) = coin(rng) ? 1 : -1;
      m = m * e;
    }
    bool small = true;
    for (int i = 0; i < n && small; ++i)
      for (int j = 0; j < n && small; ++j)
        if (m.at(i, j) > entry_cap || m.at(i, j) < -entry_cap) small = false;
    if (small) return m;
  }
}

inline matqz::IntMatrix random_int_matrix(std::mt19937_64& rng, int n, int lo = -5,
                                          int hi = 5) {
  std::uniform_int_distribution<int> d(lo, hi);
  matqz::IntMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = d(rng);
  return m;
}

// The displayed matrices; the scenarios module carries the canonical copies,
// these duplicates pin the test expectations independently.
inline matqz::IntMatrix sl3_I() {
  return matqz::IntMatrix::from_rows({{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}});
}
inline matqz::IntMatrix sl3_A() {
  return matqz::IntMatrix::from_rows({{2, 1, 0}, {1, 1, 0}, {0, 0, 1}});
}
inline matqz::IntMatrix sl3_B() {
  return matqz::IntMatrix::from_rows({{3, 2, 0}, {1, 1, 0}, {0, 0, 1}});
}
inline matqz::IntMatrix sl3_U() {
  return matqz::IntMatrix::from_rows({{0, 0, -1}, {0, 1, 0}, {1, 0, 0}});
}

inline matqz::IntMatrix sl4_I() {
  return matqz::IntMatrix::from_rows(
      {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}});
}
inline matqz::IntMatrix sl4_J() {
  return matqz::IntMatrix::from_rows(
      {{0, -1, 0, 0}, {1, -1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
}
inline matqz::IntMatrix sl4_A() {
  return matqz::IntMatrix::from_rows(
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}});
}
inline matqz::IntMatrix sl4_B() {
  return matqz::IntMatrix::from_rows(
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 3, 1}, {0, 0, 2, 1}});
}
inline matqz::IntMatrix sl4_C() {
  return matqz::IntMatrix::from_rows(
      {{2, -1, 1, 0}, {-1, 2, -1, 0}, {1, -1, 1, 0}, {0, 0, 0, 1}});
}
inline matqz::IntMatrix sl4_D() {
  return matqz::IntMatrix::from_rows(
      {{4, -1, 1, 1}, {-1, 4, -1, 1}, {2, -2, 1, 0}, {1, 1, 0, 1}});
}

inline matqz::IntMatrix gl2_M() {
  return matqz::IntMatrix::from_rows({{0, -1}, {1, -1}});
}
inline matqz::IntMatrix gl3_M1() {
  return matqz::IntMatrix::from_rows({{1, 0, 0}, {0, 0, -1}, {0, 1, -1}});
}
inline matqz::IntMatrix gl3_M2() {
  return matqz::IntMatrix::from_rows({{1, 1, 0}, {0, 0, -1}, {0, 1, -1}});
}

}  // namespace ppcert::testutil
