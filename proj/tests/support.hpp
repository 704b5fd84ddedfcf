#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "doctest.h"
#include "opalg/matcore.hpp"
#include "opalg/random.hpp"

namespace testing {

using opalg::Complex;
using opalg::Matrix;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (const Complex& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (const Complex& v : d) {
    m(k, k) = v;
    ++k;
  }
  return m;
}

/// Kind of the opalg::Error thrown by f, or "" if nothing was thrown.
template <class F>
std::string error_kind(F&& f) {
  try {
    f();
  } catch (const opalg::Error& e) {
    return e.kind();
  }
  return "";
}

inline constexpr Complex I{0.0, 1.0};

}  // namespace testing
