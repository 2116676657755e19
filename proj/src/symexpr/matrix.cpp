// Copyright 2026 The pfida Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pfida/matrix.hpp"

namespace pfida {

namespace {

void require_same_shape(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kDimension, "matrix shapes differ");
  }
}

void require_same_length(const ExprVector& a, const ExprVector& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimension, "vector lengths differ");
}

}  // namespace

ExprMatrix::ExprMatrix(std::initializer_list<std::initializer_list<Expr>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::kDimension, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ExprMatrix ExprMatrix::identity(std::size_t n) {
  ExprMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = num(1.0);
  return m;
}

ExprMatrix ExprMatrix::from_rows(const std::vector<ExprVector>& rows) {
  ExprMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) fail(ErrorCode::kDimension, "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ExprMatrix ExprMatrix::column(const ExprVector& v) {
  ExprMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

ExprMatrix ExprMatrix::diagonal(const ExprVector& v) {
  ExprMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

ExprVector ExprMatrix::row(std::size_t i) const {
  return ExprVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

ExprVector ExprMatrix::col(std::size_t j) const {
  ExprVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

ExprMatrix ExprMatrix::transpose() const {
  ExprMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

ExprMatrix ExprMatrix::map(Expr (*f)(const Expr&)) const {
  ExprMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = f(data_[k]);
  return out;
}

ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b) {
  require_same_shape(a, b);
  ExprMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  }
  return out;
}

ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b) {
  require_same_shape(a, b);
  ExprMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::kDimension, "matrix product shape mismatch");
  ExprMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Expr acc = num(0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

ExprMatrix operator*(const Expr& s, const ExprMatrix& a) {
  ExprMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  }
  return out;
}

ExprVector operator*(const ExprMatrix& a, const ExprVector& v) {
  if (a.cols() != v.size()) fail(ErrorCode::kDimension, "matrix-vector shape mismatch");
  ExprVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Expr acc = num(0.0);
    for (std::size_t k = 0; k < v.size(); ++k) acc = acc + a(i, k) * v[k];
    out[i] = acc;
  }
  return out;
}

ExprVector operator+(const ExprVector& a, const ExprVector& b) {
  require_same_length(a, b);
  ExprVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ExprVector operator-(const ExprVector& a, const ExprVector& b) {
  require_same_length(a, b);
  ExprVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

ExprVector operator*(const Expr& s, const ExprVector& v) {
  ExprVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

Expr dot(const ExprVector& a, const ExprVector& b) {
  require_same_length(a, b);
  Expr acc = num(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
  return acc;
}

namespace {

ExprMatrix minor_of(const ExprMatrix& a, std::size_t r, std::size_t c) {
  ExprMatrix m(a.rows() - 1, a.cols() - 1);
  for (std::size_t i = 0, mi = 0; i < a.rows(); ++i) {
    if (i == r) continue;
    for (std::size_t j = 0, mj = 0; j < a.cols(); ++j) {
      if (j == c) continue;
      m(mi, mj++) = a(i, j);
    }
    ++mi;
  }
  return m;
}

}  // namespace

Expr determinant(const ExprMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::kDimension, "determinant of non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return num(1.0);
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Expr acc = num(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Expr term = a(0, j) * determinant(minor_of(a, 0, j));
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

ExprMatrix inverse(const ExprMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::kDimension, "inverse of non-square matrix");
  std::size_t n = a.rows();
  if (n > 3) fail(ErrorCode::kDimension, "symbolic inverse limited to n <= 3");
  Expr det = determinant(a);
  ExprMatrix inv(n, n);
  if (n == 1) {
    inv(0, 0) = num(1.0) / det;
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Expr cof = determinant(minor_of(a, j, i));
      inv(i, j) = ((i + j) % 2 == 0 ? cof : -cof) / det;
    }
  }
  return inv;
}

ExprMatrix simplify(const ExprMatrix& a) { return a.map(&simplify); }

ExprVector simplify(const ExprVector& v) {
  ExprVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = simplify(v[i]);
  return out;
}

ExprMatrix substitute(const ExprMatrix& a, const std::map<std::string, Expr, std::less<>>& rep) {
  ExprMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = substitute(a(i, j), rep);
  }
  return out;
}

ExprVector substitute(const ExprVector& v, const std::map<std::string, Expr, std::less<>>& rep) {
  ExprVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = substitute(v[i], rep);
  return out;
}

ExprMatrix differentiate(const ExprMatrix& a, std::string_view var) {
  ExprMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = differentiate(a(i, j), var);
  }
  return out;
}

ExprVector differentiate(const ExprVector& v, std::string_view var) {
  ExprVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = differentiate(v[i], var);
  return out;
}

Eigen::MatrixXd evaluate(const ExprMatrix& a, const Bindings& b) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = eval(a(i, j), b);
  }
  return m;
}

Eigen::VectorXd evaluate(const ExprVector& v, const Bindings& b) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = eval(v[i], b);
  return out;
}

ExprVector symbols(const std::vector<std::string>& names) {
  ExprVector out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(sym(n));
  return out;
}

ExprVector parse_vector(const std::vector<std::string>& texts) {
  ExprVector out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse(t));
  return out;
}

}  // namespace pfida
