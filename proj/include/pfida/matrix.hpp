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

#pragma once

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "pfida/expr.hpp"

namespace pfida {

using ExprVector = std::vector<Expr>;

/// Dense row-major matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ExprMatrix(std::initializer_list<std::initializer_list<Expr>> rows);

  static ExprMatrix identity(std::size_t n);
  static ExprMatrix from_rows(const std::vector<ExprVector>& rows);
  static ExprMatrix column(const ExprVector& v);
  static ExprMatrix diagonal(const ExprVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Expr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ExprVector row(std::size_t i) const;
  ExprVector col(std::size_t j) const;
  ExprMatrix transpose() const;
  ExprMatrix map(Expr (*f)(const Expr&)) const;

  const std::vector<Expr>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Expr> data_;
};

ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix operator*(const Expr& s, const ExprMatrix& a);
ExprVector operator*(const ExprMatrix& a, const ExprVector& v);
ExprVector operator+(const ExprVector& a, const ExprVector& b);
ExprVector operator-(const ExprVector& a, const ExprVector& b);
ExprVector operator*(const Expr& s, const ExprVector& v);
Expr dot(const ExprVector& a, const ExprVector& b);

/// Cofactor expansion; square matrices only.
Expr determinant(const ExprMatrix& a);
/// Adjugate over determinant, for n <= 3; ErrorCode::kDimension otherwise.
ExprMatrix inverse(const ExprMatrix& a);
ExprMatrix simplify(const ExprMatrix& a);
ExprVector simplify(const ExprVector& v);
ExprMatrix substitute(const ExprMatrix& a, const std::map<std::string, Expr, std::less<>>& rep);
ExprVector substitute(const ExprVector& v, const std::map<std::string, Expr, std::less<>>& rep);
ExprMatrix differentiate(const ExprMatrix& a, std::string_view var);
ExprVector differentiate(const ExprVector& v, std::string_view var);

Eigen::MatrixXd evaluate(const ExprMatrix& a, const Bindings& b);
Eigen::VectorXd evaluate(const ExprVector& v, const Bindings& b);

ExprVector symbols(const std::vector<std::string>& names);
ExprVector parse_vector(const std::vector<std::string>& texts);

}  // namespace pfida
