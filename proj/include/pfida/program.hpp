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

#include <span>
#include <string>
#include <vector>

#include "pfida/expr.hpp"

namespace pfida {

/// A batch of expressions lowered to a flat register program. Shared
/// subexpressions are evaluated once. Inputs are bound by position to the
/// slot names given at construction; any other free symbol is an error.
/// Not safe for concurrent use of one instance.
class Program {
 public:
  Program() = default;
  Program(std::span<const Expr> outputs, std::vector<std::string> slots);

  std::size_t n_inputs() const { return slots_.size(); }
  std::size_t n_outputs() const { return outputs_.size(); }
  const std::vector<std::string>& slots() const { return slots_; }

  /// Throws ErrorCode::kDomain on ln of a non-positive value, sqrt of a
  /// negative value, division by zero or a non-real power.
  void run(std::span<const double> inputs, std::span<double> outputs) const;
  std::vector<double> run(std::span<const double> inputs) const;

  enum class Op : unsigned char { kConst, kInput, kAdd, kSub, kMul, kDiv, kPow, kNeg, kCall };
  struct Instr {
    Op op;
    Function fn;
    int a;
    int b;
    double c;
  };

 private:
  std::vector<std::string> slots_;
  std::vector<Instr> code_;
  std::vector<int> outputs_;
  mutable std::vector<double> regs_;
};

/// Scalar function application with the library's domain rules.
double apply_function(Function f, double x);
double checked_div(double a, double b);
double checked_pow(double a, double b);

}  // namespace pfida
