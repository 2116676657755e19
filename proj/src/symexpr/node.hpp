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

#include <array>
#include <string>

#include "pfida/expr.hpp"

namespace pfida {

struct Expr::Node {
  NodeKind kind = NodeKind::kNumber;
  BinaryOp op = BinaryOp::kAdd;
  Function fn = Function::kSin;
  double value = 0.0;
  std::string name;
  // Binary uses both; Negate and Call use children[0].
  std::array<Expr, 2> children{Expr(EmptyTag{}), Expr(EmptyTag{})};
  std::size_t hash = 0;
};

}  // namespace pfida
