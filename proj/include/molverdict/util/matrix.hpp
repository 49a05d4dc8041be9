//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <vector>

namespace molverdict {

// Row-major float feature matrix.
struct Matrix {
  std::vector<float> data;
  int rows = 0;
  int cols = 0;

  Matrix() = default;
  Matrix(int r, int c) : data(static_cast<std::size_t>(r) * c, 0.0f), rows(r), cols(c) {}

  float at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  float& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::span<const float> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
  std::span<float> row(int r) {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

}  // namespace molverdict
