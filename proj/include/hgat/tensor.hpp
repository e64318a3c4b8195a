// Copyright 2026 The HGAT Forecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HGAT__TENSOR_HPP_
#define HGAT__TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgat
{

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape & shape);

/// Raised when operand shapes do not conform.
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a NaN or infinity shows up in a value or gradient.
class NonFiniteError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief Dense row-major real array.
 *
 * Rank-1 tensors are used for biases and normalization scales; everything that flows
 * through the network is rank 2 ([rows x cols]).
 */
class Tensor
{
public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
  {
    return Tensor({rows, cols}, fill);
  }
  static Tensor vector(std::size_t n, double fill = 0.0) { return Tensor({n}, fill); }
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor identity(std::size_t n);

  const Shape & shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  /// Rank-2 accessors. A rank-1 tensor reads as a single row.
  std::size_t rows() const { return shape_.size() == 2 ? shape_[0] : rows_other_rank(); }
  std::size_t cols() const { return shape_.size() == 2 ? shape_[1] : cols_other_rank(); }

  double & operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  double & operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }

  void fill(double value);
  Tensor reshaped(Shape shape) const;
  /// Appends the rows of a rank-2 tensor with the same column count.
  void append_rows(const Tensor & rows);
  bool all_finite() const noexcept;

  /// Throws NonFiniteError naming `what` if any entry is NaN or infinite.
  void require_finite(const std::string & what) const;

  bool operator==(const Tensor & other) const = default;

private:
  std::size_t rows_other_rank() const;
  std::size_t cols_other_rank() const;

  Shape shape_;
  std::vector<double> data_;
};

std::size_t shape_size(const Shape & shape);

/// Largest absolute elementwise difference; shapes must match.
double max_abs_diff(const Tensor & a, const Tensor & b);

/// Bitwise equality (distinguishes -0.0 from 0.0 and compares NaN payloads).
bool bitwise_equal(const Tensor & a, const Tensor & b);

}  // namespace hgat

#endif  // HGAT__TENSOR_HPP_
