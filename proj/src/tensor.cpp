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

#include "hgat/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace hgat
{

std::string shape_to_string(const Shape & shape)
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) os << " x ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::size_t shape_size(const Shape & shape)
{
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape))
{
  data_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data))
{
  if (shape_size(shape_) != data_.size()) {
    throw DimensionError(
      "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
      shape_to_string(shape_));
  }
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows)
{
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n * m);
  for (const auto & r : rows) {
    if (r.size() != m) throw DimensionError("ragged row list");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({n, m}, std::move(data));
}

Tensor Tensor::identity(std::size_t n)
{
  Tensor t = matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

std::size_t Tensor::rows_other_rank() const
{
  if (shape_.size() == 1) return 1;
  if (shape_.size() != 2) throw DimensionError("rows() on tensor of shape " + shape_to_string(shape_));
  return shape_[0];
}

std::size_t Tensor::cols_other_rank() const
{
  if (shape_.size() == 1) return shape_[0];
  if (shape_.size() != 2) throw DimensionError("cols() on tensor of shape " + shape_to_string(shape_));
  return shape_[1];
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Tensor Tensor::reshaped(Shape shape) const
{
  if (shape_size(shape) != data_.size()) {
    throw DimensionError(
      "cannot reshape " + shape_to_string(shape_) + " to " + shape_to_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

void Tensor::append_rows(const Tensor & rows)
{
  if (rank() != 2 || rows.rank() != 2 || rows.cols() != cols()) {
    throw DimensionError("cannot append " + shape_to_string(rows.shape_) + " rows to " + shape_to_string(shape_));
  }
  data_.insert(data_.end(), rows.data_.begin(), rows.data_.end());
  shape_[0] += rows.shape_[0];
}

bool Tensor::all_finite() const noexcept
{
  // v - v is 0 for finite v and NaN otherwise; the plain loop vectorizes
  double acc = 0.0;
  for (double v : data_) acc += v - v;
  return acc == 0.0;
}

void Tensor::require_finite(const std::string & what) const
{
  if (!all_finite()) throw NonFiniteError("non-finite value in " + what);
}

double max_abs_diff(const Tensor & a, const Tensor & b)
{
  if (a.shape() != b.shape()) {
    throw DimensionError(
      "max_abs_diff: " + shape_to_string(a.shape()) + " vs " + shape_to_string(b.shape()));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool bitwise_equal(const Tensor & a, const Tensor & b)
{
  return a.shape() == b.shape() &&
         std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

}  // namespace hgat
