#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace costsense {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major array. The shape is fixed at construction; element values
// may be written through mutable_data() (parameter updates, op kernels).
//
// T is float for training and inference, double for gradient checking.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{0});
  Tensor(Shape shape, std::vector<T> data);

  static Tensor scalar(T value) { return Tensor(Shape{1}, value); }

  // Nested initializer helpers for tests and small literals.
  static Tensor vector(std::initializer_list<T> values);
  static Tensor matrix(std::initializer_list<std::initializer_list<T>> rows);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t numel() const noexcept { return data_.size(); }
  bool empty() const noexcept { return shape_.empty(); }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> mutable_data() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  T operator[](std::size_t i) const { return data_[i]; }
  T& operator[](std::size_t i) { return data_[i]; }

  // Scalar read of a single-element tensor.
  T item() const;

  bool all_finite() const noexcept;

  // Same values under a new shape with equal element count.
  Tensor reshaped(Shape shape) const;

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Tensor<U>(shape_, std::move(out));
  }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<T> data_;
};

// Throws NumericError naming `where` if any element is NaN or Inf.
template <typename T>
void require_finite(const Tensor<T>& t, const char* where);

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace costsense
