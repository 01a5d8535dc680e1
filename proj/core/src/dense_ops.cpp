#include <cmath>

#include "fasttt/errors.hpp"
#include "fasttt/tensor.hpp"

namespace fasttt {

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), values_(static_cast<std::size_t>(shape_.size()), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (static_cast<Index>(values_.size()) != shape_.size()) {
    throw ShapeError("dense tensor of shape " + shape_.to_string() + " needs " + std::to_string(shape_.size()) +
                     " values, got " + std::to_string(values_.size()));
  }
}

DenseTensor reshape(const DenseTensor& t, Shape new_shape) {
  if (new_shape.size() != t.shape().size()) {
    throw ShapeError("cannot reshape " + t.shape().to_string() + " into " + new_shape.to_string());
  }
  return DenseTensor(std::move(new_shape), {t.values().begin(), t.values().end()});
}

DenseTensor vectorize(const DenseTensor& t) { return reshape(t, Shape{t.shape().size()}); }

Matrix unfold(const DenseTensor& t, std::size_t k) {
  const std::size_t d = t.order();
  if (k < 1 || k >= d) {
    throw IndexError("unfolding split " + std::to_string(k) + " outside [1, " + std::to_string(d - 1) + "]");
  }
  const Index cols = t.shape().suffix_size(k);
  const Index rows = t.shape().size() / cols;
  return Eigen::Map<const RowMatrix>(t.values().data(), rows, cols);
}

DenseTensor contract(const DenseTensor& a, std::size_t k1, const DenseTensor& b, std::size_t k2) {
  if (k1 >= a.order() || k2 >= b.order()) throw IndexError("contraction mode out of range");
  const Index n = a.shape()[k1];
  if (b.shape()[k2] != n) {
    throw ShapeError("contraction dimension mismatch: " + std::to_string(n) + " vs " +
                     std::to_string(b.shape()[k2]));
  }
  // a viewed as (a_pre, n, a_post), b as (b_pre, n, b_post).
  const Index a_pre = a.shape().prefix_size(k1);
  const Index a_post = a.shape().suffix_size(k1 + 1);
  const Index b_pre = b.shape().prefix_size(k2);
  const Index b_post = b.shape().suffix_size(k2 + 1);

  std::vector<Index> dims;
  for (std::size_t k = 0; k < k1; ++k) dims.push_back(a.shape()[k]);
  for (std::size_t k = 0; k < b.order(); ++k) {
    if (k != k2) dims.push_back(b.shape()[k]);
  }
  for (std::size_t k = k1 + 1; k < a.order(); ++k) dims.push_back(a.shape()[k]);
  if (dims.empty()) dims.push_back(1);

  DenseTensor c{Shape(dims)};
  const double* av = a.values().data();
  const double* bv = b.values().data();
  double* cv = c.values().data();
  // c(ap, bp, bq, aq) = sum_l a(ap, l, aq) b(bp, l, bq)
  for (Index ap = 0; ap < a_pre; ++ap) {
    for (Index bp = 0; bp < b_pre; ++bp) {
      for (Index bq = 0; bq < b_post; ++bq) {
        for (Index aq = 0; aq < a_post; ++aq) {
          double s = 0.0;
          for (Index l = 0; l < n; ++l) {
            s += av[(ap * n + l) * a_post + aq] * bv[(bp * n + l) * b_post + bq];
          }
          cv[((ap * b_pre + bp) * b_post + bq) * a_post + aq] = s;
        }
      }
    }
  }
  return c;
}

DenseTensor tensor_times_matrix(const DenseTensor& a, std::size_t k, const Matrix& m) {
  if (k >= a.order()) throw IndexError("mode out of range");
  if (a.shape()[k] != m.rows()) {
    throw ShapeError("k-mode product: mode size " + std::to_string(a.shape()[k]) + " vs matrix rows " +
                     std::to_string(m.rows()));
  }
  const Index pre = a.shape().prefix_size(k);
  const Index post = a.shape().suffix_size(k + 1);
  const Index n = m.rows();
  const Index j_out = m.cols();
  std::vector<Index> dims = a.shape().dims();
  dims[k] = j_out;
  DenseTensor c{Shape(dims)};
  // Each pre-slice is an n x post row-major block; the result slice is m^T * block.
  for (Index ap = 0; ap < pre; ++ap) {
    Eigen::Map<const RowMatrix> blk(a.values().data() + ap * n * post, n, post);
    Eigen::Map<RowMatrix> out(c.values().data() + ap * j_out * post, j_out, post);
    out.noalias() = m.transpose() * blk;
  }
  return c;
}

double frobenius_norm(const DenseTensor& t) {
  double s = 0.0;
  for (double v : t.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace fasttt
