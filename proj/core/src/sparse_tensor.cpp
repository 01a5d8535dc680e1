#include <algorithm>
#include <cmath>
#include <numeric>

#include "fasttt/errors.hpp"
#include "fasttt/tensor.hpp"

namespace fasttt {

namespace {

std::string format_index(const Shape& shape, Index lin) {
  std::string s = "(";
  auto idx = shape.delinearize(lin);
  for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k]);
  return s + ")";
}

// Key of the fixed (d-1)-tuple: row-major linearization with `mode` removed.
// Ordering by this key is lexicographic ordering of the tuples.
struct FiberKeyer {
  const Shape& shape;
  std::size_t mode;
  Index mode_stride;
  Index mode_size;

  FiberKeyer(const Shape& s, std::size_t m) : shape(s), mode(m), mode_stride(s.stride(m)), mode_size(s[m]) {}

  Index key(Index lin) const {
    Index high = lin / (mode_stride * mode_size);
    Index low = lin % mode_stride;
    return high * mode_stride + low;
  }
  Index position(Index lin) const { return (lin / mode_stride) % mode_size; }
};

}  // namespace

SparseTensor::SparseTensor(Shape shape) : shape_(std::move(shape)) {}

SparseTensor::SparseTensor(Shape shape, std::vector<Index> linear, std::vector<double> values, bool)
    : shape_(std::move(shape)), linear_(std::move(linear)), values_(std::move(values)) {}

SparseTensor::SparseTensor(Shape shape, std::span<const MultiIndex> coords, std::span<const double> values)
    : shape_(std::move(shape)) {
  if (coords.size() != values.size()) throw ShapeError("coordinate and value counts differ");
  std::vector<Index> lin;
  lin.reserve(coords.size());
  for (const auto& c : coords) lin.push_back(shape_.linearize(c));
  *this = from_linear(shape_, std::move(lin), std::vector<double>(values.begin(), values.end()));
}

SparseTensor SparseTensor::from_linear(Shape shape, std::vector<Index> linear, std::vector<double> values) {
  if (linear.size() != values.size()) throw ShapeError("index and value counts differ");
  for (Index l : linear) {
    if (l < 0 || l >= shape.size()) throw IndexError("linear index out of range");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericalError("non-finite tensor value");
  }

  std::vector<std::size_t> perm(linear.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (!std::is_sorted(linear.begin(), linear.end())) {
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return linear[a] < linear[b]; });
  }

  std::vector<Index> lin_sorted;
  std::vector<double> val_sorted;
  lin_sorted.reserve(linear.size());
  val_sorted.reserve(values.size());
  for (std::size_t n = 0; n < perm.size(); ++n) {
    const Index l = linear[perm[n]];
    if (n > 0 && linear[perm[n - 1]] == l) {
      throw InputError("duplicate coordinate " + format_index(shape, l));
    }
    const double v = values[perm[n]];
    if (v == 0.0) continue;
    lin_sorted.push_back(l);
    val_sorted.push_back(v);
  }
  return SparseTensor(std::move(shape), std::move(lin_sorted), std::move(val_sorted), true);
}

double SparseTensor::at(std::span<const Index> idx) const {
  const Index l = shape_.linearize(idx);
  auto it = std::lower_bound(linear_.begin(), linear_.end(), l);
  if (it == linear_.end() || *it != l) return 0.0;
  return values_[static_cast<std::size_t>(it - linear_.begin())];
}

double SparseTensor::density() const noexcept {
  return static_cast<double>(nnz()) / static_cast<double>(shape_.size());
}

DenseTensor densify(const SparseTensor& t, Index max_entries) {
  if (t.shape().size() > max_entries) {
    throw SizeLimitError("dense size " + std::to_string(t.shape().size()) + " exceeds cap " +
                         std::to_string(max_entries));
  }
  DenseTensor out(t.shape());
  auto lin = t.linear_indices();
  auto val = t.values();
  for (std::size_t n = 0; n < lin.size(); ++n) out[lin[n]] = val[n];
  return out;
}

SparseTensor sparsify(const DenseTensor& t) {
  std::vector<Index> lin;
  std::vector<double> val;
  auto v = t.values();
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (v[n] != 0.0) {
      lin.push_back(static_cast<Index>(n));
      val.push_back(v[n]);
    }
  }
  return SparseTensor::from_linear(t.shape(), std::move(lin), std::move(val));
}

SparseTensor reshape(const SparseTensor& t, Shape new_shape) {
  if (new_shape.size() != t.shape().size()) {
    throw ShapeError("cannot reshape " + t.shape().to_string() + " into " + new_shape.to_string());
  }
  auto lin = t.linear_indices();
  auto val = t.values();
  return SparseTensor::from_linear(std::move(new_shape), {lin.begin(), lin.end()}, {val.begin(), val.end()});
}

SparseTensor vectorize(const SparseTensor& t) { return reshape(t, Shape{t.shape().size()}); }

SparseMatrix unfold(const SparseTensor& t, std::size_t k) {
  const std::size_t d = t.order();
  if (k < 1 || k >= d) {
    throw IndexError("unfolding split " + std::to_string(k) + " outside [1, " + std::to_string(d - 1) + "]");
  }
  const Index cols = t.shape().suffix_size(k);
  const Index rows = t.shape().size() / cols;
  std::vector<Eigen::Triplet<double, Index>> trips;
  trips.reserve(t.nnz());
  auto lin = t.linear_indices();
  auto val = t.values();
  for (std::size_t n = 0; n < lin.size(); ++n) trips.emplace_back(lin[n] / cols, lin[n] % cols, val[n]);
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double frobenius_norm(const SparseTensor& t) {
  double s = 0.0;
  for (double v : t.values()) s += v * v;
  return std::sqrt(s);
}

FiberSet extract_nonzero_fibers(const SparseTensor& t, std::size_t mode) {
  const std::size_t d = t.order();
  if (mode >= d) throw IndexError("fiber mode " + std::to_string(mode) + " out of range");

  FiberSet fs{t.shape(), mode, {}, {0}, {}, {}};
  const FiberKeyer keyer(t.shape(), mode);
  auto lin = t.linear_indices();
  auto val = t.values();

  // Entries are sorted by linear index; re-sort by (key, position). When the
  // mode is the last one the linear order already is that order.
  std::vector<std::size_t> perm(lin.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (mode != d - 1) {
    std::vector<Index> keys(lin.size());
    for (std::size_t n = 0; n < lin.size(); ++n) keys[n] = keyer.key(lin[n]);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  }

  std::vector<Index> idx(d);
  Index prev_key = -1;
  fs.positions.reserve(lin.size());
  fs.values.reserve(lin.size());
  for (std::size_t n : perm) {
    const Index key = keyer.key(lin[n]);
    if (key != prev_key) {
      if (prev_key >= 0) fs.offsets.push_back(static_cast<Index>(fs.positions.size()));
      t.shape().delinearize(lin[n], idx);
      for (std::size_t k = 0; k < d; ++k) {
        if (k != mode) fs.fixed.push_back(idx[k]);
      }
      prev_key = key;
    }
    fs.positions.push_back(keyer.position(lin[n]));
    fs.values.push_back(val[n]);
  }
  if (prev_key >= 0) fs.offsets.push_back(static_cast<Index>(fs.positions.size()));
  return fs;
}

SparseTensor assemble_from_fibers(const FiberSet& fs) {
  const std::size_t d = fs.shape.order();
  std::vector<Index> lin;
  std::vector<double> val;
  lin.reserve(fs.values.size());
  val.reserve(fs.values.size());
  MultiIndex idx(d);
  for (std::size_t f = 0; f < fs.count(); ++f) {
    for (std::size_t k = 0; k < d; ++k) {
      if (k != fs.mode) idx[k] = fs.fixed_coordinate(f, k);
    }
    for (Index e = fs.offsets[f]; e < fs.offsets[f + 1]; ++e) {
      idx[fs.mode] = fs.positions[static_cast<std::size_t>(e)];
      lin.push_back(fs.shape.linearize(idx));
      val.push_back(fs.values[static_cast<std::size_t>(e)]);
    }
  }
  return SparseTensor::from_linear(fs.shape, std::move(lin), std::move(val));
}

std::size_t count_nonzero_fibers(const SparseTensor& t, std::size_t mode) {
  if (mode >= t.order()) throw IndexError("fiber mode out of range");
  const FiberKeyer keyer(t.shape(), mode);
  std::vector<Index> keys;
  keys.reserve(t.nnz());
  for (Index l : t.linear_indices()) keys.push_back(keyer.key(l));
  if (mode != t.order() - 1) std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace fasttt
