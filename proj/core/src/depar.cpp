#include "fasttt/depar.hpp"

#include <string>

#include "fasttt/errors.hpp"
#include "fasttt/matrix_kernels.hpp"

namespace fasttt {

DeparResult depar_general(const Matrix& m) {
  constexpr double kParallelTol = 1e-12;
  const Index rows = m.rows();
  std::vector<Index> kept;
  std::vector<Vector> unit;
  std::vector<double> kept_norm;
  std::vector<double> kept_sq;
  std::vector<Index> cls(static_cast<std::size_t>(m.cols()), -1);
  std::vector<double> coef(static_cast<std::size_t>(m.cols()), 0.0);

  for (Index j = 0; j < m.cols(); ++j) {
    const auto u = m.col(j);
    const double nu = u.norm();
    flop_counter::add(2 * static_cast<std::uint64_t>(rows));
    if (nu == 0.0) continue;
    bool found = false;
    for (std::size_t c = 0; c < kept.size() && !found; ++c) {
      const double alpha = u.dot(unit[c]);
      const double resid = (u - alpha * unit[c]).norm();
      flop_counter::add(6 * static_cast<std::uint64_t>(rows));
      if (resid <= kParallelTol * nu) {
        cls[static_cast<std::size_t>(j)] = static_cast<Index>(c);
        // Ratio against the raw column so identical columns get exactly 1.
        coef[static_cast<std::size_t>(j)] = u.dot(m.col(kept[c])) / kept_sq[c];
        found = true;
      }
    }
    if (!found) {
      cls[static_cast<std::size_t>(j)] = static_cast<Index>(kept.size());
      coef[static_cast<std::size_t>(j)] = 1.0;
      kept.push_back(j);
      unit.emplace_back(u / nu);
      kept_norm.push_back(nu);
      kept_sq.push_back(u.dot(u));
    }
  }

  DeparResult out;
  const Index beta = static_cast<Index>(kept.size());
  out.N.resize(rows, beta);
  for (Index c = 0; c < beta; ++c) out.N.col(c) = m.col(kept[static_cast<std::size_t>(c)]);
  out.T = Matrix::Zero(beta, m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    const Index c = cls[static_cast<std::size_t>(j)];
    if (c >= 0) out.T(c, j) = coef[static_cast<std::size_t>(j)];
  }
  return out;
}

QuasiPermDepar depar_quasi_perm(const QuasiPermMatrix& m) {
  const Index rows = m.rows();
  std::vector<Index> rank(static_cast<std::size_t>(rows), -1);
  for (Index r : m.col_to_row()) rank[static_cast<std::size_t>(r)] = 0;
  std::vector<Index> used;
  for (Index r = 0; r < rows; ++r) {
    if (rank[static_cast<std::size_t>(r)] >= 0) {
      rank[static_cast<std::size_t>(r)] = static_cast<Index>(used.size());
      used.push_back(r);
    }
  }
  const Index beta = static_cast<Index>(used.size());
  std::vector<Index> t_map;
  t_map.reserve(m.col_to_row().size());
  for (Index r : m.col_to_row()) t_map.push_back(rank[static_cast<std::size_t>(r)]);
  return {QuasiPermMatrix(rows, std::move(used)), QuasiPermMatrix(beta, std::move(t_map))};
}

namespace {

struct SweepResult {
  std::vector<QuasiPermMatrix> left;
  std::vector<QuasiPermMatrix> right;
  QuasiPermMatrix left_t;   // fiber -> left class, valid when p > 0
  QuasiPermMatrix right_t;  // fiber -> right class, valid when p < d-1
};

// Left cores: rows of the left unfolding are (l, i) with l the incoming rank.
// Absorbing the previous T relabels l by its class. Right cores mirror this
// with rows (i, c) of the transposed right unfolding.
SweepResult sweep(const StructuredTT& s) {
  const std::size_t d = s.order();
  const std::size_t p = s.p;
  SweepResult out;
  for (std::size_t k = 0; k < p; ++k) {
    const QuasiPermMatrix& q = s.left[k];
    QuasiPermMatrix cur = q;
    if (k > 0) {
      const Index n = s.shape[k];
      const QuasiPermMatrix& t = out.left_t;
      std::vector<Index> map(static_cast<std::size_t>(q.cols()));
      for (Index c = 0; c < q.cols(); ++c) {
        const Index row = q.row_of(c);
        map[static_cast<std::size_t>(c)] = t.row_of(row / n) * n + row % n;
      }
      cur = QuasiPermMatrix(t.rows() * n, std::move(map));
    }
    QuasiPermDepar nt = depar_quasi_perm(cur);
    out.left.push_back(std::move(nt.N));
    out.left_t = std::move(nt.T);
  }

  std::vector<QuasiPermMatrix> right_rev;
  for (std::size_t k = d - 1; k > p; --k) {
    const QuasiPermMatrix& q = s.right[k - p - 1];
    QuasiPermMatrix cur = q;
    if (k + 1 < d) {
      const Index r_old = s.R;
      const QuasiPermMatrix& t = out.right_t;
      std::vector<Index> map(static_cast<std::size_t>(q.cols()));
      for (Index c = 0; c < q.cols(); ++c) {
        const Index row = q.row_of(c);
        map[static_cast<std::size_t>(c)] = (row / r_old) * t.rows() + t.row_of(row % r_old);
      }
      cur = QuasiPermMatrix(s.shape[k] * t.rows(), std::move(map));
    }
    QuasiPermDepar nt = depar_quasi_perm(cur);
    right_rev.push_back(std::move(nt.N));
    out.right_t = std::move(nt.T);
  }
  out.right.assign(right_rev.rbegin(), right_rev.rend());
  return out;
}

}  // namespace

std::vector<Index> DeparallelisedTT::ranks() const {
  const std::size_t d = order();
  std::vector<Index> r(d + 1, 1);
  for (std::size_t k = 0; k < p; ++k) r[k + 1] = left[k].cols();
  for (std::size_t k = p + 1; k < d; ++k) r[k] = right[k - p - 1].cols();
  return r;
}

TTCore DeparallelisedTT::left_core(std::size_t k) const {
  const Index n = shape[k];
  const QuasiPermMatrix& q = left[k];
  TTCore c(q.rows() / n, n, q.cols());
  for (Index j = 0; j < q.cols(); ++j) c(q.row_of(j) / n, q.row_of(j) % n, j) = 1.0;
  return c;
}

TTCore DeparallelisedTT::right_core(std::size_t k) const {
  const Index n = shape[k];
  const QuasiPermMatrix& q = right[k - p - 1];
  const Index rr = q.rows() / n;
  TTCore c(q.cols(), n, rr);
  for (Index j = 0; j < q.cols(); ++j) c(j, q.row_of(j) / rr, q.row_of(j) % rr) = 1.0;
  return c;
}

TTTensor DeparallelisedTT::to_tt() const {
  std::vector<TTCore> cores;
  cores.reserve(order());
  for (std::size_t k = 0; k < p; ++k) cores.push_back(left_core(k));
  cores.push_back(pivot);
  for (std::size_t k = p + 1; k < order(); ++k) cores.push_back(right_core(k));
  return TTTensor(std::move(cores));
}

DeparallelisedTT deparallelise(const StructuredTT& s) {
  const std::size_t d = s.order();
  const std::size_t p = s.p;
  SweepResult sw = sweep(s);

  DeparallelisedTT out;
  out.shape = s.shape;
  out.p = p;
  out.zero = s.zero;
  const Index rl = p > 0 ? sw.left_t.rows() : 1;
  const Index rr = p + 1 < d ? sw.right_t.rows() : 1;
  out.pivot = TTCore(rl, s.shape[p], rr);
  // Distinct fibers never share a (left class, right class) pair, so each
  // pivot entry receives at most one value.
  for (Index j = 0; j < s.fibers.outerSize(); ++j) {
    const Index a = p > 0 ? sw.left_t.row_of(j) : 0;
    const Index b = p + 1 < d ? sw.right_t.row_of(j) : 0;
    for (SparseMatrix::InnerIterator it(s.fibers, j); it; ++it) out.pivot(a, it.col(), b) += it.value();
  }
  out.left = std::move(sw.left);
  out.right = std::move(sw.right);
  return out;
}

TTTensor parallel_vector_round(const StructuredTT& s) { return deparallelise(s).to_tt(); }

std::vector<Index> depar_ranks(const StructuredTT& s) {
  const std::size_t d = s.order();
  SweepResult sw = sweep(s);
  std::vector<Index> r(d + 1, 1);
  for (std::size_t k = 0; k < s.p; ++k) r[k + 1] = sw.left[k].cols();
  for (std::size_t k = s.p + 1; k < d; ++k) r[k] = sw.right[k - s.p - 1].cols();
  return r;
}

}  // namespace fasttt
