#include <gtest/gtest.h>

#include "fasttt/errors.hpp"
#include "fasttt/fasttt.hpp"
#include "fasttt/quasi_perm.hpp"
#include "fasttt/structured_tt.hpp"
#include "fasttt/tt_matrix.hpp"
#include "fasttt/tt_tensor.hpp"
#include "fasttt/ttsvd.hpp"
#include "test_support.hpp"

using namespace fasttt;
using fasttt::testing::random_sparse;
using fasttt::testing::random_tt;

namespace {

// Full contraction of the cores, independent of tt_entry.
DenseTensor contract_cores(const TTTensor& t) {
  const Shape s = t.shape();
  Matrix acc = Matrix::Ones(1, 1);  // rows: multi-index prefix, cols: current rank
  for (std::size_t k = 0; k < t.order(); ++k) {
    const TTCore& g = t.core(k);
    Matrix next(acc.rows() * g.n(), g.r_right());
    for (Index row = 0; row < acc.rows(); ++row)
      for (Index i = 0; i < g.n(); ++i) next.row(row * g.n() + i) = acc.row(row) * g.slice(i);
    acc = std::move(next);
  }
  std::vector<double> v(acc.data(), acc.data() + acc.size());
  return DenseTensor(s, std::move(v));
}

SparseMatrix random_sparse_matrix(Rng& rng, Index rows, Index cols, double density) {
  std::vector<Eigen::Triplet<double, Index>> trips;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (rng.uniform01() < density) trips.emplace_back(i, j, rng.uniform(-1.0, 1.0));
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

TEST(TTTensor, Invariants) {
  EXPECT_THROW(TTTensor(std::vector<TTCore>{}), ShapeError);
  EXPECT_THROW(TTTensor({TTCore(2, 3, 1)}), ShapeError);
  EXPECT_THROW(TTTensor({TTCore(1, 3, 2), TTCore(3, 3, 1)}), ShapeError);
  TTTensor t({TTCore(1, 3, 2), TTCore(2, 4, 1)});
  EXPECT_EQ(t.ranks(), (std::vector<Index>{1, 2, 1}));
  EXPECT_EQ(t.interior_ranks(), (std::vector<Index>{2}));
  EXPECT_EQ(t.parameter_count(), 6 + 8);
}

TEST(TTEntry, OnesAndRankOne) {
  std::vector<TTCore> cores;
  for (Index n : {2, 3, 4}) cores.emplace_back(1, n, 1, std::vector<double>(static_cast<std::size_t>(n), 1.0));
  TTTensor ones(cores);
  for (Index l = 0; l < 24; ++l) EXPECT_EQ(tt_entry(ones, ones.shape().delinearize(l)), 1.0);
  Vector u(3), v(2);
  u << 1, 2, 3;
  v << -1, 5;
  TTTensor r = tt_rank1({u, v});
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) EXPECT_EQ(tt_entry(r, std::vector<Index>{i, j}), u(i) * v(j));
  EXPECT_THROW(tt_entry(r, std::vector<Index>{3, 0}), IndexError);
}

TEST(TTEntry, MatchesContractionOracle) {
  Rng rng(31);
  TTTensor t = random_tt(rng, Shape{3, 2, 4, 3}, 3);
  DenseTensor full = contract_cores(t);
  DenseTensor via = tt_to_full(t);
  for (Index l = 0; l < full.size(); ++l) {
    EXPECT_NEAR(tt_entry(t, t.shape().delinearize(l)), full[l], 1e-13);
    EXPECT_NEAR(via[l], full[l], 1e-13);
  }
}

TEST(TTRank1, Examples) {
  Vector u(2), v(2);
  u << 1, 0;
  v << 0, 2;
  DenseTensor f = tt_to_full(tt_rank1({u, v}));
  EXPECT_EQ(std::vector<double>(f.values().begin(), f.values().end()), (std::vector<double>{0, 2, 0, 0}));
  Vector e1 = Vector::Zero(3), e2 = Vector::Zero(4), e3 = Vector::Zero(2);
  e1(2) = 1;
  e2(0) = 1;
  e3(1) = 1;
  TTTensor basis = tt_rank1({e1, e2, e3});
  EXPECT_EQ(basis.interior_ranks(), (std::vector<Index>{1, 1}));
  DenseTensor b = tt_to_full(basis);
  double sum = 0;
  for (double x : b.values()) sum += x;
  EXPECT_EQ(sum, 1.0);
  EXPECT_EQ(b.at(std::vector<Index>{2, 0, 1}), 1.0);
}

TEST(TTRank1, OuterProductOracle) {
  Rng rng(32);
  std::vector<Vector> vs;
  for (Index n : {3, 4, 2, 5}) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.uniform(-1, 1);
    vs.push_back(x);
  }
  TTTensor t = tt_rank1(vs);
  DenseTensor f = tt_to_full(t);
  for (Index l = 0; l < f.size(); ++l) {
    MultiIndex i = f.shape().delinearize(l);
    const double o = vs[0](i[0]) * vs[1](i[1]) * vs[2](i[2]) * vs[3](i[3]);
    EXPECT_NEAR(f[l], o, 1e-14 * std::max(1.0, std::abs(o)));
  }
}

TEST(TTAdd, ZeroAndRankGrowth) {
  Rng rng(33);
  TTTensor a = random_tt(rng, Shape{3, 4, 2}, 2);
  TTTensor z = TTTensor::zeros(a.shape());
  TTTensor s = tt_add(a, z);
  for (std::size_t k = 0; k + 1 < a.order(); ++k) EXPECT_EQ(s.interior_ranks()[k], a.interior_ranks()[k] + 1);
  DenseTensor fa = tt_to_full(a), fs = tt_to_full(s);
  EXPECT_EQ(std::vector<double>(fa.values().begin(), fa.values().end()),
            std::vector<double>(fs.values().begin(), fs.values().end()));
  Vector x = Vector::Ones(3), y = Vector::Ones(4), w = Vector::Ones(2);
  TTTensor two = tt_add(tt_rank1({x, y, w}), tt_rank1({x, y, w}));
  EXPECT_EQ(two.interior_ranks(), (std::vector<Index>{2, 2}));
  EXPECT_THROW(tt_add(a, TTTensor::zeros(Shape{3, 4, 3})), ShapeError);
}

TEST(TTAdd, EntrywiseSumAtRandomIndices) {
  Rng rng(34);
  const Shape s{4, 5, 3};
  TTTensor a = random_tt(rng, s, 3), b = random_tt(rng, s, 3);
  TTTensor c = tt_add(a, b);
  for (int n = 0; n < 50; ++n) {
    MultiIndex i{static_cast<Index>(rng.below(4)), static_cast<Index>(rng.below(5)), static_cast<Index>(rng.below(3))};
    EXPECT_NEAR(tt_entry(c, i), tt_entry(a, i) + tt_entry(b, i), 1e-13);
  }
}

TEST(TTAdd, PropertyCommutativeInEntries) {
  Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    Shape s = fasttt::testing::random_shape(rng, 1, 4, 4);
    TTTensor a = random_tt(rng, s, 3), b = random_tt(rng, s, 3);
    DenseTensor ab = tt_to_full(tt_add(a, b)), ba = tt_to_full(tt_add(b, a));
    EXPECT_LE(fasttt::testing::max_abs_diff(ab.values(), ba.values()), 1e-13);
  }
}

TEST(TTToFull, Examples) {
  Vector a = Vector::Ones(2), b = Vector::Ones(3);
  const DenseTensor full = tt_to_full(tt_rank1({a, b}));
  for (double x : full.values()) EXPECT_EQ(x, 1.0);
  TTTensor single({TTCore(1, 3, 1, {4, 5, 6})});
  DenseTensor f = tt_to_full(single);
  EXPECT_EQ(std::vector<double>(f.values().begin(), f.values().end()), (std::vector<double>{4, 5, 6}));
  EXPECT_THROW(tt_to_full(TTTensor::zeros(Shape{1000, 1000, 1000}), 1'000'000), SizeLimitError);
}

TEST(TTNorm, PropertyDenseAgreement) {
  Rng rng(36);
  for (int trial = 0; trial < 30; ++trial) {
    Shape s = fasttt::testing::random_shape(rng, 1, 5, 4);
    TTTensor t = random_tt(rng, s, 4);
    const double dense = fasttt::testing::dense_norm(tt_to_full(t).values());
    EXPECT_NEAR(tt_norm(t), dense, 1e-12 * dense);
    EXPECT_NEAR(std::sqrt(tt_inner(t, t)), dense, 1e-12 * dense);
  }
}

TEST(TTInner, SparseAgainstDense) {
  Rng rng(37);
  const Shape s{4, 3, 5};
  SparseTensor a = random_sparse(rng, s, 0.3);
  TTTensor t = random_tt(rng, s, 3);
  DenseTensor da = densify(a), dt = tt_to_full(t);
  double ref = 0.0;
  for (Index l = 0; l < da.size(); ++l) ref += da[l] * dt[l];
  EXPECT_NEAR(tt_inner(a, t), ref, 1e-13);
}

TEST(Orthogonalize, DefectsAndValue) {
  Rng rng(38);
  TTTensor t = random_tt(rng, Shape{3, 4, 5, 2}, 3);
  TTTensor l = left_orthogonalize(t), r = right_orthogonalize(t);
  for (std::size_t k = 0; k + 1 < t.order(); ++k) EXPECT_LE(left_orthogonality_defect(l.core(k)), 1e-13);
  for (std::size_t k = 1; k < t.order(); ++k) EXPECT_LE(right_orthogonality_defect(r.core(k)), 1e-13);
  DenseTensor f = tt_to_full(t);
  EXPECT_LE(fasttt::testing::relative_diff(f, tt_to_full(l)), 1e-13);
  EXPECT_LE(fasttt::testing::relative_diff(f, tt_to_full(r)), 1e-13);
}

TEST(QuasiPerm, RecognizeAndCompose) {
  QuasiPermMatrix q(3, {2, 0, 2, 1});
  Matrix d = q.to_dense();
  EXPECT_EQ(d.sum(), 4.0);
  EXPECT_EQ(d(2, 0), 1.0);
  auto back = QuasiPermMatrix::recognize(d);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, q);
  d(0, 0) = 0.5;
  EXPECT_FALSE(QuasiPermMatrix::recognize(d).has_value());
  EXPECT_THROW(QuasiPermMatrix(2, {0, 2}), ShapeError);
  QuasiPermMatrix a(4, {3, 1, 0});
  EXPECT_EQ(compose(a, q).to_dense(), a.to_dense() * q.to_dense());
}

TEST(StructuredToTT, SingleNonzeroAllRanksOne) {
  std::vector<MultiIndex> idx{{1, 2, 0}};
  std::vector<double> v{7.5};
  SparseTensor a(Shape{3, 4, 2}, idx, v);
  for (std::size_t p = 0; p < 3; ++p) {
    TTTensor t = structured_to_tt(build_structured_tt(a, p));
    EXPECT_EQ(t.ranks(), (std::vector<Index>{1, 1, 1, 1}));
    EXPECT_EQ(tt_entry(t, idx[0]), 7.5);
  }
}

TEST(StructuredToTT, FdmLaplacianFiberCount) {
  SparseTensor a = tensorize_matrix(gen_fdm(20, 20, 20, FdmCoefficients::Laplacian), {20, 20, 20}, {20, 20, 20});
  StructuredTT s = build_structured_tt(a, 1);
  EXPECT_EQ(s.R, 1920);
  EXPECT_EQ(s.ranks(), (std::vector<Index>{1, 1920, 1920, 1}));
}

TEST(StructuredToTT, ReconstructionIsExact) {
  Rng rng(39);
  SparseTensor a = random_sparse(rng, Shape{4, 5, 6}, 0.2);
  for (std::size_t p = 0; p < 3; ++p) {
    StructuredTT s = build_structured_tt(a, p);
    TTTensor t = structured_to_tt(s);
    for (std::size_t k = 1; k < 3; ++k) EXPECT_EQ(t.ranks()[k], s.R);
    DenseTensor f = tt_to_full(t), ref = densify(a);
    for (Index l = 0; l < f.size(); ++l) EXPECT_EQ(f[l], ref[l]);
  }
}

TEST(StructuredToTT, PropertyQuasiPermCoresAndRankR) {
  Rng rng(40);
  for (int trial = 0; trial < 30; ++trial) {
    Shape s = fasttt::testing::random_shape(rng, 2, 4, 5);
    SparseTensor a = random_sparse(rng, s, 0.05 + 0.3 * rng.uniform01());
    const std::size_t p = rng.below(s.order());
    StructuredTT st = build_structured_tt(a, p);
    TTTensor t = structured_to_tt(st);
    for (std::size_t k = 0; k < s.order(); ++k) {
      if (k < p) EXPECT_TRUE(recognize_left_perm_core(t.core(k)).has_value());
      if (k > p) EXPECT_TRUE(recognize_right_perm_core(t.core(k)).has_value());
    }
    for (std::size_t k = 1; k < s.order(); ++k) EXPECT_EQ(t.ranks()[k], st.R);
  }
}

TEST(StructuredToTT, MatchesLemmaTwoFold) {
  // Summing the rank-1 fiber terms with tt_add gives the same tensor.
  Rng rng(41);
  SparseTensor a = random_sparse(rng, Shape{3, 4, 3}, 0.25);
  const std::size_t p = 1;
  FiberSet f = extract_nonzero_fibers(a, p);
  std::optional<TTTensor> sum;
  for (std::size_t j = 0; j < f.count(); ++j) {
    std::vector<Vector> vs;
    for (std::size_t k = 0; k < 3; ++k) {
      Vector x = Vector::Zero(a.shape()[k]);
      if (k == p) {
        for (Index e = f.offsets[j]; e < f.offsets[j + 1]; ++e) x(f.positions[e]) = f.values[e];
      } else {
        x(f.fixed_coordinate(j, k)) = 1.0;
      }
      vs.push_back(x);
    }
    TTTensor term = tt_rank1(vs);
    sum = sum ? tt_add(*sum, term) : term;
  }
  ASSERT_TRUE(sum.has_value());
  TTTensor s = structured_to_tt(build_structured_tt(a, p));
  EXPECT_EQ(sum->ranks(), s.ranks());
  DenseTensor x = tt_to_full(*sum), y = tt_to_full(s);
  EXPECT_EQ(std::vector<double>(x.values().begin(), x.values().end()),
            std::vector<double>(y.values().begin(), y.values().end()));
}

TEST(Tensorize, TrivialAndIdentity) {
  Rng rng(42);
  SparseMatrix m = random_sparse_matrix(rng, 3, 5, 0.5);
  SparseTensor t = tensorize_matrix(m, {3}, {5});
  EXPECT_EQ(t.shape(), Shape{15});
  EXPECT_EQ(t.nnz(), static_cast<std::size_t>(m.nonZeros()));

  SparseMatrix eye(4, 4);
  eye.setIdentity();
  SparseTensor ti = tensorize_matrix(eye, {2, 2}, {2, 2});
  EXPECT_EQ(ti.shape(), (Shape{4, 4}));
  EXPECT_EQ(ti.nnz(), 4u);
  Decomposition d = fasttt::fasttt(ti, {});
  EXPECT_EQ(d.tt.interior_ranks(), (std::vector<Index>{1}));
  EXPECT_THROW(tensorize_matrix(eye, {2, 3}, {2, 2}), ShapeError);
}

TEST(Tensorize, RoundTrip) {
  Rng rng(43);
  SparseMatrix m = random_sparse_matrix(rng, 8, 8, 0.3);
  SparseTensor t = tensorize_matrix(m, {2, 2, 2}, {2, 2, 2});
  EXPECT_EQ(t.shape(), (Shape{4, 4, 4}));
  SparseMatrix back = untensorize_matrix(t, {2, 2, 2}, {2, 2, 2});
  EXPECT_EQ(Matrix(back), Matrix(m));
  // Fused coordinate of mode k is i_k * n_k + j_k.
  for (Index r = 0; r < 8; ++r)
    for (Index c = 0; c < 8; ++c) {
      MultiIndex idx{((r >> 2) & 1) * 2 + ((c >> 2) & 1), ((r >> 1) & 1) * 2 + ((c >> 1) & 1), (r & 1) * 2 + (c & 1)};
      EXPECT_EQ(t.at(idx), m.coeff(r, c));
    }
}

TEST(Mpo, SplitAndMatvecAgainstDense) {
  Rng rng(44);
  Matrix dense = fasttt::testing::random_matrix(rng, 8, 8);
  SparseMatrix m = dense.sparseView();
  SparseTensor t = tensorize_matrix(m, {2, 2, 2}, {2, 2, 2});
  TTTensor tt = tt_svd(densify(t), 1e-14);
  TTMatrix op = tt_split_mpo(tt, {2, 2, 2}, {2, 2, 2});
  EXPECT_EQ(op.rows(), 8);
  EXPECT_LE((mpo_to_dense(op) - dense).norm(), 1e-12 * dense.norm());

  Vector x(8);
  for (Index i = 0; i < 8; ++i) x(i) = rng.uniform(-1, 1);
  TTTensor xt = tt_svd(DenseTensor(Shape{2, 2, 2}, std::vector<double>(x.data(), x.data() + 8)), 1e-14);
  TTTensor y = mpo_matvec(op, xt);
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_EQ(y.ranks()[k], op.ranks()[k] * xt.ranks()[k]);
  Vector ref = dense * x;
  DenseTensor yf = tt_to_full(y);
  for (Index i = 0; i < 8; ++i) EXPECT_NEAR(yf[i], ref(i), 1e-12);
}

TEST(Mpo, IdentityAndProjector) {
  SparseMatrix eye(8, 8);
  eye.setIdentity();
  TTTensor id = tt_svd(densify(tensorize_matrix(eye, {2, 2, 2}, {2, 2, 2})), 1e-14);
  TTMatrix op = tt_split_mpo(id, {2, 2, 2}, {2, 2, 2});
  Rng rng(45);
  TTTensor v = random_tt(rng, Shape{2, 2, 2}, 2);
  DenseTensor a = tt_to_full(v), b = tt_to_full(mpo_matvec(op, v));
  EXPECT_LE(fasttt::testing::max_abs_diff(a.values(), b.values()), 1e-14);

  // e_1 e_1^T keeps only the first entry.
  SparseMatrix proj(8, 8);
  proj.insert(0, 0) = 1.0;
  TTTensor pt = tt_svd(densify(tensorize_matrix(proj, {2, 2, 2}, {2, 2, 2})), 1e-14);
  DenseTensor pv = tt_to_full(mpo_matvec(tt_split_mpo(pt, {2, 2, 2}, {2, 2, 2}), v));
  EXPECT_NEAR(pv[0], a[0], 1e-14);
  for (Index i = 1; i < 8; ++i) EXPECT_EQ(pv[i], 0.0);

  TTTensor single({TTCore(1, 6, 1, {1, 2, 3, 4, 5, 6})});
  Matrix d = mpo_to_dense(tt_split_mpo(single, {2}, {3}));
  EXPECT_EQ(d(1, 0), 4.0);
  EXPECT_EQ(d(0, 2), 3.0);
  EXPECT_THROW(tt_split_mpo(single, {2}, {2}), ShapeError);
}
