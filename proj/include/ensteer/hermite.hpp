#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ensteer/errors.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// Greedy left-to-right column selection from (b_1, Ab_1, ..., A^{n-1}b_1,
/// b_2, ...): indices h_i count the selected prefix of chain i (a rejected
/// column ends its chain, matching the canonical contiguous-prefix property).
struct HermiteStructure {
  std::vector<int> h;              // per input column, sum <= n
  std::vector<int> selected;       // flat indices into the permuted Kalman list
  Matrix T;                        // selected columns, square iff sum h = n
  std::vector<Matrix> block_A;     // diagonal blocks A~_ii for h_i > 0
  std::vector<Vector> block_b;     // matching b~_i (first block column of T^{-1} b_i)

  int total() const {
    int s = 0;
    for (int v : h) s += v;
    return s;
  }
  bool reachable(int n) const { return total() == n; }
};

inline HermiteStructure hermite_indices(const Matrix& A, const Matrix& B,
                                        const Tolerances& tol = {}) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  if (A.cols() != n || B.rows() != n) throw ConditionError("hermite_indices: shape mismatch");

  HermiteStructure out;
  out.h.assign(static_cast<std::size_t>(m), 0);

  // Running orthonormal basis of the selected span; a candidate joins when its
  // residual is not negligible relative to its own size.
  Matrix Q(n, 0);
  std::vector<Vector> cols;
  for (int i = 0; i < m && static_cast<int>(cols.size()) < n; ++i) {
    Vector v = B.col(i);
    for (int j = 0; j < n; ++j) {
      Vector r = v;
      if (Q.cols() > 0) {
        r -= Q * (Q.adjoint() * r);
        r -= Q * (Q.adjoint() * r);  // second pass firms up the rank test
      }
      double scale = std::max(1.0, v.norm());
      if (r.norm() <= tol.reachability_sigma_min * scale) break;  // chain ends here
      out.h[static_cast<std::size_t>(i)]++;
      out.selected.push_back(i * n + j);
      cols.push_back(v);
      Q.conservativeResize(n, Q.cols() + 1);
      Q.col(Q.cols() - 1) = r / r.norm();
      if (static_cast<int>(cols.size()) == n) break;
      v = A * v;
    }
  }

  out.T = Matrix(n, static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.T.col(static_cast<int>(c)) = cols[c];

  if (out.total() == n) {
    Matrix At = out.T.fullPivLu().solve(A * out.T);
    Matrix Bt = out.T.fullPivLu().solve(B);
    int offset = 0;
    for (int i = 0; i < m; ++i) {
      int hi = out.h[static_cast<std::size_t>(i)];
      if (hi == 0) continue;
      out.block_A.push_back(At.block(offset, offset, hi, hi));
      out.block_b.push_back(Bt.col(i).segment(offset, hi));
      offset += hi;
    }
  }
  return out;
}

/// Per-sample Hermite structure over an ensemble, with the constant-indices
/// verdict that gates single-input decomposition.
struct HermiteDecomposition {
  std::vector<HermiteStructure> per_sample;
  bool constant_indices = false;
  std::size_t first_mismatch = 0;            // sample where the tuple first differs
  std::vector<EnsembleSystem> subpairs;      // diagonal single-input ensembles, on pass
};

inline HermiteDecomposition hermite_decompose(const EnsembleSystem& sys,
                                              const Tolerances& tol = {}) {
  sys.validate();
  if (sys.m < 2)
    throw ConditionError("hermite_decompose expects a multi-input system (m >= 2)");

  HermiteDecomposition out;
  for (std::size_t i = 0; i < sys.samples(); ++i)
    out.per_sample.push_back(hermite_indices(sys.A[i], sys.B[i], tol));

  out.constant_indices = true;
  for (std::size_t i = 1; i < out.per_sample.size(); ++i)
    if (out.per_sample[i].h != out.per_sample[0].h) {
      out.constant_indices = false;
      out.first_mismatch = i;
      break;
    }
  if (!out.constant_indices) return out;
  if (!out.per_sample[0].reachable(sys.n)) return out;

  // One single-input ensemble per nonzero index, in chain order.
  std::size_t blocks = out.per_sample[0].block_A.size();
  for (std::size_t bi = 0; bi < blocks; ++bi) {
    EnsembleSystem sub;
    sub.grid = sys.grid;
    sub.n = static_cast<int>(out.per_sample[0].block_A[bi].rows());
    sub.m = 1;
    for (std::size_t i = 0; i < sys.samples(); ++i) {
      sub.A.push_back(out.per_sample[i].block_A[bi]);
      Matrix bcol(sub.n, 1);
      bcol.col(0) = out.per_sample[i].block_b[bi];
      sub.B.push_back(bcol);
    }
    sub.validate();
    out.subpairs.push_back(std::move(sub));
  }
  return out;
}

}  // namespace ensteer
