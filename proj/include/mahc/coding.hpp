#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mahc/numerics.hpp"
#include "mahc/rng.hpp"

namespace mahc {

/// Half-open row interval [begin, end).
struct RowRange {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;
  Eigen::Index size() const { return end - begin; }
  bool empty() const { return end == begin; }
};

/// Tall Gaussian code with one p-row block reserved per worker.
///
/// A single superset matrix is generated per run; task j uses the first
/// l_{i,j} rows of worker i's block, so rows received from distinct workers
/// are always distinct rows of G.
class EncodingMatrix {
 public:
  static EncodingMatrix generate(Eigen::Index p, Eigen::Index n_workers, RngStream& rng);

  const MatrixXr& g() const { return g_; }
  Eigen::Index p() const { return p_; }
  Eigen::Index n_workers() const { return n_workers_; }
  Eigen::Index block_size() const { return p_; }
  Eigen::Index q_max() const { return g_.rows(); }

 private:
  EncodingMatrix(MatrixXr g, Eigen::Index p, Eigen::Index n_workers)
      : g_(std::move(g)), p_(p), n_workers_(n_workers) {}

  MatrixXr g_;
  Eigen::Index p_;
  Eigen::Index n_workers_;
};

struct EncodedTaskMatrix {
  MatrixXr a_hat;
};

EncodedTaskMatrix encode(const EncodingMatrix& enc, const MatrixXr& a);

/// Rows of worker `worker_id`'s block used for a load of `load` rows.
RowRange worker_rows(const EncodingMatrix& enc, Eigen::Index worker_id, Eigen::Index load);

/// Uncoded partition: worker i owns rows [sum_{k<i} l_k, sum_{k<=i} l_k) of A,
/// truncated at p.
RowRange uncoded_rows(std::span<const std::int64_t> loads, std::size_t worker_id, Eigen::Index p);

struct BatchPlan {
  std::int64_t load = 0;
  std::int64_t batch_size = 0;
  std::int64_t batch_count = 0;
  std::vector<std::int64_t> sizes;
};

BatchPlan plan_batches(std::int64_t load, std::int64_t batch_size);

/// Recovers A x from q >= p received encoded results y = G_received A x.
VectorXr decode(const MatrixXr& g_received, const VectorXr& y_received,
                double condition_cap = kDefaultConditionCap);

}  // namespace mahc
