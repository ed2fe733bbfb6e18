#include "mahc/coding.hpp"

#include <string>

namespace mahc {

EncodingMatrix EncodingMatrix::generate(Eigen::Index p, Eigen::Index n_workers, RngStream& rng) {
  if (p < 1 || n_workers < 1) {
    throw InvalidInput("generate_encoding_matrix: p=" + std::to_string(p) +
                       ", n_workers=" + std::to_string(n_workers) + " must be positive");
  }
  MatrixXr g(n_workers * p, p);
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < p; ++c) g(r, c) = sample_gaussian(0.0, 1.0, rng);
  }
  return EncodingMatrix(std::move(g), p, n_workers);
}

EncodedTaskMatrix encode(const EncodingMatrix& enc, const MatrixXr& a) {
  if (a.rows() != enc.p()) {
    throw InvalidInput("encode: A has " + std::to_string(a.rows()) + " rows, code expects " +
                       std::to_string(enc.p()));
  }
  require_finite(a, "encode A");
  return {enc.g() * a};
}

RowRange worker_rows(const EncodingMatrix& enc, Eigen::Index worker_id, Eigen::Index load) {
  if (worker_id < 0 || worker_id >= enc.n_workers()) {
    throw InvalidInput("worker_rows: worker " + std::to_string(worker_id) + " out of range");
  }
  if (load < 0 || load > enc.block_size()) {
    throw InvalidInput("worker_rows: load " + std::to_string(load) + " exceeds block size " +
                       std::to_string(enc.block_size()));
  }
  const Eigen::Index begin = worker_id * enc.block_size();
  return {begin, begin + load};
}

RowRange uncoded_rows(std::span<const std::int64_t> loads, std::size_t worker_id, Eigen::Index p) {
  if (worker_id >= loads.size()) throw InvalidInput("uncoded_rows: worker out of range");
  Eigen::Index begin = 0;
  for (std::size_t k = 0; k < worker_id; ++k) begin += loads[k];
  const Eigen::Index end = std::min<Eigen::Index>(begin + loads[worker_id], p);
  begin = std::min(begin, p);
  return {begin, end};
}

BatchPlan plan_batches(std::int64_t load, std::int64_t batch_size) {
  if (load < 1 || batch_size < 1) {
    throw InvalidInput("plan_batches: load=" + std::to_string(load) +
                       ", batch_size=" + std::to_string(batch_size) + " must be positive");
  }
  BatchPlan plan{load, batch_size, (load + batch_size - 1) / batch_size, {}};
  plan.sizes.assign(static_cast<std::size_t>(plan.batch_count), batch_size);
  plan.sizes.back() = load - (plan.batch_count - 1) * batch_size;
  return plan;
}

VectorXr decode(const MatrixXr& g_received, const VectorXr& y_received, double condition_cap) {
  if (g_received.rows() < g_received.cols()) {
    throw InsufficientResults("decode: received " + std::to_string(g_received.rows()) +
                              " rows, need " + std::to_string(g_received.cols()));
  }
  return least_squares_solve(g_received, y_received, condition_cap);
}

}  // namespace mahc
