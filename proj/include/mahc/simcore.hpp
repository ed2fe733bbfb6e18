#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "mahc/coding.hpp"
#include "mahc/envmodels.hpp"
#include "mahc/numerics.hpp"
#include "mahc/rng.hpp"

namespace mahc {

struct WorkerNode {
  KinematicState kinematics;
  ComputeProfile profile;
};

struct WorldState {
  KinematicState master;
  std::vector<WorkerNode> workers;
  double clock = 0.0;

  std::size_t n_workers() const { return workers.size(); }
  double distance_to_master(std::size_t worker) const;
};

/// Moves every node along its constant velocity and advances the clock.
WorldState advance_world(const WorldState& world, double dt);

struct LoadAllocation {
  std::vector<std::int64_t> loads;

  std::int64_t total() const;
  bool feasible(std::int64_t p) const { return total() >= p; }
};

enum class CodingMode { Uncoded, Coded };

struct Receipt {
  std::size_t worker = 0;
  std::size_t batch = 0;
  std::int64_t rows = 0;
  /// Seconds since dispatch.
  double arrival = 0.0;
};

struct TaskRecord {
  std::size_t index = 0;
  double dispatch_time = 0.0;
  /// Duration T_j from dispatch to the arrival that completes decoding.
  double completion_time = 0.0;
  std::vector<Receipt> receipts;
  std::int64_t rows_received_at_completion = 0;
  bool feasible = true;
  /// Relative decode error, only in verification mode.
  std::optional<double> decode_error;
};

/// Matrices needed to materialize the numerics of a task end to end.
struct VerificationData {
  std::shared_ptr<const EncodingMatrix> enc;
  MatrixXr a;
  MatrixXr a_hat;

  static std::shared_ptr<const VerificationData> make(std::int64_t p, std::int64_t m,
                                                      std::size_t n_workers, RngStream rng);
};

struct TaskContext {
  std::int64_t p = 1;
  std::int64_t m = 1;
  /// Rows per batch; 0 sends each worker's whole load as one batch.
  std::int64_t batch_size = 1;
  CodingMode coding = CodingMode::Coded;
  CommConfig comm;
  StragglerPlan straggler;
  std::size_t task_index = 0;
  /// When set, results are computed numerically and decoded at completion.
  std::shared_ptr<const VerificationData> verify;
  const VectorXr* x = nullptr;
};

/// Runs one matrix-vector task through the batch-processing protocol.
///
/// Events are processed in non-decreasing virtual time with ties broken by
/// (worker, batch). Each worker computes its batches back to back and ships
/// each result as soon as it is ready; results on one link are serialized.
/// Everything after the completing arrival is dropped (acknowledgement).
std::pair<TaskRecord, WorldState> run_task(const WorldState& world, const LoadAllocation& alloc,
                                           const TaskContext& ctx, RngStream rng);

/// R_j(t) sampled at each receipt: (arrival, cumulative rows).
std::vector<std::pair<double, std::int64_t>> rows_received_curve(const TaskRecord& rec);
/// Rows received by time t (seconds since dispatch).
std::int64_t rows_received_at(const TaskRecord& rec, double t);

}  // namespace mahc
