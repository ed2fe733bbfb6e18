#include "mahc/simcore.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

#include "mahc/errors.hpp"

namespace mahc {

double WorldState::distance_to_master(std::size_t worker) const {
  return (workers.at(worker).kinematics.position - master.position).norm();
}

WorldState advance_world(const WorldState& world, double dt) {
  WorldState next = world;
  next.master = advance(world.master, dt);
  for (auto& w : next.workers) w.kinematics = advance(w.kinematics, dt);
  next.clock += dt;
  return next;
}

std::int64_t LoadAllocation::total() const { return std::accumulate(loads.begin(), loads.end(), std::int64_t{0}); }

std::shared_ptr<const VerificationData> VerificationData::make(std::int64_t p, std::int64_t m,
                                                               std::size_t n_workers, RngStream rng) {
  auto data = std::make_shared<VerificationData>();
  RngStream code_rng = rng.fork("code");
  data->enc = std::make_shared<const EncodingMatrix>(
      EncodingMatrix::generate(p, static_cast<Eigen::Index>(n_workers), code_rng));
  RngStream a_rng = rng.fork("matrix");
  data->a.resize(p, m);
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) data->a(r, c) = sample_uniform(-1.0, 1.0, a_rng);
  }
  data->a_hat = encode(*data->enc, data->a).a_hat;
  return data;
}

namespace {

enum class EventKind : int { BroadcastDone = 0, ComputeDone = 1, TransmitDone = 2 };

struct Event {
  double time;
  std::size_t worker;
  std::size_t batch;
  EventKind kind;

  auto key() const { return std::tuple(time, worker, batch, static_cast<int>(kind)); }
  bool operator>(const Event& o) const { return key() > o.key(); }
};

struct WorkerRun {
  BatchPlan plan;
  std::deque<std::size_t> ready;
  bool link_busy = false;
  RngStream rng{0};
};

// Seconds-since-dispatch positions follow the constant-velocity model.
double distance_at(const WorldState& world, std::size_t worker, double dt) {
  const Eigen::Vector2d wp = world.workers[worker].kinematics.position + world.workers[worker].kinematics.velocity * dt;
  const Eigen::Vector2d mp = world.master.position + world.master.velocity * dt;
  return (wp - mp).norm();
}

RowRange rows_for(const TaskContext& ctx, const LoadAllocation& alloc, std::size_t worker) {
  if (ctx.coding == CodingMode::Coded) {
    return worker_rows(*ctx.verify->enc, static_cast<Eigen::Index>(worker), alloc.loads[worker]);
  }
  return uncoded_rows(alloc.loads, worker, ctx.p);
}

double verify_decode(const TaskContext& ctx, const LoadAllocation& alloc, const std::vector<Receipt>& receipts,
                     const std::vector<WorkerRun>& runs) {
  const auto& data = *ctx.verify;
  std::int64_t q = 0;
  for (const auto& r : receipts) q += r.rows;
  MatrixXr g_received = MatrixXr::Zero(q, ctx.p);
  VectorXr y_received(q);
  Eigen::Index out = 0;
  for (const auto& r : receipts) {
    const RowRange range = rows_for(ctx, alloc, r.worker);
    const auto& sizes = runs[r.worker].plan.sizes;
    Eigen::Index first = range.begin;
    for (std::size_t k = 0; k < r.batch; ++k) first += sizes[k];
    for (Eigen::Index i = 0; i < r.rows; ++i, ++out) {
      const Eigen::Index row = first + i;
      if (ctx.coding == CodingMode::Coded) {
        g_received.row(out) = data.enc->g().row(row);
        y_received(out) = data.a_hat.row(row).dot(*ctx.x);
      } else {
        g_received(out, row) = 1.0;
        y_received(out) = data.a.row(row).dot(*ctx.x);
      }
    }
  }
  const VectorXr recovered = decode(g_received, y_received);
  const VectorXr truth = mat_vec(data.a, *ctx.x);
  const double scale = std::max(truth.norm(), 1e-300);
  return (recovered - truth).norm() / scale;
}

}  // namespace

std::pair<TaskRecord, WorldState> run_task(const WorldState& world, const LoadAllocation& alloc,
                                           const TaskContext& ctx, RngStream rng) {
  const std::size_t n = world.n_workers();
  if (n == 0) throw InvalidInput("run_task: world has no workers");
  if (alloc.loads.size() != n) {
    throw InvalidInput("run_task: allocation has " + std::to_string(alloc.loads.size()) + " loads for " +
                       std::to_string(n) + " workers");
  }
  if (ctx.batch_size < 0) throw InvalidInput("run_task: negative batch size");
  for (auto l : alloc.loads) {
    if (l < 0 || l > ctx.p) throw InvalidInput("run_task: load " + std::to_string(l) + " outside [0, p]");
  }
  if (alloc.total() == 0) throw DegenerateTask("run_task: every worker has zero load");
  if (ctx.verify && (!ctx.x || ctx.x->size() != ctx.m)) {
    throw InvalidInput("run_task: verification mode needs an input vector of length m");
  }

  TaskRecord rec;
  rec.index = ctx.task_index;
  rec.dispatch_time = world.clock;
  rec.feasible = alloc.feasible(ctx.p);

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::vector<WorkerRun> runs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t load = alloc.loads[i];
    if (load == 0) continue;
    runs[i].plan = plan_batches(load, ctx.batch_size == 0 ? load : ctx.batch_size);
    runs[i].rng = rng.fork(i);
    RngStream bcast = runs[i].rng.fork("broadcast");
    const double t = comm_time(ctx.m, 1, distance_at(world, i, 0.0), bcast, ctx.comm);
    queue.push({t, i, 0, EventKind::BroadcastDone});
  }

  auto compute_batch = [&](std::size_t w, std::size_t k, double start) {
    RngStream comp = runs[w].rng.fork("compute").fork(k);
    const double t = comp_time_sample(runs[w].plan.sizes[k], world.workers[w].profile, comp);
    queue.push({start + apply_straggler(t, w, ctx.straggler), w, k, EventKind::ComputeDone});
  };
  auto transmit = [&](std::size_t w, double start) {
    auto& run = runs[w];
    const std::size_t k = run.ready.front();
    run.ready.pop_front();
    run.link_busy = true;
    RngStream link = run.rng.fork("result").fork(k);
    const double t = comm_time(run.plan.sizes[k], 1, distance_at(world, w, start), link, ctx.comm);
    queue.push({start + t, w, k, EventKind::TransmitDone});
  };

  std::int64_t received = 0;
  bool complete = false;
  double last_arrival = 0.0;
  while (!queue.empty() && !complete) {
    const Event ev = queue.top();
    queue.pop();
    auto& run = runs[ev.worker];
    switch (ev.kind) {
      case EventKind::BroadcastDone:
        compute_batch(ev.worker, 0, ev.time);
        break;
      case EventKind::ComputeDone:
        if (ev.batch + 1 < run.plan.sizes.size()) compute_batch(ev.worker, ev.batch + 1, ev.time);
        run.ready.push_back(ev.batch);
        if (!run.link_busy) transmit(ev.worker, ev.time);
        break;
      case EventKind::TransmitDone:
        run.link_busy = false;
        received += run.plan.sizes[ev.batch];
        rec.receipts.push_back({ev.worker, ev.batch, run.plan.sizes[ev.batch], ev.time});
        last_arrival = ev.time;
        if (received >= ctx.p) {
          complete = true;
          break;
        }
        if (!run.ready.empty()) transmit(ev.worker, ev.time);
        break;
    }
  }

  rec.completion_time = last_arrival;
  rec.rows_received_at_completion = received;
  if (ctx.verify && rec.feasible) rec.decode_error = verify_decode(ctx, alloc, rec.receipts, runs);
  return {std::move(rec), advance_world(world, last_arrival)};
}

std::vector<std::pair<double, std::int64_t>> rows_received_curve(const TaskRecord& rec) {
  std::vector<std::pair<double, std::int64_t>> curve;
  curve.reserve(rec.receipts.size());
  std::int64_t total = 0;
  for (const auto& r : rec.receipts) {
    total += r.rows;
    curve.emplace_back(r.arrival, total);
  }
  return curve;
}

std::int64_t rows_received_at(const TaskRecord& rec, double t) {
  std::int64_t total = 0;
  for (const auto& r : rec.receipts) {
    if (r.arrival > t) break;
    total += r.rows;
  }
  return total;
}

}  // namespace mahc
