#include <doctest.h>

#include "mahc/allocators.hpp"
#include "mahc/episode.hpp"
#include "mahc/errors.hpp"
#include "mahc/simcore.hpp"

using namespace mahc;

namespace {

// Reference values from tests/oracles/closed_forms.py.
constexpr double kSingleWorkerWholeLoad = 0.080824795298958114;
constexpr double kSingleWorkerPipelined = 0.071824795298958114;

CommConfig quiet_comm() {
  CommConfig c;
  c.noise_std_db = 0.0;
  return c;
}

// Static worker at (3, 4), master at the origin, practically deterministic compute.
WorldState static_world(std::size_t n) {
  WorldState w;
  w.workers.resize(n);
  for (auto& node : w.workers) {
    node.kinematics.position = {3.0, 4.0};
    node.profile = {1e300, 1e-4};
  }
  return w;
}

TaskContext deterministic_ctx(std::int64_t p, std::int64_t m, std::int64_t b) {
  TaskContext ctx;
  ctx.p = p;
  ctx.m = m;
  ctx.batch_size = b;
  ctx.comm = quiet_comm();
  return ctx;
}

}  // namespace

TEST_CASE("world geometry and motion") {
  WorldState w = static_world(1);
  CHECK(w.distance_to_master(0) == 5.0);
  w.workers[0].kinematics.velocity = {1.0, 0.0};
  w.master.velocity = {0.0, -1.0};
  const auto later = advance_world(w, 2.0);
  CHECK(later.clock == 2.0);
  CHECK(later.workers[0].kinematics.position.x() == 5.0);
  CHECK(later.master.position.y() == -2.0);
}

TEST_CASE("single worker closed-form completion time") {
  const auto [rec, world] = run_task(static_world(1), {{100}}, deterministic_ctx(100, 200, 0), RngStream(1));
  CHECK(rec.completion_time == doctest::Approx(kSingleWorkerWholeLoad).epsilon(1e-12));
  CHECK(rec.feasible);
  CHECK(rec.receipts.size() == 1);
  CHECK(rec.rows_received_at_completion == 100);
  CHECK(world.clock == doctest::Approx(kSingleWorkerWholeLoad).epsilon(1e-12));

  const auto [same, unused] = run_task(static_world(1), {{100}}, deterministic_ctx(100, 200, 100), RngStream(1));
  CHECK(same.completion_time == rec.completion_time);
}

TEST_CASE("batched results are pipelined behind computation") {
  const auto [rec, world] = run_task(static_world(1), {{100}}, deterministic_ctx(100, 200, 10), RngStream(1));
  CHECK(rec.completion_time == doctest::Approx(kSingleWorkerPipelined).epsilon(1e-12));
  CHECK(rec.receipts.size() == 10);
  for (std::size_t k = 1; k < rec.receipts.size(); ++k) CHECK(rec.receipts[k].arrival > rec.receipts[k - 1].arrival);
}

TEST_CASE("exact ties go to the lowest worker index") {
  const auto [rec, world] = run_task(static_world(2), {{100, 100}}, deterministic_ctx(100, 200, 0), RngStream(1));
  CHECK(rec.completion_time == doctest::Approx(kSingleWorkerWholeLoad).epsilon(1e-12));
  REQUIRE(rec.receipts.size() == 1);
  CHECK(rec.receipts[0].worker == 0);
}

TEST_CASE("infeasible allocation runs out of results") {
  const auto [rec, world] = run_task(static_world(2), {{50, 49}}, deterministic_ctx(100, 200, 0), RngStream(1));
  CHECK_FALSE(rec.feasible);
  CHECK(rec.rows_received_at_completion == 99);
  CHECK(rec.receipts.size() == 2);
  CHECK_THROWS_AS(run_task(static_world(2), {{0, 0}}, deterministic_ctx(100, 200, 0), RngStream(1)), DegenerateTask);
  CHECK_THROWS_AS(run_task(static_world(2), {{101, 0}}, deterministic_ctx(100, 200, 0), RngStream(1)), InvalidInput);
  CHECK_THROWS_AS(run_task(static_world(2), {{100}}, deterministic_ctx(100, 200, 0), RngStream(1)), InvalidInput);
}

TEST_CASE("receipt curve") {
  TaskRecord rec;
  rec.receipts = {{0, 0, 3, 1.0}, {0, 1, 3, 2.0}, {0, 2, 1, 3.0}};
  CHECK(rows_received_at(rec, 0.5) == 0);
  CHECK(rows_received_at(rec, 1.0) == 3);
  CHECK(rows_received_at(rec, 2.5) == 6);
  CHECK(rows_received_at(rec, 9.0) == 7);
  const auto curve = rows_received_curve(rec);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].second == 3);
  CHECK(curve[1].second == 6);
  CHECK(curve[2].second == 7);
}

TEST_CASE("results after the completing arrival are dropped") {
  WorldState w = static_world(3);
  w.workers[2].kinematics.position = {30.0, 40.0};
  TaskContext ctx = deterministic_ctx(60, 50, 5);
  ctx.comm = CommConfig{};
  RngStream rng(77);
  const auto [rec, unused] = run_task(w, {{30, 30, 30}}, ctx, rng);
  const auto curve = rows_received_curve(rec);
  CHECK(curve.back().second >= 60);
  CHECK(curve[curve.size() - 2].second < 60);
  CHECK(rows_received_at(rec, rec.completion_time) >= ctx.p);
  for (std::size_t k = 1; k < rec.receipts.size(); ++k) CHECK(rec.receipts[k].arrival >= rec.receipts[k - 1].arrival);
}

TEST_CASE("straggler victim slows only its own results") {
  WorldState w = static_world(2);
  for (auto& node : w.workers) node.profile = {1e300, 1e-2};
  TaskContext ctx = deterministic_ctx(100, 200, 0);
  const auto base = run_task(w, {{100, 100}}, ctx, RngStream(1)).first;
  ctx.straggler = {true, 0, 10.0};
  const auto slowed = run_task(w, {{100, 100}}, ctx, RngStream(1)).first;
  CHECK(slowed.completion_time == doctest::Approx(base.completion_time).epsilon(1e-12));
  CHECK(slowed.receipts[0].worker == 1);
}

TEST_CASE("verification mode decodes the received rows") {
  RngStream rng(31);
  auto data = VerificationData::make(12, 20, 3, rng.fork("data"));
  VectorXr x = VectorXr::LinSpaced(20, -1.0, 1.0);
  WorldState w = static_world(3);
  w.workers[1].kinematics.position = {10.0, 2.0};
  w.workers[2].kinematics.position = {-6.0, 8.0};
  TaskContext ctx = deterministic_ctx(12, 20, 2);
  ctx.comm = CommConfig{};
  ctx.verify = data;
  ctx.x = &x;

  ctx.coding = CodingMode::Coded;
  const auto coded = run_task(w, {{6, 5, 7}}, ctx, rng.fork("coded")).first;
  REQUIRE(coded.decode_error);
  CHECK(*coded.decode_error < 1e-8);

  ctx.coding = CodingMode::Uncoded;
  const auto plain = run_task(w, {{4, 4, 4}}, ctx, rng.fork("plain")).first;
  REQUIRE(plain.decode_error);
  CHECK(*plain.decode_error < 1e-12);
}

TEST_CASE("episode bookkeeping and determinism") {
  ScenarioConfig s;
  s.n_workers = 2;
  s.p = 40;
  s.m = 30;
  s.k_tasks = 4;
  const UniformPolicy uniform;
  EpisodeOptions opts;
  opts.batch_size = 0;
  const auto a = run_episode(s, uniform, opts, RngStream(5));
  const auto b = run_episode(s, uniform, opts, RngStream(5));
  CHECK(a.tasks.size() == 4);
  CHECK(a.states.size() == 5);
  CHECK(a.rewards.size() == 4);
  CHECK(a.infeasible_count() == 0);
  double sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(a.tasks[j].completion_time == b.tasks[j].completion_time);
    CHECK(a.rewards[j] == -a.tasks[j].completion_time);
    sum += a.tasks[j].completion_time;
  }
  CHECK(a.total_time == doctest::Approx(sum).epsilon(1e-14));
  CHECK(a.total_reward() == doctest::Approx(-sum).epsilon(1e-14));
  for (std::size_t j = 1; j < 4; ++j) {
    CHECK(a.tasks[j].dispatch_time ==
          doctest::Approx(a.tasks[j - 1].dispatch_time + a.tasks[j - 1].completion_time).epsilon(1e-14));
  }
}

TEST_CASE("single-task episode reduces to one run_task call") {
  ScenarioConfig s;
  s.n_workers = 2;
  s.p = 40;
  s.m = 30;
  s.k_tasks = 1;
  const UniformPolicy uniform;
  EpisodeOptions opts;
  opts.batch_size = 3;
  const RngStream rng(12);
  const auto rec = run_episode(s, uniform, opts, rng);

  RngStream env = rng.fork("env");
  const WorldState world = sample_world(s, env);
  TaskContext ctx;
  ctx.p = 40;
  ctx.m = 30;
  ctx.batch_size = 3;
  ctx.coding = CodingMode::Uncoded;
  ctx.straggler = sample_straggler(s, env);
  const auto direct = run_task(world, uniform_alloc(40, 2), ctx, rng.fork("sim").fork(0)).first;
  CHECK(rec.tasks[0].completion_time == direct.completion_time);
  CHECK(rec.rewards[0] == -direct.completion_time);
}

TEST_CASE("deterministic uniform episode composes closed-form task times") {
  ScenarioConfig s;
  s.n_workers = 1;
  s.p = 100;
  s.m = 200;
  s.k_tasks = 3;
  s.position_range = 0.0;
  s.velocity_range = 0.0;
  s.beta_min = s.beta_max = 1e300;
  s.alpha_rule = AlphaRule::Fixed;
  s.alpha_fixed = 1e-4;
  s.comm.noise_std_db = 0.0;
  const UniformPolicy uniform;
  EpisodeOptions opts;
  opts.batch_size = 0;
  const auto rec = run_episode(s, uniform, opts, RngStream(3));
  // Co-located nodes sit at the 1 m distance floor.
  const double per_task = (200.0 + 100.0) * 64.0 / 317530.06187567371 + 1e-4 * 100.0;
  for (const auto& t : rec.tasks) CHECK(t.completion_time == doctest::Approx(per_task).epsilon(1e-12));
  CHECK(rec.total_time == doctest::Approx(3.0 * per_task).epsilon(1e-12));
}

TEST_CASE("all-zero allocations are infeasible zero-duration tasks") {
  class Idle final : public AllocationPolicy {
   public:
    std::string name() const override { return "idle"; }
    CodingMode coding() const override { return CodingMode::Coded; }
    AllocationDecision allocate(const AllocationRequest& req, RngStream&) const override {
      return {{std::vector<std::int64_t>(req.world.n_workers(), 0)}, std::vector<double>(req.world.n_workers(), 0.0)};
    }
  };
  ScenarioConfig s;
  s.n_workers = 2;
  s.p = 40;
  s.m = 30;
  s.k_tasks = 3;
  const auto rec = run_episode(s, Idle{}, EpisodeOptions{}, RngStream(2));
  CHECK(rec.infeasible_count() == 3);
  for (double r : rec.rewards) CHECK(r == -200.0);
  CHECK(rec.total_time == 0.0);
}
