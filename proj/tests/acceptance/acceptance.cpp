// Acceptance checks: one PASS/FAIL line per criterion. Criteria passed with
// --known-gap are still run and reported but do not affect the exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/oracles.hpp"
#include "../common/ppo_fixtures.hpp"
#include "CLI11.hpp"
#include "swarm/boids.hpp"
#include "swarm/checkpoint.hpp"
#include "swarm/metrics.hpp"
#include "swarm/perception.hpp"
#include "swarm/ppo.hpp"
#include "swarm/predator.hpp"
#include "swarm/runner.hpp"
#include "swarm/trainer.hpp"
#include "swarm/world.hpp"

using namespace swarm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

AgentState agent(int id, Vec2 pos, Vec2 heading = {1.0, 0.0}) {
  AgentState a;
  a.id = id;
  a.position = pos;
  a.heading = heading.normalized();
  return a;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// 1. Two-phase predator against the literal transcription.
Outcome predator_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    PredatorConfig pc;
    pc.vision_radius = rng.uniform(3.0, 12.0);
    PredatorState p = make_predator(pc, {rng.uniform(5.0, 45.0), rng.uniform(5.0, 45.0)}, {1.0, 0.0});
    oracle::LiteralPredator lit;
    const int n = 1 + static_cast<int>(rng.below(15));
    std::vector<AgentState> agents;
    for (int i = 0; i < n; ++i)
      agents.push_back(agent(i, p.position + Vec2{rng.uniform(-15.0, 15.0), rng.uniform(-15.0, 15.0)}));
    for (int tick = 0; tick < 5; ++tick) {
      std::vector<oracle::Prey> prey;
      for (const auto& a : agents) prey.push_back({a.id, a.position.x, a.position.y});
      const auto want = lit.step(p.position.x, p.position.y, p.vision_radius, prey);
      update_memory(p, agents);
      const TargetDecision got = select_target(p, agents);
      if (got.target_id.value_or(-1) != want.target ||
          p.memory != std::vector<int>(lit.global_memory.begin(), lit.global_memory.end()))
        ++mismatches;
      for (auto& a : agents) a.position += Vec2{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {mismatches == 0 && secs < 1.0,
          "1000 configurations x 5 ticks, " + std::to_string(mismatches) + " mismatches, " + fmt("%.3f s", secs)};
}

// 2. Scripted confusion cases.
Outcome flowchart_cases() {
  PredatorConfig pc;
  PredatorState p = make_predator(pc, {10.0, 10.0}, {1.0, 0.0});
  std::vector<AgentState> far{agent(0, {30.0, 10.0}), agent(1, {10.0, 25.0})};
  update_memory(p, far);
  const TargetDecision c1 = select_target(p, far);
  const bool case1 = c1.kind == TargetKind::ChaseClosestGlobal && c1.target_id == 1;

  p = make_predator(pc, {25.0, 25.0}, {1.0, 0.0});
  std::vector<AgentState> a{agent(0, {31.0, 25.0}), agent(1, {40.0, 25.0}), agent(2, {45.0, 25.0}),
                            agent(3, {25.0, 45.0})};
  update_memory(p, a);
  a[1].position = {25.0, 31.0};
  update_memory(p, a);
  select_target(p, a);
  a[2].position = {19.0, 25.0};
  update_memory(p, a);
  const TargetDecision c2 = select_target(p, a);
  const bool case2 = c2.kind == TargetKind::ChaseLastEntered && c2.target_id == 2 && p.memory == std::vector{0, 1, 2};

  a[0].position = {45.0, 25.0};
  a[3].position = {25.0, 20.0};
  update_memory(p, a);
  const TargetDecision c3 = select_target(p, a);
  const bool case3 = c3.target_id == 3 && p.memory == std::vector{1, 2, 3};
  return {case1 && case2 && case3, std::string("case I ") + (case1 ? "ok" : "wrong") + ", case II " +
                                       (case2 ? "ok" : "wrong") + ", case III " + (case3 ? "ok" : "wrong")};
}

// 3. Flocking vectors against direct evaluation.
Outcome boid_equations() {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const AgentState me = agent(0, {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)});
    const int n = 1 + static_cast<int>(rng.below(30));
    std::vector<AgentState> nb;
    std::vector<oracle::V> pos, fwd;
    for (int i = 1; i <= n; ++i) {
      nb.push_back(agent(i, {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)},
                         unit_from_angle(rng.uniform(-3.2, 3.2))));
      pos.push_back({nb.back().position.x, nb.back().position.y});
      fwd.push_back({nb.back().heading.x, nb.back().heading.y});
    }
    auto rel = [](Vec2 got, long double x, long double y) {
      const long double err = std::hypot(static_cast<long double>(got.x) - x, static_cast<long double>(got.y) - y);
      return static_cast<double>(err / std::max<long double>(1e-300, std::hypot(x, y)));
    };
    const auto c = oracle::centroid(pos);
    const auto f = oracle::mean_forward(fwd);
    const auto a = oracle::mean_away({me.position.x, me.position.y}, pos);
    worst = std::max({worst, rel(cohesion_vector(me, nb), c.x - me.position.x, c.y - me.position.y),
                      rel(alignment_vector(me, nb), f.x, f.y), rel(avoidance_vector(me, nb), a.x, a.y)});
  }
  return {worst <= 1e-9, "10000 neighbourhoods, max relative error " + fmt("%.3g", worst)};
}

// 4. Loss gradient against central differences, and the clip example.
Outcome gradient_check() {
  Rng rng(4);
  PPOConfig cfg;
  double worst = 0.0;
  for (int b = 0; b < 20; ++b) {
    const int obs_dim = 2 + static_cast<int>(rng.below(15));
    const PolicyParameters p = PolicyParameters::random(obs_dim, 8, 2, rng, rng.uniform(-0.5, 0.5));
    const TransitionBatch batch = fixtures::random_batch(p, 16, rng);
    worst = std::max(worst, fixtures::gradient_rel_error(batch, p, cfg));
  }
  const double clip = clipped_surrogate(1.5, 1.0, 0.2);
  return {worst <= 1e-4 && clip == 1.2,
          "20 batches, max relative error " + fmt("%.3g", worst) + ", clip example " + fmt("%.17g", clip)};
}

// 5. Backward advantage recursion against the forward sum.
Outcome gae_oracle() {
  Rng rng(5);
  double worst = 0.0;
  for (int ep = 0; ep < 1000; ++ep) {
    const std::size_t n = 1 + rng.below(64);
    std::vector<double> r(n), v(n + 1);
    std::vector<std::uint8_t> d(n);
    for (auto& x : r) x = rng.uniform(-1.0, 1.0);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    for (auto& x : d) x = rng.uniform() < 0.05;
    d.back() = rng.uniform() < 0.5;
    const double gamma = rng.uniform(0.8, 0.999), lambda = rng.uniform(0.0, 1.0);
    const auto want = oracle::gae_forward(r, v, d, gamma, lambda);
    const GaeResult got = compute_gae(r, v, d, gamma, lambda);
    for (std::size_t t = 0; t < n; ++t) worst = std::max(worst, std::abs(got.advantages[t] - want[t]));
  }
  const GaeResult ex = compute_gae(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.2, 0.0},
                                   std::vector<std::uint8_t>{0, 1}, 0.99, 0.95);
  const bool example = std::abs(ex.advantages[0] - 0.5099) <= 1e-4 && std::abs(ex.advantages[1] + 0.2) <= 1e-4;
  return {worst <= 1e-10 && example, "1000 episodes, max abs error " + fmt("%.3g", worst) + ", worked example [" +
                                         fmt("%.6f", ex.advantages[0]) + ", " + fmt("%.6f", ex.advantages[1]) + "]"};
}

// 6. Every emitted reward is one of the three table values.
Outcome reward_constants() {
  SimConfig cfg;
  WorldState s = init_world(cfg.world, 6);
  const Controller act = random_controller(6);
  std::set<double> seen;
  std::array<long, 3> counts{};
  long bad = 0;
  for (int t = 0; t < 100'000; ++t) {
    const auto actions = act(s);
    for (const RewardEvent& e : step_world(s, actions)) {
      seen.insert(e.value);
      ++counts[static_cast<std::size_t>(e.kind)];
      const bool ok = (e.kind == RewardKind::Foraging && e.value == 0.5) ||
                      (e.kind == RewardKind::Caught && e.value == -1.0) ||
                      (e.kind == RewardKind::WallCollision && e.value == -0.5);
      bad += !ok;
    }
  }
  const bool all_kinds = counts[0] > 0 && counts[1] > 0 && counts[2] > 0;
  return {bad == 0 && all_kinds, "100000 ticks: " + std::to_string(counts[0]) + " foraging, " +
                                     std::to_string(counts[1]) + " caught, " + std::to_string(counts[2]) +
                                     " wall events, " + std::to_string(bad) + " off-table values"};
}

// 7. Byte-identical trajectory logs and metrics CSVs across two runs.
Outcome determinism(const fs::path& work) {
  fs::create_directories(work);
  Rng rng(7);
  Checkpoint ck;
  ck.model = ModelKind::Lom;
  ck.params = PolicyParameters::random(static_cast<int>(observation_dim(ModelKind::Lom)), 32, 2, rng);
  save_checkpoint((work / "policy.json").string(), ck);

  bool same = true;
  std::string detail;
  for (const bool boids : {true, false}) {
    std::vector<std::string> csv, traj;
    for (int run = 0; run < 2; ++run) {
      EvalRequest req;
      if (!boids) req.checkpoint = work / "policy.json";
      req.steps = 10'000;
      req.seed = 77;
      const std::string stem = std::string(boids ? "boids" : "policy") + std::to_string(run);
      req.metrics_out = work / (stem + ".csv");
      req.trajectory_out = work / (stem + ".jsonl");
      run_eval_to_files(req);
      csv.push_back(slurp(req.metrics_out));
      traj.push_back(slurp(*req.trajectory_out));
    }
    const bool ok = csv[0] == csv[1] && traj[0] == traj[1] && !traj[0].empty();
    same = same && ok;
    detail += std::string(boids ? "boids " : "policy ") + (ok ? "identical" : "DIFFERENT") + " (" +
              std::to_string(traj[0].size()) + " trajectory bytes); ";
  }
  return {same, "10000 ticks, " + detail.substr(0, detail.size() - 2)};
}

// 8. Angular errors under rigid motions, plus exact trivial angles.
Outcome metrics_geometry() {
  Rng rng(8);
  MetricsConfig mc;
  double worst = 0.0;
  for (int scene = 0; scene < 1000; ++scene) {
    WorldState a;
    a.config.predator.enabled = true;
    for (int i = 0; i < 12; ++i)
      a.agents.push_back(agent(i, {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)},
                               unit_from_angle(rng.uniform(-3.2, 3.2))));
    a.food = {{{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)}, 0.5},
              {{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)}, 0.5}};
    a.predator.position = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
    const double theta = rng.uniform(-3.2, 3.2);
    const Vec2 shift{rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0)};
    WorldState b = a;
    for (auto& ag : b.agents) {
      ag.position = ag.position.rotated(theta) + shift;
      ag.heading = ag.heading.rotated(theta);
    }
    for (auto& f : b.food) f.position = f.position.rotated(theta) + shift;
    b.predator.position = b.predator.position.rotated(theta) + shift;
    const MetricsRecord ra = compute_metrics(a, mc), rb = compute_metrics(b, mc);
    for (Metric m : {Metric::Alignment, Metric::Cohesion, Metric::NeighborAvoidance, Metric::PredatorAvoidance,
                     Metric::Foraging, Metric::PredatorAvoidanceGlobal}) {
      if (ra[m].has_value() != rb[m].has_value()) return {false, "definedness changed under a rigid motion"};
      if (ra[m]) worst = std::max(worst, std::abs(*ra[m] - *rb[m]));
    }
  }
  const AgentState east = agent(0, {0.0, 0.0});
  const std::vector<AgentState> same{agent(1, {1.0, 1.0})};
  const std::vector<AgentState> north{agent(1, {1.0, 1.0}, {0.0, 1.0})};
  const bool trivial = alignment_error(east, same) == 0.0 && alignment_error(east, north) == 90.0 &&
                       predator_avoidance_error(east, {-3.0, 0.0}) == 0.0 &&
                       predator_avoidance_error(east, {0.0, -3.0}) == 90.0 &&
                       predator_avoidance_error(east, {3.0, 0.0}) == 180.0 &&
                       cohesion_error(east, std::vector<AgentState>{agent(1, {-2.0, 0.0})}) == 180.0;
  return {worst <= 1e-6 && trivial, "1000 scenes, max deviation " + fmt("%.3g", worst) + " deg, trivial cases " +
                                        (trivial ? "exact" : "NOT exact")};
}

// 9. Steady-state cohesion error of the scripted flock.
Outcome boids_cohesion() {
  SimConfig cfg;
  std::vector<double> values;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const EvalResult r = run_eval(cfg, boids_controller(cfg.boids), 10'000, seed);
    values.push_back(r.summary[Metric::Cohesion].value_or(180.0));
    detail += fmt("%.1f", values.back()) + " ";
  }
  const double m = median(values);
  return {m <= 5.0, "15 agents, 10000 ticks, cohesion error per seed " + detail + "deg, median " + fmt("%.1f", m) +
                        " deg (threshold 5)"};
}

// 10. Learning trends at desk scale.
Outcome learning_trend() {
  constexpr std::int64_t kSteps = 200'000;
  SimConfig food_only;
  food_only.world.predator.enabled = false;
  food_only.world.episode_length = 250;
  food_only.ppo.max_steps = kSteps;
  food_only.ppo.summary_freq = 3'750;

  std::vector<double> first, last;
  for (std::uint64_t seed : {1, 2, 3}) {
    const TrainResult r = train(food_only, ModelKind::Lom, seed);
    const auto& c = r.reward_curve;
    const std::size_t q = std::max<std::size_t>(1, c.size() / 4);
    double f = 0.0, l = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      f += c[i].mean_cumulative_reward / static_cast<double>(q);
      l += c[c.size() - 1 - i].mean_cumulative_reward / static_cast<double>(q);
    }
    first.push_back(f);
    last.push_back(l);
  }
  const bool a = median(last) > median(first);

  SimConfig hunt;
  hunt.ppo.max_steps = kSteps;
  double trained_group = 0.0, random_group = 0.0, trained_pred = 0.0, random_pred = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const TrainResult r = train(hunt, ModelKind::Lom, seed);
    const EvalResult t = run_eval(hunt, policy_controller(r.params, ModelKind::Lom, hunt.perception), 10'000, 100 + seed);
    const EvalResult u = run_eval(hunt, random_controller(seed), 10'000, 100 + seed);
    trained_group += t.summary[Metric::GroupingDistance].value_or(0.0) / 3.0;
    random_group += u.summary[Metric::GroupingDistance].value_or(0.0) / 3.0;
    trained_pred += t.summary[Metric::PredatorDistance].value_or(0.0) / 3.0;
    random_pred += u.summary[Metric::PredatorDistance].value_or(0.0) / 3.0;
  }
  const bool b = trained_group < random_group && trained_pred > random_pred;
  return {a && b, std::string("(a) ") + (a ? "pass" : "FAIL") + ": food-only median reward first quartile " +
                      fmt("%.3f", median(first)) + " -> final quartile " + fmt("%.3f", median(last)) + "; (b) " +
                      (b ? "pass" : "FAIL") + ": grouping distance trained " + fmt("%.2f", trained_group) +
                      " vs random " + fmt("%.2f", random_group) + ", predator distance trained " +
                      fmt("%.2f", trained_pred) + " vs random " + fmt("%.2f", random_pred)};
}

// 11. Snapshot count over a standard eval and the arithmetic-series stream.
Outcome aggregation_protocol() {
  SimConfig cfg;
  const EvalResult r = run_eval(cfg, boids_controller(cfg.boids), 10'000, 11);
  std::vector<MetricsRecord> run(10'000);
  for (std::size_t t = 1; t <= run.size(); ++t) run[t - 1].values[0] = static_cast<double>(t);
  const double mean = aggregate(run, AggregationConfig{}).values[0].value_or(-1.0);
  return {r.snapshots == 100 && mean == 5050.0,
          std::to_string(r.snapshots) + " snapshots over 10000 ticks, synthetic mean " + fmt("%.6f", mean)};
}

// 12. Window statistics against a direct count on a synthetic log.
Outcome predator_windows() {
  Rng rng(12);
  std::vector<PredatorTick> log;
  for (int t = 1; t <= 35'000; ++t)
    log.push_back({t, rng.uniform() < 0.003 ? 1 + static_cast<int>(rng.below(2)) : 0, static_cast<int>(rng.below(6))});
  const auto got = predator_stats(log, 10'000);
  bool ok = got.size() == 3;
  for (std::size_t w = 0; ok && w < 3; ++w) {
    long catches = 0, memory = 0;
    for (std::size_t i = w * 10'000; i < (w + 1) * 10'000; ++i) {
      catches += log[i].catches;
      memory += log[i].memory_size;
    }
    ok = got[w].catch_count == catches && got[w].mean_memory_size == static_cast<double>(memory) / 10'000.0 &&
         got[w].window_start == static_cast<std::int64_t>(w * 10'000 + 1);
  }
  std::vector<PredatorTick> constant(10'000, PredatorTick{0, 0, 3});
  for (int i = 0; i < 7; ++i) constant[static_cast<std::size_t>(1'000 * i + 17)].catches = 1;
  const auto c = predator_stats(constant, 10'000);
  ok = ok && c.size() == 1 && c[0].catch_count == 7 && c[0].mean_memory_size == 3.0;
  return {ok, "3 windows over a 35000-tick synthetic log and the 7-catch constant-memory log match direct counts"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> known_gaps;
  std::vector<int> only;
  std::string work = (fs::temp_directory_path() / "swarm_acceptance").string();
  app.add_option("--known-gap", known_gaps, "Criterion reported but not counted as a failure");
  app.add_option("--only", only, "Run just these criteria");
  app.add_option("--work-dir", work, "Scratch directory for file outputs");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> checks{
      {1, predator_equivalence},
      {2, flowchart_cases},
      {3, boid_equations},
      {4, gradient_check},
      {5, gae_oracle},
      {6, reward_constants},
      {7, [&] { return determinism(work); }},
      {8, metrics_geometry},
      {9, boids_cohesion},
      {10, learning_trend},
      {11, aggregation_protocol},
      {12, predator_windows},
  };

  int hard_failures = 0;
  for (const auto& [id, check] : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool gap = std::find(known_gaps.begin(), known_gaps.end(), id) != known_gaps.end();
    std::printf("%s criterion %d: %s%s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(),
                !o.pass && gap ? " [known gap]" : "");
    std::fflush(stdout);
    if (!o.pass && !gap) ++hard_failures;
  }
  return hard_failures == 0 ? 0 : 1;
}
