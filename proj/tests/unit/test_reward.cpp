// Copyright 2026 The TIGeR Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "tiger/random.hpp"
#include "tiger/reward.hpp"

using namespace tiger;

namespace {

Trajectory traj(std::string_view body) { return parse_trajectory(body); }

std::string probe(double x) {
  return "<tool_call>probe(x=" + format_number(x) + ")</tool_call><answer format=scalar>1</answer>";
}

const char* kGt =
    "<think>t</think>\n"
    "<tool_call>box_2d_to_box_3d(view=1, label=\"chair\")</tool_call>\n"
    "<tool_response></tool_response>\n"
    "<tool_call>code_executor(program=\"2 * at(half(r1), 2)\", uses=[\"r1\"])</tool_call>\n"
    "<tool_response>0.8</tool_response>\n"
    "<answer format=scalar>0.8m</answer>";

Trajectory filled_gt(const Scene& s) {
  ExecutionContext ctx(s);
  return run_trajectory(ctx, traj(kGt));
}

}  // namespace

TEST_SUITE("reward") {

TEST_CASE("parameter anchors: 1 at zero error, 1/2 at ln2/alpha") {
  const RewardConfig cfg;
  CHECK(score_param(traj(probe(0.3)), traj(probe(0.3)), cfg) == 1.0);
  const double d = std::log(2.0) / cfg.alpha;
  CHECK(score_param(traj(probe(0.3 + d)), traj(probe(0.3)), cfg) == doctest::Approx(0.5).epsilon(1e-12));
  RewardConfig other;
  other.alpha = 2.0;
  CHECK(score_param(traj(probe(std::log(2.0) / 2.0)), traj(probe(0.0)), other) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("answer anchors: 1 at zero error, 1/2 at ln2/gamma") {
  const RewardConfig cfg;
  const auto ans = [](std::string v, std::string f = "scalar") {
    return traj("<answer format=" + f + ">" + v + "</answer>");
  };
  CHECK(score_answer(ans("2m"), ans("2m"), cfg) == 1.0);
  CHECK(score_answer(ans(format_number(2 + std::log(2.0) / 5)), ans("2"), cfg) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(score_answer(ans("A", "choice"), ans("A", "choice"), cfg) == 1.0);
  CHECK(score_answer(ans("B", "choice"), ans("A", "choice"), cfg) == 0.0);
  CHECK(score_answer(ans("(0, 0, 0)", "point3"), ans("(0, 0, 0)", "point2"), cfg) == 0.0);
  // Point3 distance is Euclidean.
  CHECK(score_answer(ans("(0.3, 0.4, 0)", "point3"), ans("(0, 0, 0)", "point3"), cfg) ==
        doctest::Approx(std::exp(-5 * 0.5)));
}

TEST_CASE("discrete parameters need exact matches") {
  const auto a = traj("<tool_call>camera_extrinsics(view=1)</tool_call><answer format=scalar>1</answer>");
  const auto b = traj("<tool_call>camera_extrinsics(view=2)</tool_call><answer format=scalar>1</answer>");
  CHECK(score_param(a, b) == 0.0);
  CHECK(score_param(a, a) == 1.0);
  // Surplus calls dilute the score.
  const auto twice = traj("<tool_call>camera_extrinsics(view=1)</tool_call><tool_call>camera_extrinsics(view=1)</tool_call>"
                          "<answer format=scalar>1</answer>");
  CHECK(score_param(twice, a) == 0.5);
  CHECK(score_param(a, twice) == 0.5);
}

TEST_CASE("tool validity") {
  const auto good = traj("<tool_call>camera_extrinsics(view=1)</tool_call><tool_call>camera_extrinsics(view=\"x\")</tool_call>"
                         "<answer format=scalar>1</answer>");
  CHECK(score_tool(good, good) == 0.5);
  RewardConfig strict;
  strict.tool_aggregation = ToolAggregation::StrictProduct;
  CHECK(score_tool(good, good, strict) == 0.0);
  const auto none = traj("<answer format=scalar>1</answer>");
  CHECK(score_tool(none, none) == 1.0);
  CHECK(score_tool(none, good) == 0.0);
}

TEST_CASE("code reward") {
  const Scene s = fixtures::two_box_scene();
  const Trajectory gt = filled_gt(s);
  CHECK(score_code(gt, s, BoxMode::Oracle, gt) == 1.0);
  // Runs but disagrees: lambda_exec only.
  Trajectory wrong = gt;
  std::get<ToolCall>(wrong.steps[3]).args[0].value = Text{"3 * at(half(r1), 2)"};
  CHECK(score_code(wrong, s, BoxMode::Oracle, gt) == doctest::Approx(0.3));
  // Does not run.
  Trajectory broken = gt;
  std::get<ToolCall>(broken.steps[3]).args[0].value = Text{"1 / 0"};
  CHECK(score_code(broken, s, BoxMode::Oracle, gt) == 0.0);
  std::vector<CallDiagnostic> diag;
  score_code(broken, s, BoxMode::Oracle, gt, {}, &diag);
  REQUIRE(diag.size() == 2);
  CHECK(*diag[1].code_executes == false);
}

TEST_CASE("self-scoring is exactly one") {
  const Scene s = fixtures::two_box_scene();
  const Trajectory gt = filled_gt(s);
  const RewardBreakdown b = score_trajectory(gt, gt, s, BoxMode::Oracle);
  CHECK(b.composite == 1.0);
  for (double p : b.parts()) CHECK(p == 1.0);
}

TEST_CASE("composite against a plain weighted sum") {
  Rng rng(8);
  const RewardConfig cfg;
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 5> parts;
    for (double& p : parts) p = rng.uniform();
    const auto w = cfg.weights.array();
    const double plain = std::inner_product(w.begin(), w.end(), parts.begin(), 0.0);
    CHECK(composite_reward(parts, cfg) == doctest::Approx(plain).epsilon(1e-14));
  }
  CHECK(composite_reward({1, 1, 1, 1, 1}, cfg) == 1.0);
  CHECK(composite_reward({0, 0, 0, 0, 0}, cfg) == 0.0);
}

TEST_CASE("reward config") {
  const RewardConfig def = reward_config_from_json("{}");
  CHECK(def.alpha == 5.0);
  const RewardConfig c = reward_config_from_json(
      R"({"alpha": 2, "weights": {"format": 0.2, "tool": 0.2, "param": 0.2, "code": 0.2, "answer": 0.2},
          "tool_aggregation": "strict_product"})");
  CHECK(c.alpha == 2.0);
  CHECK(c.tool_aggregation == ToolAggregation::StrictProduct);
  CHECK(reward_config_from_json(reward_config_to_json(c)).weights.array() == c.weights.array());
  CHECK_TIGER_ERROR(reward_config_from_json(R"({"alpha": -1})"), ErrorCode::ConfigError);
  CHECK_TIGER_ERROR(reward_config_from_json(R"({"weights": {"format": 0.5}})"), ErrorCode::ConfigError);
  CHECK_TIGER_ERROR(reward_config_from_json(R"({"bogus": 1})"), ErrorCode::ConfigError);
  CHECK_TIGER_ERROR(reward_config_from_json(R"({"lambda_exec": 0.5})"), ErrorCode::ConfigError);
}

TEST_CASE("GRPO advantages") {
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> r(2 + rng.below(30));
    for (double& x : r) x = rng.uniform(-3, 3) * std::pow(10.0, rng.uniform(-3, 3));
    const auto a = grpo_advantages(r);
    double mean = 0, var = 0;
    for (double x : a) mean += x;
    mean /= double(a.size());
    for (double x : a) var += (x - mean) * (x - mean);
    var /= double(a.size());
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
  }
  const std::vector<double> flat = {0.7, 0.7, 0.7};
  for (double x : grpo_advantages(flat)) CHECK(x == 0.0);
  CHECK_TIGER_ERROR(grpo_advantages(std::vector<double>{}), ErrorCode::InvalidArgument);
  CHECK_TIGER_ERROR(grpo_advantages(std::vector<double>{1, NAN}), ErrorCode::InvalidArgument);
}

TEST_CASE("GRPO objective") {
  GrpoBatch b;
  b.ratios = {2.0};
  b.kl = {0.0};
  CHECK(grpo_objective(b, std::vector<double>{1.0}) == doctest::Approx(-1.2));
  CHECK(grpo_objective(b, std::vector<double>{-1.0}) == doctest::Approx(2.0));
  b.ratios = {1, 1, 1};
  b.kl = {0, 0, 0};
  CHECK(grpo_objective(b, std::vector<double>{0.5, -1, 0.5}) == doctest::Approx(0.0).epsilon(1e-15));
  b.beta = 0.5;
  b.kl = {0.2, 0.2, 0.2};
  CHECK(grpo_objective(b, std::vector<double>{0, 0, 0}) == doctest::Approx(0.1));
  CHECK_TIGER_ERROR(grpo_objective(b, std::vector<double>{0}), ErrorCode::InvalidArgument);
}

TEST_CASE("SFT loss") {
  CHECK(sft_loss(std::vector<double>{-0.5, -1.5}) == 2.0);
  CHECK(sft_loss(std::vector<double>{}) == 0.0);
  CHECK_TIGER_ERROR(sft_loss(std::vector<double>{0.1}), ErrorCode::InvalidArgument);
}

TEST_CASE("delta2 and interval metrics") {
  CHECK(evaluate_delta2(0.5, 1.0));
  CHECK(evaluate_delta2(2.0, 1.0));
  CHECK_FALSE(evaluate_delta2(0.49, 1.0));
  CHECK_FALSE(evaluate_delta2(2.01, 1.0));
  CHECK_FALSE(evaluate_delta2(-1.0, 1.0));
  CHECK_TIGER_ERROR(evaluate_delta2(1.0, 0.0), ErrorCode::NonPositiveGroundTruth);
  CHECK(check_interval(0.05, 0.05, 0.15));
  CHECK(check_interval(0.15, 0.05, 0.15));
  CHECK_FALSE(check_interval(0.151, 0.05, 0.15));
  CHECK_TIGER_ERROR(check_interval(0.1, 0.2, 0.1), ErrorCode::InvalidArgument);
}

TEST_CASE("breakdown json") {
  const Scene s = fixtures::two_box_scene();
  const Trajectory gt = filled_gt(s);
  const std::string j = breakdown_to_json("x", score_trajectory(gt, gt, s, BoxMode::Oracle));
  CHECK(j.find("\"composite\":1.0") != std::string::npos);
  CHECK(j.find("\"id\":\"x\"") != std::string::npos);
}

}  // TEST_SUITE
