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

#pragma once

// Hierarchical trajectory rewards, GRPO advantage and objective math, the
// SFT loss value and interval metrics.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiger/scene.hpp"
#include "tiger/tools.hpp"
#include "tiger/trajectory.hpp"

namespace tiger {

struct RewardWeights {
  double format = 0.1;
  double tool = 0.2;
  double param = 0.2;
  double code = 0.2;
  double answer = 0.3;

  std::array<double, 5> array() const { return {format, tool, param, code, answer}; }
};

enum class ToolAggregation { PerCall, StrictProduct };

struct RewardConfig {
  RewardWeights weights;
  double alpha = 5.0;  // continuous parameter scale
  double gamma = 5.0;  // continuous answer scale
  double lambda_exec = 0.3;
  double lambda_out = 0.7;
  /// |a - b| <= code_tolerance * max(|b|, 1) counts as a correct code output.
  double code_tolerance = 1e-6;
  ToolAggregation tool_aggregation = ToolAggregation::PerCall;

  /// Throws ConfigError: weights non-negative summing to 1 (within 1e-9),
  /// alpha, gamma > 0, lambdas non-negative summing to 1, tolerance >= 0.
  void validate() const;
};

/// Keys: weights{format,tool,param,code,answer}, alpha, gamma, lambda_exec,
/// lambda_out, code_tolerance, tool_aggregation ("per_call"|"strict_product").
/// Missing keys keep their defaults; unknown keys are a ConfigError.
RewardConfig reward_config_from_json(std::string_view text);
std::string reward_config_to_json(const RewardConfig& cfg);
RewardConfig load_reward_config(const std::string& path);

struct CallDiagnostic {
  std::size_t call = 0;  // index among the candidate's calls
  std::string tool;
  bool tool_valid = false;
  /// Index among the reference calls of the aligned call, if any.
  std::optional<std::size_t> matched;
  /// Mean parameter score against the aligned call (0 when unmatched).
  double param_score = 0.0;
  /// L2 distance over the continuous parameters of the aligned call.
  double param_distance = 0.0;
  std::optional<bool> code_executes;
  std::optional<bool> code_correct;
};

struct RewardBreakdown {
  double r_format = 0.0;
  double r_tool = 0.0;
  double r_param = 0.0;
  double r_code = 0.0;
  double r_answer = 0.0;
  double composite = 0.0;
  std::vector<CallDiagnostic> calls;

  std::array<double, 5> parts() const {
    return {r_format, r_tool, r_param, r_code, r_answer};
  }
};

double score_format(const Trajectory& t);
double score_tool(const Trajectory& t, const Trajectory& gt,
                  const RewardConfig& cfg = {});
double score_param(const Trajectory& t, const Trajectory& gt,
                   const RewardConfig& cfg = {},
                   std::vector<CallDiagnostic>* diagnostics = nullptr);
/// Replays the candidate's calls against `scene` to decide whether each
/// code_executor call runs, and compares its output with the aligned
/// reference result.
double score_code(const Trajectory& t, const Scene& scene, BoxMode mode,
                  const Trajectory& gt, const RewardConfig& cfg = {},
                  std::vector<CallDiagnostic>* diagnostics = nullptr);
double score_answer(const Trajectory& t, const Trajectory& gt,
                    const RewardConfig& cfg = {});

/// Compensated weighted sum, clamped to [0, 1].
double composite_reward(const std::array<double, 5>& parts,
                        const RewardConfig& cfg = {});

RewardBreakdown score_trajectory(const Trajectory& t, const Trajectory& gt,
                                 const Scene& scene, BoxMode mode,
                                 const RewardConfig& cfg = {});

/// One JSON object (no trailing newline) with the breakdown fields.
std::string breakdown_to_json(std::string_view id, const RewardBreakdown& b);

/// Continuous parameter / answer distance: L2 over the flattened numeric
/// payloads, nullopt when the payloads are not comparable.
std::optional<double> value_distance(const Value& a, const Value& b);

/// (r_i - mean) / sigma with the population sigma; all zeros when sigma is
/// below 1e-12 times the largest |r_i|. Throws InvalidArgument for an empty
/// or non-finite batch.
std::vector<double> grpo_advantages(std::span<const double> rewards);

struct GrpoBatch {
  std::vector<double> ratios;
  std::vector<double> kl;
  double epsilon = 0.2;
  double beta = 0.0;
};

/// -(1/N) sum min(rho A, clip(rho, 1-eps, 1+eps) A) + beta mean(KL).
double grpo_objective(const GrpoBatch& batch, std::span<const double> advantages);

/// Negated sum of token log-probabilities; throws InvalidArgument for a
/// positive or non-finite entry.
double sft_loss(std::span<const double> token_logprobs);

/// 0.5 gt <= pred <= 2 gt. Throws NonPositiveGroundTruth.
bool evaluate_delta2(double pred, double gt);

/// lo <= actual <= hi. Throws InvalidArgument when lo > hi.
bool check_interval(double actual, double lo, double hi);

}  // namespace tiger
