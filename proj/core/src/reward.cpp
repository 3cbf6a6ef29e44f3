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

#include "tiger/reward.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_io.hpp"
#include "tiger/error.hpp"

namespace tiger {

namespace {

// Neumaier-compensated summation.
class Sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, msg);
}

// Calls of `t` grouped by tool name, each entry the index in t.calls().
std::map<std::string, std::vector<std::size_t>> by_name(
    const std::vector<const ToolCall*>& calls) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < calls.size(); ++i) out[calls[i]->name].push_back(i);
  return out;
}

// Reference index aligned with each candidate call: the k-th call of a tool
// pairs with the k-th reference call of the same tool.
std::vector<std::optional<std::size_t>> align(
    const std::vector<const ToolCall*>& cand, const std::vector<const ToolCall*>& ref) {
  std::vector<std::optional<std::size_t>> out(cand.size());
  const auto cand_groups = by_name(cand);
  const auto ref_groups = by_name(ref);
  for (const auto& [name, idx] : cand_groups) {
    const auto it = ref_groups.find(name);
    if (it == ref_groups.end()) continue;
    for (std::size_t k = 0; k < idx.size() && k < it->second.size(); ++k) {
      out[idx[k]] = it->second[k];
    }
  }
  return out;
}

bool is_discrete(const std::string& tool, const std::string& arg, const Value& v) {
  if (const ToolSchema* s = find_schema(tool)) {
    for (const auto& spec : s->args) {
      if (spec.name == arg) return spec.discrete;
    }
  }
  // Unknown tool or argument: numbers are continuous, anything else discrete.
  std::vector<double> xs;
  return !flatten_numeric(v, xs);
}

// Result value that follows the call at step index `call_step`, if any.
const Value* result_after(const Trajectory& t, const ToolCall* call) {
  for (std::size_t i = 0; i + 1 < t.steps.size(); ++i) {
    if (std::get_if<ToolCall>(&t.steps[i]) == call) {
      if (const auto* r = std::get_if<ToolResult>(&t.steps[i + 1])) return &r->value;
      return nullptr;
    }
  }
  return nullptr;
}

bool outputs_agree(const Value& a, const Value& b, double tol) {
  std::vector<double> xa, xb;
  const bool na = flatten_numeric(a, xa), nb = flatten_numeric(b, xb);
  if (!na || !nb) return a == b;
  if (a.kind() != b.kind() || xa.size() != xb.size()) return false;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    if (!(std::abs(xa[i] - xb[i]) <= tol * std::max(std::abs(xb[i]), 1.0))) return false;
  }
  return true;
}

void ensure_diagnostics(std::vector<CallDiagnostic>* diag,
                        const std::vector<const ToolCall*>& cand) {
  if (!diag || diag->size() == cand.size()) return;
  diag->assign(cand.size(), CallDiagnostic{});
  for (std::size_t i = 0; i < cand.size(); ++i) {
    (*diag)[i].call = i;
    (*diag)[i].tool = cand[i]->name;
    (*diag)[i].tool_valid = schema_valid(*cand[i]);
  }
}

}  // namespace

void RewardConfig::validate() const {
  const auto w = weights.array();
  Sum total;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) config_error("weights must be finite and non-negative");
    total.add(x);
  }
  if (std::abs(total.value() - 1.0) > 1e-9) config_error("weights must sum to 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) config_error("alpha must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) config_error("gamma must be positive");
  if (!(lambda_exec >= 0.0) || !(lambda_out >= 0.0) ||
      std::abs(lambda_exec + lambda_out - 1.0) > 1e-9) {
    config_error("lambda_exec and lambda_out must be non-negative and sum to 1");
  }
  if (!(code_tolerance >= 0.0) || !std::isfinite(code_tolerance)) {
    config_error("code_tolerance must be non-negative");
  }
}

RewardConfig reward_config_from_json(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("reward config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("reward config must be a JSON object");
  RewardConfig cfg;
  auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) config_error("'" + key + "' must be a number");
    return v.get<double>();
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "weights") {
      if (!v.is_object()) config_error("'weights' must be an object");
      for (const auto& [wk, wv] : v.items()) {
        const double x = number(wv, "weights." + wk);
        if (wk == "format") cfg.weights.format = x;
        else if (wk == "tool") cfg.weights.tool = x;
        else if (wk == "param") cfg.weights.param = x;
        else if (wk == "code") cfg.weights.code = x;
        else if (wk == "answer") cfg.weights.answer = x;
        else config_error("unknown weight '" + wk + "'");
      }
    } else if (key == "alpha") {
      cfg.alpha = number(v, key);
    } else if (key == "gamma") {
      cfg.gamma = number(v, key);
    } else if (key == "lambda_exec") {
      cfg.lambda_exec = number(v, key);
    } else if (key == "lambda_out") {
      cfg.lambda_out = number(v, key);
    } else if (key == "code_tolerance") {
      cfg.code_tolerance = number(v, key);
    } else if (key == "tool_aggregation") {
      if (v == "per_call") cfg.tool_aggregation = ToolAggregation::PerCall;
      else if (v == "strict_product") cfg.tool_aggregation = ToolAggregation::StrictProduct;
      else config_error("tool_aggregation must be \"per_call\" or \"strict_product\"");
    } else {
      config_error("unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string reward_config_to_json(const RewardConfig& cfg) {
  detail::json doc;
  doc["weights"] = {{"format", cfg.weights.format}, {"tool", cfg.weights.tool},
                    {"param", cfg.weights.param},   {"code", cfg.weights.code},
                    {"answer", cfg.weights.answer}};
  doc["alpha"] = cfg.alpha;
  doc["gamma"] = cfg.gamma;
  doc["lambda_exec"] = cfg.lambda_exec;
  doc["lambda_out"] = cfg.lambda_out;
  doc["code_tolerance"] = cfg.code_tolerance;
  doc["tool_aggregation"] =
      cfg.tool_aggregation == ToolAggregation::PerCall ? "per_call" : "strict_product";
  return doc.dump(2);
}

RewardConfig load_reward_config(const std::string& path) {
  return reward_config_from_json(detail::read_file(path));
}

std::optional<double> value_distance(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return std::nullopt;
  std::vector<double> xa, xb;
  if (!flatten_numeric(a, xa) || !flatten_numeric(b, xb) || xa.size() != xb.size()) {
    return std::nullopt;
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double d = xa[i] - xb[i];
    sq += d * d;
  }
  const double dist = std::sqrt(sq);
  if (!std::isfinite(dist)) return std::nullopt;
  return dist;
}

double score_format(const Trajectory& t) { return validate_format(t) ? 1.0 : 0.0; }

double score_tool(const Trajectory& t, const Trajectory& gt, const RewardConfig& cfg) {
  const auto calls = t.calls();
  if (calls.empty()) return gt.calls().empty() ? 1.0 : 0.0;
  std::size_t ok = 0;
  for (const auto* c : calls) ok += schema_valid(*c) ? 1 : 0;
  if (cfg.tool_aggregation == ToolAggregation::StrictProduct) {
    return ok == calls.size() ? 1.0 : 0.0;
  }
  return double(ok) / double(calls.size());
}

double score_param(const Trajectory& t, const Trajectory& gt, const RewardConfig& cfg,
                   std::vector<CallDiagnostic>* diagnostics) {
  const auto cand = t.calls();
  const auto ref = gt.calls();
  ensure_diagnostics(diagnostics, cand);
  if (cand.empty() && ref.empty()) return 1.0;

  const auto aligned = align(cand, ref);
  std::vector<bool> ref_used(ref.size(), false);
  Sum total;
  std::size_t denom = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (!aligned[i]) {
      denom += cand[i]->args.size();  // surplus candidate call
      continue;
    }
    const ToolCall& r = *ref[*aligned[i]];
    ref_used[*aligned[i]] = true;
    Sum call_total;
    double sq = 0.0;
    for (const auto& a : r.args) {
      const Value* p = cand[i]->arg(a.name);
      double s = 0.0;
      if (p) {
        if (is_discrete(r.name, a.name, a.value)) {
          s = *p == a.value ? 1.0 : 0.0;
        } else if (const auto d = value_distance(*p, a.value)) {
          s = std::exp(-cfg.alpha * *d);
          sq += *d * *d;
        }
      }
      call_total.add(s);
      total.add(s);
    }
    // Candidate arguments the reference call does not have.
    std::size_t extra = 0;
    for (const auto& a : cand[i]->args) {
      if (!r.arg(a.name)) ++extra;
    }
    denom += r.args.size() + extra;
    if (diagnostics) {
      auto& d = (*diagnostics)[i];
      d.matched = *aligned[i];
      const std::size_t n = r.args.size() + extra;
      d.param_score = n ? call_total.value() / double(n) : 1.0;
      d.param_distance = std::sqrt(sq);
    }
  }
  for (std::size_t j = 0; j < ref.size(); ++j) {
    if (!ref_used[j]) denom += ref[j]->args.size();  // missed reference call
  }
  if (denom == 0) {
    // Only argument-free calls on both sides: credit the aligned fraction.
    std::size_t matched = 0;
    for (const auto& a : aligned) matched += a ? 1 : 0;
    return double(matched) / double(std::max(cand.size(), ref.size()));
  }
  return std::clamp(total.value() / double(denom), 0.0, 1.0);
}

double score_code(const Trajectory& t, const Scene& scene, BoxMode mode,
                  const Trajectory& gt, const RewardConfig& cfg,
                  std::vector<CallDiagnostic>* diagnostics) {
  const auto cand = t.calls();
  const auto ref = gt.calls();
  ensure_diagnostics(diagnostics, cand);

  std::vector<const ToolCall*> ref_code;
  for (const auto* c : ref) {
    if (c->name == "code_executor") ref_code.push_back(c);
  }

  ExecutionContext ctx(scene, mode);
  Sum total;
  std::size_t cand_code = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const ToolCall& c = *cand[i];
    std::optional<Value> out;
    try {
      out = execute_tool(ctx, c);
    } catch (const Error&) {
      ++ctx.calls;  // keep r<k> labels aligned with call positions
    }
    if (c.name != "code_executor") continue;
    const std::size_t k = cand_code++;
    bool correct = false;
    if (out && k < ref_code.size()) {
      const Value* expected = result_after(gt, ref_code[k]);
      correct = expected && outputs_agree(*out, *expected, cfg.code_tolerance);
    }
    const double s = (out ? cfg.lambda_exec : 0.0) + (correct ? cfg.lambda_out : 0.0);
    total.add(s);
    if (diagnostics) {
      (*diagnostics)[i].code_executes = out.has_value();
      (*diagnostics)[i].code_correct = correct;
    }
  }
  const std::size_t denom = std::max(cand_code, ref_code.size());
  if (denom == 0) return 1.0;
  return std::clamp(total.value() / double(denom), 0.0, 1.0);
}

double score_answer(const Trajectory& t, const Trajectory& gt, const RewardConfig& cfg) {
  const Answer* a = t.answer();
  const Answer* b = gt.answer();
  if (!a || !b || a->format != b->format) return 0.0;
  if (a->format == AnswerFormat::Choice) return a->value == b->value ? 1.0 : 0.0;
  const auto d = value_distance(a->value, b->value);
  if (!d) return 0.0;
  return std::exp(-cfg.gamma * *d);
}

double composite_reward(const std::array<double, 5>& parts, const RewardConfig& cfg) {
  const auto w = cfg.weights.array();
  Sum s;
  for (std::size_t k = 0; k < parts.size(); ++k) s.add(w[k] * parts[k]);
  return std::clamp(s.value(), 0.0, 1.0);
}

RewardBreakdown score_trajectory(const Trajectory& t, const Trajectory& gt,
                                 const Scene& scene, BoxMode mode,
                                 const RewardConfig& cfg) {
  RewardBreakdown b;
  b.r_format = score_format(t);
  b.r_tool = score_tool(t, gt, cfg);
  b.r_param = score_param(t, gt, cfg, &b.calls);
  b.r_code = score_code(t, scene, mode, gt, cfg, &b.calls);
  b.r_answer = score_answer(t, gt, cfg);
  b.composite = composite_reward(b.parts(), cfg);
  return b;
}

std::string breakdown_to_json(std::string_view id, const RewardBreakdown& b) {
  detail::json doc;
  doc["id"] = std::string(id);
  doc["r_format"] = b.r_format;
  doc["r_tool"] = b.r_tool;
  doc["r_param"] = b.r_param;
  doc["r_code"] = b.r_code;
  doc["r_answer"] = b.r_answer;
  doc["composite"] = b.composite;
  detail::json calls = detail::json::array();
  for (const auto& c : b.calls) {
    detail::json row;
    row["call"] = c.call;
    row["tool"] = c.tool;
    row["tool_valid"] = c.tool_valid;
    row["matched"] = c.matched ? detail::json(*c.matched) : detail::json(nullptr);
    row["param_score"] = c.param_score;
    row["param_distance"] = c.param_distance;
    if (c.code_executes) row["code_executes"] = *c.code_executes;
    if (c.code_correct) row["code_correct"] = *c.code_correct;
    calls.push_back(std::move(row));
  }
  doc["calls"] = std::move(calls);
  return doc.dump();
}

std::vector<double> grpo_advantages(std::span<const double> rewards) {
  if (rewards.empty()) throw Error(ErrorCode::InvalidArgument, "empty reward batch");
  double scale = 0.0;
  for (double r : rewards) {
    if (!std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "non-finite reward");
    scale = std::max(scale, std::abs(r));
  }
  const double n = double(rewards.size());
  Sum s;
  for (double r : rewards) s.add(r);
  double mean = s.value() / n;
  // Second pass corrects the rounding left in the first mean.
  Sum c;
  for (double r : rewards) c.add(r - mean);
  mean += c.value() / n;

  Sum var;
  for (double r : rewards) var.add((r - mean) * (r - mean));
  const double sigma = std::sqrt(var.value() / n);
  std::vector<double> out(rewards.size(), 0.0);
  if (!(sigma > 1e-12 * scale)) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / sigma;
  return out;
}

double grpo_objective(const GrpoBatch& batch, std::span<const double> advantages) {
  const std::size_t n = advantages.size();
  if (n == 0 || batch.ratios.size() != n || batch.kl.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                "ratios, KL terms and advantages must have the same non-zero length");
  }
  if (!(batch.epsilon > 0.0 && batch.epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (!(batch.beta >= 0.0) || !std::isfinite(batch.beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be non-negative");
  }
  Sum surrogate, kl;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = batch.ratios[i];
    const double a = advantages[i];
    if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(a) ||
        !std::isfinite(batch.kl[i])) {
      throw Error(ErrorCode::InvalidArgument, "ratios must be positive and finite");
    }
    const double clipped = std::clamp(rho, 1.0 - batch.epsilon, 1.0 + batch.epsilon);
    surrogate.add(std::min(rho * a, clipped * a));
    kl.add(batch.kl[i]);
  }
  const double nn = double(n);
  return -surrogate.value() / nn + batch.beta * (kl.value() / nn);
}

double sft_loss(std::span<const double> token_logprobs) {
  Sum s;
  for (double lp : token_logprobs) {
    if (!(lp <= 0.0) || !std::isfinite(lp)) {
      throw Error(ErrorCode::InvalidArgument, "log-probabilities must be finite and <= 0");
    }
    s.add(lp);
  }
  return -s.value();
}

bool evaluate_delta2(double pred, double gt) {
  if (!(gt > 0.0) || !std::isfinite(gt)) {
    throw Error(ErrorCode::NonPositiveGroundTruth, "ground truth must be positive");
  }
  return 0.5 * gt <= pred && pred <= 2.0 * gt;
}

bool check_interval(double actual, double lo, double hi) {
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "interval needs lo <= hi");
  return lo <= actual && actual <= hi;
}

}  // namespace tiger
