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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "tiger/error.hpp"
#include "tiger/generator.hpp"
#include "tiger/minidsl.hpp"
#include "tiger/reward.hpp"
#include "tiger/scene.hpp"
#include "tiger/tools.hpp"
#include "tiger/trajectory.hpp"

namespace tiger::cli {

namespace {

using nlohmann::json;

// Failure with a ready exit code; thrown by command bodies.
struct Fail {
  int code;
  std::string message;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::SyntaxError:
    case ErrorCode::OrderingError: return kConfigError;
    case ErrorCode::GenerationFailure:
    case ErrorCode::PlacementFailure:
    case ErrorCode::InsufficientScene: return kGenerationFailure;
    default: return kToolError;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Fail{kConfigError, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Fail{kConfigError, "cannot write '" + path + "'"};
}

// Non-empty lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> lines_of(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.emplace_back(n, line);
  }
  return out;
}

std::string where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

BoxMode parse_mode(const std::string& mode) {
  return mode == "fitted" ? BoxMode::Fitted : BoxMode::Oracle;
}

// ---------------------------------------------------------------------------

struct GenerateOpts {
  std::string config;
  std::string out;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count;
};

int cmd_generate(const GenerateOpts& o, std::ostream& out, std::ostream& err) {
  DatasetConfig cfg = dataset_config_from_json(slurp(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.count) cfg.count = *o.count;
  cfg.validate();
  const Dataset ds = generate_dataset(cfg, o.jobs);
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw Fail{kConfigError, "cannot create '" + o.out + "': " + ec.message()};
  const auto dir = std::filesystem::path(o.out);
  dump((dir / "dataset.jsonl").string(), ds.jsonl);
  dump((dir / "manifest.json").string(), ds.manifest);
  out << "wrote " << ds.samples.size() << " samples to " << (dir / "dataset.jsonl").string()
      << "\n";
  for (const auto& [family, n] : ds.family_counts) out << "  " << family << ": " << n << "\n";
  out << "digest " << ds.digest << "\n";
  (void)err;
  return kOk;
}

// ---------------------------------------------------------------------------

struct ScoreOpts {
  std::string dataset;
  std::string candidates;
  std::string reward_config;
  std::string mode = "oracle";
  std::string out;
};

std::map<std::string, Sample> load_dataset(const std::string& path) {
  std::map<std::string, Sample> samples;
  for (const auto& [n, line] : lines_of(slurp(path))) {
    try {
      Sample s = sample_from_json(line);
      const std::string id = s.id;
      if (!samples.emplace(id, std::move(s)).second) {
        throw Fail{kConfigError, where(path, n) + ": duplicate id '" + id + "'"};
      }
    } catch (const Error& e) {
      throw Fail{kConfigError, where(path, n) + ": " + e.what()};
    }
  }
  return samples;
}

int cmd_score(const ScoreOpts& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const RewardConfig cfg =
      o.reward_config.empty() ? RewardConfig{} : load_reward_config(o.reward_config);
  const BoxMode mode = parse_mode(o.mode);
  const auto samples = load_dataset(o.dataset);

  struct Row {
    std::string id;
    Trajectory t;
  };
  std::vector<Row> rows;
  std::vector<std::string> unmatched;
  for (const auto& [n, line] : lines_of(slurp(o.candidates))) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Fail{kConfigError, where(o.candidates, n) + ": invalid JSON"};
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("trajectory") || !j["trajectory"].is_string()) {
      throw Fail{kConfigError,
                 where(o.candidates, n) + ": expected {\"id\": ..., \"trajectory\": ...}"};
    }
    Row row{j["id"].get<std::string>(), {}};
    try {
      row.t = parse_trajectory(j["trajectory"].get<std::string>());
    } catch (const Error& e) {
      throw Fail{kConfigError, where(o.candidates, n) + ": " + e.what()};
    }
    if (!samples.count(row.id)) unmatched.push_back(row.id);
    rows.push_back(std::move(row));
  }
  if (!unmatched.empty()) {
    std::string list;
    for (const auto& id : unmatched) list += "\n  " + id;
    throw Fail{kConfigError, "candidate ids not in the dataset:" + list};
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw Fail{kConfigError, "cannot write '" + o.out + "'"};
    sink = &file;
  }
  std::array<double, 6> sums{};
  std::vector<std::string> failures;
  for (const auto& row : rows) {
    const Sample& gt = samples.at(row.id);
    const RewardBreakdown b = score_trajectory(row.t, gt.trajectory, gt.scene, mode, cfg);
    *sink << breakdown_to_json(row.id, b) << "\n";
    const auto parts = b.parts();
    for (std::size_t i = 0; i < 5; ++i) sums[i] += parts[i];
    sums[5] += b.composite;
    ExecutionContext ctx(gt.scene, mode);
    try {
      run_trajectory(ctx, row.t);
    } catch (const Error& e) {
      failures.push_back(row.id + " step " +
                         (e.step() ? std::to_string(*e.step()) : std::string("?")) + ": " +
                         e.what());
    }
  }
  const double n = rows.empty() ? 1.0 : double(rows.size());
  const auto seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "scored " << rows.size() << " trajectories in " << seconds << " s\n";
  static const char* kNames[] = {"r_format", "r_tool", "r_param", "r_code", "r_answer",
                                 "composite"};
  for (std::size_t i = 0; i < 6; ++i) {
    err << "  mean " << kNames[i] << " = " << format_number(sums[i] / n) << "\n";
  }
  err << "  replay failures: " << failures.size() << "\n";
  for (const auto& f : failures) err << "    " << f << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct RunOpts {
  std::string scene;
  std::string trajectory;
  std::string mode = "oracle";
  std::string out;
};

int cmd_run(const RunOpts& o, std::ostream& out, std::ostream&) {
  const Scene scene = load_scene(o.scene);
  const Trajectory t = parse_trajectory(slurp(o.trajectory));
  ExecutionContext ctx(scene, parse_mode(o.mode));
  Trajectory filled;
  try {
    filled = run_trajectory(ctx, t);
  } catch (const Error& e) {
    throw Fail{kToolError, "step " + (e.step() ? std::to_string(*e.step()) : std::string("?")) +
                               ": " + e.what()};
  }
  const std::string text = render_trajectory(filled);
  if (o.out.empty()) {
    out << text << "\n";
  } else {
    dump(o.out, text);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct EvalOpts {
  std::string predictions;
  std::string references;
  std::string metric = "delta2";
  double tolerance = 0.05;
};

// Answer field as a Value: a number or a value literal string.
Value answer_of(const json& j, const std::string& loc) {
  if (!j.contains("answer")) throw Fail{kConfigError, loc + ": record has no answer"};
  const json& a = j["answer"];
  if (a.is_number()) return Scalar{a.get<double>(), {}};
  if (a.is_string()) {
    try {
      return parse_value(a.get<std::string>());
    } catch (const Error& e) {
      throw Fail{kConfigError, loc + ": " + e.what()};
    }
  }
  throw Fail{kConfigError, loc + ": answer must be a number or a value literal"};
}

std::optional<double> scalar_of(const Value& v) {
  if (const auto* s = v.get_if<Scalar>()) return s->value;
  return std::nullopt;
}

int cmd_eval(const EvalOpts& o, std::ostream& out, std::ostream& err) {
  auto load = [](const std::string& path) {
    std::vector<std::pair<std::string, json>> records;
    std::set<std::string> seen;
    for (const auto& [n, line] : lines_of(slurp(path))) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        throw Fail{kConfigError, where(path, n) + ": invalid JSON"};
      }
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
        throw Fail{kConfigError, where(path, n) + ": record needs a string id"};
      }
      const std::string id = j["id"].get<std::string>();
      if (!seen.insert(id).second) {
        throw Fail{kConfigError, where(path, n) + ": duplicate id '" + id + "'"};
      }
      j["_loc"] = where(path, n);
      records.emplace_back(id, std::move(j));
    }
    return records;
  };
  const auto preds = load(o.predictions);
  const auto refs = load(o.references);
  std::map<std::string, const json*> by_id;
  for (const auto& [id, j] : refs) by_id[id] = &j;
  if (preds.size() != refs.size()) {
    throw Fail{kConfigError, "misaligned files: " + std::to_string(preds.size()) +
                                 " predictions vs " + std::to_string(refs.size()) +
                                 " references"};
  }
  for (const auto& [id, j] : preds) {
    if (!by_id.count(id)) throw Fail{kConfigError, "misaligned files: no reference for '" + id + "'"};
  }

  std::size_t passed = 0;
  for (const auto& [id, pj] : preds) {
    const json& rj = *by_id.at(id);
    const std::string ploc = pj["_loc"].get<std::string>();
    const std::string rloc = rj["_loc"].get<std::string>();
    const Value pred = answer_of(pj, ploc);
    bool pass = false;
    if (o.metric == "exact") {
      pass = pred == answer_of(rj, rloc);
    } else if (o.metric == "delta2") {
      const auto gt = scalar_of(answer_of(rj, rloc));
      if (!gt) throw Fail{kConfigError, rloc + ": delta2 needs a scalar reference"};
      const auto p = scalar_of(pred);
      try {
        pass = p && evaluate_delta2(*p, *gt);
      } catch (const Error& e) {
        throw Fail{kConfigError, rloc + ": " + e.what()};
      }
    } else {
      double lo = 0.0, hi = 0.0;
      if (rj.contains("lo") && rj.contains("hi") && rj["lo"].is_number() &&
          rj["hi"].is_number()) {
        lo = rj["lo"].get<double>();
        hi = rj["hi"].get<double>();
      } else {
        const auto gt = scalar_of(answer_of(rj, rloc));
        if (!gt) throw Fail{kConfigError, rloc + ": interval needs lo/hi or a scalar answer"};
        lo = *gt - o.tolerance;
        hi = *gt + o.tolerance;
      }
      const auto p = scalar_of(pred);
      try {
        pass = p && check_interval(*p, lo, hi);
      } catch (const Error& e) {
        throw Fail{kConfigError, rloc + ": " + e.what()};
      }
    }
    passed += pass ? 1 : 0;
    out << json{{"id", id}, {"pass", pass}}.dump() << "\n";
  }
  const double accuracy = preds.empty() ? 0.0 : double(passed) / double(preds.size());
  err << o.metric << " accuracy " << format_number(accuracy) << " (" << passed << "/"
      << preds.size() << ")\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct DslOpts {
  std::string program;
  std::string file;
  std::vector<std::string> binds;
};

int cmd_dsl(const DslOpts& o, std::ostream& out, std::ostream&) {
  if (o.program.empty() == o.file.empty()) {
    throw Fail{kConfigError, "give exactly one of PROGRAM or --file"};
  }
  const std::string source = o.file.empty() ? o.program : slurp(o.file);
  std::map<std::string, Value> bindings;
  std::vector<std::string> names;
  for (const auto& b : o.binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Fail{kConfigError, "--bind expects name=literal, got '" + b + "'"};
    }
    names.push_back(b.substr(0, eq));
    bindings[names.back()] = parse_value(b.substr(eq + 1));
  }
  const dsl::Program program = dsl::parse_program(source, names);
  out << render_value(dsl::eval(program, bindings)) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"TIGeR engine: tool-integrated geometric reasoning data and rewards", "tiger"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Generate a dataset and manifest from a config");
  g->add_option("--config", gen.config, "Dataset config or manifest (JSON)")->required();
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--jobs", gen.jobs, "Worker threads (0 = all cores)");
  g->add_option("--seed", gen.seed, "Override the master seed");
  g->add_option("--count", gen.count, "Override the sample count");

  ScoreOpts score;
  auto* s = app.add_subcommand("score", "Score candidate trajectories against a dataset");
  s->add_option("dataset", score.dataset, "Dataset JSONL")->required();
  s->add_option("candidates", score.candidates, "Candidate JSONL with id and trajectory")
      ->required();
  s->add_option("--reward-config", score.reward_config, "Reward config (JSON)");
  s->add_option("--mode", score.mode, "Box lifting mode")
      ->check(CLI::IsMember({"oracle", "fitted"}));
  s->add_option("--out", score.out, "Write breakdown rows here instead of stdout");

  RunOpts run_opts;
  auto* r = app.add_subcommand("run", "Execute a trajectory and print it with results filled");
  r->add_option("scene", run_opts.scene, "Scene document (JSON)")->required();
  r->add_option("trajectory", run_opts.trajectory, "Trajectory text file")->required();
  r->add_option("--mode", run_opts.mode, "Box lifting mode")
      ->check(CLI::IsMember({"oracle", "fitted"}));
  r->add_option("--out", run_opts.out, "Write the filled trajectory here");

  EvalOpts eval;
  auto* e = app.add_subcommand("eval", "Compare predicted answers with references");
  e->add_option("predictions", eval.predictions, "Prediction JSONL with id and answer")
      ->required();
  e->add_option("references", eval.references, "Reference JSONL (a dataset works)")
      ->required();
  e->add_option("--metric", eval.metric, "delta2, exact or interval")
      ->check(CLI::IsMember({"delta2", "exact", "interval"}));
  e->add_option("--tolerance", eval.tolerance,
                "Half-width for interval checks when references carry no lo/hi");

  DslOpts dsl_opts;
  auto* d = app.add_subcommand("dsl", "Evaluate a minidsl program");
  d->add_option("program", dsl_opts.program, "Program text");
  d->add_option("--file", dsl_opts.file, "Read the program from a file");
  d->add_option("--bind", dsl_opts.binds, "name=literal binding (repeatable)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (g->parsed()) return cmd_generate(gen, out, err);
    if (s->parsed()) return cmd_score(score, out, err);
    if (r->parsed()) return cmd_run(run_opts, out, err);
    if (e->parsed()) return cmd_eval(eval, out, err);
    return cmd_dsl(dsl_opts, out, err);
  } catch (const Fail& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& x) {
    err << "error: " << x.what();
    if (x.step()) err << " (step " << *x.step() << ")";
    err << "\n";
    return exit_code_for(x.code());
  }
}

}  // namespace tiger::cli
