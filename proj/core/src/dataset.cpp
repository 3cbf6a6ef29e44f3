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

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <thread>

#include "json_io.hpp"
#include "tiger/error.hpp"
#include "tiger/generator.hpp"
#include "tiger/random.hpp"

namespace tiger {

namespace {

using detail::json;

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, msg);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      config_error("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("key '") + key + "' has the wrong type");
  }
}

void read_range(const json& obj, const char* key, double& lo, double& hi) {
  if (!obj.contains(key)) return;
  const json& r = obj.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    config_error(std::string("'") + key + "' must be a [min, max] pair");
  }
  lo = r[0].get<double>();
  hi = r[1].get<double>();
}

SceneParams scene_params_from(const json& j) {
  check_keys(j,
             {"min_objects", "max_objects", "min_views", "max_views", "labels",
              "room_half_extent", "orbit_radius", "camera_height", "orbit_step_deg",
              "min_gap", "max_attempts"},
             "scene");
  SceneParams p;
  read(j, "min_objects", p.min_objects);
  read(j, "max_objects", p.max_objects);
  read(j, "min_views", p.min_views);
  read(j, "max_views", p.max_views);
  read(j, "labels", p.labels);
  read(j, "room_half_extent", p.room_half_extent);
  read_range(j, "orbit_radius", p.orbit_radius_min, p.orbit_radius_max);
  read_range(j, "camera_height", p.camera_height_min, p.camera_height_max);
  read_range(j, "orbit_step_deg", p.orbit_step_min_deg, p.orbit_step_max_deg);
  read(j, "min_gap", p.min_gap);
  read(j, "max_attempts", p.max_attempts);
  return p;
}

json scene_params_to(const SceneParams& p) {
  return json{{"min_objects", p.min_objects},
              {"max_objects", p.max_objects},
              {"min_views", p.min_views},
              {"max_views", p.max_views},
              {"labels", p.labels},
              {"room_half_extent", p.room_half_extent},
              {"orbit_radius", {p.orbit_radius_min, p.orbit_radius_max}},
              {"camera_height", {p.camera_height_min, p.camera_height_max}},
              {"orbit_step_deg", {p.orbit_step_min_deg, p.orbit_step_max_deg}},
              {"min_gap", p.min_gap},
              {"max_attempts", p.max_attempts}};
}

MixEntry mix_entry_from(const json& j) {
  check_keys(j, {"family", "format", "images", "weight"}, "mix entry");
  if (!j.contains("family") || !j["family"].is_string()) {
    config_error("mix entry needs a family name");
  }
  const auto family = parse_family(j["family"].get<std::string>());
  if (!family) config_error("unknown family '" + j["family"].get<std::string>() + "'");
  MixEntry e;
  e.tpl.family = *family;
  // Defaults: the family's first default template.
  for (const auto& t : default_templates()) {
    if (t.family == *family) {
      e.tpl = t;
      break;
    }
  }
  if (j.contains("format")) {
    const auto f = j["format"].is_string()
                       ? parse_answer_format(j["format"].get<std::string>())
                       : std::nullopt;
    if (!f) config_error("bad answer format in mix entry");
    e.tpl.format = *f;
  }
  if (j.contains("images")) {
    const auto i = j["images"].is_string()
                       ? parse_image_config(j["images"].get<std::string>())
                       : std::nullopt;
    if (!i) config_error("bad image config in mix entry (single|multi)");
    e.tpl.images = *i;
  }
  if (!j.contains("weight") || !j["weight"].is_number()) {
    config_error("mix entry needs a numeric weight");
  }
  e.weight = j["weight"].get<double>();
  return e;
}

json config_to_json_value(const DatasetConfig& cfg) {
  json mix = json::array();
  for (const auto& e : cfg.mix) {
    mix.push_back({{"family", std::string(to_string(e.tpl.family))},
                   {"format", std::string(to_string(e.tpl.format))},
                   {"images", std::string(to_string(e.tpl.images))},
                   {"weight", e.weight}});
  }
  return json{{"count", cfg.count},
              {"seed", cfg.seed},
              {"max_retries", cfg.max_retries},
              {"scene", scene_params_to(cfg.scene)},
              {"mix", mix}};
}

std::string sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample-%06zu", index);
  return buf;
}

Sample generate_one(const DatasetConfig& cfg, const Template& tpl, std::size_t index) {
  std::string last_error = "no attempts";
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    const std::uint64_t seed = derive_seed(cfg.seed, index, std::uint64_t(attempt));
    try {
      Scene scene = generate_scene(cfg.scene, seed);
      Sample s = instantiate(tpl, scene, splitmix64(seed));
      s.id = sample_id(index);
      s.seed = seed;
      if (self_check(s)) return s;
      last_error = "self-check failed";
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  throw Error(ErrorCode::GenerationFailure,
              "sample " + std::to_string(index) + " (" + std::string(to_string(tpl.family)) +
                  ") failed after " + std::to_string(cfg.max_retries) +
                  " attempts: " + last_error);
}

}  // namespace

void DatasetConfig::validate() const {
  if (count < 1) config_error("count must be at least 1");
  if (max_retries < 1) config_error("max_retries must be at least 1");
  scene.validate();
  if (mix.empty()) config_error("mix must not be empty");
  double total = 0.0;
  for (const auto& e : mix) {
    try {
      e.tpl.validate();
    } catch (const Error& err) {
      config_error(err.what());
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      config_error("mix weights must be finite and non-negative");
    }
    total += e.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    config_error("mix weights sum to " + format_number(total) + ", expected 1");
  }
}

DatasetConfig dataset_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, {"count", "seed", "max_retries", "scene", "mix", "counts", "digest",
                 "records", "generator"},
             "dataset config");
  DatasetConfig cfg;
  read(j, "count", cfg.count);
  read(j, "seed", cfg.seed);
  read(j, "max_retries", cfg.max_retries);
  if (j.contains("scene")) cfg.scene = scene_params_from(j["scene"]);
  if (j.contains("mix")) {
    if (!j["mix"].is_array()) config_error("mix must be an array");
    for (const auto& e : j["mix"]) cfg.mix.push_back(mix_entry_from(e));
  } else {
    const auto templates = default_templates();
    for (const auto& t : templates) cfg.mix.push_back({t, 1.0 / double(templates.size())});
  }
  cfg.validate();
  return cfg;
}

std::string dataset_config_to_json(const DatasetConfig& cfg) {
  return config_to_json_value(cfg).dump(2) + "\n";
}

std::vector<std::size_t> allocate_counts(const std::vector<MixEntry>& mix,
                                         std::size_t count) {
  double total = 0.0;
  for (const auto& e : mix) total += e.weight;
  std::vector<std::size_t> out(mix.size(), 0);
  if (mix.empty() || !(total > 0.0)) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const double exact = double(count) * mix[i].weight / total;
    out[i] = std::size_t(std::floor(exact));
    assigned += out[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) {
    ++out[remainders[k % remainders.size()].second];
  }
  return out;
}

Dataset generate_dataset(const DatasetConfig& cfg, unsigned jobs) {
  cfg.validate();
  const auto counts = allocate_counts(cfg.mix, cfg.count);
  std::vector<Template> slots;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    slots.insert(slots.end(), counts[i], cfg.mix[i].tpl);
  }
  Rng order(derive_seed(cfg.seed, ~std::uint64_t{0}));
  for (std::size_t i = slots.size(); i > 1; --i) {
    std::swap(slots[i - 1], slots[order.below(i)]);
  }

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = unsigned(std::min<std::size_t>(jobs, slots.size()));
  std::vector<std::optional<Sample>> results(slots.size());
  std::vector<std::exception_ptr> errors(slots.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size() && !failed; i = next++) {
      try {
        results[i] = generate_one(cfg, slots[i], i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);  // lowest failing index
  }

  Dataset ds;
  for (auto& r : results) {
    ds.jsonl += sample_to_json(*r);
    ds.jsonl += '\n';
    ++ds.family_counts[std::string(to_string(r->family))];
    ds.samples.push_back(std::move(*r));
  }
  ds.digest = sha256_hex(ds.jsonl);
  json manifest = config_to_json_value(cfg);
  manifest["counts"] = ds.family_counts;
  manifest["records"] = ds.samples.size();
  manifest["digest"] = ds.digest;
  manifest["generator"] = "tiger";
  ds.manifest = manifest.dump(2) + "\n";
  return ds;
}

std::string sample_to_json(const Sample& s) {
  json j;
  j["id"] = s.id;
  j["family"] = std::string(to_string(s.family));
  j["format"] = std::string(to_string(s.format));
  j["seed"] = s.seed;
  j["views"] = s.views;
  j["question"] = s.question;
  j["answer"] = render_value(s.answer);
  j["trajectory"] = render_trajectory(s.trajectory);
  j["scene"] = detail::scene_to_json_value(s.scene);
  return j.dump();
}

Sample sample_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON record: ") + e.what());
  }
  check_keys(j, {"id", "family", "format", "seed", "views", "question", "answer",
                 "trajectory", "scene"},
             "record");
  for (const char* key : {"family", "format", "answer", "trajectory", "scene"}) {
    if (!j.contains(key)) config_error(std::string("record is missing '") + key + "'");
  }
  Sample s;
  read(j, "id", s.id);
  read(j, "seed", s.seed);
  read(j, "views", s.views);
  read(j, "question", s.question);
  std::string family, format, answer, trajectory;
  read(j, "family", family);
  read(j, "format", format);
  read(j, "answer", answer);
  read(j, "trajectory", trajectory);
  const auto f = parse_family(family);
  if (!f) config_error("unknown family '" + family + "'");
  const auto af = parse_answer_format(format);
  if (!af) config_error("unknown answer format '" + format + "'");
  s.family = *f;
  s.format = *af;
  s.scene = detail::scene_from_json_value(j["scene"]);
  s.answer = parse_value(answer);
  s.trajectory = parse_trajectory(trajectory);
  return s;
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

}  // namespace tiger
