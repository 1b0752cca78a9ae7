#include <algorithm>
#include <fstream>

#include "mglab/error.hpp"
#include "mglab/format.hpp"
#include "mglab/harness.hpp"

namespace mglab {

namespace {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecInvalid, where + "." + key + ": " + e.what());
  }
}

void require_object(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::SpecInvalid, where + " must be an object");
}

DatasetSpec parse_dataset(const nlohmann::json& j) {
  require_object(j, "dataset");
  DatasetSpec d;
  read_opt(j, "tau", d.params.tau, "dataset");
  if (j.contains("params")) {
    const auto& p = j.at("params");
    require_object(p, "dataset.params");
    read_opt(p, "beta_mg", d.params.beta_mg, "dataset.params");
    read_opt(p, "theta", d.params.theta, "dataset.params");
    read_opt(p, "gamma", d.params.gamma, "dataset.params");
    read_opt(p, "exponent", d.params.exponent, "dataset.params");
  }
  if (j.contains("split")) {
    const auto& s = j.at("split");
    require_object(s, "dataset.split");
    read_opt(s, "init_len", d.split.init_len, "dataset.split");
    read_opt(s, "train_len", d.split.train_len, "dataset.split");
    read_opt(s, "test_len", d.split.test_len, "dataset.split");
  }
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    require_object(g, "dataset.generator");
    read_opt(g, "internal_dt", d.integrator.internal_dt, "dataset.generator");
    read_opt(g, "sample_dt", d.integrator.sample_dt, "dataset.generator");
    read_opt(g, "warmup_samples", d.integrator.warmup_samples, "dataset.generator");
    read_opt(g, "history_value", d.integrator.history_value, "dataset.generator");
    if (g.contains("interpolation")) {
      const auto name = g.at("interpolation").get<std::string>();
      if (name == "linear") d.integrator.interpolation = DelayInterpolation::Linear;
      else if (name == "hermite") d.integrator.interpolation = DelayInterpolation::Hermite;
      else throw Error(ErrorCode::SpecInvalid, "dataset.generator.interpolation must be linear or hermite");
    }
  }
  if (!(d.params.tau > 0.0) || d.split.train_len == 0 || d.split.test_len == 0) {
    throw Error(ErrorCode::SpecInvalid, "dataset needs tau > 0 and positive train_len/test_len");
  }
  return d;
}

void add_block(std::vector<nlohmann::json>& out, nlohmann::json block, const std::string& kind) {
  require_object(block, "model." + kind);
  if (block.contains("kind") && block.at("kind") != kind) {
    throw Error(ErrorCode::SpecInvalid, "model." + kind + " has conflicting kind field");
  }
  block["kind"] = kind;
  out.push_back(std::move(block));
}

}  // namespace

nlohmann::json to_json(const DatasetSpec& d) {
  return {
      {"tau", d.params.tau},
      {"params",
       {{"beta_mg", d.params.beta_mg}, {"theta", d.params.theta}, {"gamma", d.params.gamma},
        {"exponent", d.params.exponent}}},
      {"split",
       {{"init_len", d.split.init_len}, {"train_len", d.split.train_len}, {"test_len", d.split.test_len}}},
      {"generator",
       {{"internal_dt", d.integrator.internal_dt},
        {"sample_dt", d.integrator.sample_dt},
        {"warmup_samples", d.integrator.warmup_samples},
        {"history_value", d.integrator.history_value},
        {"interpolation", d.integrator.interpolation == DelayInterpolation::Linear ? "linear" : "hermite"}}},
  };
}

ExperimentSpec parse_experiment_spec(const nlohmann::json& j, std::uint64_t seed_base) {
  require_object(j, "spec");
  ExperimentSpec spec;
  read_opt(j, "name", spec.name, "spec");
  read_opt(j, "baseline", spec.baseline, "spec");
  read_opt(j, "sweep_cap", spec.sweep_cap, "spec");
  read_opt(j, "seed_base", seed_base, "spec");
  if (j.contains("output_dir")) spec.output_dir = j.at("output_dir").get<std::string>();
  spec.dataset = j.contains("dataset") ? parse_dataset(j.at("dataset")) : DatasetSpec{};

  if (!j.contains("model")) throw Error(ErrorCode::SpecInvalid, "spec has no 'model' section");
  const auto& m = j.at("model");
  if (m.is_object()) {
    for (const auto& [kind, val] : m.items()) {
      if (val.is_array()) {
        for (const auto& b : val) add_block(spec.model_blocks, b, kind);
      } else {
        add_block(spec.model_blocks, val, kind);
      }
    }
  } else if (m.is_array()) {
    for (const auto& b : m) {
      require_object(b, "model[]");
      if (!b.contains("kind") || !b.at("kind").is_string()) {
        throw Error(ErrorCode::SpecInvalid, "model[] entries need a string 'kind'");
      }
      spec.model_blocks.push_back(b);
    }
  } else {
    throw Error(ErrorCode::SpecInvalid, "'model' must be an object or a list");
  }

  if (j.contains("seeds")) {
    read_opt(j, "seeds", spec.seeds, "spec");
    if (spec.seeds.empty()) throw Error(ErrorCode::SpecInvalid, "'seeds' must list at least one seed");
  } else {
    std::size_t count = kDefaultSeedCount;
    read_opt(j, "seed_count", count, "spec");
    if (count == 0) throw Error(ErrorCode::SpecInvalid, "seed_count must be positive");
    for (std::size_t i = 0; i < count; ++i) spec.seeds.push_back(seed_base + i);
  }
  // Malformed model fields fail here, before any work starts.
  expand_sweep(spec);
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path, std::uint64_t seed_base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SpecInvalid, "cannot open spec file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SpecInvalid, path.string() + ": " + e.what());
  }
  return parse_experiment_spec(j, seed_base);
}

bool has_sweep_axes(const ExperimentSpec& spec) {
  for (const auto& b : spec.model_blocks)
    for (const auto& [k, v] : b.items())
      if (v.is_array()) return true;
  return false;
}

std::vector<ConfigPoint> expand_sweep(const ExperimentSpec& spec) {
  std::vector<ConfigPoint> points;
  std::size_t total = 0;
  for (const auto& block : spec.model_blocks) {
    std::vector<std::pair<std::string, nlohmann::json>> axes;
    std::size_t product = 1;
    for (const auto& [k, v] : block.items()) {
      if (!v.is_array()) continue;
      if (v.empty()) throw Error(ErrorCode::SpecInvalid, "sweep axis '" + k + "' is empty");
      axes.emplace_back(k, v);
      product *= v.size();
      if (product > spec.sweep_cap) break;
    }
    total += product;
    if (total > spec.sweep_cap) {
      throw Error(ErrorCode::SpecInvalid, "sweep has more than " + std::to_string(spec.sweep_cap) +
                                              " config points; raise sweep_cap to allow it");
    }
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t p = 0; p < product; ++p) {
      nlohmann::json resolved = block;
      for (std::size_t a = 0; a < axes.size(); ++a) resolved[axes[a].first] = axes[a].second[idx[a]];
      points.push_back({points.size(), kind_from_json(resolved)});
      // Last axis varies fastest.
      for (std::size_t a = axes.size(); a-- > 0;) {
        if (++idx[a] < axes[a].second.size()) break;
        idx[a] = 0;
      }
    }
  }
  return points;
}

}  // namespace mglab
