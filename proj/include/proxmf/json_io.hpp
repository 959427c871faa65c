// Copyright 2026 The proxmf Authors
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
//
// JSON instance bundles: field + optional ground truth + seed metadata, used
// for harness round-trips alongside the UAI text format.
#ifndef PROXMF_JSON_IO_HPP
#define PROXMF_JSON_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "proxmf/field.hpp"

namespace proxmf {

inline constexpr const char* kInstanceFormatTag = "proxmf-instance";

struct InstanceBundle {
  std::string id;
  DiscreteField field;
  std::optional<GroundTruth> truth;
  uint64_t seed = 0;
};

inline nlohmann::json field_to_json(const DiscreteField& field) {
  nlohmann::json factors = nlohmann::json::array();
  for (const Factor& f : field.factors)
    factors.push_back({{"scope", f.scope}, {"table", f.table}});
  return {{"num_variables", field.num_variables},
          {"cardinalities", field.cardinalities},
          {"factors", std::move(factors)}};
}

inline DiscreteField field_from_json(const nlohmann::json& j) {
  DiscreteField field;
  field.num_variables = j.at("num_variables").get<int32_t>();
  field.cardinalities = j.at("cardinalities").get<std::vector<int32_t>>();
  for (const auto& jf : j.at("factors")) {
    Factor f;
    f.scope = jf.at("scope").get<std::vector<int32_t>>();
    f.table = jf.at("table").get<std::vector<double>>();
    field.factors.push_back(std::move(f));
  }
  validate(field);
  return field;
}

inline nlohmann::json truth_to_json(const GroundTruth& truth) {
  return {{"labels", truth.labels}, {"mask", truth.mask}};
}

inline GroundTruth truth_from_json(const nlohmann::json& j) {
  GroundTruth truth;
  truth.labels = j.at("labels").get<std::vector<int32_t>>();
  truth.mask = j.at("mask").get<std::vector<uint8_t>>();
  return truth;
}

inline nlohmann::json instance_to_json(const InstanceBundle& bundle) {
  nlohmann::json j = {{"format", kInstanceFormatTag},
                      {"id", bundle.id},
                      {"seed", bundle.seed},
                      {"field", field_to_json(bundle.field)}};
  if (bundle.truth) j["ground_truth"] = truth_to_json(*bundle.truth);
  return j;
}

inline InstanceBundle instance_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kInstanceFormatTag)
    throw ValidationError("instance json: missing or unknown format tag");
  InstanceBundle bundle;
  bundle.id = j.value("id", "");
  bundle.seed = j.value("seed", uint64_t{0});
  bundle.field = field_from_json(j.at("field"));
  if (j.contains("ground_truth")) bundle.truth = truth_from_json(j.at("ground_truth"));
  return bundle;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

}  // namespace proxmf

#endif  // PROXMF_JSON_IO_HPP
