/*
 * Copyright 2026 The sdnddos Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// JSON documents: scenario specifications and trained models.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdnddos/errors.hpp"
#include "sdnddos/labels.hpp"
#include "sdnddos/pipeline.hpp"
#include "sdnddos/sae.hpp"
#include "sdnddos/trafficgen.hpp"

namespace sdnddos::io {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

namespace detail {

template <typename T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

inline Ipv4 get_ip(const Json& j, const char* key, const std::string& where) {
  const auto text = get<std::string>(j, key, where);
  auto ip = Ipv4::parse(text);
  if (!ip) throw ValidationError(where + ": invalid IPv4 '" + text + "'");
  return *ip;
}

inline std::vector<Ipv4> get_ip_list(const Json& j, const char* key, const std::string& where) {
  std::vector<Ipv4> out;
  for (const auto& text : get<std::vector<std::string>>(j, key, where)) {
    auto ip = Ipv4::parse(text);
    if (!ip) throw ValidationError(where + ": invalid IPv4 '" + text + "'");
    out.push_back(*ip);
  }
  return out;
}

inline Json parse_document(std::istream& in, const std::string& what) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

inline std::string vectors_string(std::uint8_t vectors) {
  std::string s;
  if (vectors & kVectorTcp) s += 'T';
  if (vectors & kVectorUdp) s += 'U';
  if (vectors & kVectorIcmp) s += 'I';
  return s;
}

inline std::uint8_t parse_vectors(const std::string& s, const std::string& where) {
  std::uint8_t v = 0;
  for (char c : s) {
    const std::uint8_t bit = c == 'T' ? kVectorTcp : c == 'U' ? kVectorUdp : c == 'I' ? kVectorIcmp : 0;
    if (bit == 0 || (v & bit)) throw ValidationError(where + ": bad attack vectors '" + s + "'");
    v |= bit;
  }
  if (v == 0) throw ValidationError(where + ": empty attack vectors");
  return v;
}

inline Json matrix_json(const sae::Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline sae::Matrix matrix_from(const Json& j, const std::string& where) {
  const auto rows = get<std::int64_t>(j, "rows", where);
  const auto cols = get<std::int64_t>(j, "cols", where);
  const auto data = get<std::vector<double>>(j, "data", where);
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw ValidationError(where + ": matrix shape does not match its data");
  }
  sae::Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

inline Json vector_json(const sae::Vector& v) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
  return data;
}

inline sae::Vector vector_from(const Json& j, const char* key, const std::string& where) {
  const auto data = get<std::vector<double>>(j, key, where);
  sae::Vector v(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) v(static_cast<Eigen::Index>(i)) = data[i];
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------- scenarios

inline Json scenario_to_json(const ScenarioSpec& spec) {
  Json hosts = Json::array(), victims = Json::array(), segments = Json::array();
  for (Ipv4 h : spec.hosts) hosts.push_back(h.to_string());
  for (Ipv4 v : spec.victims) victims.push_back(v.to_string());
  for (const AttackSegment& s : spec.attack_segments) {
    segments.push_back({{"start", s.start},
                        {"end", s.end},
                        {"vectors", detail::vectors_string(s.vectors)},
                        {"victim", s.victim.to_string()},
                        {"packet_rate", s.packet_rate},
                        {"spoofing", s.spoofing}});
  }
  const NormalProfile& n = spec.normal;
  return Json{{"seed", spec.seed},
              {"duration", spec.duration},
              {"interval", spec.interval},
              {"hosts", std::move(hosts)},
              {"victims", std::move(victims)},
              {"normal_profile",
               {{"flows_per_minute", n.flows_per_minute},
                {"min_exchanges", n.min_exchanges},
                {"max_exchanges", n.max_exchanges},
                {"unanswered_share", n.unanswered_share},
                {"port_mix", {{"web", n.web_share}, {"dns", n.dns_share}, {"ping", n.ping_share}}}}},
              {"attack_segments", std::move(segments)}};
}

// Missing optional fields take the library defaults; the result is validated.
inline ScenarioSpec scenario_from_json(const Json& j) {
  const std::string where = "scenario";
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  ScenarioSpec spec;
  spec.seed = detail::get_or<std::uint64_t>(j, "seed", spec.seed, where);
  spec.duration = detail::get<double>(j, "duration", where);
  spec.interval = detail::get_or<double>(j, "interval", spec.interval, where);
  spec.hosts = detail::get_ip_list(j, "hosts", where);
  if (j.contains("victims")) spec.victims = detail::get_ip_list(j, "victims", where);
  if (j.contains("normal_profile")) {
    const Json& n = j.at("normal_profile");
    const std::string nw = where + ".normal_profile";
    NormalProfile& p = spec.normal;
    p.flows_per_minute = detail::get_or<double>(n, "flows_per_minute", p.flows_per_minute, nw);
    p.min_exchanges = detail::get_or<int>(n, "min_exchanges", p.min_exchanges, nw);
    p.max_exchanges = detail::get_or<int>(n, "max_exchanges", p.max_exchanges, nw);
    p.unanswered_share = detail::get_or<double>(n, "unanswered_share", p.unanswered_share, nw);
    if (n.contains("port_mix")) {
      const Json& m = n.at("port_mix");
      const std::string mw = nw + ".port_mix";
      p.web_share = detail::get_or<double>(m, "web", p.web_share, mw);
      p.dns_share = detail::get_or<double>(m, "dns", p.dns_share, mw);
      p.ping_share = detail::get_or<double>(m, "ping", p.ping_share, mw);
    }
  }
  if (j.contains("attack_segments")) {
    const Json& list = j.at("attack_segments");
    if (!list.is_array()) throw ValidationError(where + ": attack_segments must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Json& s = list[i];
      const std::string sw = where + ".attack_segments[" + std::to_string(i) + "]";
      AttackSegment seg;
      seg.start = detail::get<double>(s, "start", sw);
      seg.end = detail::get<double>(s, "end", sw);
      seg.vectors = detail::parse_vectors(detail::get<std::string>(s, "vectors", sw), sw);
      seg.victim = detail::get_ip(s, "victim", sw);
      seg.packet_rate = detail::get_or<double>(s, "packet_rate", seg.packet_rate, sw);
      seg.spoofing = detail::get_or<bool>(s, "spoofing", seg.spoofing, sw);
      spec.attack_segments.push_back(seg);
    }
  }
  validate(spec);
  return spec;
}

inline ScenarioSpec read_scenario(std::istream& in) {
  return scenario_from_json(detail::parse_document(in, "scenario"));
}

inline void write_scenario(std::ostream& out, const ScenarioSpec& spec) {
  out << scenario_to_json(spec).dump(2) << '\n';
}

// ---------------------------------------------------------------- models

struct ModelFile {
  sae::SaeModel model;
  NormalizationParams normalization;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

inline Json model_to_json(const ModelFile& file) {
  const sae::SaeModel& m = file.model;
  const sae::Hyperparams& h = m.hyper;
  Json encoders = Json::array();
  for (const sae::Encoder& e : m.encoders) {
    encoders.push_back({{"weights", detail::matrix_json(e.weights)},
                        {"bias", detail::vector_json(e.bias)}});
  }
  Json mins = Json::array(), maxs = Json::array();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    mins.push_back(file.normalization.min[f]);
    maxs.push_back(file.normalization.max[f]);
  }
  return Json{{"format_version", kModelFormatVersion},
              {"layer_sizes", h.layer_sizes},
              {"class_names", m.class_names},
              {"seed", h.seed},
              {"hyperparams",
               {{"num_classes", h.num_classes},
                {"lambda", h.lambda},
                {"beta", h.beta},
                {"rho", h.rho},
                {"learning_rate", h.learning_rate},
                {"finetune_learning_rate", h.finetune_learning_rate},
                {"epochs_pretrain", h.epochs_pretrain},
                {"epochs_finetune", h.epochs_finetune},
                {"decay_biases", h.decay_biases}}},
              {"encoders", std::move(encoders)},
              {"softmax", {{"W", detail::matrix_json(m.head.W)}, {"b", detail::vector_json(m.head.b)}}},
              {"normalization", {{"min", std::move(mins)}, {"max", std::move(maxs)}}}};
}

inline ModelFile model_from_json(const Json& j) {
  const std::string where = "model";
  const auto version = detail::get<int>(j, "format_version", where);
  if (version != kModelFormatVersion) {
    throw ValidationError(where + ": unsupported format_version " + std::to_string(version));
  }
  ModelFile file;
  sae::SaeModel& m = file.model;
  sae::Hyperparams& h = m.hyper;
  h.layer_sizes = detail::get<std::vector<std::size_t>>(j, "layer_sizes", where);
  m.class_names = detail::get<std::vector<std::string>>(j, "class_names", where);
  h.seed = detail::get<std::uint64_t>(j, "seed", where);
  const Json& hp = j.contains("hyperparams") ? j.at("hyperparams") : Json();
  const std::string hw = where + ".hyperparams";
  h.num_classes = detail::get<std::size_t>(hp, "num_classes", hw);
  h.lambda = detail::get<double>(hp, "lambda", hw);
  h.beta = detail::get<double>(hp, "beta", hw);
  h.rho = detail::get<double>(hp, "rho", hw);
  h.learning_rate = detail::get<double>(hp, "learning_rate", hw);
  h.finetune_learning_rate = detail::get<double>(hp, "finetune_learning_rate", hw);
  h.epochs_pretrain = detail::get<int>(hp, "epochs_pretrain", hw);
  h.epochs_finetune = detail::get<int>(hp, "epochs_finetune", hw);
  h.decay_biases = detail::get<bool>(hp, "decay_biases", hw);

  const Json encoders = detail::get<Json>(j, "encoders", where);
  if (!encoders.is_array()) throw ValidationError(where + ": encoders must be an array");
  for (std::size_t l = 0; l < encoders.size(); ++l) {
    const std::string ew = where + ".encoders[" + std::to_string(l) + "]";
    sae::Encoder e;
    e.weights = detail::matrix_from(detail::get<Json>(encoders[l], "weights", ew), ew + ".weights");
    e.bias = detail::vector_from(encoders[l], "bias", ew);
    m.encoders.push_back(std::move(e));
  }
  const Json head = detail::get<Json>(j, "softmax", where);
  m.head.W = detail::matrix_from(detail::get<Json>(head, "W", where + ".softmax"), where + ".softmax.W");
  m.head.b = detail::vector_from(head, "b", where + ".softmax");

  // Shape consistency: layer_sizes chain, then head, then names.
  if (h.layer_sizes.size() != m.encoders.size() + 1) {
    throw ValidationError(where + ": layer_sizes and encoder count disagree");
  }
  for (std::size_t l = 0; l < m.encoders.size(); ++l) {
    const sae::Encoder& e = m.encoders[l];
    if (e.weights.cols() != static_cast<Eigen::Index>(h.layer_sizes[l]) ||
        e.weights.rows() != static_cast<Eigen::Index>(h.layer_sizes[l + 1]) ||
        e.bias.size() != e.weights.rows()) {
      throw ValidationError(where + ": encoder " + std::to_string(l) + " has the wrong shape");
    }
  }
  if (m.head.W.cols() != static_cast<Eigen::Index>(h.layer_sizes.back()) ||
      m.head.W.rows() != static_cast<Eigen::Index>(h.num_classes) ||
      m.head.b.size() != m.head.W.rows()) {
    throw ValidationError(where + ": softmax head has the wrong shape");
  }
  if (m.class_names.size() != h.num_classes) {
    throw ValidationError(where + ": class_names does not match num_classes");
  }
  if (m.input_dim() != static_cast<Eigen::Index>(kFeatureCount)) {
    throw ValidationError(where + ": input dimension must be " + std::to_string(kFeatureCount));
  }

  const Json norm = detail::get<Json>(j, "normalization", where);
  const auto mins = detail::get<std::vector<double>>(norm, "min", where + ".normalization");
  const auto maxs = detail::get<std::vector<double>>(norm, "max", where + ".normalization");
  if (mins.size() != kFeatureCount || maxs.size() != kFeatureCount) {
    throw ValidationError(where + ": normalization needs " + std::to_string(kFeatureCount) +
                          " entries");
  }
  std::copy(mins.begin(), mins.end(), file.normalization.min.begin());
  std::copy(maxs.begin(), maxs.end(), file.normalization.max.begin());
  return file;
}

inline ModelFile read_model(std::istream& in) {
  return model_from_json(detail::parse_document(in, "model"));
}

inline void write_model(std::ostream& out, const ModelFile& file) {
  out << model_to_json(file).dump() << '\n';
}

}  // namespace sdnddos::io
