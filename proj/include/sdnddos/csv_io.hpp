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

// CSV interchange formats: packet traces, ground-truth labels and feature
// datasets. Numbers are written in their shortest round-trip decimal form.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdnddos/errors.hpp"
#include "sdnddos/features.hpp"
#include "sdnddos/labels.hpp"
#include "sdnddos/pipeline.hpp"
#include "sdnddos/trafficgen.hpp"

namespace sdnddos::io {

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

class LineError {
 public:
  LineError(std::string source, std::size_t line) : source_(std::move(source)), line_(line) {}
  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError(source_ + " line " + std::to_string(line_) + ": " + why);
  }

 private:
  std::string source_;
  std::size_t line_;
};

template <typename Int>
Int parse_int(std::string_view field, Int lo, Int hi, const LineError& where,
              std::string_view what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || p != field.data() + field.size() || v < lo || v > hi) {
    where.fail("invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return static_cast<Int>(v);
}

inline double parse_double(std::string_view field, const LineError& where, std::string_view what) {
  double v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || p != field.data() + field.size() || !std::isfinite(v)) {
    where.fail("invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return v;
}

inline Ipv4 parse_ip(std::string_view field, const LineError& where, std::string_view what) {
  auto ip = Ipv4::parse(field);
  if (!ip) where.fail("invalid " + std::string(what) + " '" + std::string(field) + "'");
  return *ip;
}

inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

// ---------------------------------------------------------------- traces

inline constexpr std::string_view kTraceHeader =
    "ts,proto,src_ip,src_port,dst_ip,dst_port,icmp_type,icmp_code,ttl,data_size,tcp_flags,window";

inline void write_trace_row(std::ostream& out, const PacketHeader& p) {
  auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string(); };
  out << format_double(p.timestamp) << ',' << protocol_name(p.protocol) << ','
      << p.src_ip.to_string() << ',' << opt(p.src_port) << ',' << p.dst_ip.to_string() << ','
      << opt(p.dst_port) << ',' << opt(p.icmp_type) << ',' << opt(p.icmp_code) << ','
      << unsigned{p.ttl} << ',' << p.data_size << ','
      << (p.tcp_flags ? p.tcp_flags->to_letters() : std::string()) << ',' << opt(p.window)
      << '\n';
}

inline void write_trace(std::ostream& out, std::span<const PacketHeader> packets) {
  out << kTraceHeader << '\n';
  for (const PacketHeader& p : packets) write_trace_row(out, p);
}

inline std::vector<PacketHeader> read_trace(std::istream& in, const std::string& source = "trace") {
  std::string line;
  if (!read_line(in, line) || line != kTraceHeader) {
    LineError(source, 1).fail("expected header '" + std::string(kTraceHeader) + "'");
  }
  std::vector<PacketHeader> out;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const LineError where(source, line_no);
    const auto f = split_csv(line);
    if (f.size() != 12) where.fail("expected 12 columns, got " + std::to_string(f.size()));
    PacketHeader p;
    p.timestamp = parse_double(f[0], where, "timestamp");
    if (p.timestamp < 0) where.fail("negative timestamp");
    auto proto = parse_protocol(f[1]);
    if (!proto) where.fail("unknown protocol '" + std::string(f[1]) + "'");
    p.protocol = *proto;
    p.src_ip = parse_ip(f[2], where, "src_ip");
    p.dst_ip = parse_ip(f[4], where, "dst_ip");
    p.ttl = parse_int<std::uint8_t>(f[8], 0, 255, where, "ttl");
    p.data_size = parse_int<std::uint32_t>(f[9], 0, 0xffffffffu, where, "data_size");

    const bool ports = p.protocol != Protocol::kIcmp;
    const bool tcp = p.protocol == Protocol::kTcp;
    auto require = [&](std::string_view field, bool wanted, std::string_view name) {
      if (wanted && field.empty()) where.fail(std::string(name) + " missing for " +
                                              std::string(protocol_name(p.protocol)));
      if (!wanted && !field.empty()) where.fail(std::string(name) + " not allowed for " +
                                                std::string(protocol_name(p.protocol)));
    };
    require(f[3], ports, "src_port");
    require(f[5], ports, "dst_port");
    require(f[6], !ports, "icmp_type");
    require(f[7], !ports, "icmp_code");
    require(f[11], tcp, "window");
    if (!tcp && !f[10].empty()) where.fail("tcp_flags not allowed for non-TCP packet");
    if (ports) {
      p.src_port = parse_int<std::uint16_t>(f[3], 0, 65535, where, "src_port");
      p.dst_port = parse_int<std::uint16_t>(f[5], 0, 65535, where, "dst_port");
    } else {
      p.icmp_type = parse_int<std::uint8_t>(f[6], 0, 255, where, "icmp_type");
      p.icmp_code = parse_int<std::uint8_t>(f[7], 0, 255, where, "icmp_code");
    }
    if (tcp) {
      auto flags = TcpFlags::parse_letters(f[10]);
      if (!flags) where.fail("invalid tcp_flags '" + std::string(f[10]) + "'");
      p.tcp_flags = *flags;
      p.window = parse_int<std::uint16_t>(f[11], 0, 65535, where, "window");
    }
    if (!out.empty() && p.timestamp < out.back().timestamp) where.fail("timestamp goes backwards");
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------- labels

inline constexpr std::string_view kLabelsHeader = "host,interval_start,label";

inline void write_labels(std::ostream& out, const GroundTruth& truth) {
  out << kLabelsHeader << '\n';
  // Time-major order reads more naturally than the map's host-major order.
  std::vector<std::pair<std::pair<double, Ipv4>, TrafficClass>> rows;
  for (const auto& [key, cls] : truth) rows.push_back({{key.second, key.first}, cls});
  std::sort(rows.begin(), rows.end());
  for (const auto& [key, cls] : rows) {
    out << key.second.to_string() << ',' << format_double(key.first) << ',' << class_name(cls)
        << '\n';
  }
}

inline GroundTruth read_labels(std::istream& in, const std::string& source = "labels") {
  std::string line;
  if (!read_line(in, line) || line != kLabelsHeader) {
    LineError(source, 1).fail("expected header '" + std::string(kLabelsHeader) + "'");
  }
  GroundTruth out;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const LineError where(source, line_no);
    const auto f = split_csv(line);
    if (f.size() != 3) where.fail("expected 3 columns");
    const Ipv4 host = parse_ip(f[0], where, "host");
    const double start = parse_double(f[1], where, "interval_start");
    auto cls = parse_class(f[2]);
    if (!cls) where.fail("unknown label '" + std::string(f[2]) + "'");
    if (!out.emplace(std::make_pair(host, start), *cls).second) where.fail("duplicate label");
  }
  return out;
}

// ---------------------------------------------------------------- datasets

inline std::string dataset_header() {
  std::string h = "host,interval_start";
  for (std::size_t i = 1; i <= kFeatureCount; ++i) h += ",f" + std::to_string(i);
  return h + ",label";
}

inline void write_dataset(std::ostream& out, std::span<const LabeledRecord> records) {
  out << dataset_header() << '\n';
  for (const LabeledRecord& r : records) {
    out << r.features.host.to_string() << ',' << format_double(r.features.interval_start);
    for (double v : r.features.values) out << ',' << format_double(v);
    out << ',' << kClassNames.at(static_cast<std::size_t>(r.label)) << '\n';
  }
}

inline std::vector<LabeledRecord> read_dataset(std::istream& in,
                                               const std::string& source = "dataset") {
  std::string line;
  if (!read_line(in, line) || line != dataset_header()) {
    LineError(source, 1).fail("expected header host,interval_start,f1..f68,label");
  }
  std::vector<LabeledRecord> out;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const LineError where(source, line_no);
    const auto f = split_csv(line);
    if (f.size() != kFeatureCount + 3) {
      where.fail("expected " + std::to_string(kFeatureCount + 3) + " columns, got " +
                 std::to_string(f.size()));
    }
    LabeledRecord r;
    r.features.host = parse_ip(f[0], where, "host");
    r.features.interval_start = parse_double(f[1], where, "interval_start");
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      r.features.values[i] = parse_double(f[i + 2], where, "f" + std::to_string(i + 1));
      if (r.features.values[i] < 0) where.fail("negative feature f" + std::to_string(i + 1));
    }
    auto cls = parse_class(f.back());
    if (!cls) where.fail("unknown label '" + std::string(f.back()) + "'");
    r.label = static_cast<int>(*cls);
    out.push_back(r);
  }
  return out;
}

}  // namespace sdnddos::io
