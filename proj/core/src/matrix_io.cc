// Copyright 2026 The testprio Authors.
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

#include "testprio/matrix_io.h"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "io_util.h"
#include "json.hpp"
#include "testprio/error.h"

namespace testprio {
namespace {

using internal::GetU32;
using internal::PutU32;
using internal::ReadFile;
using internal::WriteFile;

constexpr std::array<char, 4> kMatrixMagic = {'D', 'G', 'M', '1'};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

float ParseFloat(std::string_view field, std::size_t line) {
  field = Trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  float v = 0.0f;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    Fail(ErrorCode::kFormat, "line " + std::to_string(line) +
                                 ": cannot parse '" + std::string(field) +
                                 "' as a number");
  }
  return v;
}

void CheckFinite(const Matrix& m, const std::filesystem::path& path) {
  const auto& values = m.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      Fail(ErrorCode::kFormat, path.string() + ": non-finite value at row " +
                                   std::to_string(k / m.cols()) + ", column " +
                                   std::to_string(k % m.cols()));
    }
  }
}

std::string FormatFloat(float v) {
  std::array<char, 32> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.9g", static_cast<double>(v));
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

Matrix DecodeBinary(std::string_view data, const std::filesystem::path& path) {
  if (data.size() < 12 || !std::equal(kMatrixMagic.begin(), kMatrixMagic.end(),
                                      data.begin())) {
    Fail(ErrorCode::kFormat, path.string() + ": missing DGM1 header");
  }
  const std::uint64_t rows = GetU32(data, 4);
  const std::uint64_t cols = GetU32(data, 8);
  const std::uint64_t expected = 12 + rows * cols * 4;
  if (data.size() != expected) {
    Fail(ErrorCode::kFormat, path.string() + ": header declares " +
                                 std::to_string(rows) + "x" + std::to_string(cols) +
                                 " but file holds " + std::to_string(data.size()) +
                                 " bytes");
  }
  std::vector<float> values(rows * cols);
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = std::bit_cast<float>(GetU32(data, 12 + 4 * k));
  }
  return Matrix(rows, cols, std::move(values));
}

}  // namespace

MatrixFormat FormatFromPath(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".txt") return MatrixFormat::kCsv;
  return MatrixFormat::kBinary;
}

MatrixFormat ParseMatrixFormat(std::string_view name) {
  if (name == "binary" || name == "dgm" || name == "dgm1") return MatrixFormat::kBinary;
  if (name == "csv") return MatrixFormat::kCsv;
  Fail(ErrorCode::kInvalidArgument, "unknown matrix format '" + std::string(name) + "'");
}

Matrix ParseCsvMatrix(std::string_view text) {
  std::vector<float> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      values.push_back(ParseFloat(line.substr(0, comma), line_no));
      ++fields;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      Fail(ErrorCode::kFormat, "line " + std::to_string(line_no) + " has " +
                                   std::to_string(fields) + " columns, expected " +
                                   std::to_string(cols));
    }
    ++rows;
  }
  return Matrix(rows, cols, std::move(values));
}

Matrix LoadMatrix(const std::filesystem::path& path, MatrixFormat format) {
  const std::string data = ReadFile(path);
  Matrix m;
  if (format == MatrixFormat::kBinary) {
    m = DecodeBinary(data, path);
  } else {
    try {
      m = ParseCsvMatrix(data);
    } catch (const Error& e) {
      Fail(e.code(), path.string() + ": " + e.what());
    }
  }
  CheckFinite(m, path);
  return m;
}

Matrix LoadMatrix(const std::filesystem::path& path) {
  return LoadMatrix(path, FormatFromPath(path));
}

void SaveMatrix(const Matrix& m, const std::filesystem::path& path,
                MatrixFormat format) {
  std::string out;
  if (format == MatrixFormat::kBinary) {
    if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
      Fail(ErrorCode::kInvalidArgument, "matrix too large for DGM1");
    }
    out.reserve(12 + 4 * m.values().size());
    out.append(kMatrixMagic.data(), kMatrixMagic.size());
    PutU32(out, static_cast<std::uint32_t>(m.rows()));
    PutU32(out, static_cast<std::uint32_t>(m.cols()));
    for (float v : m.values()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  } else {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      auto row = m.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j > 0) out.push_back(',');
        out += FormatFloat(row[j]);
      }
      out.push_back('\n');
    }
  }
  WriteFile(path, out);
}

void SaveMatrix(const Matrix& m, const std::filesystem::path& path) {
  SaveMatrix(m, path, FormatFromPath(path));
}

ProbabilityMatrix LoadProbabilities(const std::filesystem::path& path) {
  try {
    return ProbabilityMatrix::FromMatrix(LoadMatrix(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kFormat) throw;
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    Fail(e.code(), path.string() + ": " + what);
  }
}

ActivationTrace LoadTrace(const std::filesystem::path& path) {
  return ActivationTrace::FromMatrix(LoadMatrix(path));
}

LabelVector LoadLabels(const std::filesystem::path& path) {
  const std::string data = ReadFile(path);
  std::string_view text = data;
  LabelVector labels;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    std::int32_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      Fail(ErrorCode::kFormat, path.string() + ": line " + std::to_string(line_no) +
                                   " is not an integer label");
    }
    labels.push_back(v);
  }
  return labels;
}

void SaveLabels(std::span<const std::int32_t> labels,
                const std::filesystem::path& path) {
  std::string out;
  for (auto v : labels) {
    out += std::to_string(v);
    out.push_back('\n');
  }
  WriteFile(path, out);
}

ProfileDocument LoadProfile(const std::filesystem::path& path) {
  const std::string data = ReadFile(path);
  try {
    const auto doc = nlohmann::json::parse(data);
    std::vector<std::vector<std::uint32_t>> layers =
        doc.at("layers").get<std::vector<std::vector<std::uint32_t>>>();
    std::vector<NeuronStats> neurons;
    for (const auto& n : doc.at("neurons")) {
      neurons.push_back({n.at("low").get<double>(), n.at("high").get<double>(),
                         n.at("std").get<double>()});
    }
    ProfileDocument out{LayerMap(std::move(layers)), NeuronProfile(std::move(neurons))};
    if (out.layers.n_neurons() != out.profile.size()) {
      Fail(ErrorCode::kFormat, "layer map covers " +
                                   std::to_string(out.layers.n_neurons()) +
                                   " neurons but profile has " +
                                   std::to_string(out.profile.size()));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void SaveProfile(const ProfileDocument& doc, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["layers"] = doc.layers.layers();
  auto& neurons = j["neurons"] = nlohmann::ordered_json::array();
  for (const auto& n : doc.profile.neurons()) {
    neurons.push_back({{"low", n.low}, {"high", n.high}, {"std", n.std}});
  }
  WriteFile(path, j.dump() + "\n");
}

void SavePermutation(const Permutation& perm, const std::filesystem::path& path) {
  std::string out = "rank,test_index\n";
  for (std::size_t r = 0; r < perm.size(); ++r) {
    out += std::to_string(r + 1);
    out.push_back(',');
    out += std::to_string(perm[r]);
    out.push_back('\n');
  }
  WriteFile(path, out);
}

Permutation LoadPermutation(const std::filesystem::path& path) {
  const std::string data = ReadFile(path);
  std::string_view text = data;
  std::vector<std::uint32_t> order;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || (line_no == 1 && line == "rank,test_index")) continue;
    const auto comma = line.find(',');
    std::uint64_t rank = 0;
    std::uint32_t test = 0;
    bool ok = comma != std::string_view::npos;
    if (ok) {
      auto r1 = std::from_chars(line.data(), line.data() + comma, rank);
      auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), test);
      ok = r1.ec == std::errc() && r1.ptr == line.data() + comma &&
           r2.ec == std::errc() && r2.ptr == line.data() + line.size();
    }
    if (!ok || rank != order.size() + 1) {
      Fail(ErrorCode::kFormat, path.string() + ": line " + std::to_string(line_no) +
                                   " is not 'rank,test_index' with consecutive ranks");
    }
    order.push_back(test);
  }
  try {
    return Permutation(std::move(order));
  } catch (const Error& e) {
    Fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

}  // namespace testprio
