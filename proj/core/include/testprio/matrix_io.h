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

#ifndef TESTPRIO_MATRIX_IO_H_
#define TESTPRIO_MATRIX_IO_H_

#include <filesystem>
#include <span>
#include <string_view>

#include "testprio/data_model.h"

namespace testprio {

// On-disk matrix encodings.
//
// kBinary ("DGM1"): the four bytes 'D','G','M','1'; u32 row count; u32 column
// count; rows * cols IEEE-754 binary32 values in row-major order. All
// integers and floats are little-endian.
//
// kCsv: no header, comma-separated decimals, one row per line. Written with
// 9 significant digits, which round-trips binary32 exactly.
enum class MatrixFormat { kBinary, kCsv };

// ".csv" / ".txt" map to kCsv, everything else to kBinary.
MatrixFormat FormatFromPath(const std::filesystem::path& path);
MatrixFormat ParseMatrixFormat(std::string_view name);

Matrix LoadMatrix(const std::filesystem::path& path, MatrixFormat format);
Matrix LoadMatrix(const std::filesystem::path& path);
void SaveMatrix(const Matrix& m, const std::filesystem::path& path,
                MatrixFormat format);
void SaveMatrix(const Matrix& m, const std::filesystem::path& path);

ProbabilityMatrix LoadProbabilities(const std::filesystem::path& path);
ActivationTrace LoadTrace(const std::filesystem::path& path);

// Parses a CSV document already in memory.
Matrix ParseCsvMatrix(std::string_view text);

// One integer per line.
LabelVector LoadLabels(const std::filesystem::path& path);
void SaveLabels(std::span<const std::int32_t> labels,
                const std::filesystem::path& path);

// {"layers": [[...], ...], "neurons": [{"low":..,"high":..,"std":..}, ...]}
struct ProfileDocument {
  LayerMap layers;
  NeuronProfile profile;
};
ProfileDocument LoadProfile(const std::filesystem::path& path);
void SaveProfile(const ProfileDocument& doc, const std::filesystem::path& path);

// "rank,test_index" with a header line.
void SavePermutation(const Permutation& perm, const std::filesystem::path& path);
Permutation LoadPermutation(const std::filesystem::path& path);

}  // namespace testprio

#endif  // TESTPRIO_MATRIX_IO_H_
