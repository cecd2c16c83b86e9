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

#ifndef TESTPRIO_SIGNATURE_IO_H_
#define TESTPRIO_SIGNATURE_IO_H_

#include <filesystem>
#include <span>
#include <vector>

#include "testprio/coverage.h"

namespace testprio {

// "DGS1" signature dump: magic 'D','G','S','1'; u32 universe size; u32 test
// count; then per test a u32 id count followed by that many sorted u32 entity
// ids. All integers little-endian.
void SaveSignatures(std::span<const CoverageSignature> signatures,
                    const std::filesystem::path& path);
std::vector<CoverageSignature> LoadSignatures(const std::filesystem::path& path);

}  // namespace testprio

#endif  // TESTPRIO_SIGNATURE_IO_H_
