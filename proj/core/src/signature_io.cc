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

#include "testprio/signature_io.h"

#include <algorithm>
#include <array>
#include <string>

#include "io_util.h"
#include "testprio/error.h"

namespace testprio {
namespace {

constexpr std::array<char, 4> kSignatureMagic = {'D', 'G', 'S', '1'};

}  // namespace

void SaveSignatures(std::span<const CoverageSignature> signatures,
                    const std::filesystem::path& path) {
  const std::uint32_t universe = CommonUniverse(signatures);
  if (signatures.size() > UINT32_MAX) {
    Fail(ErrorCode::kInvalidArgument, "too many signatures for DGS1");
  }
  std::string out(kSignatureMagic.begin(), kSignatureMagic.end());
  internal::PutU32(out, universe);
  internal::PutU32(out, static_cast<std::uint32_t>(signatures.size()));
  for (const auto& sig : signatures) {
    internal::PutU32(out, static_cast<std::uint32_t>(sig.ids.size()));
    for (std::uint32_t id : sig.ids) internal::PutU32(out, id);
  }
  internal::WriteFile(path, out);
}

std::vector<CoverageSignature> LoadSignatures(const std::filesystem::path& path) {
  const std::string data = internal::ReadFile(path);
  const auto fail = [&](const std::string& why) -> void {
    Fail(ErrorCode::kFormat, path.string() + ": " + why);
  };
  if (data.size() < 12 ||
      !std::equal(kSignatureMagic.begin(), kSignatureMagic.end(), data.begin())) {
    fail("missing DGS1 header");
  }
  const std::uint32_t universe = internal::GetU32(data, 4);
  const std::uint32_t n_tests = internal::GetU32(data, 8);
  std::vector<CoverageSignature> out;
  out.reserve(std::min<std::size_t>(n_tests, data.size() / 4));
  std::size_t pos = 12;
  for (std::uint32_t t = 0; t < n_tests; ++t) {
    if (pos + 4 > data.size()) fail("truncated at test " + std::to_string(t));
    const std::uint32_t count = internal::GetU32(data, pos);
    pos += 4;
    if ((data.size() - pos) / 4 < count) fail("truncated ids at test " + std::to_string(t));
    CoverageSignature sig;
    sig.universe_size = universe;
    sig.ids.resize(count);
    for (std::uint32_t j = 0; j < count; ++j, pos += 4) {
      sig.ids[j] = internal::GetU32(data, pos);
      if (sig.ids[j] >= universe || (j > 0 && sig.ids[j] <= sig.ids[j - 1])) {
        fail("test " + std::to_string(t) + " has unsorted or out-of-range ids");
      }
    }
    out.push_back(std::move(sig));
  }
  if (pos != data.size()) fail("trailing bytes after last signature");
  return out;
}

}  // namespace testprio
