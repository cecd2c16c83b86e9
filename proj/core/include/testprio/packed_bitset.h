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

#ifndef TESTPRIO_PACKED_BITSET_H_
#define TESTPRIO_PACKED_BITSET_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "testprio/coverage.h"

namespace testprio {

// Fixed-size dense bitset over a coverage universe.
class DenseBitset {
 public:
  explicit DenseBitset(std::size_t size = 0)
      : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  std::uint64_t& word(std::size_t w) { return words_[w]; }
  std::uint64_t word(std::size_t w) const { return words_[w]; }

 private:
  std::size_t size_;
  std::vector<std::uint64_t> words_;
};

// All signatures of a suite stored as sparse word-packed bitsets: for each
// test, the (word index, 64-bit mask) pairs of its non-zero words, in one
// contiguous CSR layout.
class PackedSignatures {
 public:
  explicit PackedSignatures(std::span<const CoverageSignature> signatures);

  std::size_t n_tests() const { return offsets_.size() - 1; }
  std::uint32_t universe_size() const { return universe_; }
  std::uint32_t cardinality(std::size_t t) const { return cardinality_[t]; }

  // Number of entities of test t not already in `covered`.
  std::uint32_t MarginalGain(std::size_t t, const DenseBitset& covered) const {
    std::uint32_t gain = 0;
    for (std::size_t j = offsets_[t]; j < offsets_[t + 1]; ++j) {
      gain += static_cast<std::uint32_t>(
          std::popcount(masks_[j] & ~covered.word(word_index_[j])));
    }
    return gain;
  }

  void AddTo(std::size_t t, DenseBitset& covered) const {
    for (std::size_t j = offsets_[t]; j < offsets_[t + 1]; ++j) {
      covered.word(word_index_[j]) |= masks_[j];
    }
  }

 private:
  std::uint32_t universe_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> word_index_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint32_t> cardinality_;
};

}  // namespace testprio

#endif  // TESTPRIO_PACKED_BITSET_H_
