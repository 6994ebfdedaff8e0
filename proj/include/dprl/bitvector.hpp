// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#ifndef DPRL_BITVECTOR_HPP_
#define DPRL_BITVECTOR_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dprl/kernels.hpp"

namespace dprl {

// Fixed-length packed bit vector. Bits past size() in the last word are
// always zero, so word-level popcounts never see garbage.
class BitVector {
 public:
  using Word = kernels::Word;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false)
      : size_(size), words_((size + kWordBits - 1) / kWordBits, value ? ~Word{0} : 0) {
    ClearTail();
  }

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const Word> words() const { return words_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool value = true) {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  BitVector& operator&=(const BitVector& other) {
    kernels::active().and_inplace(words_.data(), other.words_.data(), words_.size());
    return *this;
  }
  // this &= ~other
  BitVector& and_not(const BitVector& other) {
    kernels::active().andnot_inplace(words_.data(), other.words_.data(), words_.size());
    return *this;
  }
  BitVector operator~() const {
    BitVector out(*this);
    for (Word& w : out.words_) w = ~w;
    out.ClearTail();
    return out;
  }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  // Indices of the set bits, ascending.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

 private:
  void ClearTail() {
    const std::size_t rem = size_ % kWordBits;
    if (rem != 0 && !words_.empty()) words_.back() &= (Word{1} << rem) - 1;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

inline std::size_t count_and(const BitVector& a, const BitVector& b) {
  return kernels::count_and(a.words(), b.words());
}

inline std::size_t count_and(const BitVector& a, const BitVector& b, const BitVector& c) {
  return kernels::count_and(a.words(), b.words(), c.words());
}

}  // namespace dprl

#endif  // DPRL_BITVECTOR_HPP_
