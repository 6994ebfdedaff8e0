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
// Compiled with -mavx2 -mpopcnt; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "dprl/kernels.hpp"

namespace dprl::kernels {
namespace {

// Nibble-lookup popcount of a 256-bit lane, summed into four 64-bit counters.
inline __m256i PopcountLanes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(
      0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
      0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                         _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::size_t HorizontalSum(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

inline __m256i Load(const Word* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

std::size_t Avx2CountAnd2(const Word* a, const Word* b, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    acc = _mm256_add_epi64(acc,
                           PopcountLanes(_mm256_and_si256(Load(a + i), Load(b + i))));
  }
  std::size_t total = HorizontalSum(acc);
  for (; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

std::size_t Avx2CountAnd3(const Word* a, const Word* b, const Word* c,
                          std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v =
        _mm256_and_si256(_mm256_and_si256(Load(a + i), Load(b + i)), Load(c + i));
    acc = _mm256_add_epi64(acc, PopcountLanes(v));
  }
  std::size_t total = HorizontalSum(acc);
  for (; i < words; ++i) total += std::popcount(a[i] & b[i] & c[i]);
  return total;
}

void Avx2AndInplace(Word* dst, const Word* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_and_si256(Load(dst + i), Load(src + i)));
  }
  for (; i < words; ++i) dst[i] &= src[i];
}

void Avx2AndNotInplace(Word* dst, const Word* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    // andnot computes (~first) & second.
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_andnot_si256(Load(src + i), Load(dst + i)));
  }
  for (; i < words; ++i) dst[i] &= ~src[i];
}

constexpr KernelTable kAvx2{"avx2", Avx2CountAnd2, Avx2CountAnd3,
                            Avx2AndInplace, Avx2AndNotInplace};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace dprl::kernels
