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
// Bit-parallel counting kernels used by the learners. Every counting query the
// learners issue (captured rows, positive labels among them) reduces to a
// population count over the AND of two or three packed bit columns.
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2 variant.
// The variant is picked once at startup from the CPU feature flags; setting
// DPRL_FORCE_SCALAR=1 in the environment pins the scalar path.

#ifndef DPRL_KERNELS_HPP_
#define DPRL_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dprl::kernels {

using Word = std::uint64_t;

struct KernelTable {
  std::string_view name;
  // popcount(a & b) over equally-sized spans.
  std::size_t (*count_and2)(const Word* a, const Word* b, std::size_t words);
  // popcount(a & b & c).
  std::size_t (*count_and3)(const Word* a, const Word* b, const Word* c,
                            std::size_t words);
  // dst &= src.
  void (*and_inplace)(Word* dst, const Word* src, std::size_t words);
  // dst &= ~src.
  void (*andnot_inplace)(Word* dst, const Word* src, std::size_t words);
};

const KernelTable& scalar_table();

// Returns nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_table();

bool cpu_has_avx2();

// The table selected for this process.
const KernelTable& active();

inline std::size_t count_and(std::span<const Word> a, std::span<const Word> b) {
  return active().count_and2(a.data(), b.data(), a.size());
}

inline std::size_t count_and(std::span<const Word> a, std::span<const Word> b,
                             std::span<const Word> c) {
  return active().count_and3(a.data(), b.data(), c.data(), a.size());
}

}  // namespace dprl::kernels

#endif  // DPRL_KERNELS_HPP_
