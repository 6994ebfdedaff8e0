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
#include <bit>
#include <cstdlib>

#include "dprl/kernels.hpp"

namespace dprl::kernels {
namespace {

std::size_t ScalarCountAnd2(const Word* a, const Word* b, std::size_t words) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < words; ++i) {
    total += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  }
  return total;
}

std::size_t ScalarCountAnd3(const Word* a, const Word* b, const Word* c,
                            std::size_t words) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < words; ++i) {
    total += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
  }
  return total;
}

void ScalarAndInplace(Word* dst, const Word* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] &= src[i];
}

void ScalarAndNotInplace(Word* dst, const Word* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] &= ~src[i];
}

constexpr KernelTable kScalar{"scalar", ScalarCountAnd2, ScalarCountAnd3,
                              ScalarAndInplace, ScalarAndNotInplace};

const KernelTable& Select() {
  const char* force = std::getenv("DPRL_FORCE_SCALAR");
  if (force != nullptr && force[0] != '\0' && force[0] != '0') return kScalar;
  if (const KernelTable* t = avx2_table(); t != nullptr && cpu_has_avx2()) {
    return *t;
  }
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = Select();
  return table;
}

}  // namespace dprl::kernels
