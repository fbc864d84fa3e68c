// Copyright 2026 The qdemon Authors
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

#include "qdemon/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qdemon::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(QDEMON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* pick_initial() noexcept {
    const char* env = std::getenv("QDEMON_KERNELS");
    if (env != nullptr && std::string(env) == "scalar") {
        return &detail::scalar_table;
    }
#if defined(QDEMON_HAVE_AVX2)
    if (cpu_has_avx2()) {
        return &detail::avx2_table;
    }
#endif
    return &detail::scalar_table;
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> current{pick_initial()};
    return current;
}

}  // namespace

bool supported(Backend backend) noexcept {
    switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

std::string_view name(Backend backend) noexcept {
    switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable& table(Backend backend) {
    if (!supported(backend)) {
        throw std::invalid_argument("kernel backend not available on this CPU: " +
                                    std::string(name(backend)));
    }
#if defined(QDEMON_HAVE_AVX2)
    if (backend == Backend::Avx2) {
        return detail::avx2_table;
    }
#endif
    return detail::scalar_table;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(Backend backend) { slot().store(&table(backend), std::memory_order_release); }

}  // namespace qdemon::kernels
