/*
 * Copyright 2026 The charpoly-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cpl {

/// Worker count used when a caller passes 0: $CHARPOLY_LAB_THREADS if set,
/// otherwise the hardware concurrency.
inline unsigned default_threads() {
    if (const char* env = std::getenv("CHARPOLY_LAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into contiguous blocks and runs body(begin, end, block)
/// for each block, one block per worker. Block boundaries depend only on
/// (count, threads), so callers that merge per-block results in block order
/// get identical output for any scheduling.
template <class Body>
void parallel_blocks(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) threads = default_threads();
    const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
    if (blocks == 1) {
        body(std::size_t{0}, count, std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(blocks);
    pool.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t begin = count * b / blocks;
        const std::size_t end = count * (b + 1) / blocks;
        pool.emplace_back([&, begin, end, b] {
            try {
                body(begin, end, b);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Number of blocks parallel_blocks will use.
inline std::size_t block_count(std::size_t count, unsigned threads) {
    if (threads == 0) threads = default_threads();
    return std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
}

}  // namespace cpl
