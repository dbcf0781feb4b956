// Copyright 2026 The opws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPWS_PARALLEL_HPP_
#define OPWS_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace opws {

/// Worker count used when a call does not specify one. Initialized from the
/// OPWS_THREADS environment variable, falling back to 1.
unsigned default_threads();
void set_default_threads(unsigned n);

/// Runs body(begin, end, worker) over [0, n) split into `threads` contiguous
/// chunks. Chunk boundaries depend only on n and threads. threads == 0 means
/// default_threads().
void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& body);

}  // namespace opws

#endif  // OPWS_PARALLEL_HPP_
