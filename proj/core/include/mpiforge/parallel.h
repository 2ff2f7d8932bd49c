// Copyright 2026 The mpiforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MPIFORGE_PARALLEL_H_
#define MPIFORGE_PARALLEL_H_

#include <functional>

namespace mpiforge {

// Worker count used by ParallelFor. Reads MPIFORGE_THREADS (0 or unset means
// hardware concurrency).
int WorkerCount();

// Runs body(i) for i in [begin, end). Iterations must write disjoint outputs;
// results are then identical to a sequential loop.
void ParallelFor(int begin, int end, const std::function<void(int)>& body);

}  // namespace mpiforge

#endif  // MPIFORGE_PARALLEL_H_
