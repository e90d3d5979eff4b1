// Copyright 2026 the spdkit authors
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

#ifndef SPDKIT_SPDKIT_HPP_
#define SPDKIT_SPDKIT_HPP_

#include "spdkit/classifiers.hpp"
#include "spdkit/descriptors.hpp"
#include "spdkit/error.hpp"
#include "spdkit/harness.hpp"
#include "spdkit/image.hpp"
#include "spdkit/ingestion.hpp"
#include "spdkit/kernels.hpp"
#include "spdkit/matrix.hpp"
#include "spdkit/metrics.hpp"
#include "spdkit/rng.hpp"
#include "spdkit/serialization.hpp"
#include "spdkit/synth.hpp"

#endif  // SPDKIT_SPDKIT_HPP_
