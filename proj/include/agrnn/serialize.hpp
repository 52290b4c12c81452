/*
 * Copyright 2026 The agrnn Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "agrnn/baselines.hpp"
#include "agrnn/selector.hpp"

namespace agrnn {

// Deterministic JSON documents (two-space indent, trailing newline). Every
// document carries "schema_version": 1 and a "kind" tag.
std::string selection_to_json(const SelectionResult& result);
std::string importance_to_json(const ImportanceReport& report);
std::string scores_to_json(const ScoreVector& scores,
                           const std::vector<std::size_t>& selected);
std::string cfs_to_json(const CfsResult& result,
                        const std::vector<std::string>& feature_names);

}  // namespace agrnn
