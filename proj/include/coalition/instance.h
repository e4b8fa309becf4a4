// Copyright 2026 The Coalition Sharing Authors
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

#ifndef COALITION_INSTANCE_H_
#define COALITION_INSTANCE_H_

#include <memory>
#include <string>

#include "coalition/cost_oracle.h"
#include "json.hpp"

namespace coalition {

// A game: n participants, capacity k and a cost oracle.
struct Instance {
  std::string id;
  int n = 0;
  int k = 0;
  std::shared_ptr<const CostOracle> oracle;

  // Null unless the oracle carries facility usage.
  const ResourceOracle* resources() const { return dynamic_cast<const ResourceOracle*>(oracle.get()); }
};

// Throws ValidationError when k < 1. n is taken from the oracle.
Instance make_instance(std::string id, int k, std::shared_ptr<const CostOracle> oracle);

// Same game with truncated costs.
Instance truncated(const Instance& instance);

// JSON layout:
//   {"id": str?, "n": int, "k": int, "oracle": {"kind": ..., ...}}
// Kinds: table, hotel, taxi, pass, usage-table, usage-groups.
// Throws ParseError naming the offending field.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& instance);

Instance parse_instance(const std::string& text);
// Two-space indented JSON with a trailing newline.
std::string dump_instance(const Instance& instance);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

// Reads a whole file; throws ArgumentError when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace coalition

#endif  // COALITION_INSTANCE_H_
