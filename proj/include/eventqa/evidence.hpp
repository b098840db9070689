// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/oracles.hpp"

#include <string>
#include <vector>

namespace eventqa {

// Ordered label -> content entries handed to the reasoner.
class EvidenceMap {
 public:
  struct Entry {
    std::string label;
    std::vector<std::string> items;
    bool is_list = false;

    bool operator==(const Entry&) const = default;
  };

  // Both throw InvalidArgument on a duplicate label.
  void add(std::string label, std::string content);
  void add_list(std::string label, std::vector<std::string> items);

  bool contains(std::string_view label) const;
  const Entry* find(std::string_view label) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Text block for the reasoner prompt.
  std::string render() const;
  json to_json() const;

  bool operator==(const EvidenceMap&) const = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace eventqa
