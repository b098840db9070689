// SPDX-License-Identifier: Apache-2.0
#include "eventqa/evidence.hpp"

#include "eventqa/error.hpp"

namespace eventqa {

void EvidenceMap::add(std::string label, std::string content) {
  if (contains(label)) throw Error(ErrorCode::InvalidArgument, "duplicate evidence label " + label);
  entries_.push_back({std::move(label), {std::move(content)}, false});
}

void EvidenceMap::add_list(std::string label, std::vector<std::string> items) {
  if (contains(label)) throw Error(ErrorCode::InvalidArgument, "duplicate evidence label " + label);
  entries_.push_back({std::move(label), std::move(items), true});
}

bool EvidenceMap::contains(std::string_view label) const { return find(label) != nullptr; }

const EvidenceMap::Entry* EvidenceMap::find(std::string_view label) const {
  for (const auto& e : entries_)
    if (e.label == label) return &e;
  return nullptr;
}

std::string EvidenceMap::render() const {
  if (entries_.empty()) return "(no information)";
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += '\n';
    out += "- " + e.label + ":";
    if (!e.is_list) {
      out += ' ' + e.items.front();
      continue;
    }
    if (e.items.empty()) out += " (none)";
    for (const auto& item : e.items) out += "\n  * " + item;
  }
  return out;
}

json EvidenceMap::to_json() const {
  json out = json::array();
  for (const auto& e : entries_) {
    json content = e.is_list ? json(e.items) : json(e.items.front());
    out.push_back({{"label", e.label}, {"content", std::move(content)}});
  }
  return out;
}

}  // namespace eventqa
