// SPDX-License-Identifier: Apache-2.0
#include "eventqa/graph_io.hpp"

#include "eventqa/error.hpp"
#include "eventqa/text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <optional>

namespace eventqa {

namespace {

using ojson = nlohmann::ordered_json;

std::optional<std::size_t> ifind(std::string_view text, std::string_view needle,
                                 std::size_t from = 0) {
  if (needle.size() > text.size()) return std::nullopt;
  for (std::size_t i = from; i + needle.size() <= text.size(); ++i) {
    if (iequals(text.substr(i, needle.size()), needle)) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> irfind(std::string_view text, std::string_view needle,
                                  std::size_t before) {
  if (needle.size() > before) return std::nullopt;
  for (std::size_t i = before - needle.size() + 1; i-- > 0;) {
    if (iequals(text.substr(i, needle.size()), needle)) return i;
  }
  return std::nullopt;
}

struct Blocks {
  std::string_view events;     // text after the events header
  std::string_view relations;  // text after the relations header
};

Blocks locate_blocks(std::string_view text) {
  auto rel = ifind(text, kRelationsHeader);
  if (!rel) throw Error(ErrorCode::MissingBlock, "no \"Events-Events Relationships:\" header");
  auto ev = irfind(text, kEventsHeader, *rel);
  std::size_t events_end = *rel;
  if (!ev) {
    ev = ifind(text, kEventsHeader, *rel + kRelationsHeader.size());
    events_end = text.size();
  }
  if (!ev) throw Error(ErrorCode::MissingBlock, "no \"Events:\" header");
  std::size_t rel_end = text.size();
  if (*ev > *rel) rel_end = *ev;
  Blocks b;
  b.events = text.substr(*ev + kEventsHeader.size(), events_end - *ev - kEventsHeader.size());
  b.relations = text.substr(*rel + kRelationsHeader.size(),
                            rel_end - *rel - kRelationsHeader.size());
  return b;
}

// Block written with \" quoting, as in prompt listings embedded in code.
bool uses_escaped_quotes(std::string_view block) {
  auto q = block.find('"');
  return q != std::string_view::npos && q > 0 && block[q - 1] == '\\';
}

std::string unescape_quotes(std::string_view block) {
  std::string out;
  out.reserve(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (block[i] == '\\' && i + 1 < block.size() && block[i + 1] == '"') {
      out.push_back('"');
      ++i;
    } else {
      out.push_back(block[i]);
    }
  }
  return out;
}

// Returns the first balanced {...} (or [...]) object at the start of `block`.
std::string extract_object(std::string_view block, const char* which) {
  std::size_t start = 0;
  while (start < block.size() && std::isspace(static_cast<unsigned char>(block[start]))) ++start;
  if (start >= block.size() || (block[start] != '{' && block[start] != '[')) {
    throw Error(ErrorCode::MalformedObject, std::string(which) + " block does not start with '{'");
  }
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < block.size(); ++i) {
    char c = block[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      if (--depth == 0) return std::string(block.substr(start, i - start + 1));
    }
  }
  throw Error(ErrorCode::MalformedObject, std::string(which) + " block is not balanced");
}

std::size_t next_non_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

// Trailing commas and '.' used where ',' belongs, outside string literals.
std::string repair_json(std::string_view obj, std::vector<std::string>& warnings,
                        const char* which) {
  std::string out;
  out.reserve(obj.size());
  bool in_string = false;
  char last_significant = 0;
  bool dropped_comma = false;
  bool fixed_period = false;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    char c = obj[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < obj.size()) {
        out.push_back(obj[++i]);
      } else if (c == '"') {
        in_string = false;
        last_significant = '"';
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c == ',') {
      auto n = next_non_space(obj, i + 1);
      if (n < obj.size() && (obj[n] == '}' || obj[n] == ']')) {
        dropped_comma = true;
        continue;
      }
    }
    if (c == '.' && (last_significant == '"' || last_significant == ']' || last_significant == '}')) {
      auto n = next_non_space(obj, i + 1);
      if (n < obj.size() && obj[n] == '"') {
        fixed_period = true;
        c = ',';
      }
    }
    if (!std::isspace(static_cast<unsigned char>(c))) last_significant = c;
    out.push_back(c);
  }
  if (dropped_comma) warnings.push_back(std::string(which) + ": removed trailing comma");
  if (fixed_period) warnings.push_back(std::string(which) + ": replaced '.' separator with ','");
  return out;
}

ojson parse_block(std::string_view block, ParseMode mode, std::vector<std::string>& warnings,
                  const char* which) {
  std::string source;
  if (mode == ParseMode::Lenient && uses_escaped_quotes(block)) {
    warnings.push_back(std::string(which) + ": unescaped \\\" quoting");
    source = unescape_quotes(block);
  } else {
    source = std::string(block);
  }
  std::string obj = extract_object(source, which);
  if (mode == ParseMode::Lenient) obj = repair_json(obj, warnings, which);
  try {
    return ojson::parse(obj);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedObject, std::string(which) + ": " + e.what());
  }
}

std::string scalar_text(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<std::string> value_list(const ojson& v) {
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& item : v) {
      if (!item.is_null()) out.push_back(scalar_text(item));
    }
  } else if (!v.is_null()) {
    out.push_back(scalar_text(v));
  }
  return out;
}

bool is_empty_container(const ojson& v) {
  return v.is_null() || ((v.is_array() || v.is_object()) && v.empty());
}

class EventTable {
 public:
  std::vector<Event> events;

  std::optional<std::size_t> resolve(std::string_view name) const {
    std::string key = trim(name);
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].id.str() == key) return i;
    }
    std::optional<std::size_t> match;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (iequals(events[i].id.str(), key)) {
        if (match) return std::nullopt;  // ambiguous
        match = i;
      }
    }
    return match;
  }
};

}  // namespace

GraphParse parse_graph_response(std::string_view text, ParseMode mode) {
  GraphParse result;
  auto& warnings = result.warnings;
  auto blocks = locate_blocks(text);
  ojson events_json = parse_block(blocks.events, mode, warnings, "events");
  ojson relations_json = parse_block(blocks.relations, mode, warnings, "relationships");

  const bool strict = mode == ParseMode::Strict;
  if (!events_json.is_object() && !(events_json.is_array() && events_json.empty())) {
    throw Error(ErrorCode::MalformedObject, "events block is not an object");
  }
  if (!relations_json.is_object() && !(relations_json.is_array() && relations_json.empty())) {
    throw Error(ErrorCode::MalformedObject, "relationships block is not an object");
  }

  EventTable table;
  for (const auto& [key, value] : events_json.items()) {
    if (trim(key).empty()) {
      if (strict) throw Error(ErrorCode::MalformedObject, "event with empty name");
      warnings.push_back("events: skipped event with empty name");
      continue;
    }
    ArgList args;
    std::optional<std::string> description;
    if (value.is_object()) {
      for (const auto& [role, role_value] : value.items()) {
        args.emplace_back(role, value_list(role_value));
      }
    } else if (value.is_string() && !strict) {
      warnings.push_back("events: '" + key + "' has a bare string; used as description");
      description = value.get<std::string>();
    } else if (!is_empty_container(value)) {
      if (strict) throw Error(ErrorCode::MalformedObject, "event '" + key + "' is not an object");
      warnings.push_back("events: '" + key + "' is not an object; arguments dropped");
    }
    auto event = Event::make(EventId::parse(key), std::move(args), description);
    if (auto existing = table.resolve(event.id.str());
        existing && table.events[*existing].id == event.id) {
      if (strict) throw Error(ErrorCode::DuplicateEventId, event.id.str());
      warnings.push_back("events: duplicate event '" + event.id.str() + "' ignored");
      continue;
    }
    table.events.push_back(std::move(event));
  }

  auto endpoint = [&](std::string_view name, const char* role) -> std::optional<std::size_t> {
    if (auto pos = table.resolve(name)) return pos;
    if (strict) throw Error(ErrorCode::DanglingEdge, std::string(role) + " " + std::string(name));
    if (trim(name).empty()) {
      warnings.push_back("relationships: skipped empty endpoint");
      return std::nullopt;
    }
    warnings.push_back("relationships: materialized undeclared event '" + trim(name) + "'");
    table.events.push_back(Event::make(EventId::parse(name), {}));
    return table.events.size() - 1;
  };

  std::vector<std::tuple<std::size_t, EdgeKind, std::size_t>> raw_edges;
  for (const auto& [source_name, relations] : relations_json.items()) {
    if (is_empty_container(relations)) {
      if (!table.resolve(source_name) && !strict) endpoint(source_name, "source");
      continue;
    }
    if (!relations.is_object()) {
      if (strict) {
        throw Error(ErrorCode::MalformedObject, "relations of '" + source_name + "' not an object");
      }
      warnings.push_back("relationships: '" + source_name + "' is not an object; skipped");
      continue;
    }
    auto src = endpoint(source_name, "source");
    if (!src) continue;
    for (const auto& [kind_name, targets] : relations.items()) {
      auto kind = parse_edge_kind(kind_name);
      if (!kind) {
        if (strict) throw Error(ErrorCode::UnknownRelationKind, kind_name);
        warnings.push_back("relationships: skipped unknown relation kind '" + kind_name + "'");
        continue;
      }
      for (const auto& target_name : value_list(targets)) {
        auto dst = endpoint(target_name, "target");
        if (dst) raw_edges.emplace_back(*src, *kind, *dst);
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [s, k, d] : raw_edges) {
    edges.push_back(Edge{table.events[s].id, k, table.events[d].id});
  }
  result.graph = build_graph(std::move(table.events), edges);
  return result;
}

std::string serialize_graph(const EventGraph& g) {
  std::string out;
  out += kEventsHeader;
  out += "\n{";
  const auto& events = g.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    ojson body = ojson::object();
    for (const auto& [role, values] : e.args) body[role] = values;
    if (e.description != e.default_description()) body["description"] = e.description;
    out += i ? ",\n" : "\n";
    out += ojson(e.id.str()).dump() + ": " + body.dump();
  }
  out += events.empty() ? "}\n\n" : "\n}\n\n";

  out += kRelationsHeader;
  out += "\n{";
  for (std::size_t i = 0; i < events.size(); ++i) {
    ojson rel = ojson::object();
    for (auto kind : kAllEdgeKinds) {
      const auto& succ = g.neighbors(i, kind, true);
      if (succ.empty()) continue;
      ojson targets = ojson::array();
      for (auto n : succ) targets.push_back(events[n].id.str());
      rel[std::string(to_string(kind))] = std::move(targets);
    }
    out += i ? ",\n" : "\n";
    out += ojson(events[i].id.str()).dump() + ": " + rel.dump();
  }
  out += events.empty() ? "}\n" : "\n}\n";
  return out;
}

EventGraph merge_graphs(const EventGraph& base, const EventGraph& delta) {
  std::vector<Event> events = base.events();
  auto resolve = [&](const EventId& id) -> std::optional<std::size_t> {
    if (auto pos = base.position(id)) return pos;
    std::optional<std::size_t> match;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (iequals(events[i].id.str(), id.str())) {
        if (match) return std::nullopt;
        match = i;
      }
    }
    return match;
  };

  // Delta position -> merged position.
  std::vector<std::size_t> mapped(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const auto& incoming = delta.events()[i];
    if (auto pos = resolve(incoming.id)) {
      auto& target = events[*pos];
      for (const auto& [role, values] : incoming.args) {
        auto slot = std::find_if(target.args.begin(), target.args.end(),
                                 [&](const auto& entry) { return entry.first == role; });
        if (slot == target.args.end()) {
          target.args.emplace_back(role, values);
          continue;
        }
        for (const auto& v : values) {
          if (std::find(slot->second.begin(), slot->second.end(), v) == slot->second.end()) {
            slot->second.push_back(v);
          }
        }
      }
      mapped[i] = *pos;
    } else {
      events.push_back(incoming);
      mapped[i] = events.size() - 1;
    }
  }

  std::vector<Edge> edges = base.edges();
  for (std::size_t i = 0; i < delta.size(); ++i) {
    for (auto kind : kAllEdgeKinds) {
      for (auto n : delta.neighbors(i, kind, true)) {
        edges.push_back(Edge{events[mapped[i]].id, kind, events[mapped[n]].id});
      }
    }
  }
  return build_graph(std::move(events), edges);
}

}  // namespace eventqa
