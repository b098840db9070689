// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eventqa {

// A placeholder is `{name}` with name in [a-z_][a-z0-9_]*. `{{name}}` renders
// as a literal `{name}`. Any other brace is plain text.
struct PromptTemplate {
  std::string id;
  std::string system;  // empty when the oracle takes a single user prompt
  std::string body;

  std::set<std::string> required_slots() const;
};

using Slots = std::map<std::string, std::string>;

// Placeholder names a template may use.
const std::set<std::string>& known_placeholders();

// Substitutes every placeholder once; substituted text is never rescanned.
std::string render_prompt(const PromptTemplate& t, const Slots& slots);

// "A. x B. y C. z D. w E. v"
std::string format_choices(const std::array<std::string, 5>& choices);

// Slots {question, choices, a0..a4} for a multiple-choice question.
Slots question_slots(std::string_view question, const std::array<std::string, 5>& choices);

namespace templates {

const PromptTemplate& captioner();
const PromptTemplate& graph_generator();
const PromptTemplate& denser_graph();
const PromptTemplate& denser_caption();
const PromptTemplate& simple_query();
const PromptTemplate& reasoner();
const PromptTemplate& new_info();
const PromptTemplate& multimodal();
const PromptTemplate& plan_generator();

const std::vector<const PromptTemplate*>& all();
const PromptTemplate& by_id(std::string_view id);

}  // namespace templates
}  // namespace eventqa
