// SPDX-License-Identifier: Apache-2.0
#include "eventqa/prompts.hpp"

#include "eventqa/error.hpp"

namespace eventqa {

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// Length of an identifier starting at `pos`, 0 when none.
std::size_t ident_length(std::string_view s, std::size_t pos) {
  if (pos >= s.size() || !is_ident_start(s[pos])) return 0;
  std::size_t end = pos + 1;
  while (end < s.size() && is_ident_char(s[end])) ++end;
  return end - pos;
}

struct Piece {
  bool placeholder;
  std::string text;  // literal text or placeholder name
};

std::vector<Piece> tokenize(std::string_view body) {
  std::vector<Piece> pieces;
  std::string literal;
  std::size_t i = 0;
  while (i < body.size()) {
    if (body[i] == '{') {
      if (i + 1 < body.size() && body[i + 1] == '{') {
        std::size_t n = ident_length(body, i + 2);
        if (n > 0 && body.substr(i + 2 + n, 2) == "}}") {
          literal += '{';
          literal.append(body.substr(i + 2, n));
          literal += '}';
          i += n + 4;
          continue;
        }
      }
      std::size_t n = ident_length(body, i + 1);
      if (n > 0 && i + 1 + n < body.size() && body[i + 1 + n] == '}') {
        if (!literal.empty()) pieces.push_back({false, std::move(literal)});
        literal.clear();
        pieces.push_back({true, std::string(body.substr(i + 1, n))});
        i += n + 2;
        continue;
      }
    }
    literal += body[i++];
  }
  if (!literal.empty()) pieces.push_back({false, std::move(literal)});
  return pieces;
}

const char* const kCaptioner = R"PROMPT(You will be given a video. You need to describe the events in the video. Start your description with the first event happening in the video, describe all the events in chronological, causal, or hierarchical order, and end your description with the last event in the video. In your description, indicate temporal relations of events using keywords such as "after" "then" "meanwhile" etc.; indicate causal relations of events using key words such as "causing" etc.; indicate hierarchical relations of events using keywords such as "by" "with" etc.
When referring to entities, always use descriptive keywords representing their characteristics, such as "white Honda Civic", "man in black suit", "chair on the left", etc. Make sure the references to the entities are consistent, for example, if you mentioned a "black car with broken window", refer to it with the same name ("black car with broken window") everywhere else you mention it. For entities mentioned in the question, reference them using the same name everywhere else, for example, if the question mentions "man in black pants", use "man in black pants" to reference that entity.
Your description will be used to answer the following question: {question}? Choices: A. {a0} B. {a1} C. {a2} D. {a3} E. {a4}. When describing the video, do not answer the question, only describe the video in detail.
Example description: Two boxers, one in gold-white shorts, and the other one in orange-white shorts, facing each other in a boxing ring; meanwhile, the referee is observing the fight inside the ring; at the same time, a large number of audiences are watching. During the fight, the boxer in gold-white shorts throws a left jab, knocking down the opponent in orange-white shorts. After that, the referee counts to ten while the boxer in gold-white shorts raises his hand in victory; at the same time, the crowd cheers and applauds after the knockout. The referee announced the victory the boxer in gold-white victorious after he counted to ten; after that the boxer in gold-white shorts goes to a big screen and celebrates. Meanwhile, the referee and the boxer's cornermen check the well-being of the boxer in orange-white shorts.)PROMPT";

const char* const kGraphInstructions = R"PROMPT(Given a paragraph, please extract all events and its argument roles in the following format:
{<event_1>: {<argument_role_type_1>: [argument_role_1_1, argument_role_1_2, ...], <argument_role_type_2>: [argument_role_2_1, argument_role_2_2, ... ] , ....},
 <event_2>: {<argument_role_type_1>: [argument_role_1_1, argument_role_1_2, ...], <argument_role_type_2>: [argument_role_2_1,argument_role_2_2, ...], ...},
...}

Coreference of argument roles with different names should follow the name of the first occurrence of the argument. For example, "blue car driving left" and "blue car turning left" both should be named "driving". 

Coreference of events with different names should follow the name of the first occurrence of the argument. For example, "blue car" and "blue vehicle" both should be named "blue car". 

Collective arguments that are should maintain its finest grained form in the text. For example, if "three cars" containing "red car", "blue car", and "green car", then reference the three cars as ["red car", "blue car", "green car"] in the graph.

Differentiate events with the same name with indices. For example: "man in blue shirt is eating pasta" and "woman is eating broccoli and rice" should be "{"eating_0": "{"agent":["man in white"], "item":["pasta"]}, "eating_1": {"agent":["woman"], "item":["rice","broccoli"]}}, this should also be reflected in the event graph.

In addition, extract all possible event-event relationships. The relationships should be from among causal, temporal and hierarchical relationships and the relationship should be directed.

The format should be:
{<event_1>: {causal: [<event_4>, <event_5>], temporal: [<event_2>], hierarchical: [<event_7>, <event_8>]},
<event_2>: {causal:[<event_1>]},
<event_3>:{},
....}

Causal Definition: An event A is causally related to event B if A was the cause of event B. For example: Black car hits the man in white. The man in white falls. Event relation: {"Hit": {"causal":["Fall"]}}.

Temporal Definition: An event A is temporally related to event B if A started before B did.


Hierarchical Definition: An event A is hierarchically related to event B if B occurred spatiotemporally within A. Example: The man in white is fighting the person in monster costume. The man in white throws a punch. Event relation: {"Fight": {"hierarchical":["Throw"]}}. Example: The waiter is serving the food by passing a tray. Event relation: {"Serve": {"hierarchical": ["Pass"]}}. Example: The soldier is holding his gun while patrolling. Event relation: {"Patrol": {"hierarchical": ["Hold"]}}.

In addition, you will also be given a question related to the text. You should focus on the events related to the question when generating the graph.

Example Text:
People are marching on a street during a protest. Police fired tear gas to disperse the crowd.

Example Question: Why did the police fired the tear gas?

Example Response:
Events:
{ 
"Protest": {"agent": ["people"], "place": "street", "description": "People are protesting on the street."},
"Marching": {"agent": ["people"], "place": "street", "description": "People are marching on the street."},
"Fired": {"agent": ["police"], "item": "tear gas". "description": "Police fired tear gas."},
"Disperse": {"item": ["crowd"], "description": "Crowd dispersed."}
}

Events-Events Relationships:
{
"Protest": {"hierarchical": ["marching", "fired", "disperse"]},
"Marching": {"temporal":["Fired"]},
"Fired": {"causal":["disperse"], "temporal":["disperse"]},
"Disperse": {}
}

Example Question: Who came after the black car in the middle turned right?

Example Text:
Three cars are waiting at a traffic light. When it turned green, the red one went left, the black one on the right went right, and the middle black one went straight. After the black car turned right, a red tow truck drove through the road.

Example Response:
Events:
{ 
"Waiting": {"agent": ["red car", "black car on the right", "middle black car"], "place": ["traffic light"], "description": "The red car, the black car on the right, and the black car in the middle are waiting for traffic light."},
"Turned": {"agent": ["traffic light"], "color": ["green"], "description": "The traffic light turned green."},
"Went_0": {"agent": ["red car"], "direction": ["left"], "description": "The red car turned left."},
"Went_1": {"agent": ["black car on the right"], "direction": ["right"], "description": "The black car on the right turned right."},
"Went_2": {"agent": ["middle black car"], "direction": ["straight"], "description": "The middle black car turned straight."},
"Drive": {"agent": ["red tow truck"], "place":["road"], "description": "The red tow truck drove through the road."}
}


Events-Events Relationships:
{
"Waiting": {"temporal": ["Turned"]},
"Turned": {"causal":["Went_0", "Went_1", "Went_2", "Drive"], "temporal": ["Went_0", "Went_1", "Went_2"]},
"Went_0": {"temporal":["Drive"]},
"Went_1": {"temporal":["Drive"]},
"Went_2": {"temporal":["Drive"]},
"Drive": {}
}

Question: What made the crowd applaud?

Example Text: 

Two boxers, one in gold-white shorts, and the other one in orange-white shorts, facing each other in a boxing ring. The boxer in gold-white shorts throws a left jab, knocking down the opponent in orange-white shorts. The referee counts to ten as the boxer in gold-white shorts raises his hand in victory. The crowd cheers and applauds. The boxer in gold-white shorts goes to a big screen and celebrates while the referee and the boxer's cornermen check the well-being of the boxer in orange-white shorts.

Example Response:

Events:
{
"Facing": {"agent": ["boxer in gold-white shorts", "boxer in orange-white shorts"], "direction":["each other"], "location": ["ring"], "description": "Boxer in gold-white shorts and boxer in orange-white shorts are facing each other in the ring."},
"Throw": {"agent": ["boxer in gold-white shorts"], "action": ["left jab"], "description":"The boxer in gold-white shorts throws a left jab"},
"Knock down": {"agent": ["boxer in gold-white shorts"], "target": ["boxer in orange-white shorts"], "description": "The boxer in gold-white shorts knocks down the boxer in orange-white shorts"},
"Count to ten": {"agent":["refree"], "description": "The refree counts to ten"},
"Raise": {"agent": ["boxer in gold-white shorts"], "item":["hands"], "description": "Boxer in gold-white shorts raises his hands in victory."},
"Applaud": {"agent": ["the crowd"], "description": "The crowd applauds."},
"Go": {"agent": ["boxer in gold-white shorts"], "destination":["big screen"], "description": "Boxer in gold-white shorts goes to the big screen"},
"Celebrate": {"agent": ["boxer in gold-white shorts"], "description": "Boxer in gold-white shorts celebrates."},
"Check": {"agent": ["referee", "boxer's cornermen"], "target":["boxer in orange-white shorts"], "description": "the referee and the boxer's cornermen check the well-being of the boxer in orange-white shorts."}
}

Events-Events Relationships:

{
"Facing": {"temporal": ["Throw"]},
"Throw": {"causal": ["Knock down"]},

"Knock down": {"causal": ["Count to ten", "Raise", "Check", "Applaud"], "temporal": ["Count to ten", "Raise", "Applaud"]},
"Count to ten": {"temporal":["Go", "Check"]},
"Raise": {"temporal": ["Go", "Check"]},
"Applaud": {"temporal": ["Go", "Check"]},
"Go": {"temporal": ["Celebrate"]},
"Celebrate": [],
"Check": []
}
Given Text: 
)PROMPT";

const char* const kGraphQuery = R"PROMPT({caption}

Question: {question}? {choices}

Response:
Events:
)PROMPT";

const char* const kDenserGraphTail =
    "\n Paragraph: {caption} \n Graph: {original_graph} \n You need to gennerate a new graph "
    "based on the original graph that has additional events and/or relations that addresses "
    "the following concern: {request}. The new graph will be used to answer the following "
    "question Question: {question}? {choices} \n Response: \n Events: \n";

const char* const kDenserCaption = R"PROMPT(You will be given a video and a request. The request is made to ask for specific details the provided description is missing. You need to generate a new description that addresses the requested details. 
 In your description, indicate temporal, causal, or hierarchical relations of events clearly using keywords such as "at the same time", "mean while", "after", "causing", "due to", etc.
 When referring to entities, always use descriptive keywords representing their characteristics, such as "white Honda Civic", "woman in purple dress", "man in black suit", "chair on the left and chair on the right", etc. Make sure the references to the entities are consistent, for example, if you mentioned a "black car with broken window", refer to it with the same name ("black car with broken window") everywhere else you mention it. When making the description, do not answer the question.
 Now, generate a new text addressing the concerns stated in the request: {request}:)PROMPT";

const char* const kSimpleQuerySystem =
    R"PROMPT(You will be given a description to an event and a simple question. Answer the question with "yes" or "no" based on the information provided. Do not generate anything else besides "yes" or "no".)PROMPT";

const char* const kSimpleQuery = R"PROMPT(Event: {event_description}.
 Question: {query}. Answer the question with "yes" or "no" only.
 Your answer:
)PROMPT";

const char* const kReasonerSystem =
    R"PROMPT(You will be given a set of information describing events in a video and a multiple choice question. You need to answer the question with the information from the paragraph. Chose one and only one of the answer from the five choices by returning the corresponding letter from A-E. You must choose one as your final answer, or make an educated guess. If the information provided is insufficient to answer the question, you must: First, guess an answer by choosing one of the choices from A, B, C, D, or E. Then, indicate you are not sure by saying "I am not sure". Finally, explain what additional information you need, and explain what details or events you will focus on to obtain the information if you are watching the video. Only say you are not sure when the events do not mention what is being asked.)PROMPT";

const char* const kReasoner = R"PROMPT(Question: {question}? Choices: {choices}
Information:
{evidence}
)PROMPT";

const char* const kNewInfo = R"PROMPT(You will be given a video, a question, and a textual request generated by a language model asking for additional information to answer the question. You should watch the video, read the question and the request, then generate a textual description of the video focusing on what is being asked in the request. You should not try to determine if it answered correctly, nor answer the question directly. You should generate information addressing what the request is asking for, additionally you can also generate information helpful for answering the question. 
 Question: {question} 
 Choices: {choices} 
 Request: {concern}. 
 Your response: )PROMPT";

const char* const kMultimodal = R"PROMPT(You will be given a set of multimodal information as a multimodal graph, a question, and a set of choices. You need to answer the question with the multimodal graph by selecting from one of the choices, represented by one letter. Your answer must contain a single letter only without any additional text. 
 Question: {question} Choices: {choices}
 Multimodal graph:
{multimodal_graph})PROMPT";

const char* const kPlanGenerator = R"PROMPT(Given an event graph and a multiple choice question, write a plan in the plan language below that gathers the information needed to answer the question.

Statements:
  x = find_node("name", {"role": "value", ...})   # event node by name; role values are hints
  x = children(n) | parent(n) | after(n) | before(n) | caused_by(n) | resulted_in(n)
      # children: events contained by n; parent: events containing n;
      # after / before: events that happened after / before n;
      # caused_by: events that happened due to n; resulted_in: events that resulted in n
  x = union(a, b, ...)   x = count(a)   x = {}
  foreach e in nodes { ... }           # every event in the graph
  foreach v in args(e) { ... }         # every argument value of event e
  when ask("yes-or-no question about {{value}}") collect v into s   # only inside foreach
  ensure nonempty(a, b, ...)
    else graph "what the denser graph must add"
    caption "what the denser caption must describe"
    retries 3
  evidence "label" = x
  answer retries 3                     # always the last statement

Variables are lowercase and assigned once. When you are looking for events by name, use the exact name and include the index if it is present in the graph (e.g. Run_0, Eat_1).

Example Question: How many cats are there in the video? A. one B. two C. three D. four E. five
cats = {}
foreach event in nodes {
  foreach value in args(event) {
    when ask("Is {{value}} a cat?") collect value into cats
  }
}
evidence "all the cats in the video" = cats
answer retries 3

Example Question: Where is the video taking place? A. Road B. House C. Dog D. Dining room E. street
located = {}
foreach event in nodes {
  when ask("Does this event mention any location, or does it hint the location where the event is happening?") collect event into located
}
evidence "the events mentioning location" = located
answer retries 3

Example Question: What did the man in blue do after driving the black car?
node = find_node("driving", {"agent": "man in blue", "item": "black car"})
after_events = after(node)
evidence "event" = node
evidence "events after man in blue driving black car" = after_events
answer retries 3

Example Question: how is the man in blue feeling after standing up from the chair? A. Happy B. Sad C. Angry D. Neutral E. Surprised
node = find_node("stand up", {"agent": "man in blue", "item": "chair"})
after_events = after(node)
children_events = children(node)
caused = caused_by(node)
ensure nonempty(after_events, children_events, caused)
  else graph "Read the question and the paragraph, and find relations and/or events in the paragraph that are related to the event the man in blue standing up. Use these events to generate a new graph, such that the new graph has at least one of the following for question answering: the event after \"stand up\", what happens after the man in blue standing up, if you find these events, create these new events and draw the event relation \"stand up\": {\"temporal\":[\"<event>\", ...]} for these events."
  caption "Watch the video, describe what happens after the man in blue standing up; is he doing while standing up; what event happened due to the man standing up; and everything else that is helpful in answering the question."
  retries 3
evidence "event" = node
evidence "events after the man in blue standing up" = after_events
evidence "events containing the man in blue standing up" = children_events
evidence "events caused by the man in blue standing up" = caused
answer retries 3

For the provided question and graph below, please generate a plan to solve it. Only generate the plan, do not generate anything else.
Question: {question}? {choices}
Graph:
{original_graph}
Plan:
)PROMPT";

PromptTemplate make(std::string id, std::string system, std::string body) {
  return PromptTemplate{std::move(id), std::move(system), std::move(body)};
}

}  // namespace

std::set<std::string> PromptTemplate::required_slots() const {
  std::set<std::string> names;
  for (const auto& piece : tokenize(body))
    if (piece.placeholder) names.insert(piece.text);
  return names;
}

const std::set<std::string>& known_placeholders() {
  static const std::set<std::string> names = {
      "question", "a0",    "a1",          "a2",
      "a3",       "a4",    "request",     "concern",
      "choices",  "caption", "original_graph", "event_description",
      "query",    "evidence", "multimodal_graph"};
  return names;
}

std::string render_prompt(const PromptTemplate& t, const Slots& slots) {
  std::string out;
  out.reserve(t.body.size());
  for (const auto& piece : tokenize(t.body)) {
    if (!piece.placeholder) {
      out += piece.text;
      continue;
    }
    if (!known_placeholders().count(piece.text))
      throw Error(ErrorCode::UnknownPlaceholder, t.id + ": {" + piece.text + "}");
    auto it = slots.find(piece.text);
    if (it == slots.end())
      throw Error(ErrorCode::MissingSlot, t.id + ": {" + piece.text + "}");
    out += it->second;
  }
  return out;
}

std::string format_choices(const std::array<std::string, 5>& choices) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i) out += ' ';
    out += static_cast<char>('A' + i);
    out += ". ";
    out += choices[i];
  }
  return out;
}

Slots question_slots(std::string_view question, const std::array<std::string, 5>& choices) {
  Slots slots{{"question", std::string(question)}, {"choices", format_choices(choices)}};
  for (std::size_t i = 0; i < choices.size(); ++i) slots["a" + std::to_string(i)] = choices[i];
  return slots;
}

namespace templates {

const PromptTemplate& captioner() {
  static const PromptTemplate t = make("captioner", "", kCaptioner);
  return t;
}

const PromptTemplate& graph_generator() {
  static const PromptTemplate t =
      make("graph_generator", "", std::string(kGraphInstructions) + kGraphQuery);
  return t;
}

const PromptTemplate& denser_graph() {
  static const PromptTemplate t =
      make("denser_graph", "", std::string(kGraphInstructions) + kDenserGraphTail);
  return t;
}

const PromptTemplate& denser_caption() {
  static const PromptTemplate t = make("denser_caption", "", kDenserCaption);
  return t;
}

const PromptTemplate& simple_query() {
  static const PromptTemplate t = make("simple_query", kSimpleQuerySystem, kSimpleQuery);
  return t;
}

const PromptTemplate& reasoner() {
  static const PromptTemplate t = make("reasoner", kReasonerSystem, kReasoner);
  return t;
}

const PromptTemplate& new_info() {
  static const PromptTemplate t = make("new_info", "", kNewInfo);
  return t;
}

const PromptTemplate& multimodal() {
  static const PromptTemplate t = make("multimodal", "", kMultimodal);
  return t;
}

const PromptTemplate& plan_generator() {
  static const PromptTemplate t = make("plan_generator", "", kPlanGenerator);
  return t;
}

const std::vector<const PromptTemplate*>& all() {
  static const std::vector<const PromptTemplate*> list = {
      &captioner(), &graph_generator(), &denser_graph(), &denser_caption(), &simple_query(),
      &reasoner(),  &new_info(),        &multimodal(),   &plan_generator()};
  return list;
}

const PromptTemplate& by_id(std::string_view id) {
  for (const auto* t : all())
    if (t->id == id) return *t;
  throw Error(ErrorCode::InvalidArgument, "no template named " + std::string(id));
}

}  // namespace templates
}  // namespace eventqa
