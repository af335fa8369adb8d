#include "dialcomp/registry.hpp"

namespace dialcomp {

namespace {

TaskSpec make(std::string name, TaskCategory category, OutputKind kind,
              std::vector<FieldSpec> fields, OptionStyle style,
              std::string leadin, std::vector<std::string> definitions,
              std::vector<std::string> prompts,
              std::vector<std::string> metrics) {
  TaskSpec spec;
  spec.name = std::move(name);
  spec.category = category;
  spec.output_kind = kind;
  spec.required_fields = std::move(fields);
  spec.option_style_default = style;
  spec.options_leadin = std::move(leadin);
  spec.definitions = std::move(definitions);
  spec.prompts = std::move(prompts);
  spec.metrics = std::move(metrics);
  return spec;
}

}  // namespace

Registry builtin_registry() {
  Registry r;

  // -- classification ------------------------------------------------------

  r.add(make(
      "intent classification", TaskCategory::classification,
      OutputKind::class_label, {}, OptionStyle::name_list,
      "The possible intents are:",
      {
          "What is the intent of the last utterance in the conversation?",
          "Read the conversation and identify the intent expressed by the "
          "final utterance.",
          "You will see a dialogue and a list of intents. Decide which "
          "intent the speaker has.",
          "Classify the intent of the user's request in the conversation "
          "below.",
      },
      {
          "The best option is",
          "The intent is",
          "Which intent fits the conversation best?",
      },
      {"accuracy"}));

  r.add(make(
      "relation classification", TaskCategory::classification,
      OutputKind::class_label, {}, OptionStyle::name_list,
      "The possible relations are:",
      {
          "Identify the relation between the two speakers in the "
          "conversation.",
          "You will read a dialogue between two people. Determine the "
          "relation that holds between them.",
          "Given the conversation, classify the relationship between "
          "speaker A and speaker B.",
      },
      {
          "The relation between A and B is",
          "The best option is",
          "Which relation holds between the speakers?",
      },
      {"accuracy"}));

  r.add(make(
      "dialfact classification", TaskCategory::classification,
      OutputKind::class_label, {{"RESPONSE", "[RESPONSE]"}},
      OptionStyle::name_list, "The possible classes are:",
      {
          "Decide whether the evidence in the conversation supports the "
          "response, refutes it, or does not give enough information.",
          "Given a conversation and a response, judge how the response "
          "relates to the evidence.",
          "Classify the response against the conversation it replies to.",
      },
      {
          "Choose the most plausible class.",
          "The predicted class is",
          "The best option is",
      },
      {"accuracy"}));

  // -- safety ---------------------------------------------------------------

  r.add(make(
      "toxicity classification", TaskCategory::safety, OutputKind::class_label,
      {{"RESPONSE", "[RESPONSE]"}}, OptionStyle::name_list,
      "The answer choices are:",
      {
          "Decide if the provided response is toxic given the conversation.",
          "You will be shown a dialogue and a response. Determine whether "
          "the response contains toxic language.",
          "Judge whether the final response is offensive or harmful in the "
          "context of the conversation.",
      },
      {
          "Is the response toxic?",
          "The answer is",
          "The best option is",
      },
      {"accuracy"}));

  // -- miscellaneous --------------------------------------------------------

  r.add(make(
      "act classification", TaskCategory::miscellaneous,
      OutputKind::class_label, {}, OptionStyle::name_list,
      "The possible acts are:",
      {
          "Identify the dialogue act of the last utterance.",
          "Given the conversation, classify the act performed by the final "
          "utterance.",
          "Choose the dialogue act that best describes the last turn.",
      },
      {
          "The dialog act is",
          "The best option is",
          "Which act fits the last utterance?",
      },
      {"accuracy"}));

  // -- evaluation -----------------------------------------------------------

  r.add(make(
      "answer selection", TaskCategory::evaluation, OutputKind::class_label,
      {{"QUERY", ""}}, OptionStyle::name_list, "The candidate answers are:",
      {
          "Answer the question about the conversation by choosing from the "
          "candidate answers.",
          "You will read a dialogue and a question. Pick the correct answer "
          "from the options.",
          "Select the answer that the conversation supports.",
      },
      {
          "The answer to \"{QUERY}\" is",
          "{QUERY} The best option is",
          "What is the answer to: {QUERY}",
      },
      {"accuracy"}));

  r.add(make(
      "eval selection", TaskCategory::evaluation, OutputKind::index_label, {},
      OptionStyle::indexed_list, "The candidate responses are:",
      {
          "Choose the response that is most relevant to the conversation.",
          "Given the dialogue, select the best next response among the "
          "candidates.",
          "Pick the most coherent continuation of the conversation.",
      },
      {
          "The best response is option",
          "The best option is",
          "Which candidate fits the context best?",
      },
      {"accuracy"}));

  r.add(make(
      "eval relevance", TaskCategory::evaluation, OutputKind::class_label,
      {{"RESPONSE", "[RESPONSE]"}}, OptionStyle::name_list,
      "The answer choices are:",
      {
          "Decide if the response is relevant to the conversation.",
          "Given a dialogue and a candidate response, judge whether the "
          "response fits the context.",
          "You will see a conversation and a response. Say yes if the "
          "response is contextual, otherwise say no.",
      },
      {
          "Is the response relevant to the context?",
          "Is the response contextual?",
          "The answer is",
      },
      {"spearman"}));

  // -- generation -----------------------------------------------------------

  r.add(make(
      "knowledge grounded generation", TaskCategory::generation,
      OutputKind::free_text, {{"KNOWLEDGE", "[KNOWLEDGE]"}},
      OptionStyle::none, "",
      {
          "Generate a response using the provided background knowledge.",
          "Use the knowledge text to write the next response in the "
          "conversation.",
          "Ground your reply in the given document and continue the "
          "dialogue.",
      },
      {
          "Given this context and knowledge, the response is",
          "The response grounded in the knowledge is",
          "A good response based on the knowledge is",
      },
      {"bleu2", "rouge_l", "knowledge_f1"}));

  r.add(make(
      "begins with generation", TaskCategory::generation,
      OutputKind::free_text, {{"INITIAL PHRASE", "[INITIAL PHRASE]"}},
      OptionStyle::none, "",
      {
          "Generate a response that starts with the provided initial phrase.",
          "Write the next turn of the conversation beginning with the given "
          "phrase.",
          "Continue the dialogue with a response that opens with the initial "
          "phrase.",
      },
      {
          "Given this context, a response which starts with the given "
          "initial phrase is",
          "The response beginning with the initial phrase is",
          "The response is",
      },
      {"bleu2", "rouge_l", "begins_with_accuracy"}));

  r.add(make(
      "ends with generation", TaskCategory::generation, OutputKind::free_text,
      {{"FINAL PHRASE", "[FINAL PHRASE]"}}, OptionStyle::none, "",
      {
          "Generate a response that ends with the provided final phrase.",
          "Write a reply whose last words are the given final phrase.",
          "Continue the conversation so that your response finishes with the "
          "final phrase.",
      },
      {
          "Given this context and final phrase, the response is",
          "The response ending with the final phrase is",
          "The response is",
      },
      {"bleu2", "rouge_l"}));

  r.add(make(
      "keyword controlled generation", TaskCategory::generation,
      OutputKind::free_text, {{"KEYWORDS", "[KEYWORDS]"}}, OptionStyle::none,
      "",
      {
          "Generate a response that contains the provided keywords.",
          "Write the next response using all of the given keywords.",
          "Continue the dialogue and include the keywords in your reply.",
      },
      {
          "Here is a response which contains the given keywords",
          "A response containing the keywords is",
          "The response is",
      },
      {"bleu2", "rouge_l"}));

  r.add(make(
      "emotion grounded generation", TaskCategory::generation,
      OutputKind::free_text, {{"EMOTION", "[EMOTION]"}}, OptionStyle::none, "",
      {
          "Generate a response that expresses the given emotion.",
          "Write the next turn of the conversation reflecting the provided "
          "emotion.",
          "Continue the dialogue with a reply grounded in the emotion label.",
      },
      {
          "Given the context and emotion, the response is",
          "An appropriate response with this emotion is",
          "The response is",
      },
      {"bleu2", "rouge_l"}));

  r.add(make(
      "slot value generation", TaskCategory::generation, OutputKind::free_text,
      {{"SLOT", ""}}, OptionStyle::none, "",
      {
          "Find the value of the requested slot in the conversation.",
          "Extract the value for the given slot from the dialogue.",
          "You will be asked for a slot value. Answer using the "
          "conversation.",
      },
      {
          "What is the value of slot: {SLOT} in the response?",
          "The value of slot {SLOT} is",
          "Given the dialog, the value of {SLOT} is",
      },
      {"accuracy"}));

  r.add(make(
      "dialogue state generation", TaskCategory::generation,
      OutputKind::free_text, {}, OptionStyle::none, "",
      {
          "Generate the belief state of the conversation.",
          "Summarize the dialogue state as slot and value pairs.",
          "Track the user's goals and output the current dialogue state.",
      },
      {
          "What is the belief state?",
          "The belief state is",
          "The dialogue state is",
      },
      {"accuracy"}));

  r.add(make(
      "summarization", TaskCategory::generation, OutputKind::free_text, {},
      OptionStyle::none, "",
      {
          "Return a summary of the provided conversation.",
          "Write a short summary of the dialogue.",
          "Condense the conversation into a brief summary.",
      },
      {
          "Given this dialog context, its summary is the following:",
          "The summary is",
          "A short summary of the conversation is",
      },
      {"bleu2", "rouge_l"}));

  // -- edit -------------------------------------------------------------------

  r.add(make(
      "edit generation", TaskCategory::edit, OutputKind::free_text,
      {{"RESPONSE", "[RESPONSE]"}}, OptionStyle::none, "",
      {
          "Modify the provided response into a response that is fluent and "
          "coherent to the dialogue context.",
          "The given response is corrupted. Edit it into a coherent reply to "
          "the conversation.",
          "Rewrite the provided response so that it fits the dialogue.",
      },
      {
          "Given this context and response provided, the edited response is",
          "The edited response is",
          "A coherent version of the response is",
      },
      {"bleu2", "rouge_l"}));

  // -- pretraining ------------------------------------------------------------

  r.add(make(
      "fill missing utterance", TaskCategory::pretraining,
      OutputKind::free_text, {}, OptionStyle::none, "",
      {
          "One utterance in the conversation has been masked. Generate the "
          "missing utterance.",
          "Recover the masked utterance in the dialogue.",
          "An utterance is hidden behind a mask token. Produce the utterance "
          "that belongs there.",
      },
      {
          "Here is the missing utterance that can take the place of the "
          "mask:",
          "The missing utterance is",
          "Generate the utterance that fills the masked slot.",
      },
      {"bleu2", "rouge_l"}));

  r.add(make(
      "find missing utterance", TaskCategory::pretraining,
      OutputKind::free_text, {}, OptionStyle::none, "",
      {
          "One utterance has been masked in the conversation. Identify the "
          "position of the masked utterance.",
          "Find the index of the masked utterance in the dialogue.",
          "Locate which turn of the conversation was masked.",
      },
      {
          "The index of the missing utterance is",
          "The masked position is",
          "Which turn is masked?",
      },
      {"accuracy"}));

  r.add(make(
      "find incoherent utterance", TaskCategory::pretraining,
      OutputKind::free_text, {}, OptionStyle::none, "",
      {
          "One utterance in the conversation was replaced with an utterance "
          "from another dialogue. Identify its position.",
          "Find the index of the incoherent utterance.",
          "One turn does not belong to this conversation. Locate it.",
      },
      {
          "The index of the incoherent utterance is",
          "The incoherent position is",
          "Which turn is out of place?",
      },
      {"accuracy"}));

  r.add(make(
      "find swapped utterance", TaskCategory::pretraining,
      OutputKind::free_text, {}, OptionStyle::none, "",
      {
          "Two utterances in the conversation have been swapped. Identify "
          "their positions.",
          "Find the indices of the swapped utterances.",
          "Two turns of the dialogue were exchanged. Locate both.",
      },
      {
          "The swapped indices of responses are",
          "The swapped positions are",
          "Which turns were swapped?",
      },
      {"accuracy"}));

  // -- meta ---------------------------------------------------------------------

  r.add(make(
      "instruction selection", TaskCategory::meta, OutputKind::index_label,
      {{"RESPONSE", "[RESPONSE]"}}, OptionStyle::indexed_list,
      "The candidate instructions are:",
      {
          "Given the input and the response, select the instruction which "
          "corresponds to this input-output pair.",
          "Choose the instruction that produces the shown response for the "
          "given input.",
          "Which of the candidate instructions matches the input and output "
          "below?",
      },
      {
          "The matching instruction is option",
          "The best option is",
          "Which instruction was used?",
      },
      {"accuracy"}));

  r.add(make(
      "instruction binary", TaskCategory::meta, OutputKind::class_label,
      {{"INSTRUCTION", "[INSTRUCTION]"}, {"RESPONSE", "[RESPONSE]"}},
      OptionStyle::name_list, "The answer choices are:",
      {
          "Decide whether the provided instruction leads to the given "
          "response for this input.",
          "Given an instruction, an input, and a response, say yes if the "
          "instruction produces the response, otherwise say no.",
          "Judge if the response follows from the instruction and the "
          "input.",
      },
      {
          "Does the instruction lead to the response?",
          "The answer is",
          "Is the instruction consistent with the output?",
      },
      {"accuracy"}));

  return r;
}

}  // namespace dialcomp
