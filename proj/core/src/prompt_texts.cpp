// Instruction texts for every (task, mode). SGP texts are kept as their
// three stages; the registry joins them with single spaces.
#include "prompt_texts.hpp"

namespace sgp::detail {

const std::array<PromptText, 18>& prompt_texts() {
  static const std::array<PromptText, 18> texts = {{
      {TaskKind::relation_prediction, PromptMode::naive, {"Answer the question."}},
      {TaskKind::relation_prediction, PromptMode::zero_cot,
       {"Based on the story, through inductive reasoning think step by step to answer the question."}},
      {TaskKind::relation_prediction,
       PromptMode::sgp,
       {"First, create a knowledge graph by extracting facts from each sentence in the given input story.",
        "Once this is done, I will pose a question. This question can be transformed into a triple (s, ?, o), where your primary task is to determine the missing relation ('?') that links the subject entity ('s') to the object entity ('o'). To begin, focus on the subject entity in this triple and choose the most relevant facts to expand from it. Step by step, progress towards the object entity, ensuring that each selected fact contributes to creating a link between the subject and object entities.",
        "Finally, utilize the established connection between the subject and object entities to answer the question."}},
      {TaskKind::dynamic_entity_prediction, PromptMode::naive, {"Answer the question using the option number."}},
      {TaskKind::dynamic_entity_prediction, PromptMode::zero_cot,
       {"Given the input, think step by step to answer the question using the option number."}},
      {TaskKind::dynamic_entity_prediction,
       PromptMode::sgp,
       {"First, create a knowledge graph by extracting facts from each sentence in the given input story. The graph should evolve as the story progresses.",
        "I will present several statements. Your primary task is to determine the correctness of these statements by converting them into triples (s, r, o).",
        "Assess each statement's validity against the knowledge graph as it stands at the story's conclusion."}},
      {TaskKind::complex_entity_prediction, PromptMode::naive, {"Answer the question."}},
      {TaskKind::complex_entity_prediction, PromptMode::zero_cot,
       {"Based on the story, think step by step to answer the question."}},
      {TaskKind::complex_entity_prediction,
       PromptMode::sgp,
       {"First, create a knowledge graph by extracting facts from each sentence in the given input story.",
        "Once this is done, I will pose a complex question requiring multi-step reasoning. Decompose the question into simpler sub-questions focusing on identifying crucial entities, their relationships, and specific details. Tackle these sub-questions sequentially, referencing the knowledge graph for information.",
        "Connect the answers from these sub-questions step by step, until arrive at a final answer to the initial complex question."}},
      {TaskKind::graph_sorting, PromptMode::naive, {"Answer the question using the option number."}},
      {TaskKind::graph_sorting, PromptMode::zero_cot,
       {"Given the input, think step by step to answer the question using the option number."}},
      {TaskKind::graph_sorting,
       PromptMode::sgp,
       {"First, create a knowledge graph by extracting facts from each sentence in the given input story.",
        "Once this is done, I will provide several statements. Your primary task is to determine the correctness of these statements.",
        "To assess the validity of a statement, sort the objects in the graph and evaluate the correctness of each statement."}},
      {TaskKind::graph_query, PromptMode::naive, {"Answer the question using the option number."}},
      {TaskKind::graph_query, PromptMode::zero_cot,
       {"Given the input, think step by step to answer the question using the option number."}},
      {TaskKind::graph_query,
       PromptMode::sgp,
       {"First, create a knowledge graph by extracting facts from each sentence in the given input story. The graph may evolve as the story progresses.",
        "Once this is done, I will pose a question. This question will require you to identify objects that meet specific criteria.",
        "Utilize the final state of the knowledge graph, as it exists at the end of the story, to provide the answer to the question."}},
      {TaskKind::logical_inference, PromptMode::naive, {"Answer the question."}},
      {TaskKind::logical_inference, PromptMode::zero_cot,
       {"Based on the story, through deductive reasoning think step by step to answer the question."}},
      {TaskKind::logical_inference,
       PromptMode::sgp,
       {"First, create a knowledge graph by extracting facts from each sentence in the given input story.",
        "Once this is done, I will pose a question. This question can be transformed into a triple (s, r, ?), where your primary task is to determine the missing tail entity ('?') that connects the subject entity ('s') through the relation (’r’). Start by concentrating on the subject entity in this triple and follow a logical path within the knowledge graph. Progress step by step from the statement related to the subject, using a forward chaining process. At each step, combine the conclusions with the facts in the knowledge graph to deduce new conclusions.",
        "The final conclusion along this logical path will serve as the answer to the question."}},
  }};
  return texts;
}

}  // namespace sgp::detail
