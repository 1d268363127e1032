// transition/transition-system.cc

// Copyright 2026  The simulmt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "transition/transition-system.h"

#include <sstream>

#include "base/simul-error.h"

namespace simul {

Action Action::Word(int word_id) {
  if (word_id < 0)
    throw InapplicableActionError("negative word id " + std::to_string(word_id));
  return Action(word_id);
}

int Action::WordId() const {
  if (IsDelay()) throw InapplicableActionError("Delay carries no word id");
  return word_;
}

bool TransitionSystem::IsApplicable(const PrefixState &state, const Action &a,
                                    size_t source_len) const {
  if (IsFinished(state)) return false;
  if (a.IsDelay()) return static_cast<size_t>(state.src_len) < source_len;
  return vocab_->IsWord(a.WordId());
}

std::vector<Action> TransitionSystem::ApplicableActions(
    const PrefixState &state, size_t source_len) const {
  std::vector<Action> out;
  if (IsFinished(state)) return out;
  if (static_cast<size_t>(state.src_len) < source_len)
    out.push_back(Action::Delay());
  for (int id = 0; id < vocab_->Size(); ++id)
    if (id != vocab_->DelayId()) out.push_back(Action::Word(id));
  return out;
}

PrefixState TransitionSystem::Apply(const PrefixState &state, const Action &a,
                                    size_t source_len) const {
  if (IsFinished(state))
    throw InapplicableActionError("episode already ended with eos");
  PrefixState next = state;
  if (a.IsDelay()) {
    if (static_cast<size_t>(state.src_len) >= source_len)
      throw InapplicableActionError("Delay with source exhausted (src_len=" +
                                    std::to_string(state.src_len) + ")");
    ++next.src_len;
    ++next.delay_count;
  } else {
    if (!vocab_->IsWord(a.WordId()))
      throw InapplicableActionError("word id " + std::to_string(a.WordId()) +
                                    " is not a target word");
    next.tgt.push_back(a.WordId());
  }
  next.last_action = a;
  return next;
}

std::vector<PrefixState> TransitionSystem::ReplayStates(
    const ActionSequence &actions, size_t source_len) const {
  std::vector<PrefixState> states;
  states.reserve(actions.size() + 1);
  states.emplace_back();
  for (size_t i = 0; i < actions.size(); ++i) {
    try {
      states.push_back(Apply(states.back(), actions[i], source_len));
    } catch (const InapplicableActionError &e) {
      throw InapplicableActionError(
          "action " + std::to_string(i) + ": " + e.what(),
          static_cast<std::ptrdiff_t>(i));
    }
  }
  return states;
}

std::string ActionsToString(const ActionSequence &actions, const Vocab &vocab) {
  std::string out;
  for (size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ' ';
    out += vocab.Token(actions[i].TokenId(vocab));
  }
  return out;
}

ActionSequence ParseActions(std::string_view line, const Vocab &vocab) {
  ActionSequence actions;
  for (int id : vocab.Encode(line))
    actions.push_back(id == vocab.DelayId() ? Action::Delay() : Action::Word(id));
  return actions;
}

}  // namespace simul
