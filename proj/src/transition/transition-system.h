// transition/transition-system.h

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

#ifndef SIMUL_TRANSITION_TRANSITION_SYSTEM_H_
#define SIMUL_TRANSITION_TRANSITION_SYSTEM_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transition/vocab.h"

namespace simul {

/// One step of a simultaneous policy: either read one more source word
/// (Delay) or write a target word.
class Action {
 public:
  static Action Delay() { return Action(-1); }
  static Action Word(int word_id);

  bool IsDelay() const { return word_ < 0; }
  bool IsWord() const { return word_ >= 0; }
  /// Throws InapplicableActionError if this is a Delay.
  int WordId() const;
  /// Id in the extended vocabulary (the delay id for Delay).
  int TokenId(const Vocab &vocab) const {
    return IsDelay() ? vocab.DelayId() : word_;
  }

  friend bool operator==(const Action &a, const Action &b) = default;
  friend auto operator<=>(const Action &a, const Action &b) = default;

 private:
  explicit Action(int word) : word_(word) {}
  int word_;
};

using ActionSequence = std::vector<Action>;

/// A cell of the prefix grid: how much source has been consumed and which
/// target words have been written.  Built only by the transition functions
/// below, so delay_count always equals src_len for states reached from the
/// empty state.
struct PrefixState {
  int src_len = 0;
  std::vector<int> tgt;
  int delay_count = 0;
  std::optional<Action> last_action;

  int TgtLen() const { return static_cast<int>(tgt.size()); }
  bool LastWasDelay() const { return last_action && last_action->IsDelay(); }

  friend bool operator==(const PrefixState &, const PrefixState &) = default;
};

/// Transition function over prefix pairs.  Emitting eos ends the episode
/// even with unread source left; nothing is applicable afterwards.
class TransitionSystem {
 public:
  explicit TransitionSystem(const Vocab &vocab) : vocab_(&vocab) {}

  const Vocab &vocab() const { return *vocab_; }

  bool IsFinished(const PrefixState &state) const {
    return !state.tgt.empty() && state.tgt.back() == vocab_->EosId();
  }
  bool IsApplicable(const PrefixState &state, const Action &a,
                    size_t source_len) const;

  /// Delay first (when applicable), then every word id in ascending order.
  std::vector<Action> ApplicableActions(const PrefixState &state,
                                        size_t source_len) const;

  /// Throws InapplicableActionError naming the reason.
  PrefixState Apply(const PrefixState &state, const Action &a,
                    size_t source_len) const;

  /// All intermediate states: result[0] is the empty state and result[i] is
  /// the state after the first i actions.  The error carries the index of the
  /// first inapplicable action.
  std::vector<PrefixState> ReplayStates(const ActionSequence &actions,
                                        size_t source_len) const;
  PrefixState Replay(const ActionSequence &actions, size_t source_len) const {
    return ReplayStates(actions, source_len).back();
  }

 private:
  const Vocab *vocab_;
};

/// Space-separated tokens with the delay rendered as <eps>.
std::string ActionsToString(const ActionSequence &actions, const Vocab &vocab);
ActionSequence ParseActions(std::string_view line, const Vocab &vocab);

inline size_t CountDelays(const ActionSequence &actions) {
  size_t n = 0;
  for (const Action &a : actions) n += a.IsDelay();
  return n;
}

}  // namespace simul

#endif  // SIMUL_TRANSITION_TRANSITION_SYSTEM_H_
