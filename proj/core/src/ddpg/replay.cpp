#include "esdrl/ddpg/replay.hpp"

#include <stdexcept>

namespace esdrl::ddpg {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity),
      states_(capacity, state_dim),
      actions_(capacity, action_dim),
      next_states_(capacity, state_dim),
      rewards_(capacity),
      terminals_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be > 0");
}

void ReplayBuffer::push(const Transition& t) {
  if (t.state.size() != states_.cols() || t.action.size() != actions_.cols() ||
      t.next_state.size() != next_states_.cols()) {
    throw std::invalid_argument("replay push: dimension mismatch");
  }
  states_.row(cursor_) = t.state.transpose();
  actions_.row(cursor_) = t.action.transpose();
  next_states_.row(cursor_) = t.next_state.transpose();
  rewards_(cursor_) = t.reward;
  terminals_(cursor_) = t.terminal ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

Batch ReplayBuffer::sample(int batch_size, Rng& rng) const {
  if (size_ == 0) throw std::logic_error("replay sample: buffer empty");
  Batch b;
  b.states.resize(batch_size, states_.cols());
  b.actions.resize(batch_size, actions_.cols());
  b.next_states.resize(batch_size, next_states_.cols());
  b.rewards.resize(batch_size);
  b.terminals.resize(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    const auto idx = rng.uniform_index(size_);
    b.states.row(i) = states_.row(idx);
    b.actions.row(i) = actions_.row(idx);
    b.next_states.row(i) = next_states_.row(idx);
    b.rewards(i) = rewards_(idx);
    b.terminals(i) = terminals_(idx);
  }
  return b;
}

Transition ReplayBuffer::at_recent(std::size_t i_back) const {
  if (i_back >= size_) throw std::out_of_range("replay at_recent");
  const std::size_t idx = (cursor_ + capacity_ - 1 - i_back) % capacity_;
  Transition t;
  t.state = states_.row(idx).transpose();
  t.action = actions_.row(idx).transpose();
  t.next_state = next_states_.row(idx).transpose();
  t.reward = rewards_(idx);
  t.terminal = terminals_(idx) != 0.0;
  return t;
}

}  // namespace esdrl::ddpg
