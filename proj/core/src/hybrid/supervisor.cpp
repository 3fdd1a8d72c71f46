#include "esdrl/hybrid/supervisor.hpp"

namespace esdrl::hybrid {

void update_beta(HybridState& h, bool contact, long t,
                 const Eigen::Vector4d& last_rl_action) {
  if (h.beta == 1 && contact) {
    h.beta = 0;
    h.switch_step = t;
    h.es_state = es::es_init(last_rl_action);
  }
  h.mode_history.push_back(h.beta);
}

Eigen::Vector4d hybrid_action(const HybridState& h, const Eigen::Vector4d& a_rl,
                              const Eigen::Vector4d& a_es) {
  return h.beta == 1 ? a_rl : a_es;
}

}  // namespace esdrl::hybrid
