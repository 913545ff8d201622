#pragma once

#include <span>
#include <vector>

#include "cbim/net.hpp"
#include "cbim/rng.hpp"
#include "cbim/types.hpp"

namespace cbim {

// One replay record: the joint view of a bidding round. Rewards are stored
// as the full per-agent vector; agent i's update reads component i.
struct Transition {
  Vector joint_obs;       // concatenated o_1..o_k, length k*(l+1)
  Vector joint_action;    // concatenated executed bids, length k*l
  Vector rewards;         // per agent, as fed to learning
  Vector joint_next_obs;  // length k*(l+1)
  bool terminal = false;  // last round of an iteration: no bootstrap
};

// Fixed-capacity ring buffer, oldest records evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(Transition t);
  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t index) const { return storage_[index]; }

  // Uniform sample of `count` records (with replacement); reproducible for
  // a fixed generator state.
  std::vector<const Transition*> sample(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> storage_;
};

// Shared shapes and constants for one experiment's learners.
struct LearnContext {
  int k = 2;             // agents
  int l = 5;             // seeds
  Vector budgets;        // per agent
  Scalar gamma = 0.95;
  bool centralized = true;  // false: independent critics over (o_i, a_i)

  int obs_dim() const { return l + 1; }
  int action_dim() const { return l; }
  int critic_input_dim() const {
    return centralized ? k * obs_dim() + k * action_dim() : obs_dim() + action_dim();
  }
  Vector agent_obs(const Vector& joint_obs, int i) const {
    return joint_obs.segment(static_cast<long>(i) * obs_dim(), obs_dim());
  }
  Vector agent_action(const Vector& joint_action, int i) const {
    return joint_action.segment(static_cast<long>(i) * action_dim(), action_dim());
  }
};

// Online and target networks plus optimizer state for one agent.
struct AgentNets {
  Mlp actor, critic;
  Mlp actor_target, critic_target;
  Adam actor_opt, critic_opt;

  AgentNets(const LearnContext& ctx, int hidden, Scalar learning_rate, Rng& rng);

  bool all_finite() const {
    return actor.all_finite() && critic.all_finite() && actor_target.all_finite() &&
           critic_target.all_finite();
  }
};

// Deterministic actor with additive Gaussian exploration: bids are the
// squashed network output scaled by the budget, plus noise of standard
// deviation noise_std*budget, clipped to [0, budget]. With noise_std = 0 the
// output is exact and the generator is never consumed.
Vector act(const Mlp& actor, const Vector& obs, Scalar budget, Scalar noise_std, Rng& rng);

Scalar critic_eval(const Mlp& critic, const Vector& joint_obs, const Vector& joint_action,
                   const LearnContext& ctx, int agent);

// Squared-error loss of agent i's critic against the bootstrap target
// y = r_i + gamma * Q_target(o', target-policy actions), with no bootstrap
// on terminal records. Returns the loss and fills `grads`.
Scalar critic_loss_and_grad(const std::vector<AgentNets>& agents, int i,
                            std::span<const Transition* const> batch, const LearnContext& ctx,
                            MlpGrads& grads);

// Mean critic value with agent i's action slot replaced by its own online
// actor's noiseless output, other slots taken from the stored joint action.
// Returns the objective and fills `grads` with its gradient (for ascent).
Scalar actor_objective_and_grad(const std::vector<AgentNets>& agents, int i,
                                std::span<const Transition* const> batch, const LearnContext& ctx,
                                MlpGrads& grads);

// One optimizer step each; critic_update returns the pre-step loss and
// actor_update the pre-step objective.
Scalar critic_update(std::vector<AgentNets>& agents, int i,
                     std::span<const Transition* const> batch, const LearnContext& ctx);
Scalar actor_update(std::vector<AgentNets>& agents, int i,
                    std::span<const Transition* const> batch, const LearnContext& ctx);

// Polyak averaging: target <- tau*online + (1-tau)*target.
void soft_update(const Mlp& online, Mlp& target, Scalar tau);

// Baseline bidder: i.i.d. uniform bids over [0, budget].
Vector random_policy(Scalar budget, int l, Rng& rng);

}  // namespace cbim
