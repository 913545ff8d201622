#include "cbim/marl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbim {

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (storage_.empty()) throw std::invalid_argument("ReplayBuffer::sample: buffer empty");
  std::vector<const Transition*> batch(count);
  for (std::size_t i = 0; i < count; ++i) batch[i] = &storage_[rng.below(storage_.size())];
  return batch;
}

namespace {

std::vector<int> actor_dims(const LearnContext& ctx, int hidden) {
  return {ctx.obs_dim(), hidden, hidden, ctx.action_dim()};
}

std::vector<int> critic_dims(const LearnContext& ctx, int hidden) {
  return {ctx.critic_input_dim(), hidden, hidden, 1};
}

// Critic input for agent i: the joint view when centralized, the agent's
// own (o_i, a_i) otherwise.
Vector critic_input(const Vector& joint_obs, const Vector& joint_action, const LearnContext& ctx,
                    int i) {
  if (ctx.centralized) {
    Vector x(joint_obs.size() + joint_action.size());
    x << joint_obs, joint_action;
    return x;
  }
  Vector x(ctx.obs_dim() + ctx.action_dim());
  x << ctx.agent_obs(joint_obs, i), ctx.agent_action(joint_action, i);
  return x;
}

// Noiseless bids of the target policies on the next joint observation.
Vector target_joint_action(const std::vector<AgentNets>& agents, const Vector& joint_next_obs,
                           const LearnContext& ctx) {
  Vector actions(static_cast<long>(ctx.k) * ctx.action_dim());
  for (int j = 0; j < ctx.k; ++j) {
    const Vector raw = forward(agents[j].actor_target, ctx.agent_obs(joint_next_obs, j));
    actions.segment(static_cast<long>(j) * ctx.action_dim(), ctx.action_dim()) =
        raw * ctx.budgets[j];
  }
  return actions;
}

}  // namespace

AgentNets::AgentNets(const LearnContext& ctx, int hidden, Scalar learning_rate, Rng& rng)
    : actor(Mlp::random(actor_dims(ctx, hidden), OutputSquash::kLogistic, rng)),
      critic(Mlp::random(critic_dims(ctx, hidden), OutputSquash::kLinear, rng)),
      actor_target(),
      critic_target(),
      actor_opt(actor.parameter_count(), learning_rate),
      critic_opt(critic.parameter_count(), learning_rate) {
  // start at a uniform spend rate: initial bids sum to about the budget
  // instead of l/2 times it, which would walk straight into a bid war
  const Scalar rate = 1.0 / static_cast<Scalar>(std::max(2, ctx.l));
  actor.biases.back().setConstant(std::log(rate / (1.0 - rate)));
  actor_target = actor;
  critic_target = critic;
}

Vector act(const Mlp& actor, const Vector& obs, Scalar budget, Scalar noise_std, Rng& rng) {
  if (noise_std < 0.0) throw std::invalid_argument("act: noise_std must be >= 0");
  Vector bids = forward(actor, obs) * budget;
  if (noise_std > 0.0) {
    for (long j = 0; j < bids.size(); ++j) bids[j] += rng.normal(0.0, noise_std * budget);
    bids = bids.cwiseMax(0.0).cwiseMin(budget);
  }
  return bids;
}

Scalar critic_eval(const Mlp& critic, const Vector& joint_obs, const Vector& joint_action,
                   const LearnContext& ctx, int agent) {
  const Vector x = critic_input(joint_obs, joint_action, ctx, agent);
  if (x.size() != critic.input_dim()) throw std::invalid_argument("critic_eval: shape mismatch");
  return forward(critic, x)[0];
}

Scalar critic_loss_and_grad(const std::vector<AgentNets>& agents, int i,
                            std::span<const Transition* const> batch, const LearnContext& ctx,
                            MlpGrads& grads) {
  if (batch.empty()) throw std::invalid_argument("critic update: empty batch");
  const AgentNets& self = agents[i];
  const Scalar inv_batch = 1.0 / static_cast<Scalar>(batch.size());

  grads.set_zero();
  Scalar loss = 0.0;
  ForwardTrace trace;
  for (const Transition* t : batch) {
    Scalar y = t->rewards[i];
    if (!t->terminal) {
      Vector next_actions;
      if (ctx.centralized) {
        next_actions = target_joint_action(agents, t->joint_next_obs, ctx);
      } else {
        next_actions = Vector::Zero(static_cast<long>(ctx.k) * ctx.action_dim());
        const Vector raw = forward(self.actor_target, ctx.agent_obs(t->joint_next_obs, i));
        next_actions.segment(static_cast<long>(i) * ctx.action_dim(), ctx.action_dim()) =
            raw * ctx.budgets[i];
      }
      const Vector x_next = critic_input(t->joint_next_obs, next_actions, ctx, i);
      y += ctx.gamma * forward(self.critic_target, x_next)[0];
    }
    const Vector x = critic_input(t->joint_obs, t->joint_action, ctx, i);
    const Scalar q = forward(self.critic, x, trace)[0];
    const Scalar err = q - y;
    loss += err * err * inv_batch;
    backward(self.critic, trace, Vector::Constant(1, 2.0 * err * inv_batch), grads);
  }
  return loss;
}

Scalar actor_objective_and_grad(const std::vector<AgentNets>& agents, int i,
                                std::span<const Transition* const> batch, const LearnContext& ctx,
                                MlpGrads& grads) {
  if (batch.empty()) throw std::invalid_argument("actor update: empty batch");
  const AgentNets& self = agents[i];
  const Scalar inv_batch = 1.0 / static_cast<Scalar>(batch.size());
  const long slot = ctx.centralized
                        ? static_cast<long>(ctx.k) * ctx.obs_dim() + static_cast<long>(i) * ctx.action_dim()
                        : static_cast<long>(ctx.obs_dim());

  grads.set_zero();
  Scalar objective = 0.0;
  ForwardTrace actor_trace, critic_trace;
  MlpGrads critic_scratch(self.critic);
  for (const Transition* t : batch) {
    const Vector obs = ctx.agent_obs(t->joint_obs, i);
    const Vector raw = forward(self.actor, obs, actor_trace);
    const Vector own_action = raw * ctx.budgets[i];

    Vector joint_action = t->joint_action;
    joint_action.segment(static_cast<long>(i) * ctx.action_dim(), ctx.action_dim()) = own_action;
    const Vector x = critic_input(t->joint_obs, joint_action, ctx, i);
    objective += forward(self.critic, x, critic_trace)[0] * inv_batch;

    critic_scratch.set_zero();
    const Vector dx =
        backward(self.critic, critic_trace, Vector::Constant(1, inv_batch), critic_scratch);
    const Vector d_raw = dx.segment(slot, ctx.action_dim()) * ctx.budgets[i];
    backward(self.actor, actor_trace, d_raw, grads);
  }
  return objective;
}

Scalar critic_update(std::vector<AgentNets>& agents, int i,
                     std::span<const Transition* const> batch, const LearnContext& ctx) {
  AgentNets& self = agents[i];
  MlpGrads grads(self.critic);
  const Scalar loss = critic_loss_and_grad(agents, i, batch, ctx, grads);
  Vector params = self.critic.flatten();
  self.critic_opt.step(params, grads.flatten());
  self.critic.unflatten(params);
  return loss;
}

Scalar actor_update(std::vector<AgentNets>& agents, int i,
                    std::span<const Transition* const> batch, const LearnContext& ctx) {
  AgentNets& self = agents[i];
  MlpGrads grads(self.actor);
  const Scalar objective = actor_objective_and_grad(agents, i, batch, ctx, grads);
  Vector params = self.actor.flatten();
  self.actor_opt.step(params, -grads.flatten());  // ascent on the objective
  self.actor.unflatten(params);
  return objective;
}

void soft_update(const Mlp& online, Mlp& target, Scalar tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("soft_update: tau must lie in (0,1]");
  if (online.layer_count() != target.layer_count()) {
    throw std::invalid_argument("soft_update: layer count mismatch");
  }
  for (int t = 0; t < online.layer_count(); ++t) {
    if (online.weights[t].rows() != target.weights[t].rows() ||
        online.weights[t].cols() != target.weights[t].cols()) {
      throw std::invalid_argument("soft_update: shape mismatch");
    }
    target.weights[t] = tau * online.weights[t] + (1.0 - tau) * target.weights[t];
    target.biases[t] = tau * online.biases[t] + (1.0 - tau) * target.biases[t];
  }
}

Vector random_policy(Scalar budget, int l, Rng& rng) {
  Vector bids(l);
  for (int j = 0; j < l; ++j) bids[j] = rng.uniform(0.0, budget);
  return bids;
}

}  // namespace cbim
