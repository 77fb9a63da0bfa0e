#include "arrl/agent.hpp"

#include <stdexcept>

#include "arrl/sac.hpp"
#include "arrl/td3.hpp"

namespace arrl {

void RLConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("RLConfig: gamma must be in [0, 1)");
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("RLConfig: tau must be in (0, 1]");
  if (batch_size <= 0 || buffer_capacity == 0 || policy_delay <= 0)
    throw std::invalid_argument("RLConfig: sizes must be positive");
  for (int h : hidden)
    if (h <= 0) throw std::invalid_argument("RLConfig: hidden sizes must be positive");
}

const char* agent_name(AgentKind k) {
  switch (k) {
    case AgentKind::None: return "none";
    case AgentKind::SAC: return "sac";
    case AgentKind::TD3: return "td3";
  }
  return "?";
}

AgentKind agent_from_name(const std::string& name) {
  if (name == "none") return AgentKind::None;
  if (name == "sac") return AgentKind::SAC;
  if (name == "td3") return AgentKind::TD3;
  throw std::invalid_argument("unknown agent: " + name);
}

std::unique_ptr<Agent> make_agent(AgentKind kind, const RLConfig& cfg,
                                  std::uint64_t seed) {
  switch (kind) {
    case AgentKind::None: return nullptr;
    case AgentKind::SAC: return std::make_unique<SACAgent>(cfg, seed);
    case AgentKind::TD3: return std::make_unique<TD3Agent>(cfg, seed);
  }
  return nullptr;
}

}  // namespace arrl
