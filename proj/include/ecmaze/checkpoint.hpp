#pragma once

#include <string>

#include "ecmaze/policy.hpp"
#include "ecmaze/rnet.hpp"

namespace ecmaze {

// Plain-text checkpoints: versioned header, architecture switches, then one
// line per tensor with hexfloat values (bit-exact round trip).

void save_rnetwork(const std::string& path, const RNetwork& net,
                   long collected_steps);

struct LoadedRnet {
  RNetwork net;
  long collected_steps = 0;
};
LoadedRnet load_rnetwork(const std::string& path);

void save_policy(const std::string& path, const PolicyNet& net);
PolicyNet load_policy(const std::string& path);

}  // namespace ecmaze
