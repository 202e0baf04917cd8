#pragma once

#include <cstdint>
#include <sstream>
#include <string>

namespace cloudauth {

// Server-side cost accounting. "Cheap" is hash/MAC work (constant per
// request); "expensive" is everything the DoS design defers until the
// requester has paid: AEAD opens, PSK directory lookups, session-key
// generation.
struct CostMeter {
  std::uint64_t cheap_ops = 0;
  std::uint64_t expensive_ops = 0;
  std::uint64_t blocked = 0;
  std::uint64_t dropped = 0;
  std::uint64_t established = 0;

  std::string report() const {
    std::ostringstream os;
    os << "cheap_ops=" << cheap_ops << '\n'
       << "expensive_ops=" << expensive_ops << '\n'
       << "blocked=" << blocked << '\n'
       << "dropped=" << dropped << '\n'
       << "established=" << established << '\n';
    return os.str();
  }
};

}  // namespace cloudauth
