#pragma once

// JSON network description.
//
//   {
//     "epsilon": 0.1,
//     "nodes": ["A", "C1", "B"],
//     "edges": [
//       {"from": "A", "to": "C1", "avg_uses": 1.0,
//        "channel": {"kind": "dephasing", "param": 0.5},
//        "overrides": {"e_max": 0.4}}
//     ]
//   }
//
// Custom channels give "kraus" (a list of matrices, each a list of rows;
// entries are numbers or [re, im] pairs) and "choi_simulable". Unknown keys
// are rejected with ErrorCode::Parse.

#include <string>
#include <string_view>

#include "netbound/network.hpp"

namespace netbound::network {

struct NetworkFile {
  double epsilon = 0.0;
  NetworkGraph graph;
};

NetworkFile parse_network(std::string_view json_text);
NetworkFile load_network(const std::string& path);

}  // namespace netbound::network
