#pragma once

// textual class specs, used by the CLI and config files:
//   bernoulli:r=5   counting:n=16   sets:n=16   markov:m=1,r=3
//   polynomial:max_degree=4,d=8[,mode=paper|header]

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "mdl/models.hpp"
#include "mdl/polynomial.hpp"
#include "mdl/set_family.hpp"

namespace mdl {

inline std::shared_ptr<ModelClass> parse_class_spec(const std::string& spec) {
  std::string name = spec;
  std::map<std::string, std::string> kv;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    std::string args = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < args.size()) {
      auto comma = args.find(',', pos);
      std::string item = args.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("class spec: expected key=value in '" + spec + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  auto need = [&](const std::string& key) -> unsigned {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("class spec '" + spec + "': missing " + key);
    return static_cast<unsigned>(std::stoul(it->second));
  };

  if (name == "bernoulli") return bernoulli_class(need("r"));
  if (name == "counting") return counting_class(need("n"));
  if (name == "sets") return finite_set_family(need("n"));
  if (name == "markov") return markov_class(need("m"), need("r"));
  if (name == "polynomial") {
    auto mode = PolyCostMode::paper_example;
    if (auto it = kv.find("mode"); it != kv.end()) {
      if (it->second == "header") mode = PolyCostMode::full_header;
      else if (it->second != "paper") throw std::invalid_argument("class spec: mode must be paper or header");
    }
    return polynomial_class(need("max_degree"), need("d"), mode);
  }
  throw std::invalid_argument("class spec: unknown class '" + name + "'");
}

}  // namespace mdl
