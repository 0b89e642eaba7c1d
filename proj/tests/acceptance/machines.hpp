#pragma once

#include <string>
#include <vector>

namespace acceptance {

struct CorpusMachine {
  std::string name;
  std::string text;
  bool halts;
};

const std::vector<CorpusMachine>& minsky_corpus();

}  // namespace acceptance
