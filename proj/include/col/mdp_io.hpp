#pragma once

#include <filesystem>
#include <iosfwd>

#include "col/imitation.hpp"

namespace col {

struct MdpFile {
  TabularMDP mdp;
  Mat expert;
};

// Plain-text MDP format. '#' starts a comment; sizes must appear before rows:
//
//   states 2
//   actions 2
//   horizon 2
//   init 0.5 0.5
//   P <state> <action> : p(s'=0) p(s'=1) ...
//   expert <state> : p(a=0) p(a=1) ...
//
// Every (state, action) transition row and every expert row is required.
MdpFile load_mdp_file(const std::filesystem::path& path);
MdpFile parse_mdp(std::istream& in, const std::string& origin);

void write_mdp_file(const std::filesystem::path& path, const MdpFile& contents);

}  // namespace col
