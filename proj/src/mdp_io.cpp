#include "col/mdp_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "col/csv.hpp"
#include "col/errors.hpp"

namespace col {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<double> read_reals(std::istringstream& is, size_t count, const std::string& origin,
                               int line) {
  std::vector<double> vals;
  double v;
  while (is >> v) vals.push_back(v);
  if (vals.size() != count)
    fail(origin, line, "expected " + std::to_string(count) + " values, got " +
                           std::to_string(vals.size()));
  return vals;
}

}  // namespace

MdpFile parse_mdp(std::istream& in, const std::string& origin) {
  int states = -1, actions = -1, horizon = -1;
  Vec init;
  std::vector<Mat> transitions;
  std::vector<std::vector<bool>> seen_p;
  Mat expert;
  std::vector<bool> seen_expert;

  auto require_sizes = [&](int line) {
    if (states < 0 || actions < 0)
      fail(origin, line, "states/actions must be declared before rows");
  };

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream is(raw);
    std::string word;
    if (!(is >> word)) continue;

    if (word == "states" || word == "actions" || word == "horizon") {
      int value;
      if (!(is >> value) || value < 1) fail(origin, line, word + " needs a positive integer");
      (word == "states" ? states : word == "actions" ? actions : horizon) = value;
      if (states > 0 && actions > 0 && transitions.empty()) {
        transitions.assign(states, Mat::Zero(actions, states));
        seen_p.assign(states, std::vector<bool>(actions, false));
        expert = Mat::Zero(states, actions);
        seen_expert.assign(states, false);
      }
    } else if (word == "init") {
      if (states < 0) fail(origin, line, "states must be declared before init");
      const auto vals = read_reals(is, states, origin, line);
      init = Eigen::Map<const Vec>(vals.data(), states);
    } else if (word == "P") {
      require_sizes(line);
      int s, a;
      std::string colon;
      if (!(is >> s >> a >> colon) || colon != ":")
        fail(origin, line, "expected 'P <state> <action> : <probabilities>'");
      if (s < 0 || s >= states || a < 0 || a >= actions)
        fail(origin, line, "state/action index out of range");
      const auto vals = read_reals(is, states, origin, line);
      for (int j = 0; j < states; ++j) transitions[s](a, j) = vals[j];
      seen_p[s][a] = true;
    } else if (word == "expert") {
      require_sizes(line);
      int s;
      std::string colon;
      if (!(is >> s >> colon) || colon != ":")
        fail(origin, line, "expected 'expert <state> : <probabilities>'");
      if (s < 0 || s >= states) fail(origin, line, "state index out of range");
      const auto vals = read_reals(is, actions, origin, line);
      for (int a = 0; a < actions; ++a) expert(s, a) = vals[a];
      seen_expert[s] = true;
    } else {
      fail(origin, line, "unknown directive '" + word + "'");
    }
  }

  if (states < 0 || actions < 0 || horizon < 0)
    throw ConfigError(origin + ": states, actions and horizon are required");
  if (init.size() == 0) throw ConfigError(origin + ": init distribution is required");
  for (int s = 0; s < states; ++s) {
    for (int a = 0; a < actions; ++a)
      if (!seen_p[s][a])
        throw ConfigError(origin + ": missing transition row P " + std::to_string(s) + " " +
                          std::to_string(a));
    if (!seen_expert[s])
      throw ConfigError(origin + ": missing expert row for state " + std::to_string(s));
  }

  MdpFile out;
  out.mdp.num_states = states;
  out.mdp.num_actions = actions;
  out.mdp.horizon = horizon;
  out.mdp.initial = std::move(init);
  out.mdp.transitions = std::move(transitions);
  out.expert = std::move(expert);
  out.mdp.validate();
  return out;
}

MdpFile load_mdp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open MDP file: " + path.string());
  return parse_mdp(in, path.string());
}

void write_mdp_file(const std::filesystem::path& path, const MdpFile& contents) {
  const TabularMDP& m = contents.mdp;
  std::ostringstream os;
  os << "states " << m.num_states << "\n";
  os << "actions " << m.num_actions << "\n";
  os << "horizon " << m.horizon << "\n";
  os << "init";
  for (int s = 0; s < m.num_states; ++s) os << " " << format_double(m.initial[s]);
  os << "\n";
  for (int s = 0; s < m.num_states; ++s)
    for (int a = 0; a < m.num_actions; ++a) {
      os << "P " << s << " " << a << " :";
      for (int j = 0; j < m.num_states; ++j) os << " " << format_double(m.transitions[s](a, j));
      os << "\n";
    }
  for (int s = 0; s < m.num_states; ++s) {
    os << "expert " << s << " :";
    for (int a = 0; a < m.num_actions; ++a) os << " " << format_double(contents.expert(s, a));
    os << "\n";
  }
  atomic_write_file(path, os.str());
}

}  // namespace col
