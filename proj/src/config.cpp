#include "col/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "col/csv.hpp"
#include "col/errors.hpp"
#include "col/mdp_io.hpp"
#include "col/synthetic.hpp"

namespace col {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::set<std::string> kKnownKeys = {
    "problem.type", "problem.name", "problem.dimension", "problem.a", "problem.a_scale",
    "problem.a_diag", "problem.a_rows", "problem.b", "problem.alpha", "problem.mdp",
    "problem.floor", "problem.beta_pairs", "problem.beta_seed",
    "set.kind", "set.lower", "set.upper", "set.center", "set.radius", "set.blocks",
    "set.block_size", "set.floor",
    "algorithm.name", "algorithm.stepsize", "algorithm.eta",
    "oracle.mode", "oracle.sigma",
    "run.rounds", "run.seeds", "run.x1", "run.tol_inner", "run.bounds",
    "output.dir",
    "sweep.eta", "sweep.sigma",
};

std::vector<double> parse_reals(const std::string& text, const std::string& key) {
  std::vector<double> vals;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    try {
      vals.push_back(parse_double(tok));
    } catch (const ConfigError&) {
      throw ConfigError(key + ": not a real number: '" + tok + "'");
    }
  }
  return vals;
}

Vec to_vec(const std::vector<double>& vals) {
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

class KeyReader {
 public:
  explicit KeyReader(const KeyValues& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      return parse_double(it->second);
    } catch (const ConfigError&) {
      throw ConfigError(key + ": not a real number: '" + it->second + "'");
    }
  }

  long integer(const std::string& key, long fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      size_t pos = 0;
      const long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key + ": not an integer: '" + it->second + "'");
    }
  }

  Vec vec(const std::string& key) const {
    return to_vec(parse_reals(kv_.at(key), key));
  }

 private:
  const KeyValues& kv_;
};

}  // namespace

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(origin + ":" + std::to_string(line) +
                                             ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(line) + ": empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(line) + ": key outside any section");
    kv[section + "." + key] = value;
  }
  return kv;
}

KeyValues parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must look like section.key=value: '" + ov + "'");
    const std::string key = trim(ov.substr(0, eq));
    if (key.find('.') == std::string::npos)
      throw ConfigError("override key must be section.key: '" + ov + "'");
    kv[key] = trim(ov.substr(eq + 1));
  }
}

ExperimentConfig config_from_keyvalues(const KeyValues& kv) {
  for (const auto& [key, value] : kv)
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key: " + key);

  KeyReader r(kv);
  ExperimentConfig cfg;

  cfg.problem_type = r.str("problem.type", "");
  if (cfg.problem_type != "quadratic" && cfg.problem_type != "il")
    throw ConfigError("problem.type must be 'quadratic' or 'il'");
  cfg.problem_name = r.str("problem.name", cfg.problem_type);

  if (cfg.problem_type == "quadratic") {
    cfg.dimension = static_cast<int>(r.integer("problem.dimension", 0));
    cfg.a_kind = r.str("problem.a", "identity-scale");
    cfg.a_scale = r.real("problem.a_scale", 0.0);
    if (r.has("problem.a_diag")) cfg.a_diag = r.vec("problem.a_diag");
    if (r.has("problem.a_rows")) {
      // ';' starts a comment in this format, so '/' separates matrix rows
      const std::string raw = kv.at("problem.a_rows");
      std::vector<std::vector<double>> rows;
      std::string cur;
      std::istringstream is(raw);
      std::string piece;
      while (std::getline(is, piece, '/')) rows.push_back(parse_reals(piece, "problem.a_rows"));
      if (rows.empty()) throw ConfigError("problem.a_rows: no rows");
      cfg.a_rows = Mat(rows.size(), rows[0].size());
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ConfigError("problem.a_rows: ragged rows");
        for (size_t j = 0; j < rows[i].size(); ++j) cfg.a_rows(i, j) = rows[i][j];
      }
    }
    if (r.has("problem.b")) cfg.b = r.vec("problem.b");
    cfg.alpha = r.real("problem.alpha", 1.0);

    cfg.set_kind = r.str("set.kind", "");
    if (cfg.set_kind.empty()) throw ConfigError("set.kind is required for quadratic problems");
    if (r.has("set.lower")) cfg.set_lower = r.vec("set.lower");
    if (r.has("set.upper")) cfg.set_upper = r.vec("set.upper");
    if (r.has("set.center")) cfg.set_center = r.vec("set.center");
    cfg.set_radius = r.real("set.radius", 1.0);
    cfg.set_blocks = static_cast<int>(r.integer("set.blocks", 1));
    cfg.set_block_size = static_cast<int>(r.integer("set.block_size", 2));
    cfg.set_floor = r.real("set.floor", 0.0);
  } else {
    cfg.mdp_path = r.str("problem.mdp", "");
    if (cfg.mdp_path.empty()) throw ConfigError("problem.mdp path is required for IL problems");
    cfg.il_floor = r.real("problem.floor", 0.0);
    cfg.beta_pairs = r.integer("problem.beta_pairs", 2000);
    cfg.beta_seed = static_cast<uint64_t>(r.integer("problem.beta_seed", 0x11bea7));
  }

  cfg.algorithm = algorithm_kind_from_name(r.str("algorithm.name", "ogd"));
  const std::string ss = r.str("algorithm.stepsize", "auto");
  if (ss == "auto") {
    cfg.stepsize = StepSize::automatic();
  } else if (ss == "constant") {
    cfg.stepsize = StepSize::constant(r.real("algorithm.eta", 0.0));
  } else if (ss == "inverse-sqrt") {
    cfg.stepsize = StepSize::inverse_sqrt(r.real("algorithm.eta", 1.0));
  } else {
    throw ConfigError("algorithm.stepsize must be auto, constant or inverse-sqrt");
  }

  const std::string mode = r.str("oracle.mode", "deterministic");
  if (mode == "deterministic")
    cfg.oracle_mode = FeedbackMode::Deterministic;
  else if (mode == "gaussian")
    cfg.oracle_mode = FeedbackMode::Gaussian;
  else if (mode == "rollout")
    cfg.oracle_mode = FeedbackMode::Rollout;
  else if (mode == "full-information")
    cfg.oracle_mode = FeedbackMode::FullInformation;
  else
    throw ConfigError("oracle.mode must be deterministic, gaussian, rollout or full-information");
  cfg.sigma = r.real("oracle.sigma", 0.0);
  if (cfg.sigma < 0.0) throw ConfigError("oracle.sigma must be nonnegative");

  cfg.rounds = r.integer("run.rounds", 100);
  if (cfg.rounds < 1) throw ConfigError("run.rounds must be at least 1");
  if (r.has("run.seeds")) {
    cfg.seeds.clear();
    std::istringstream is(kv.at("run.seeds"));
    std::string tok;
    while (is >> tok) {
      try {
        cfg.seeds.push_back(static_cast<uint64_t>(std::stoull(tok)));
      } catch (const std::exception&) {
        throw ConfigError("run.seeds: not an integer: '" + tok + "'");
      }
    }
  }
  if (cfg.seeds.empty()) throw ConfigError("run.seeds must list at least one seed");
  if (r.has("run.x1")) cfg.x1 = r.vec("run.x1");
  cfg.tol_inner = r.real("run.tol_inner", 1e-9);
  if (!(cfg.tol_inner > 0.0)) throw ConfigError("run.tol_inner must be positive");
  cfg.bounds_mode = r.str("run.bounds", "auto");
  if (cfg.bounds_mode != "auto" && cfg.bounds_mode != "required" && cfg.bounds_mode != "off")
    throw ConfigError("run.bounds must be auto, required or off");

  cfg.out_dir = r.str("output.dir", "out");

  if (r.has("sweep.eta")) cfg.sweep_eta = parse_reals(kv.at("sweep.eta"), "sweep.eta");
  if (r.has("sweep.sigma")) cfg.sweep_sigma = parse_reals(kv.at("sweep.sigma"), "sweep.sigma");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  KeyValues kv = parse_config_file(path);
  apply_overrides(kv, overrides);
  return config_from_keyvalues(kv);
}

namespace {

DecisionSet build_set(const ExperimentConfig& cfg) {
  if (cfg.set_kind == "box") {
    if (cfg.set_lower.size() == 0 || cfg.set_upper.size() == 0)
      throw ConfigError("box set needs set.lower and set.upper");
    return DecisionSet::box(cfg.set_lower, cfg.set_upper);
  }
  if (cfg.set_kind == "ball") {
    if (cfg.set_center.size() == 0) throw ConfigError("ball set needs set.center");
    return DecisionSet::ball(cfg.set_center, cfg.set_radius);
  }
  if (cfg.set_kind == "simplices")
    return DecisionSet::simplex_product(cfg.set_blocks, cfg.set_block_size, cfg.set_floor);
  throw ConfigError("set.kind must be box, ball or simplices");
}

}  // namespace

COLProblem build_problem(const ExperimentConfig& cfg) {
  if (cfg.problem_type == "il") {
    MdpFile file = load_mdp_file(cfg.mdp_path);
    ILProblem ilp = make_il_problem(std::move(file.mdp), std::move(file.expert), cfg.il_floor,
                                    cfg.beta_pairs, cfg.beta_seed);
    ilp.col.name = cfg.problem_name;
    return ilp.col;
  }

  const DecisionSet set = build_set(cfg);
  const int d = set.dimension();
  Mat a;
  if (cfg.a_kind == "identity-scale") {
    a = cfg.a_scale * Mat::Identity(d, d);
  } else if (cfg.a_kind == "diagonal") {
    if (cfg.a_diag.size() != d) throw ConfigError("problem.a_diag must match the set dimension");
    a = cfg.a_diag.asDiagonal();
  } else if (cfg.a_kind == "rows") {
    if (cfg.a_rows.rows() != d || cfg.a_rows.cols() != d)
      throw ConfigError("problem.a_rows must be a square matrix matching the set dimension");
    a = cfg.a_rows;
  } else {
    throw ConfigError("problem.a must be identity-scale, diagonal or rows");
  }
  Vec b = cfg.b.size() == 0 ? Vec::Zero(d) : cfg.b;
  if (b.size() != d) throw ConfigError("problem.b must match the set dimension");
  if (!(cfg.alpha > 0.0)) throw ConfigError("problem.alpha must be positive");
  try {
    return make_quadratic(a, b, cfg.alpha, set, cfg.problem_name);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("problem construction failed: ") + e.what());
  }
}

}  // namespace col
