#include "degenlab/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace degenlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigurationError("invalid number for " + key + ": '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigurationError("invalid integer for " + key + ": '" + text + "'");
  return v;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"domain", "beta",   "betas", "f",   "n",     "gamma", "sigma",
                                          "eta1",   "eta2",   "jobs",  "seed", "out",  "oracle", "eta",
                                          "perturb", "N",     "R",     "lx",  "ly",    "depth"};
  return keys;
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, key));
  }
  return out;
}

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigurationError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigurationError(origin + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file " + path);
  return parse_key_values(in, path);
}

const std::vector<double>& default_theorem_betas() {
  static const std::vector<double> b{-1.0, -0.5, 0.0, 0.25, 0.5, 0.75};
  return b;
}

const std::vector<double>& default_a2_betas() {
  static const std::vector<double> b{-1.5, -1.0, -0.9, -0.5, 0.0, 0.5, 0.9};
  return b;
}

Domain RunConfig::domain(const std::string& name) const {
  if (name == "interval") return Domain::interval(0.0, 1.0);
  if (name == "ball") return Domain::ball(ball_dimension, radius);
  if (name == "square") return Domain::rectangle(1.0, 1.0);
  if (name == "rectangle") return Domain::rectangle(lx, ly);
  throw ConfigurationError("unknown domain '" + name + "' (interval, ball, square, rectangle)");
}

Source RunConfig::make_source(double beta) const {
  switch (source) {
    case SourceKind::one:
      return constant_source(1.0);
    case SourceKind::dbeta:
      return distance_power_source(beta);
    case SourceKind::custom_poly:
      return distance_polynomial_source(coeffs);
  }
  throw InternalError("unhandled source kind");
}

void ensure_writable(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigurationError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path probe = fs::path(dir) / ".degenlab_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigurationError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

RunConfig make_config(const std::string& command, const KeyValues& file, const KeyValues& flags, const char* env_out) {
  static const std::set<std::string> commands{"solve", "verify", "theorems", "a2"};
  if (!commands.count(command)) throw ConfigurationError("unknown command '" + command + "'");
  KeyValues kv = file;
  for (const auto& [k, v] : flags) kv[k] = v;
  for (const auto& [k, v] : kv)
    if (!known_keys().count(k)) throw ConfigurationError("unknown configuration key '" + k + "'");

  RunConfig c;
  c.command = command;
  const auto has = [&](const char* k) { return kv.count(k) > 0; };
  const auto get = [&](const char* k) -> const std::string& { return kv.at(k); };

  if (has("beta") && has("betas")) throw ConfigurationError("give either beta or betas, not both");
  if (has("beta")) c.betas = {parse_double(get("beta"), "beta")};
  else if (has("betas")) {
    c.betas = parse_list(get("betas"), "betas");
    if (c.betas.empty()) throw ConfigurationError("empty beta sweep");
  } else if (command == "theorems") c.betas = default_theorem_betas();
  else if (command == "a2") c.betas = default_a2_betas();
  else if (command == "verify") c.betas = {0.5};
  else throw ConfigurationError("solve needs --beta");
  for (double b : c.betas) {
    if (b < 1.0) continue;
    std::ostringstream msg;
    msg << "beta must satisfy beta < 1 (got " << b << ")";
    throw ConfigurationError(msg.str());
  }
  if (command == "solve" && c.betas.size() != 1) throw ConfigurationError("solve takes a single beta");

  if (has("domain")) {
    c.domains.clear();
    std::stringstream ss(get("domain"));
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) c.domains.push_back(trim(item));
    if (c.domains.empty()) throw ConfigurationError("empty domain list");
  } else if (command == "theorems") {
    c.domains = {"interval", "ball"};
  }
  if (command == "solve" && c.domains.size() != 1) throw ConfigurationError("solve takes a single domain");

  if (has("N")) c.ball_dimension = static_cast<int>(parse_integer(get("N"), "N"));
  if (has("R")) c.radius = parse_double(get("R"), "R");
  if (has("lx")) c.lx = parse_double(get("lx"), "lx");
  if (has("ly")) c.ly = parse_double(get("ly"), "ly");
  if (c.ball_dimension < 2) throw ConfigurationError("ball dimension N must be >= 2");
  if (!(c.radius > 0.0) || !(c.lx > 0.0) || !(c.ly > 0.0)) throw ConfigurationError("domain sizes must be positive");
  for (const auto& d : c.domains) (void)c.domain(d);

  if (has("f")) {
    const std::string f = trim(get("f"));
    if (f == "one") c.source = SourceKind::one;
    else if (f == "dbeta") c.source = SourceKind::dbeta;
    else if (f.rfind("custom-poly", 0) == 0) {
      c.source = SourceKind::custom_poly;
      c.coeffs = parse_list(trim(f.substr(std::string("custom-poly").size())), "custom-poly");
      if (c.coeffs.empty()) throw ConfigurationError("custom-poly needs coefficients c0,c1,...");
    } else {
      throw ConfigurationError("unknown source '" + f + "' (one, dbeta, custom-poly COEFFS)");
    }
  }

  if (has("n")) {
    const long long n = parse_integer(get("n"), "n");
    if (n < kMinCells || n > kMaxCells) throw ConfigurationError("mesh size n must lie in [16, 2^22]");
    c.n = static_cast<int>(n);
    c.n_set = true;
  } else if (command == "theorems") {
    c.n = 1 << 14;
  }
  if (has("gamma")) {
    c.gamma = parse_double(get("gamma"), "gamma");
    if (!(*c.gamma >= 1.0)) throw ConfigurationError("grading exponent gamma must be >= 1");
  }
  if (has("sigma")) {
    c.sigma = parse_double(get("sigma"), "sigma");
    if (!(*c.sigma > 0.0)) throw ConfigurationError("sigma must be positive");
  }
  if (has("eta1")) c.eta1 = parse_double(get("eta1"), "eta1");
  if (has("eta2")) c.eta2 = parse_double(get("eta2"), "eta2");
  if (c.eta1 < 0.0 || c.eta2 < 0.0) throw ConfigurationError("eta1 and eta2 must be nonnegative");
  if (has("jobs")) {
    const long long j = parse_integer(get("jobs"), "jobs");
    if (j < 1 || j > 256) throw ConfigurationError("jobs must lie in [1, 256]");
    c.jobs = static_cast<int>(j);
  }
  if (has("seed")) {
    const long long s = parse_integer(get("seed"), "seed");
    if (s < 0) throw ConfigurationError("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (has("oracle")) {
    c.oracle = trim(get("oracle"));
    if (c.oracle != "barrier") (void)parse_oracle_kind(c.oracle);
  }
  if (has("eta")) c.eta = parse_double(get("eta"), "eta");
  if (has("perturb")) c.perturb = parse_double(get("perturb"), "perturb");
  if (has("depth")) {
    const long long d = parse_integer(get("depth"), "depth");
    if (d < 4 || d > 24) throw ConfigurationError("a2 depth must lie in [4, 24]");
    c.depth = static_cast<int>(d);
  }

  if (has("out")) c.out = get("out");
  else if (env_out && *env_out) c.out = env_out;
  else c.out = "degenlab_out";
  ensure_writable(c.out);
  return c;
}

}  // namespace degenlab
