#include "bubblelab/runconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bubblelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list value");
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "N") N = std::stoi(value);
  else if (key == "beta") beta = std::stod(value);
  else if (key == "a") a = std::stod(value);
  else if (key == "L") L = std::stod(value);
  else if (key == "m") m = std::stoi(value);
  else if (key == "mu") mu = std::stod(value);
  else if (key == "tol") tol = std::stod(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "wrapped") wrapped = (value == "1" || value == "true" || value == "yes");
  else if (key == "q0") q0 = std::stod(value);
  else if (key == "q_period") q_period = std::stod(value);
  else if (key == "vartheta") vartheta = std::stod(value);
  else if (key == "out_dir") out_dir = value;
  else if (key == "L_list") L_list = parse_list(value);
  else if (key == "mu_list") mu_list = parse_list(value);
  else if (key == "grid.margin") grid_margin = std::stod(value);
  else if (key == "grid.r_extent") grid_r_extent = std::stod(value);
  else if (key == "grid.h_base") grid_h_base = std::stod(value);
  else if (key == "grid.core_nodes") grid_core_nodes = std::stod(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string RunConfig::schema_text() {
  return R"(# key = value per line; '#' starts a comment
N = 7                 # dimension (>= 5)
beta = 4              # potential exponent, feasible window (N-4, N-2)
a = 0                 # potential amplitude; 0 calibrates from mu
L = 10                # lattice spacing
m = 1                 # bubble count minus one
mu = 16               # initial/common bubble height
tol = 1e-9            # solver tolerance
seed = 0              # RNG seed (determinism)
wrapped = false       # wrapped (periodic) lattice instead of an open chain
q0 = 1                # potential value at lattice points for `nonexist`
q_period = 1          # potential period in y1 (L is an integer multiple)
vartheta = 0          # norm parameter; 0 = min{(N-4)/2, beta/2}/4
out_dir = out         # artifact directory
L_list = 8,16,32,64   # spacings for `reduce`/`sweep`
mu_list = 16,32,64    # heights for rate sweeps
grid.margin = 4       # domain margin beyond the outer cutoffs
grid.r_extent = 6     # transverse truncation radius
grid.h_base = 0.12    # background grid spacing
grid.core_nodes = 10  # nodes per core radius 1/mu
)";
}

}  // namespace bubblelab
