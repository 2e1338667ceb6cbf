#include "blcft/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blcft {
namespace {

constexpr std::array<const char*, 10> kCommands = {
    "sample-gff",    "gmc-mass",      "correlate",     "check-seiberg",
    "verify-anomaly", "verify-scaling", "verify-markov", "fusion-scan",
    "weyl-check",    "green-residuals"};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + v +
                                "'");
  }
}

long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + v +
                                "'");
  }
}

// Shortest round-trip decimal form.
std::string fmt(double x) {
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

bool known_command(const std::string& command) {
  for (const char* c : kCommands)
    if (command == c) return true;
  return false;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  bool have_command = false, have_gamma = false;
  std::string section;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("malformed section header: " + line);
      section = line.substr(1, line.size() - 2);
      continue;
    }
    std::size_t sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
      throw std::invalid_argument("config line without a value: " + line);
    std::string key = line.substr(0, sp);
    std::string val = trim(line.substr(sp + 1));
    std::string full = section.empty() ? key : section + "." + key;

    if (full == "schema_version") {
      c.schema_version = static_cast<int>(to_int(full, val));
    } else if (full == "command") {
      c.command = val;
      have_command = true;
    } else if (full == "surface.name") {
      c.surface_name = val;
    } else if (full == "surface.modulus") {
      c.modulus = to_double(full, val);
    } else if (full == "surface.window_radius") {
      c.window_radius = to_double(full, val);
    } else if (full == "liouville.gamma") {
      c.params.gamma = to_double(full, val);
      have_gamma = true;
    } else if (full == "liouville.mu") {
      c.params.mu = to_double(full, val);
    } else if (full == "liouville.mu_boundary") {
      c.params.mu_boundary = to_double(full, val);
    } else if (full == "insertions.bulk") {
      auto t = split_ws(val);
      if (t.size() != 3)
        throw std::invalid_argument("insertions.bulk needs: u v alpha");
      c.insertions.bulk.push_back({{to_double(full, t[0]), to_double(full, t[1])},
                                   to_double(full, t[2])});
    } else if (full == "insertions.boundary") {
      auto t = split_ws(val);
      if (t.size() != 3)
        throw std::invalid_argument("insertions.boundary needs: u v beta");
      c.insertions.boundary.push_back(
          {{to_double(full, t[0]), to_double(full, t[1])}, to_double(full, t[2])});
    } else if (full == "mc.n_samples") {
      c.mc.n_samples = static_cast<int>(to_int(full, val));
    } else if (full == "mc.seed") {
      c.mc.seed = static_cast<std::uint64_t>(to_int(full, val));
    } else if (full == "mc.workers") {
      c.mc.workers = static_cast<int>(to_int(full, val));
    } else if (full == "mc.eps") {
      c.mc.eps = to_double(full, val);
    } else if (full == "mc.n1") {
      c.mc.n1 = static_cast<int>(to_int(full, val));
    } else if (full == "mc.n2") {
      c.mc.n2 = static_cast<int>(to_int(full, val));
    } else if (full == "mc.nb") {
      c.mc.nb = static_cast<int>(to_int(full, val));
    } else if (full == "mc.basis_cutoff") {
      c.mc.basis_cutoff = to_double(full, val);
    } else if (full == "ladder.eps0") {
      c.ladder_eps0 = to_double(full, val);
    } else if (full == "ladder.rungs") {
      c.ladder_rungs = static_cast<int>(to_int(full, val));
    } else if (full == "spectral.n_eigen") {
      c.n_eigen = static_cast<int>(to_int(full, val));
    } else if (full == "markov.cut") {
      c.markov_cut = to_double(full, val);
    } else if (full == "markov.grid_n") {
      c.markov_grid = static_cast<int>(to_int(full, val));
    } else if (full == "green.grid_n") {
      c.green_grid = static_cast<int>(to_int(full, val));
    } else if (full == "anomaly.phi_amplitude") {
      c.phi_amplitude = to_double(full, val);
    } else if (full == "fusion.kind") {
      c.fusion_kind = val;
    } else if (full == "fusion.w1") {
      c.fusion_w1 = to_double(full, val);
    } else if (full == "fusion.w2") {
      c.fusion_w2 = to_double(full, val);
    } else if (full == "fusion.eps") {
      c.fusion_eps = to_double(full, val);
    } else if (full == "fusion.n_rings") {
      c.fusion_rings = static_cast<int>(to_int(full, val));
    } else if (full == "fusion.n_angles") {
      c.fusion_angles = static_cast<int>(to_int(full, val));
    } else if (full == "fusion.distance0") {
      c.fusion_d0 = to_double(full, val);
    } else if (full == "fusion.ratio") {
      c.fusion_ratio = to_double(full, val);
    } else if (full == "fusion.count") {
      c.fusion_count = static_cast<int>(to_int(full, val));
    } else {
      throw std::invalid_argument("unknown config key: " + full);
    }
  }

  if (!have_command)
    throw std::invalid_argument("missing required key: command");
  if (!known_command(c.command))
    throw std::invalid_argument("unknown command: " + c.command);
  if (!have_gamma)
    throw std::invalid_argument("missing required key: liouville.gamma");
  if (!(c.params.gamma > 0.0) || c.params.gamma > 2.0)
    throw std::invalid_argument("gamma must lie in (0, 2]");
  if (c.params.mu < 0.0 || c.params.mu_boundary < 0.0)
    throw std::invalid_argument("cosmological constants must be nonnegative");
  if (c.params.mu == 0.0 && c.params.mu_boundary == 0.0)
    throw std::invalid_argument(
        "mu and mu_boundary cannot both vanish (no zero-mode suppression)");
  if (c.mc.n_samples < 1 || c.mc.workers < 1 || !(c.mc.eps > 0.0) ||
      c.mc.n1 < 2 || c.mc.n2 < 2 || c.mc.nb < 2 || !(c.mc.basis_cutoff > 0.0))
    throw std::invalid_argument("invalid [mc] settings");
  if (!(c.modulus > 0.0) || !(c.window_radius > 1.0))
    throw std::invalid_argument("invalid [surface] settings");
  if (!(c.ladder_eps0 > 0.0) || c.ladder_rungs < 1 || c.n_eigen < 16 ||
      c.markov_grid < 4 || c.green_grid < 4)
    throw std::invalid_argument("invalid mesh/ladder settings");
  if (!(c.fusion_eps > 0.0) || c.fusion_count < 2 ||
      !(c.fusion_ratio > 0.0 && c.fusion_ratio < 1.0) || !(c.fusion_d0 > 0.0))
    throw std::invalid_argument("invalid [fusion] settings");
  config_surface(c);  // validates the surface name
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

Surface config_surface(const ExperimentConfig& c) {
  return Surface::from_name(c.surface_name, c.modulus, c.window_radius);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "schema_version " << c.schema_version << "\n";
  os << "command " << c.command << "\n\n";
  os << "[surface]\n";
  os << "name " << c.surface_name << "\n";
  os << "modulus " << fmt(c.modulus) << "\n";
  os << "window_radius " << fmt(c.window_radius) << "\n\n";
  os << "[liouville]\n";
  os << "gamma " << fmt(c.params.gamma) << "\n";
  os << "mu " << fmt(c.params.mu) << "\n";
  os << "mu_boundary " << fmt(c.params.mu_boundary) << "\n\n";
  os << "[insertions]\n";
  for (const auto& b : c.insertions.bulk)
    os << "bulk " << fmt(b.z.u) << " " << fmt(b.z.v) << " " << fmt(b.alpha)
       << "\n";
  for (const auto& s : c.insertions.boundary)
    os << "boundary " << fmt(s.s.u) << " " << fmt(s.s.v) << " " << fmt(s.beta)
       << "\n";
  os << "\n[mc]\n";
  os << "n_samples " << c.mc.n_samples << "\n";
  os << "seed " << c.mc.seed << "\n";
  os << "workers " << c.mc.workers << "\n";
  os << "eps " << fmt(c.mc.eps) << "\n";
  os << "n1 " << c.mc.n1 << "\n";
  os << "n2 " << c.mc.n2 << "\n";
  os << "nb " << c.mc.nb << "\n";
  os << "basis_cutoff " << fmt(c.mc.basis_cutoff) << "\n\n";
  os << "[ladder]\n";
  os << "eps0 " << fmt(c.ladder_eps0) << "\n";
  os << "rungs " << c.ladder_rungs << "\n\n";
  os << "[spectral]\n";
  os << "n_eigen " << c.n_eigen << "\n\n";
  os << "[markov]\n";
  os << "cut " << fmt(c.markov_cut) << "\n";
  os << "grid_n " << c.markov_grid << "\n\n";
  os << "[green]\n";
  os << "grid_n " << c.green_grid << "\n\n";
  os << "[anomaly]\n";
  os << "phi_amplitude " << fmt(c.phi_amplitude) << "\n\n";
  os << "[fusion]\n";
  os << "kind " << c.fusion_kind << "\n";
  os << "w1 " << fmt(c.fusion_w1) << "\n";
  os << "w2 " << fmt(c.fusion_w2) << "\n";
  os << "eps " << fmt(c.fusion_eps) << "\n";
  os << "n_rings " << c.fusion_rings << "\n";
  os << "n_angles " << c.fusion_angles << "\n";
  os << "distance0 " << fmt(c.fusion_d0) << "\n";
  os << "ratio " << fmt(c.fusion_ratio) << "\n";
  os << "count " << c.fusion_count << "\n";
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  return fnv1a64(serialize_config(c));
}

}  // namespace blcft
