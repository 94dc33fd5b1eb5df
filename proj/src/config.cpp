#include "diracnn/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace diracnn {

namespace pt = boost::property_tree;

PotentialSpec SystemSection::spec() const {
  if (coulomb()) {
    return Coulomb{charge};
  }
  return woods_saxon;
}

Units SystemSection::units() const {
  return coulomb() ? Units::atomic(speed_of_light)
                   : Units::nuclear(hbar_c, rest_energy);
}

RadialMesh MeshSection::build(double box_size) const {
  if (kind == MeshKind::log) {
    return RadialMesh::log_mesh(x0, std::log(box_size + std::exp(x0)), count);
  }
  return RadialMesh::uniform(box_size, count);
}

double RunConfig::tolerance() const {
  if (training.tolerance) {
    return *training.tolerance;
  }
  return system.coulomb() ? 1e-9 : 1e-5;
}

double RunConfig::box(std::size_t i) const {
  return mesh.box.size() == 1 ? mesh.box[0] : mesh.box.at(i);
}

std::optional<double> RunConfig::shift(std::size_t i) const {
  if (training.shift.empty()) {
    return std::nullopt;
  }
  return training.shift.size() == 1 ? training.shift[0] : training.shift.at(i);
}

SolveConfig RunConfig::solve_config(double shift) const {
  SolveConfig cfg;
  cfg.method = training.method;
  cfg.shift = shift;
  cfg.max_epochs = training.max_epochs;
  cfg.window = training.window;
  cfg.tolerance = tolerance();
  cfg.seed = network.seed;
  cfg.architecture = network.architecture;
  cfg.hidden = network.hidden;
  cfg.trial = network.trial;
  cfg.adam = training.adam;
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  auto &s = j["system"];
  s["potential"] = system.potential;
  if (system.coulomb()) {
    s["charge"] = system.charge;
    s["speed_of_light"] = system.speed_of_light;
  } else {
    const WoodsSaxon &ws = system.woods_saxon;
    s["neutrons"] = ws.neutrons;
    s["protons"] = ws.protons;
    s["depth"] = ws.depth;
    s["asymmetry"] = ws.asymmetry;
    s["radius"] = ws.radius;
    s["diffuseness"] = ws.diffuseness;
    s["radius_ls"] = ws.radius_ls;
    s["diffuseness_ls"] = ws.diffuseness_ls;
    s["lambda"] = ws.lambda;
    s["hbar_c"] = system.hbar_c;
    s["rest_energy"] = system.rest_energy;
  }
  s["kappa"] = system.kappa;
  s["n"] = system.n;
  s["reference"] = system.reference;
  s["fermi_energy"] = system.fermi_energy ? nlohmann::json(*system.fermi_energy)
                                          : nlohmann::json("auto");
  s["max_kappa"] = system.max_kappa;

  auto &m = j["mesh"];
  m["kind"] = mesh.kind == MeshKind::log ? "log" : "uniform";
  if (mesh.kind == MeshKind::log) {
    m["x0"] = mesh.x0;
  }
  m["box"] = mesh.box;
  m["count"] = mesh.count;

  auto &n = j["network"];
  n["architecture"] = to_string(network.architecture);
  n["hidden"] = network.hidden;
  n["trial"] = to_string(network.trial);
  n["seed"] = network.seed;

  auto &t = j["training"];
  t["method"] = to_string(training.method);
  t["shift"] = training.shift.empty() ? nlohmann::json("auto")
                                      : nlohmann::json(training.shift);
  t["max_epochs"] = training.max_epochs;
  t["window"] = training.window;
  t["tolerance"] = tolerance();
  t["learning_rate"] = training.adam.learning_rate;
  t["beta1"] = training.adam.beta1;
  t["beta2"] = training.adam.beta2;
  t["epsilon"] = training.adam.epsilon;

  auto &o = j["output"];
  o["directory"] = output.directory;
  o["wavefunctions"] = output.wavefunctions;
  o["traces"] = output.traces;
  o["checkpoints"] = output.checkpoints;
  return j;
}

namespace {

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string &value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      items.push_back(item);
    }
  }
  return items;
}

class Reader {
public:
  explicit Reader(const pt::ptree &tree) : tree_(tree) {}

  const pt::ptree *section(const std::string &name) {
    const auto it = tree_.find(name);
    return it == tree_.not_found() ? nullptr : &it->second;
  }

  template <typename Apply>
  void each(const std::string &section_name,
            const std::map<std::string, Apply> &handlers) {
    const pt::ptree *sec = section(section_name);
    if (sec == nullptr) {
      return;
    }
    for (const auto &[key, node] : *sec) {
      const auto it = handlers.find(key);
      if (it == handlers.end()) {
        throw ConfigError("unknown key '" + key + "' in [" + section_name + "]");
      }
      const std::string value = trim(node.data());
      try {
        it->second(value);
      } catch (const ConfigError &) {
        throw;
      } catch (const std::exception &e) {
        throw ConfigError("bad value '" + value + "' for " + section_name + "." +
                          key + ": " + e.what());
      }
    }
  }

private:
  const pt::ptree &tree_;
};

double to_double(const std::string &s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a finite number");
  }
  return v;
}

long long to_integer(const std::string &s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) {
    throw std::invalid_argument("not an integer");
  }
  return v;
}

int to_int(const std::string &s) {
  const long long v = to_integer(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw std::out_of_range("integer out of range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string &s) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") {
    return true;
  }
  if (s == "false" || s == "no" || s == "0" || s == "off") {
    return false;
  }
  throw std::invalid_argument("expected true or false");
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string &s, Parse parse) {
  std::vector<T> out;
  for (const std::string &item : split_list(s)) {
    out.push_back(parse(item));
  }
  return out;
}

using Handler = std::function<void(const std::string &)>;

} // namespace

RunConfig parse_config(std::istream &in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(std::string("cannot parse configuration: ") + e.what());
  }
  static const std::set<std::string> sections{"system", "mesh", "network",
                                              "training", "output"};
  for (const auto &[name, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError("key '" + name + "' is outside any section");
    }
    if (!sections.count(name)) {
      throw ConfigError("unknown section [" + name + "]");
    }
  }

  RunConfig cfg;
  Reader reader(tree);
  SystemSection &sys = cfg.system;
  WoodsSaxon &ws = sys.woods_saxon;
  reader.each<Handler>(
      "system",
      {
          {"potential",
           [&](const std::string &v) {
             if (v != "coulomb" && v != "woods_saxon") {
               throw ConfigError("system.potential must be coulomb or woods_saxon");
             }
             sys.potential = v;
           }},
          {"charge", [&](const std::string &v) { sys.charge = to_double(v); }},
          {"speed_of_light",
           [&](const std::string &v) { sys.speed_of_light = to_double(v); }},
          {"neutrons", [&](const std::string &v) { ws.neutrons = to_int(v); }},
          {"protons", [&](const std::string &v) { ws.protons = to_int(v); }},
          {"depth", [&](const std::string &v) { ws.depth = to_double(v); }},
          {"asymmetry", [&](const std::string &v) { ws.asymmetry = to_double(v); }},
          {"radius", [&](const std::string &v) { ws.radius = to_double(v); }},
          {"diffuseness",
           [&](const std::string &v) { ws.diffuseness = to_double(v); }},
          {"radius_ls", [&](const std::string &v) { ws.radius_ls = to_double(v); }},
          {"diffuseness_ls",
           [&](const std::string &v) { ws.diffuseness_ls = to_double(v); }},
          {"lambda", [&](const std::string &v) { ws.lambda = to_double(v); }},
          {"hbar_c", [&](const std::string &v) { sys.hbar_c = to_double(v); }},
          {"rest_energy",
           [&](const std::string &v) { sys.rest_energy = to_double(v); }},
          {"kappa",
           [&](const std::string &v) { sys.kappa = to_list<int>(v, to_int); }},
          {"n", [&](const std::string &v) { sys.n = to_list<int>(v, to_int); }},
          {"reference",
           [&](const std::string &v) {
             sys.reference = to_list<double>(v, to_double);
           }},
          {"fermi_energy",
           [&](const std::string &v) {
             if (v == "auto") {
               sys.fermi_energy.reset();
             } else {
               sys.fermi_energy = to_double(v);
             }
           }},
          {"max_kappa", [&](const std::string &v) { sys.max_kappa = to_int(v); }},
      });

  MeshSection &mesh = cfg.mesh;
  reader.each<Handler>(
      "mesh",
      {
          {"kind",
           [&](const std::string &v) {
             if (v == "log") {
               mesh.kind = MeshKind::log;
             } else if (v == "uniform") {
               mesh.kind = MeshKind::uniform;
             } else {
               throw ConfigError("mesh.kind must be log or uniform");
             }
           }},
          {"x0", [&](const std::string &v) { mesh.x0 = to_double(v); }},
          {"box",
           [&](const std::string &v) { mesh.box = to_list<double>(v, to_double); }},
          {"count", [&](const std::string &v) { mesh.count = to_int(v); }},
      });

  NetworkSection &net = cfg.network;
  reader.each<Handler>(
      "network",
      {
          {"architecture",
           [&](const std::string &v) {
             net.architecture = architecture_from_string(v);
           }},
          {"hidden", [&](const std::string &v) { net.hidden = to_int(v); }},
          {"trial",
           [&](const std::string &v) { net.trial = trial_form_from_string(v); }},
          {"seed",
           [&](const std::string &v) {
             const long long s = to_integer(v);
             if (s < 0) {
               throw ConfigError("network.seed must be non-negative");
             }
             net.seed = static_cast<std::uint64_t>(s);
           }},
      });

  TrainingSection &train = cfg.training;
  reader.each<Handler>(
      "training",
      {
          {"method",
           [&](const std::string &v) { train.method = method_from_string(v); }},
          {"shift",
           [&](const std::string &v) {
             train.shift = v == "auto" ? std::vector<double>{}
                                       : to_list<double>(v, to_double);
           }},
          {"max_epochs",
           [&](const std::string &v) { train.max_epochs = to_int(v); }},
          {"window", [&](const std::string &v) { train.window = to_int(v); }},
          {"tolerance",
           [&](const std::string &v) { train.tolerance = to_double(v); }},
          {"learning_rate",
           [&](const std::string &v) { train.adam.learning_rate = to_double(v); }},
          {"beta1", [&](const std::string &v) { train.adam.beta1 = to_double(v); }},
          {"beta2", [&](const std::string &v) { train.adam.beta2 = to_double(v); }},
          {"epsilon",
           [&](const std::string &v) { train.adam.epsilon = to_double(v); }},
      });

  OutputSection &out = cfg.output;
  reader.each<Handler>(
      "output",
      {
          {"directory", [&](const std::string &v) { out.directory = v; }},
          {"wavefunctions",
           [&](const std::string &v) { out.wavefunctions = to_bool(v); }},
          {"traces", [&](const std::string &v) { out.traces = to_bool(v); }},
          {"checkpoints",
           [&](const std::string &v) { out.checkpoints = to_bool(v); }},
      });

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open configuration file '" + path + "'");
  }
  return parse_config(in);
}

void validate(const RunConfig &cfg) {
  const SystemSection &sys = cfg.system;
  try {
    validate(sys.spec());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (!(sys.speed_of_light > 0.0) || !(sys.hbar_c > 0.0) ||
      !(sys.rest_energy > 0.0)) {
    throw ConfigError("unit constants must be positive");
  }
  if (sys.kappa.empty()) {
    throw ConfigError("system.kappa must list at least one kappa");
  }
  for (int k : sys.kappa) {
    if (k == 0) {
      throw ConfigError("system.kappa may not contain 0");
    }
  }
  if (sys.n.empty()) {
    throw ConfigError("system.n must list at least one state");
  }
  for (int n : sys.n) {
    if (n < 1) {
      throw ConfigError("system.n entries must be >= 1");
    }
  }
  const std::size_t states = sys.n.size();
  if (!sys.reference.empty() && sys.reference.size() != states) {
    throw ConfigError("system.reference needs one value per entry of system.n");
  }
  if (sys.max_kappa < 1) {
    throw ConfigError("system.max_kappa must be >= 1");
  }

  const MeshSection &mesh = cfg.mesh;
  if (mesh.box.empty() || (mesh.box.size() != 1 && mesh.box.size() != states)) {
    throw ConfigError("mesh.box needs one value or one per entry of system.n");
  }
  for (double b : mesh.box) {
    if (!(b > 0.0)) {
      throw ConfigError("mesh.box entries must be positive");
    }
  }
  if (mesh.count < 3) {
    throw ConfigError("mesh.count must be >= 3");
  }

  if (cfg.network.hidden < 1) {
    throw ConfigError("network.hidden must be >= 1");
  }
  const TrainingSection &t = cfg.training;
  if (!t.shift.empty() && t.shift.size() != 1 && t.shift.size() != states) {
    throw ConfigError("training.shift needs one value or one per entry of system.n");
  }
  if (t.max_epochs < 1 || t.window < 1) {
    throw ConfigError("training.max_epochs and training.window must be >= 1");
  }
  if (t.tolerance && !(*t.tolerance >= 0.0)) {
    throw ConfigError("training.tolerance must be >= 0");
  }
  if (!(t.adam.learning_rate > 0.0) || !(t.adam.beta1 >= 0.0 && t.adam.beta1 < 1.0) ||
      !(t.adam.beta2 >= 0.0 && t.adam.beta2 < 1.0) || !(t.adam.epsilon > 0.0)) {
    throw ConfigError("Adam hyperparameters out of range");
  }
  if (cfg.output.directory.empty()) {
    throw ConfigError("output.directory may not be empty");
  }
}

} // namespace diracnn
