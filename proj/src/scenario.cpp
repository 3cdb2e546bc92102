#include "weakhyp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "weakhyp/output.hpp"

namespace weakhyp {

void Scenario::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario.name: empty");
  if (!system) throw std::invalid_argument("scenario.system: missing");
  if (nt < 3) throw std::invalid_argument("scenario.nt: need >= 3 samples");
  if (K < 0) throw std::invalid_argument("scenario.K: negative");
  if (n_directions < 1) throw std::invalid_argument("scenario.n_directions: need >= 1");
  if (eps_sweep.empty()) throw std::invalid_argument("scenario.eps_sweep: empty");
  for (double e : eps_sweep)
    if (!(e > 0.0)) throw std::invalid_argument("scenario.eps_sweep: entries must be > 0");
  if (!(scan_radius > 0.0)) throw std::invalid_argument("scenario.scan_radius: must be > 0");
  for (double s : s_values)
    if (!(s >= 1.0)) throw std::invalid_argument("scenario.s_values: Gevrey order must be >= 1");
  if (!(data.s0 > 1.0)) throw std::invalid_argument("scenario.data.s0: must be > 1");
  if (!(data.delta0 > 0.0)) throw std::invalid_argument("scenario.data.delta0: must be > 0");
}

namespace {

std::vector<double> default_eps_sweep() {
  std::vector<double> eps;
  for (int k = 3; k <= 9; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

std::shared_ptr<const SystemSpec> parse_system(const std::string& text) {
  return std::make_shared<SystemSpec>(parse_system_spec(text));
}

Scenario base_defaults(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.eps_sweep = default_eps_sweep();
  return sc;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"constant_strict", "wave_t2", "wave_t2_b", "holder_abs(alpha)", "triple_degenerate"};
}

Scenario make_builtin(const std::string& name) {
  if (name == "constant_strict") {
    Scenario sc = base_defaults(name);
    sc.system = parse_system(
        "m = 2\nn = 1\nT = 1\nalpha = 1\n"
        "A[1][2][1] = 1\nA[2][1][1] = 1\n");
    sc.s_values = {1.8};
    return sc;
  }
  if (name == "wave_t2") {
    Scenario sc = base_defaults(name);
    sc.system = parse_system(
        "m = 2\nn = 1\nT = 1\nalpha = 1\n"
        "A[1][2][1] = 1\nA[2][1][1] = t^2\n");
    sc.s_values = {1.8};
    return sc;
  }
  if (name == "wave_t2_b") {
    // wave_t2 with a zero-order term, so script L is nonzero on its own
    Scenario sc = base_defaults(name);
    sc.system = parse_system(
        "m = 2\nn = 1\nT = 1\nalpha = 1\n"
        "A[1][2][1] = 1\nA[2][1][1] = t^2\n"
        "B[2][1] = 1\n");
    sc.s_values = {1.8};
    return sc;
  }
  if (name.rfind("holder_abs(", 0) == 0 && name.back() == ')') {
    const std::string arg = name.substr(11, name.size() - 12);
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("holder_abs: bad exponent '" + arg + "'");
    }
    if (used != arg.size() || !(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("holder_abs: exponent must be in (0, 1]");
    Scenario sc = base_defaults(name);
    // eigenvalues +-|t|^alpha xi from delta = tau^2 - |t|^{2 alpha} xi^2
    std::ostringstream sys;
    sys << "m = 2\nn = 1\nT = 1\nalpha = " << format_double(alpha) << "\n"
        << "A[1][2][1] = 1\nA[2][1][1] = abs(t)^" << format_double(2.0 * alpha) << "\n";
    sc.system = parse_system(sys.str());
    sc.s_values = {1.0 + 0.9 * std::min(alpha, 1.0)};
    return sc;
  }
  if (name == "triple_degenerate") {
    Scenario sc = base_defaults(name);
    // delta = tau^3 - 3 t^2 xi^2 tau; eigenvalues {-sqrt(3) t xi, 0, sqrt(3) t xi}
    sc.system = parse_system(
        "m = 3\nn = 1\nT = 1\nalpha = 1\n"
        "A[1][2][1] = 1\nA[2][3][1] = 1\nA[3][2][1] = 3*t^2\n");
    sc.s_values = {1.4};
    return sc;
  }
  throw std::invalid_argument("unknown builtin scenario '" + name + "'");
}

std::string scenario_to_text(const Scenario& sc) {
  std::ostringstream os;
  os << "name = " << sc.name << "\n";
  os << "nt = " << sc.nt << "\n";
  os << "K = " << sc.K << "\n";
  os << "n_directions = " << sc.n_directions << "\n";
  os << "scan_radius = " << format_double(sc.scan_radius) << "\n";
  os << "eps_sweep =";
  for (double e : sc.eps_sweep) os << ' ' << format_double(e);
  os << "\n";
  os << "s_values =";
  for (double s : sc.s_values) os << ' ' << format_double(s);
  os << "\n";
  os << "data_s0 = " << format_double(sc.data.s0) << "\n";
  os << "data_delta0 = " << format_double(sc.data.delta0) << "\n";
  os << "data_seed = " << sc.data.seed << "\n";
  os << "data_random_phases = " << (sc.data.random_phases ? "true" : "false") << "\n";
  os << system_spec_to_text(*sc.system);
  return os.str();
}

namespace {

std::vector<double> parse_double_list(const std::string& v, const std::string& field) {
  std::vector<double> out;
  std::istringstream is(v);
  double x;
  while (is >> x) out.push_back(x);
  if (!is.eof()) throw std::invalid_argument(field + ": bad numeric list '" + v + "'");
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  sc.eps_sweep = default_eps_sweep();
  std::ostringstream system_lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      const std::size_t last = s.find_last_not_of(ws);
      s.erase(last == std::string::npos ? 0 : last + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "name") {
      sc.name = val;
    } else if (key == "nt") {
      sc.nt = std::stoi(val);
    } else if (key == "K") {
      sc.K = std::stoi(val);
    } else if (key == "n_directions") {
      sc.n_directions = std::stoi(val);
    } else if (key == "scan_radius") {
      sc.scan_radius = std::stod(val);
    } else if (key == "eps_sweep") {
      sc.eps_sweep = parse_double_list(val, "scenario.eps_sweep");
    } else if (key == "s_values") {
      sc.s_values = parse_double_list(val, "scenario.s_values");
    } else if (key == "data_s0") {
      sc.data.s0 = std::stod(val);
    } else if (key == "data_delta0") {
      sc.data.delta0 = std::stod(val);
    } else if (key == "data_seed") {
      sc.data.seed = std::stoull(val);
    } else if (key == "data_random_phases") {
      sc.data.random_phases = val == "true" || val == "1";
    } else {
      // system fields (m, n, T, alpha, A[..], B[..]) pass through
      system_lines << line << "\n";
    }
  }
  sc.system = parse_system(system_lines.str());
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& name_or_path) {
  try {
    return make_builtin(name_or_path);
  } catch (const std::invalid_argument&) {
    if (name_or_path.rfind("holder_abs(", 0) == 0) throw;  // malformed builtin argument
  }
  std::ifstream f(name_or_path);
  if (!f)
    throw std::invalid_argument("'" + name_or_path +
                                "' is neither a builtin scenario nor a readable file");
  std::ostringstream os;
  os << f.rdbuf();
  const std::string text = os.str();
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j = nlohmann::json::parse(text);
    Scenario sc;
    sc.eps_sweep = default_eps_sweep();
    sc.name = j.value("name", std::string("unnamed"));
    sc.nt = j.value("nt", sc.nt);
    sc.K = j.value("K", sc.K);
    sc.n_directions = j.value("n_directions", sc.n_directions);
    sc.scan_radius = j.value("scan_radius", sc.scan_radius);
    if (j.contains("eps_sweep")) sc.eps_sweep = j["eps_sweep"].get<std::vector<double>>();
    if (j.contains("s_values")) sc.s_values = j["s_values"].get<std::vector<double>>();
    if (j.contains("data")) {
      const auto& d = j["data"];
      sc.data.s0 = d.value("s0", sc.data.s0);
      sc.data.delta0 = d.value("delta0", sc.data.delta0);
      sc.data.seed = d.value("seed", sc.data.seed);
      sc.data.random_phases = d.value("random_phases", sc.data.random_phases);
    }
    if (!j.contains("system"))
      throw std::invalid_argument("scenario.system: missing in JSON config");
    sc.system = std::make_shared<SystemSpec>(parse_system_spec_json(j["system"].dump()));
    sc.validate();
    return sc;
  }
  return parse_scenario(text);
}

}  // namespace weakhyp
