#include "weakhyp/system.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

namespace weakhyp {

SystemSpec::SystemSpec(int m, int n, double T, double alpha, std::vector<ExprPtr> a_coeffs,
                       std::vector<ExprPtr> b_coeffs)
    : m_(m), n_(n), T_(T), alpha_(alpha), a_(std::move(a_coeffs)), b_(std::move(b_coeffs)) {
  if (m_ < 1) throw std::invalid_argument("system size m must be >= 1");
  if (n_ < 1) throw std::invalid_argument("space dimension n must be >= 1");
  if (!(T_ > 0.0)) throw std::invalid_argument("time horizon T must be > 0");
  if (!(alpha_ > 0.0 && alpha_ <= 1.0))
    throw std::invalid_argument("Holder exponent alpha must be in (0, 1]");
  if (a_.size() != static_cast<std::size_t>(m_) * m_ * n_)
    throw std::invalid_argument("A coefficient array has wrong size");
  if (b_.size() != static_cast<std::size_t>(m_) * m_)
    throw std::invalid_argument("B coefficient array has wrong size");

  da_.resize(static_cast<std::size_t>(m_));
  db_.resize(static_cast<std::size_t>(m_));
  da_[0] = a_;
  db_[0] = b_;
  for (int k = 1; k <= m_ - 1; ++k) {
    auto& pa = da_[static_cast<std::size_t>(k - 1)];
    auto& pb = db_[static_cast<std::size_t>(k - 1)];
    auto& ca = da_[static_cast<std::size_t>(k)];
    auto& cb = db_[static_cast<std::size_t>(k)];
    ca.reserve(pa.size());
    cb.reserve(pb.size());
    for (const auto& e : pa) ca.push_back(derivative(e));
    for (const auto& e : pb) cb.push_back(derivative(e));
  }
}

void SystemSpec::check_time(double t) const {
  if (t < 0.0 || t > T_)
    throw std::out_of_range("t = " + std::to_string(t) + " outside [0, " + std::to_string(T_) +
                            "]");
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> eval_system(const SystemSpec& spec, double t,
                                                        const Eigen::VectorXd& xi) {
  spec.check_time(t);
  const int m = spec.m(), n = spec.n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m), B(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < n; ++k) A(i, j) += spec.a(i, j, k)->eval(t) * xi[k];
      B(i, j) = spec.b(i, j)->eval(t);
    }
  return {A, B};
}

Eigen::MatrixXd dt_derivative(const SystemSpec& spec, SystemPart which, int order, double t,
                              const Eigen::VectorXd& xi) {
  spec.check_time(t);
  if (order < 0 || order > spec.m() - 1)
    throw std::invalid_argument("derivative order must be <= m-1");
  const int m = spec.m(), n = spec.n();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (which == SystemPart::A) {
        for (int k = 0; k < n; ++k) M(i, j) += spec.a_deriv(i, j, k, order)->eval(t) * xi[k];
      } else {
        M(i, j) = spec.b_deriv(i, j, order)->eval(t);
      }
    }
  return M;
}

// ---------------------------------------------------------------------------
// Canonical key-value encoding:
//
//   m = 2
//   n = 1
//   T = 1
//   alpha = 1
//   A[1][2][1] = 1
//   A[2][1][1] = t^2
//   B[1][1] = 0
//
// Omitted A/B entries default to 0.  Indices are 1-based.  '#' starts a
// comment.

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct RawSpec {
  int m = 0, n = 0;
  double T = 0.0, alpha = 0.0;
  std::vector<std::tuple<int, int, int, std::string>> a_entries;  // i, j, k 1-based
  std::vector<std::tuple<int, int, std::string>> b_entries;

  SystemSpec build() const {
    if (m < 1 || n < 1) throw std::invalid_argument("system spec: m and n must be given");
    std::vector<ExprPtr> a(static_cast<std::size_t>(m) * m * n, Expr::constant(0.0));
    std::vector<ExprPtr> b(static_cast<std::size_t>(m) * m, Expr::constant(0.0));
    for (const auto& [i, j, k, text] : a_entries) {
      if (i < 1 || i > m || j < 1 || j > m || k < 1 || k > n)
        throw std::invalid_argument("system spec: A index out of range");
      a[(static_cast<std::size_t>(i - 1) * m + (j - 1)) * n + (k - 1)] = parse_coeff_expr(text);
    }
    for (const auto& [i, j, text] : b_entries) {
      if (i < 1 || i > m || j < 1 || j > m)
        throw std::invalid_argument("system spec: B index out of range");
      b[static_cast<std::size_t>(i - 1) * m + (j - 1)] = parse_coeff_expr(text);
    }
    return SystemSpec(m, n, T, alpha, std::move(a), std::move(b));
  }
};

bool parse_indexed(const std::string& key, const char* name, std::vector<int>& idx) {
  std::size_t n = std::strlen(name);
  if (key.compare(0, n, name) != 0) return false;
  std::size_t pos = n;
  idx.clear();
  while (pos < key.size() && key[pos] == '[') {
    std::size_t close = key.find(']', pos);
    if (close == std::string::npos) return false;
    idx.push_back(std::stoi(key.substr(pos + 1, close - pos - 1)));
    pos = close + 1;
  }
  return pos == key.size();
}

}  // namespace

SystemSpec parse_system_spec(const std::string& text) {
  RawSpec raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("system spec line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::vector<int> idx;
    if (key == "m")
      raw.m = std::stoi(value);
    else if (key == "n")
      raw.n = std::stoi(value);
    else if (key == "T")
      raw.T = std::stod(value);
    else if (key == "alpha")
      raw.alpha = std::stod(value);
    else if (parse_indexed(key, "A", idx) && idx.size() == 3)
      raw.a_entries.emplace_back(idx[0], idx[1], idx[2], value);
    else if (parse_indexed(key, "B", idx) && idx.size() == 2)
      raw.b_entries.emplace_back(idx[0], idx[1], value);
    else
      throw std::invalid_argument("system spec line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
  }
  return raw.build();
}

namespace {

bool is_zero_constant(const ExprPtr& e) {
  return e->kind() == Expr::Kind::Constant && e->value() == 0.0;
}

}  // namespace

std::string system_spec_to_text(const SystemSpec& spec) {
  std::ostringstream out;
  out << "m = " << spec.m() << "\n"
      << "n = " << spec.n() << "\n"
      << "T = " << format_double(spec.T()) << "\n"
      << "alpha = " << format_double(spec.alpha()) << "\n";
  for (int i = 0; i < spec.m(); ++i)
    for (int j = 0; j < spec.m(); ++j)
      for (int k = 0; k < spec.n(); ++k)
        if (!is_zero_constant(spec.a(i, j, k)))
          out << "A[" << i + 1 << "][" << j + 1 << "][" << k + 1
              << "] = " << to_string(spec.a(i, j, k)) << "\n";
  for (int i = 0; i < spec.m(); ++i)
    for (int j = 0; j < spec.m(); ++j)
      if (!is_zero_constant(spec.b(i, j)))
        out << "B[" << i + 1 << "][" << j + 1 << "] = " << to_string(spec.b(i, j)) << "\n";
  return out.str();
}

SystemSpec parse_system_spec_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RawSpec raw;
  raw.m = j.at("m").get<int>();
  raw.n = j.at("n").get<int>();
  raw.T = j.at("T").get<double>();
  raw.alpha = j.at("alpha").get<double>();
  if (j.contains("A")) {
    const auto& A = j.at("A");  // A[i][j][k] nested arrays of expression strings
    for (int i = 0; i < raw.m; ++i)
      for (int jj = 0; jj < raw.m; ++jj)
        for (int k = 0; k < raw.n; ++k)
          raw.a_entries.emplace_back(i + 1, jj + 1, k + 1,
                                     A.at(i).at(jj).at(k).get<std::string>());
  }
  if (j.contains("B")) {
    const auto& B = j.at("B");
    for (int i = 0; i < raw.m; ++i)
      for (int jj = 0; jj < raw.m; ++jj)
        raw.b_entries.emplace_back(i + 1, jj + 1, B.at(i).at(jj).get<std::string>());
  }
  return raw.build();
}

std::string system_spec_to_json(const SystemSpec& spec) {
  nlohmann::json j;
  j["m"] = spec.m();
  j["n"] = spec.n();
  j["T"] = spec.T();
  j["alpha"] = spec.alpha();
  auto A = nlohmann::json::array();
  for (int i = 0; i < spec.m(); ++i) {
    auto row = nlohmann::json::array();
    for (int jj = 0; jj < spec.m(); ++jj) {
      auto cell = nlohmann::json::array();
      for (int k = 0; k < spec.n(); ++k) cell.push_back(to_string(spec.a(i, jj, k)));
      row.push_back(cell);
    }
    A.push_back(row);
  }
  j["A"] = A;
  auto B = nlohmann::json::array();
  for (int i = 0; i < spec.m(); ++i) {
    auto row = nlohmann::json::array();
    for (int jj = 0; jj < spec.m(); ++jj) row.push_back(to_string(spec.b(i, jj)));
    B.push_back(row);
  }
  j["B"] = B;
  return j.dump(2);
}

SystemSpec load_system_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_system_spec_json(text);
  return parse_system_spec(text);
}

}  // namespace weakhyp
