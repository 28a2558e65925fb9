#include "dagnet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace dagnet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot create " + path);
  out << text;
  if (!out) throw IoFailure("failed writing " + path);
}

// Integer parser used for list elements and header fields.
std::optional<long> to_long(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (errno != 0 || end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

std::optional<double> to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

// Splits "a, b, c" at top-level commas (depth-aware for nested brackets).
std::vector<std::string> split_list(const std::string& inner) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : inner) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) parts.push_back(trim(cur));
  return parts;
}

// Strips the enclosing brackets of a list value.
std::optional<std::string> unbracket(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') return std::nullopt;
  return t.substr(1, t.size() - 2);
}

}  // namespace

KeyValueFile KeyValueFile::parse_text(const std::string& text,
                                      const std::string& origin) {
  KeyValueFile f;
  f.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected `key = value`");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (f.values_.count(key)) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": duplicate key \"" + key + "\"");
    }
    f.values_[key] = {value, lineno};
    f.order_.push_back(key);
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  return parse_text(read_file(path), path);
}

bool KeyValueFile::has(const std::string& key) const {
  return values_.count(key) != 0;
}

const std::string& KeyValueFile::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ParseError(origin_ + ": missing required key \"" + key + "\"");
  }
  return it->second.first;
}

void KeyValueFile::fail(const std::string& key, const std::string& why) const {
  const auto it = values_.find(key);
  const int line = it == values_.end() ? 0 : it->second.second;
  throw ParseError(origin_ + ":" + std::to_string(line) + ": key \"" + key +
                   "\" " + why);
}

std::string KeyValueFile::get_string(const std::string& key) const {
  return raw(key);
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

long KeyValueFile::get_int(const std::string& key) const {
  const auto v = to_long(raw(key));
  if (!v) fail(key, "is not an integer");
  return *v;
}

long KeyValueFile::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double KeyValueFile::get_real(const std::string& key) const {
  const auto v = to_double(raw(key));
  if (!v) fail(key, "is not a number");
  return *v;
}

double KeyValueFile::get_real(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key) const {
  const std::string v = raw(key);
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key, "is not `true` or `false`");
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::vector<int> KeyValueFile::get_int_list(const std::string& key) const {
  const auto inner = unbracket(raw(key));
  if (!inner) fail(key, "is not a bracketed list");
  std::vector<int> out;
  for (const std::string& part : split_list(*inner)) {
    const auto v = to_long(part);
    if (!v) fail(key, "holds a non-integer element \"" + part + "\"");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

std::vector<std::pair<int, int>> KeyValueFile::get_pair_list(
    const std::string& key) const {
  const auto inner = unbracket(raw(key));
  if (!inner) fail(key, "is not a bracketed list");
  std::vector<std::pair<int, int>> out;
  for (const std::string& part : split_list(*inner)) {
    const auto pair_inner = unbracket(part);
    if (!pair_inner) fail(key, "holds a non-pair element \"" + part + "\"");
    const auto elems = split_list(*pair_inner);
    if (elems.size() != 2) fail(key, "holds a pair of the wrong arity");
    const auto a = to_long(elems[0]);
    const auto b = to_long(elems[1]);
    if (!a || !b) fail(key, "holds a non-integer pair element");
    out.emplace_back(static_cast<int>(*a), static_cast<int>(*b));
  }
  return out;
}

void KeyValueFile::require_known(
    const std::vector<std::string>& allowed) const {
  for (const std::string& key : order_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(key, "is not a recognized key");
    }
  }
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string topology_to_text(const DagTopology& t) {
  std::ostringstream out;
  out << "widths = [";
  for (std::size_t i = 0; i < t.layer_widths().size(); ++i) {
    if (i) out << ", ";
    out << t.layer_widths()[i];
  }
  out << "]\nedges = [";
  for (std::size_t i = 0; i < t.edges().size(); ++i) {
    if (i) out << ", ";
    out << "[" << t.edges()[i].src << ", " << t.edges()[i].dst << "]";
  }
  out << "]\n";
  if (t.code_layer()) out << "code_layer = " << *t.code_layer() << "\n";
  return out.str();
}

DagTopology topology_from_text(const std::string& text,
                               const std::string& origin) {
  const KeyValueFile f = KeyValueFile::parse_text(text, origin);
  f.require_known({"widths", "edges", "code_layer"});
  const std::vector<int> widths = f.get_int_list("widths");
  std::vector<Edge> edges;
  for (const auto& [a, b] : f.get_pair_list("edges")) edges.push_back({a, b});
  std::optional<int> code;
  if (f.has("code_layer")) code = static_cast<int>(f.get_int("code_layer"));
  return DagTopology(widths, std::move(edges), code);
}

DagTopology load_topology(const std::string& path) {
  return topology_from_text(read_file(path), path);
}

void save_topology(const std::string& path, const DagTopology& t) {
  write_file(path, topology_to_text(t));
}

std::uint64_t topology_hash(const DagTopology& t) {
  return fnv1a64(topology_to_text(t));
}

void save_matrices(const std::string& path, const EdgeMatrices& m,
                   std::uint64_t topo_hash) {
  std::ostringstream out;
  out << "dagnet-matrices 1\n";
  out << "topology_hash " << hash_hex(topo_hash) << "\n";
  out << "count " << m.count() << "\n";
  char buf[40];
  for (std::size_t idx = 0; idx < m.count(); ++idx) {
    const Edge& e = m.edges()[idx];
    const Matrix& mat = m.mat(idx);
    out << "edge " << e.src << " " << e.dst << " " << mat.rows() << " "
        << mat.cols() << "\n";
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      const double* row = mat.row(r);
      for (std::size_t c = 0; c < mat.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%a", row[c]);
        out << (c ? " " : "") << buf;
      }
      out << "\n";
    }
  }
  write_file(path, out.str());
}

WeightSet load_weights(const std::string& path, const DagTopology& t) {
  std::istringstream in(read_file(path));
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "dagnet-matrices" || version != 1) {
    throw ParseError(path + ": not a matrix container");
  }
  std::string stored_hash;
  if (!(in >> word >> stored_hash) || word != "topology_hash") {
    throw ParseError(path + ": missing topology hash");
  }
  if (stored_hash != hash_hex(topology_hash(t))) {
    throw LoadMismatch(path + ": weights were saved for a different topology");
  }
  std::size_t count = 0;
  if (!(in >> word >> count) || word != "count") {
    throw ParseError(path + ": missing matrix count");
  }
  if (count != t.edges().size()) {
    throw LoadMismatch(path + ": matrix count does not match the topology");
  }

  WeightSet w(t);
  for (std::size_t idx = 0; idx < count; ++idx) {
    int src, dst;
    std::size_t rows, cols;
    if (!(in >> word >> src >> dst >> rows >> cols) || word != "edge") {
      throw ParseError(path + ": malformed edge header");
    }
    const Edge expect = t.edges()[idx];
    if (src != expect.src || dst != expect.dst) {
      throw LoadMismatch(path + ": edges stored in unexpected order");
    }
    Matrix& mat = w.mat(idx);
    if (rows != mat.rows() || cols != mat.cols()) {
      throw LoadMismatch(path + ": matrix shape does not match the topology");
    }
    for (std::size_t i = 0; i < mat.size(); ++i) {
      if (!(in >> word)) throw ParseError(path + ": matrix data ended early");
      char* end = nullptr;
      const double v = std::strtod(word.c_str(), &end);
      if (end != word.c_str() + word.size()) {
        throw ParseError(path + ": bad matrix entry \"" + word + "\"");
      }
      mat.data()[i] = v;
    }
  }
  return w;
}

void save_trajectory(const std::string& path,
                     const std::vector<IterationRecord>& records,
                     std::uint64_t config_hash, double eta, double s) {
  std::ostringstream out;
  out << "# dagnet trajectory 1\n";
  out << "# config_hash = " << hash_hex(config_hash) << "\n";
  out << "# eta = " << format_double(eta) << "\n";
  out << "# s = " << format_double(s) << "\n";
  out << "k,E,sum_q_sq,sum_dv_sq,sum_dH_sq,Q_pred,dE,max_abs_weight\n";
  for (const IterationRecord& r : records) {
    out << r.k << "," << format_double(r.error) << ","
        << format_double(r.q_sq_total) << "," << format_double(r.dv_sq_total)
        << "," << format_double(r.dh_sq_total) << ","
        << format_double(r.predictor) << "," << format_double(r.error_change)
        << "," << format_double(r.max_abs_weight) << "\n";
  }
  write_file(path, out.str());
}

TrajectoryFile load_trajectory(const std::string& path) {
  std::istringstream in(read_file(path));
  TrajectoryFile tf;
  std::string line;
  bool saw_header = false;
  bool saw_columns = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const std::string body = trim(t.substr(1));
      if (body == "dagnet trajectory 1") {
        saw_header = true;
      } else {
        const std::size_t eq = body.find('=');
        if (eq != std::string::npos) {
          const std::string key = trim(body.substr(0, eq));
          const std::string value = trim(body.substr(eq + 1));
          if (key == "config_hash") {
            tf.config_hash = std::strtoull(value.c_str(), nullptr, 16);
          } else if (key == "eta") {
            tf.eta = to_double(value).value_or(0.0);
          } else if (key == "s") {
            tf.s = to_double(value).value_or(0.0);
          }
        }
      }
      continue;
    }
    if (!saw_columns) {
      if (t != "k,E,sum_q_sq,sum_dv_sq,sum_dH_sq,Q_pred,dE,max_abs_weight") {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": unexpected column header");
      }
      saw_columns = true;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(t);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 8 columns");
    }
    IterationRecord r;
    const auto k = to_long(cells[0]);
    if (!k) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad index");
    }
    r.k = *k;
    double* fields[] = {&r.error,     &r.q_sq_total,   &r.dv_sq_total,
                        &r.dh_sq_total, &r.predictor,  &r.error_change,
                        &r.max_abs_weight};
    for (int i = 0; i < 7; ++i) {
      const auto v = to_double(cells[static_cast<std::size_t>(i) + 1]);
      if (!v) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": bad number in column " + std::to_string(i + 2));
      }
      *fields[i] = *v;
    }
    tf.records.push_back(std::move(r));
  }
  if (!saw_header || !saw_columns) {
    throw ParseError(path + ": not a trajectory file");
  }
  return tf;
}

}  // namespace dagnet
