#include "rlct/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rlct {

using nlohmann::json;

namespace {

json matrix_json(const MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

MatrixXd matrix_from(const json& doc, const char* key, Eigen::Index rows, Eigen::Index cols) {
  if (!doc.contains(key)) fail(ErrorKind::Input, std::string("missing field '") + key + "'");
  const json& j = doc.at(key);
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    fail(ErrorKind::Input, std::string("field '") + key + "' must have " + std::to_string(rows) + " rows");
  MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& r = j[i];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols)
      fail(ErrorKind::Input, std::string("field '") + key + "' must have " + std::to_string(cols) + " columns");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!r[c].is_number()) fail(ErrorKind::Input, std::string("field '") + key + "' has a non-numeric entry");
      M(i, c) = r[c].get<double>();
    }
  }
  return M;
}

json signature_json(const Signature& s) { return s.entries(); }

Signature signature_from(const json& j, const char* key) {
  if (!j.is_array()) fail(ErrorKind::Input, std::string("field '") + key + "' must be an array");
  return Signature(j.get<std::vector<int>>());
}

json realization_json(const StructuredRealization& r) {
  json doc;
  doc["n"] = r.n();
  doc["m"] = r.m();
  doc["p"] = r.p();
  doc["A"] = matrix_json(r.A());
  doc["B"] = matrix_json(r.B());
  doc["C"] = matrix_json(r.C());
  doc["D"] = matrix_json(r.D());
  if (r.sigma_int()) doc["sigma_int"] = signature_json(*r.sigma_int());
  if (r.sigma_ext()) doc["sigma_ext"] = signature_json(*r.sigma_ext());
  if (r.tag() != ClassTag::Unstructured) doc["class_tag"] = to_string(r.tag());
  if (r.partition()) {
    json p;
    p["row_split"] = r.partition()->row_split;
    p["col_split"] = r.partition()->col_split;
    if (r.partition()->state_split) p["state_split"] = *r.partition()->state_split;
    doc["partition"] = p;
  }
  return doc;
}

int int_field(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer() || doc.at(key).get<int>() < 0)
    fail(ErrorKind::Input, std::string("field '") + key + "' must be a non-negative integer");
  return doc.at(key).get<int>();
}

StructuredRealization realization_from(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Input, "realization document must be an object");
  const int n = int_field(doc, "n"), m = int_field(doc, "m"), p = int_field(doc, "p");
  MatrixXd A = matrix_from(doc, "A", n, n), B = matrix_from(doc, "B", n, m);
  MatrixXd C = matrix_from(doc, "C", p, n), D = matrix_from(doc, "D", p, m);
  std::optional<Signature> si, se;
  if (doc.contains("sigma_int")) si = signature_from(doc["sigma_int"], "sigma_int");
  if (doc.contains("sigma_ext")) se = signature_from(doc["sigma_ext"], "sigma_ext");
  ClassTag tag = ClassTag::Unstructured;
  if (doc.contains("class_tag")) tag = class_tag_from_string(doc["class_tag"].get<std::string>());
  std::optional<BlockPartition> part;
  if (doc.contains("partition")) {
    const json& pj = doc["partition"];
    BlockPartition bp;
    bp.row_split = int_field(pj, "row_split");
    bp.col_split = int_field(pj, "col_split");
    if (pj.contains("state_split")) bp.state_split = int_field(pj, "state_split");
    part = bp;
  }
  return StructuredRealization(std::move(A), std::move(B), std::move(C), std::move(D), si, se, tag, part);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::Input, std::string("malformed document: ") + e.what());
  }
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string write_realization(const StructuredRealization& real) { return realization_json(real).dump(2) + "\n"; }

StructuredRealization read_realization(const std::string& text) {
  const json doc = parse_json(text);
  return guarded([&] { return realization_from(doc); });
}

std::string write_controller(const Controller& k) {
  json doc = realization_json(k.realization());
  if (k.impl_hint) {
    json h;
    h["kind"] = to_string(k.impl_hint->kind);
    h["ohms"] = k.impl_hint->ohms;
    if (!k.impl_hint->netlist.empty()) h["netlist"] = k.impl_hint->netlist;
    doc["impl_hint"] = h;
  } else {
    doc["impl_hint"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

Controller read_controller(const std::string& text) {
  const json doc = parse_json(text);
  return guarded([&] {
    Controller k = Controller::from_realization(realization_from(doc));
    if (doc.contains("impl_hint") && !doc["impl_hint"].is_null()) {
      const json& h = doc["impl_hint"];
      ImplHint hint;
      hint.kind = impl_kind_from_string(h.at("kind").get<std::string>());
      hint.ohms = h.value("ohms", 0.0);
      hint.netlist = h.value("netlist", std::string());
      k.impl_hint = hint;
    }
    return k;
  });
}

std::string write_internal(const StructuredRealization& real, const InternalData& d) {
  json doc = realization_json(real.with_signatures(d.sigma_int, d.sigma_ext));
  doc["theta"] = matrix_json(d.theta);
  doc["gamma"] = matrix_json(d.gamma);
  doc["phi"] = matrix_json(d.phi);
  doc["sigma_int_dagger"] = signature_json(d.sigma_int_dagger);
  doc["n_C"] = d.n_C;
  doc["n_L"] = d.n_L;
  doc["permutation"] = matrix_json(d.P);
  return doc.dump(2) + "\n";
}

std::pair<StructuredRealization, InternalData> read_internal(const std::string& text) {
  const json doc = parse_json(text);
  return guarded([&] {
    StructuredRealization real = realization_from(doc);
    if (!real.sigma_int() || !real.sigma_ext()) fail(ErrorKind::Input, "internal data needs sigma_int and sigma_ext");
    InternalData d;
    d.sigma_int = *real.sigma_int();
    d.sigma_ext = *real.sigma_ext();
    d.sigma_int_dagger = signature_from(doc.at("sigma_int_dagger"), "sigma_int_dagger");
    const int nd = d.sigma_int_dagger.size(), ni = real.n();
    d.theta = matrix_from(doc, "theta", nd, nd);
    d.gamma = matrix_from(doc, "gamma", ni, nd);
    d.phi = matrix_from(doc, "phi", ni, ni);
    d.n_C = int_field(doc, "n_C");
    d.n_L = int_field(doc, "n_L");
    const int n = nd + ni + d.sigma_ext.size();
    d.P = matrix_from(doc, "permutation", n, n);
    return std::make_pair(real, d);
  });
}

std::string write_csv(const CsvTable& t) {
  std::string out;
  for (size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) fail(ErrorKind::Input, "CSV row width does not match the header");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format17(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, int line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
  if (b < e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e) throw ParseError(line, 1, "invalid number '" + s + "'");
  return v;
}

}  // namespace

CsvTable read_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (t.header.empty()) {
      t.header = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw ParseError(lineno, 1, "row width does not match the header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(to_double(c, lineno));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError(1, 1, "missing CSV header");
  return t;
}

MatrixXd read_matrix_text(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> row;
    while (ls >> tok) row.push_back(to_double(tok, lineno));
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(lineno, 1, "matrix rows must have equal length");
    rows.push_back(std::move(row));
  }
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(rows.front().size()) : 0;
  MatrixXd M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = rows[i][j];
  return M;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Input, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Input, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::Input, "write to '" + path + "' failed");
}

}  // namespace rlct
