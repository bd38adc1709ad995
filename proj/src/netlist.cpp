#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "rlct/netgraph.hpp"

namespace rlct {

int Netlist::count(ElementKind kind) const {
  return static_cast<int>(std::count_if(elements.begin(), elements.end(),
                                        [kind](const Element& e) { return e.kind == kind; }));
}

bool Netlist::has_node(const std::string& name) const {
  return std::find(nodes.begin(), nodes.end(), name) != nodes.end();
}

const std::string& Netlist::add_node(const std::string& name) {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  if (it != nodes.end()) return *it;
  nodes.push_back(name);
  return nodes.back();
}

void Netlist::add(ElementKind kind, const std::string& a, const std::string& b, double value) {
  if (nodes.empty()) nodes.push_back("0");
  add_node(a);
  add_node(b);
  elements.push_back(Element{kind, {a, b}, value});
}

void Netlist::add_port(const std::string& plus, const std::string& minus) {
  if (nodes.empty()) nodes.push_back("0");
  add_node(plus);
  add_node(minus);
  ports.push_back(Port{plus, minus});
}

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back(Token{line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && std::isfinite(out);
}

double parse_value(const Token& tok, int line) {
  const std::string& s = tok.text;
  double v = 0.0;
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!parse_double(s, v)) throw ParseError(line, tok.column, "invalid number '" + s + "'");
  } else {
    double num = 0.0, den = 0.0;
    if (!parse_double(std::string_view(s).substr(0, slash), num) ||
        !parse_double(std::string_view(s).substr(slash + 1), den))
      throw ParseError(line, tok.column, "invalid fraction '" + s + "'");
    if (den == 0.0) throw ParseError(line, tok.column, "zero denominator in '" + s + "'");
    v = num / den;
  }
  return v;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kind_letter(ElementKind k) {
  switch (k) {
    case ElementKind::R: return "R";
    case ElementKind::L: return "L";
    case ElementKind::C: return "C";
    case ElementKind::T: return "T";
  }
  return "R";
}

// Canonical node order: ground, then elements, ports and faces in order.
void canonical_nodes(Netlist& net) {
  net.nodes.assign(1, "0");
  for (const auto& e : net.elements)
    for (const auto& n : e.nodes) net.add_node(n);
  for (const auto& p : net.ports) {
    net.add_node(p.plus);
    net.add_node(p.minus);
  }
  for (const auto& f : net.faces)
    for (const auto& n : f) net.add_node(n);
}

}  // namespace

Netlist parse_netlist(std::string_view text) {
  Netlist net;
  std::set<std::string> wired;  // nodes touched by elements or ports
  std::set<std::pair<std::string, std::string>> port_pairs;
  struct FaceRef {
    int line;
    std::vector<Token> toks;
  };
  std::vector<FaceRef> face_refs;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    auto need_args = [&](size_t n) {
      if (toks.size() != n + 1) {
        const int col = toks.size() > n + 1 ? toks[n + 1].column : static_cast<int>(line.size()) + 1;
        throw ParseError(lineno, col,
                         "'" + kw + "' expects " + std::to_string(n) + " arguments, got " +
                             std::to_string(toks.size() - 1));
      }
    };
    if (kw == "R" || kw == "L" || kw == "C") {
      need_args(3);
      const double v = parse_value(toks[3], lineno);
      if (!(v > 0.0)) throw ParseError(lineno, toks[3].column, "non-positive element value " + toks[3].text);
      if (toks[1].text == toks[2].text)
        throw ParseError(lineno, toks[2].column, "element terminals must be distinct nodes");
      const ElementKind k = kw == "R" ? ElementKind::R : kw == "L" ? ElementKind::L : ElementKind::C;
      net.elements.push_back(Element{k, {toks[1].text, toks[2].text}, v});
      wired.insert(toks[1].text);
      wired.insert(toks[2].text);
    } else if (kw == "T") {
      need_args(5);
      const double v = parse_value(toks[5], lineno);
      if (!(v > 0.0)) throw ParseError(lineno, toks[5].column, "non-positive turns ratio " + toks[5].text);
      if (toks[1].text == toks[2].text || toks[3].text == toks[4].text)
        throw ParseError(lineno, toks[2].column, "transformer winding terminals must be distinct nodes");
      net.elements.push_back(
          Element{ElementKind::T, {toks[1].text, toks[2].text, toks[3].text, toks[4].text}, v});
      for (int i = 1; i <= 4; ++i) wired.insert(toks[i].text);
    } else if (kw == "P") {
      need_args(2);
      const std::string &a = toks[1].text, &b = toks[2].text;
      if (a == b) throw ParseError(lineno, toks[2].column, "port terminals must be distinct nodes");
      const auto key = std::minmax(a, b);
      if (!port_pairs.insert({key.first, key.second}).second)
        throw ParseError(lineno, toks[0].column, "duplicate port " + a + " " + b);
      net.ports.push_back(Port{a, b});
      wired.insert(a);
      wired.insert(b);
    } else if (kw == "F") {
      if (toks.size() < 3) throw ParseError(lineno, toks[0].column, "face needs at least two nodes");
      face_refs.push_back(FaceRef{lineno, std::vector<Token>(toks.begin() + 1, toks.end())});
    } else {
      throw ParseError(lineno, toks[0].column, "unknown statement '" + kw + "'");
    }
  }

  for (const auto& f : face_refs) {
    std::vector<std::string> cyc;
    for (const auto& t : f.toks) {
      if (!wired.count(t.text)) throw ParseError(f.line, t.column, "dangling node '" + t.text + "' in face");
      cyc.push_back(t.text);
    }
    net.faces.push_back(std::move(cyc));
  }
  canonical_nodes(net);
  if (!net.faces.empty()) {
    try {
      (void)embedding_darts(net);
    } catch (const Error& e) {
      throw ParseError(face_refs.front().line, 1, std::string("invalid planar embedding: ") + e.what());
    }
  }
  return net;
}

std::string serialize_netlist(const Netlist& net) {
  std::ostringstream os;
  for (const auto& e : net.elements) {
    os << kind_letter(e.kind);
    for (const auto& n : e.nodes) os << ' ' << n;
    os << ' ' << format_value(e.value) << '\n';
  }
  for (const auto& p : net.ports) os << "P " << p.plus << ' ' << p.minus << '\n';
  for (const auto& f : net.faces) {
    os << 'F';
    for (const auto& n : f) os << ' ' << n;
    os << '\n';
  }
  return os.str();
}

void validate_netlist(const Netlist& net) {
  std::set<std::string> known(net.nodes.begin(), net.nodes.end());
  auto need_node = [&](const std::string& n) {
    if (!known.count(n)) fail(ErrorKind::Structure, "netlist references unknown node '" + n + "'");
  };
  for (size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    const size_t arity = e.kind == ElementKind::T ? 4 : 2;
    if (e.nodes.size() != arity) fail(ErrorKind::Structure, "element " + std::to_string(i) + " has wrong arity");
    if (!(e.value > 0.0))
      fail(ErrorKind::Structure, "element " + std::to_string(i) + " has a non-positive value");
    for (const auto& n : e.nodes) need_node(n);
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : net.ports) {
    need_node(p.plus);
    need_node(p.minus);
    if (p.plus == p.minus) fail(ErrorKind::Structure, "port terminals must be distinct nodes");
    const auto key = std::minmax(p.plus, p.minus);
    if (!seen.insert({key.first, key.second}).second)
      fail(ErrorKind::Structure, "duplicate port " + p.plus + " " + p.minus);
  }
  if (!net.faces.empty()) (void)embedding_darts(net);
}

}  // namespace rlct
