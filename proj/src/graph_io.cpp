#include "invmon/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace invmon {

using nlohmann::json;

nlohmann::json graph_to_json(const InvWordGraph& g) {
  json j;
  j["vertices"] = json::array();
  for (Vertex v = 0; v < g.num_vertices(); ++v) j["vertices"].push_back(v);
  j["edges"] = json::array();
  for (const Edge& e : g.edges())
    j["edges"].push_back({{"src", e.src}, {"label", e.label.text()}, {"dst", e.dst}});
  j["marks"] = json::object();
  for (const auto& [k, xs] : g.marks) j["marks"][k] = xs;
  return j;
}

InvWordGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw SchemaError("graph: missing \"vertices\" array");
  std::unordered_map<long long, Vertex> id;
  InvWordGraph g;
  for (const auto& v : j["vertices"]) {
    if (!v.is_number_integer()) throw SchemaError("graph: vertex ids must be integers");
    if (!id.emplace(v.get<long long>(), g.num_vertices()).second)
      throw SchemaError("graph: duplicate vertex " + v.dump());
    g.add_vertex();
  }
  auto lookup = [&](const json& v, const char* what) {
    if (!v.is_number_integer()) throw SchemaError(std::string("graph: ") + what + " must be an integer");
    auto it = id.find(v.get<long long>());
    if (it == id.end()) throw SchemaError(std::string("graph: unknown vertex in ") + what + ": " + v.dump());
    return it->second;
  };
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw SchemaError("graph: \"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_object() || !e.contains("src") || !e.contains("dst") || !e.contains("label") ||
          !e["label"].is_string())
        throw SchemaError("graph: edge needs src, label, dst");
      InvWord lab;
      try {
        lab = parse_word(e["label"].get<std::string>());
      } catch (const ParseError& err) {
        throw SchemaError(std::string("graph: bad label: ") + err.what());
      }
      if (lab.size() != 1) throw SchemaError("graph: label must be a single letter");
      g.add_edge(lookup(e["src"], "src"), lab[0], lookup(e["dst"], "dst"));
    }
  }
  if (j.contains("marks")) {
    if (!j["marks"].is_object()) throw SchemaError("graph: \"marks\" must be an object");
    for (const auto& [k, v] : j["marks"].items()) {
      if (!v.is_array()) throw SchemaError("graph: mark \"" + k + "\" must be an array");
      std::vector<Vertex> xs;
      for (const auto& x : v) xs.push_back(lookup(x, "marks"));
      g.marks[k] = xs;
    }
  }
  return g;
}

std::string export_json(const InvWordGraph& g) { return graph_to_json(g).dump(2); }

InvWordGraph import_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return graph_from_json(j);
}

std::string export_dot(const InvWordGraph& g) {
  std::ostringstream os;
  os << "digraph G {\n  rankdir=LR;\n";
  auto mark = [&](const char* k) -> Vertex {
    auto it = g.marks.find(k);
    return (it == g.marks.end() || it->second.empty()) ? -1 : it->second.front();
  };
  const Vertex start = mark("start"), end = mark("end");
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    os << "  v" << v << " [label=\"" << v << "\"";
    if (v == end) os << ", shape=doublecircle";
    os << "];\n";
  }
  if (start >= 0) os << "  init [shape=point];\n  init -> v" << start << ";\n";
  for (const Edge& e : g.edges())
    os << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.label.text() << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

}  // namespace invmon
