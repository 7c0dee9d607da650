#pragma once

#include <string>

#include <json.hpp>

#include "invmon/graph.hpp"

namespace invmon {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json graph_to_json(const InvWordGraph& g);
/// Vertex ids in the document may be arbitrary integers; they are renumbered
/// 0..n-1 in listed order. Throws SchemaError.
InvWordGraph graph_from_json(const nlohmann::json& j);

std::string export_json(const InvWordGraph& g);
InvWordGraph import_json(const std::string& text);

/// One arc per inverse pair, drawn with its positive label; "start"/"end"
/// marks are drawn as an entry arrow and a double circle.
std::string export_dot(const InvWordGraph& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace invmon
