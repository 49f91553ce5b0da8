#include "mmspace/space_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mmspace/errors.hpp"

namespace mms {

namespace {

using nlohmann::json;

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::string text_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ParseError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

std::string to_space_text(const DiscreteSpace& space) {
  std::ostringstream out;
  out << "{\n\"vertices\": [\n";
  for (VertexId v = 0; v < space.size(); ++v) {
    json item = {{"id", space.vertex(v).id}, {"w", space.weight(v)}};
    if (!space.vertex(v).tag.empty()) item["tag"] = space.vertex(v).tag;
    out << item.dump() << (v + 1 < space.size() ? ",\n" : "\n");
  }
  out << "],\n\"edges\": [\n";
  const auto& edges = space.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    json item = {{"u", space.vertex(edges[i].u).id}, {"v", space.vertex(edges[i].v).id}, {"len", edges[i].length}};
    out << item.dump() << (i + 1 < edges.size() ? ",\n" : "\n");
  }
  out << "],\n\"mesh\": " << json(space.mesh()).dump() << ",\n";
  out << "\"tau\": " << json(space.tau()).dump() << ",\n";
  out << "\"meta\": " << space.meta().dump() << "\n}\n";
  return out.str();
}

DiscreteSpace from_space_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError("space file syntax error at " + position_of(text, err.byte == 0 ? 0 : err.byte - 1) + ": " +
                     err.what());
  }
  if (!doc.is_object()) throw ParseError("space file: top level must be an object");
  const json& vs = field(doc, "vertices", "space file");
  const json& es = field(doc, "edges", "space file");
  if (!vs.is_array()) throw ParseError("vertices: expected an array");
  if (!es.is_array()) throw ParseError("edges: expected an array");

  std::vector<Vertex> vertices;
  std::unordered_map<std::string, VertexId> ids;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string where = "vertices[" + std::to_string(i) + "]";
    Vertex v;
    v.id = text_field(vs[i], "id", where);
    v.weight = number(vs[i], "w", where);
    if (vs[i].contains("tag")) {
      if (!vs[i]["tag"].is_string()) throw ParseError(where + ".tag: expected a string");
      v.tag = vs[i]["tag"].get<std::string>();
    }
    if (v.weight < 0) throw ParseError(where + ".w: negative weight for vertex '" + v.id + "'");
    if (!ids.emplace(v.id, vertices.size()).second) throw ParseError(where + ".id: duplicate id '" + v.id + "'");
    vertices.push_back(std::move(v));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string where = "edges[" + std::to_string(i) + "]";
    std::string u = text_field(es[i], "u", where);
    std::string v = text_field(es[i], "v", where);
    double len = number(es[i], "len", where);
    if (!(len > 0.0)) {
      std::ostringstream msg;
      msg << where << ".len: edge " << u << "-" << v << " has non-positive length " << len;
      throw ParseError(msg.str());
    }
    auto iu = ids.find(u), iv = ids.find(v);
    if (iu == ids.end()) throw ParseError(where + ".u: unknown vertex '" + u + "'");
    if (iv == ids.end()) throw ParseError(where + ".v: unknown vertex '" + v + "'");
    edges.push_back(Edge{iu->second, iv->second, len});
  }
  double mesh = number(doc, "mesh", "space file");
  std::optional<double> tau;
  if (doc.contains("tau")) tau = number(doc, "tau", "space file");
  json meta = doc.contains("meta") ? doc["meta"] : json::object();
  return DiscreteSpace(std::move(vertices), std::move(edges), mesh, tau, std::move(meta));
}

void save_space(const DiscreteSpace& space, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_space_text(space);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

DiscreteSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_space_text(buf.str());
  } catch (const ParseError& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

}  // namespace mms
