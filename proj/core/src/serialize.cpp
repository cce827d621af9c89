#include "hts/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hts/error.hpp"

namespace hts {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string(what) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string(what) + ": bad \"" + key + "\": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string vertex_name(Vertex v) { return "x" + std::to_string(v); }

Vertex parse_vertex_name(const std::string& name) {
  Vertex v = -1;
  const char* begin = name.data() + 1;
  const char* end = name.data() + name.size();
  if (name.size() < 2 || name[0] != 'x' || std::from_chars(begin, end, v).ptr != end || v < 0) {
    throw IoError("bad vertex name '" + name + "'");
  }
  return v;
}

std::string to_json(const Dag& g) {
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return dump({{"d", g.size()}, {"edges", edges}});
}

Dag dag_from_json(const std::string& text) {
  const json j = parse(text, "DAG");
  const int d = field<int>(j, "d", "DAG");
  const auto edges = field<std::vector<std::pair<int, int>>>(j, "edges", "DAG");
  return Dag::from_edges(d, edges);
}

std::string to_json(const LinearOrder& order) { return dump({{"perm", order.perm()}}); }

std::string to_json(const HierarchicalOrder& order) { return dump({{"layers", order.layers()}}); }

std::variant<LinearOrder, HierarchicalOrder> order_from_json(const std::string& text) {
  const json j = parse(text, "order");
  if (j.is_object() && j.contains("perm")) return LinearOrder(field<std::vector<Vertex>>(j, "perm", "order"));
  if (j.is_object() && j.contains("layers")) {
    return HierarchicalOrder(field<std::vector<VertexSet>>(j, "layers", "order"));
  }
  throw IoError("order: expected \"perm\" or \"layers\"");
}

std::string to_json(const ParentSets& parents) {
  json map = json::object();
  for (Vertex v = 0; v < parents.size(); ++v) {
    json names = json::array();
    for (Vertex p : parents.of(v)) names.push_back(vertex_name(p));
    map[vertex_name(v)] = names;
  }
  return dump({{"parents", map}});
}

ParentSets parent_sets_from_json(const std::string& text) {
  const json j = parse(text, "parent sets");
  const auto map = field<std::map<std::string, std::vector<std::string>>>(j, "parents", "parent sets");
  int d = 0;
  for (const auto& [child, ps] : map) {
    d = std::max(d, parse_vertex_name(child) + 1);
    for (const auto& p : ps) d = std::max(d, parse_vertex_name(p) + 1);
  }
  ParentSets out(d);
  for (const auto& [child, ps] : map)
    for (const auto& p : ps) out.add(parse_vertex_name(p), parse_vertex_name(child));
  return out;
}

std::string to_json(const Ars& ars) {
  const int d = ars.size();
  json rel = json::array(), stages = json::array();
  for (Vertex i = 0; i < d; ++i) {
    json r = json::array(), s = json::array();
    for (Vertex j = 0; j < d; ++j) {
      r.push_back(i == j ? 0 : static_cast<int>(ars.at(i, j)));
      s.push_back(i == j ? 0 : ars.provenance(i, j));
    }
    rel.push_back(r);
    stages.push_back(s);
  }
  return dump({{"relations", rel}, {"stages", stages}});
}

Ars ars_from_json(const std::string& text) {
  const json j = parse(text, "ARS");
  const auto rel = field<std::vector<std::vector<int>>>(j, "relations", "ARS");
  std::vector<std::vector<int>> stages;
  if (j.contains("stages")) stages = field<std::vector<std::vector<int>>>(j, "stages", "ARS");
  const int d = static_cast<int>(rel.size());
  Ars ars(d);
  for (Vertex a = 0; a < d; ++a) {
    if (static_cast<int>(rel[static_cast<std::size_t>(a)].size()) != d) throw IoError("ARS: matrix is not square");
    for (Vertex b = a + 1; b < d; ++b) {
      const int code = rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      const int back = rel[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
      const int stage = stages.empty() ? 0 : stages[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      const auto r = static_cast<ApRelation>(code);
      switch (r) {
        case ApRelation::unknown:
        case ApRelation::unrelated_ap1:
        case ApRelation::unrelated_ap2:
          if (back != code) throw IoError("ARS: asymmetric unrelated entry");
          ars.set_unrelated(a, b, r, stage);
          break;
        case ApRelation::ancestor_of:
          if (back != static_cast<int>(ApRelation::descendant_of)) throw IoError("ARS: ancestry not antisymmetric");
          ars.set_ancestor(a, b, stage);
          break;
        case ApRelation::descendant_of:
          if (back != static_cast<int>(ApRelation::ancestor_of)) throw IoError("ARS: ancestry not antisymmetric");
          ars.set_ancestor(b, a, stage);
          break;
        default:
          throw IoError("ARS: unknown relation code " + std::to_string(code));
      }
    }
  }
  return ars;
}

std::string to_json(const SortTrace& trace) {
  json regs = json::array();
  for (const auto& r : trace.regressions) regs.push_back({{"target", r.target}, {"covariates", r.covariates}, {"stage", r.stage}});
  return dump({{"regressions", regs},
               {"layers", trace.layer_history},
               {"tests", trace.tests},
               {"root_guard_fired", trace.root_guard_fired},
               {"stall_guard_count", trace.stall_guard_count},
               {"errors", trace.errors}});
}

std::string to_json(const LhtsDiagnostics& diag) {
  json tests = json::array();
  for (const auto& t : diag.trace) {
    tests.push_back({{"stage", t.stage},
                     {"i", t.i},
                     {"j", t.j},
                     {"kind", t.kind},
                     {"conditioning", t.conditioning},
                     {"p_value", t.p_value},
                     {"independent", t.independent}});
  }
  return dump({{"tests", diag.tests},
               {"stage3_passes", diag.stage3_passes},
               {"stall_guard_fired", diag.stall_guard_fired},
               {"cycle_repaired", diag.cycle_repaired},
               {"errors", diag.errors},
               {"trace", tests}});
}

std::string to_json(const EdResult& result) {
  json tests = json::array();
  for (const auto& t : result.trace) {
    tests.push_back({{"i", t.i}, {"j", t.j}, {"z_size", t.z_size}, {"p_value", t.p_value}, {"dependent", t.dependent}});
  }
  json hist = json::object();
  for (const auto& [size, count] : result.z_histogram()) hist[std::to_string(size)] = count;
  return dump({{"tests", result.tests},
               {"max_z", result.max_z},
               {"z_histogram", hist},
               {"errors", result.errors},
               {"trace", tests}});
}

std::string to_csv(const Dataset& ds) {
  std::string out;
  for (int c = 0; c < ds.cols(); ++c) out += (c ? "," : "") + vertex_name(c);
  out += '\n';
  char buf[40];
  for (int r = 0; r < ds.rows(); ++r) {
    for (int c = 0; c < ds.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.values()(r, c));
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("dataset: empty CSV");
  int d = 0;
  {
    std::istringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) {
      if (!name.empty() && name.back() == '\r') name.pop_back();
      if (parse_vertex_name(name) != d) throw IoError("dataset: header must read x0..x{d-1}");
      ++d;
    }
  }
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cell;
    int c = 0;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw IoError("dataset: bad number '" + cell + "' on data row " + std::to_string(rows + 1));
      }
      ++c;
    }
    if (c != d) throw IoError("dataset: row " + std::to_string(rows + 1) + " has " + std::to_string(c) + " fields");
    ++rows;
  }
  Eigen::MatrixXd m(rows, d);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = values[static_cast<std::size_t>(r) * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
  return Dataset(std::move(m));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace hts
