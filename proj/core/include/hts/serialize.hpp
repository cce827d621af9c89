#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "hts/dataset.hpp"
#include "hts/ed.hpp"
#include "hts/graph.hpp"
#include "hts/lhts.hpp"
#include "hts/nhts.hpp"

namespace hts {

/// {"d": 3, "edges": [[0, 1], [1, 2]]}
std::string to_json(const Dag& g);
Dag dag_from_json(const std::string& text);

/// {"perm": [...]} and {"layers": [[...], ...]}
std::string to_json(const LinearOrder& order);
std::string to_json(const HierarchicalOrder& order);
std::variant<LinearOrder, HierarchicalOrder> order_from_json(const std::string& text);

/// {"parents": {"x3": ["x1", "x2"], ...}}; every vertex is listed.
std::string to_json(const ParentSets& parents);
ParentSets parent_sets_from_json(const std::string& text);

/// {"relations": d x d codes (ApRelation values, diagonal 0), "stages": d x d}
std::string to_json(const Ars& ars);
Ars ars_from_json(const std::string& text);

std::string to_json(const SortTrace& trace);
std::string to_json(const LhtsDiagnostics& diag);
std::string to_json(const EdResult& result);

/// Header x0..x{d-1}, one row per sample, values printed with 17 significant digits.
std::string to_csv(const Dataset& ds);
Dataset dataset_from_csv(const std::string& text);

std::string vertex_name(Vertex v);
Vertex parse_vertex_name(const std::string& name);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hts
