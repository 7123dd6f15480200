#include "adm/snapshot.hpp"

#include <fstream>
#include <string>

namespace adm {
namespace {

nlohmann::json grid_json(const TorusGrid& g) { return {{"dim", g.dim()}, {"n", g.n()}}; }

nlohmann::json component_list(const std::vector<ScalarField>& comps) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : comps) arr.push_back(std::vector<double>(c.values().begin(), c.values().end()));
  return arr;
}

nlohmann::json make(const TorusGrid& g, const char* kind, const std::vector<ScalarField>& comps) {
  return {{"grid", grid_json(g)}, {"kind", kind}, {"components", component_list(comps)}};
}

std::vector<ScalarField> read_components(const TorusGrid& grid, const nlohmann::json& arr,
                                         std::size_t expected) {
  if (!arr.is_array() || arr.size() != expected) {
    throw InvalidArgument("snapshot has " + std::to_string(arr.is_array() ? arr.size() : 0) +
                          " components, expected " + std::to_string(expected));
  }
  std::vector<ScalarField> out;
  for (const auto& c : arr) out.emplace_back(grid, c.get<std::vector<double>>());
  return out;
}

}  // namespace

nlohmann::json to_snapshot(const ScalarField& f) { return make(f.grid(), "scalar", {f}); }
nlohmann::json to_snapshot(const VectorField& f) { return make(f.grid(), "vector", f.components()); }
nlohmann::json to_snapshot(const OneFormField& f) { return make(f.grid(), "one_form", f.components()); }
nlohmann::json to_snapshot(const SymTensorField& f) {
  return make(f.grid(), f.variance() == Variance::covariant ? "sym2" : "sym2_contravariant",
              f.components());
}
nlohmann::json to_snapshot(const MetricField& f) {
  return make(f.grid(), "metric", f.tensor().components());
}
nlohmann::json to_snapshot(const SnapshotField& f) {
  return std::visit([](const auto& v) { return to_snapshot(v); }, f);
}

SnapshotField from_snapshot(const nlohmann::json& j) {
  try {
    const TorusGrid grid(j.at("grid").at("dim").get<int>(), j.at("grid").at("n").get<int>());
    const std::string kind = j.at("kind").get<std::string>();
    const auto& comps = j.at("components");
    const auto d = static_cast<std::size_t>(grid.dim());
    const auto s = static_cast<std::size_t>(grid.sym_components());
    if (kind == "scalar") return std::move(read_components(grid, comps, 1).front());
    if (kind == "vector") return VectorField(read_components(grid, comps, d));
    if (kind == "one_form") return OneFormField(read_components(grid, comps, d));
    if (kind == "sym2") return SymTensorField(Variance::covariant, read_components(grid, comps, s));
    if (kind == "sym2_contravariant") {
      return SymTensorField(Variance::contravariant, read_components(grid, comps, s));
    }
    if (kind == "metric") {
      return MetricField(SymTensorField(Variance::covariant, read_components(grid, comps, s)));
    }
    throw InvalidArgument("unknown snapshot kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed field snapshot: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace adm
