#pragma once
// Field snapshot files: {"grid": {"dim", "n"}, "kind", "components": [[...]]}.
// Component arrays use the grid's row-major point order; symmetric tensors
// list only the i <= j components in packed order.

#include <filesystem>
#include <variant>

#include <json.hpp>

#include "adm/fields.hpp"

namespace adm {

using SnapshotField = std::variant<ScalarField, VectorField, OneFormField, SymTensorField, MetricField>;

nlohmann::json to_snapshot(const ScalarField& f);
nlohmann::json to_snapshot(const VectorField& f);
nlohmann::json to_snapshot(const OneFormField& f);
nlohmann::json to_snapshot(const SymTensorField& f);
nlohmann::json to_snapshot(const MetricField& f);
nlohmann::json to_snapshot(const SnapshotField& f);

/// Throws InvalidArgument on schema violations, DegenerateMetric for a bad metric.
SnapshotField from_snapshot(const nlohmann::json& j);

/// Convenience: reads a snapshot that must hold the requested type.
template <class T>
T snapshot_as(const nlohmann::json& j) {
  SnapshotField f = from_snapshot(j);
  if (auto* p = std::get_if<T>(&f)) return std::move(*p);
  throw InvalidArgument("snapshot holds a different field kind");
}

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace adm
