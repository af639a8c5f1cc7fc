#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onng/core.hpp"
#include "onng/vptree.hpp"

namespace onng {

/// TEXMEX-style records: a 4-byte little-endian signed count d, then d
/// components. All records must share one d.
Dataset read_fvecs(const std::string& path, Metric metric = Metric::Euclidean);
void write_fvecs(const std::string& path, const Dataset& data);

/// Same layout with unsigned byte components, widened to float on read.
Dataset read_bvecs(const std::string& path, Metric metric = Metric::Euclidean);
void write_bvecs(const std::string& path, const std::vector<std::vector<std::uint8_t>>& rows);

/// Same layout with 4-byte little-endian signed integer components.
std::vector<std::vector<std::int32_t>> read_ivecs(const std::string& path);
void write_ivecs(const std::string& path, const std::vector<std::vector<std::int32_t>>& rows);

/// One vector per line, comma-separated components.
Dataset read_csv(const std::string& path, Metric metric = Metric::Euclidean);

struct LoadedIndex {
  Dataset data;
  Graph graph;
  std::optional<VpTree> tree;
};

/// Little-endian index file: "ONNG" magic, version, metric, dim, node count,
/// flags, raw vectors, adjacency lists with a CRC32 trailer, then the
/// optional tree. Serialization is canonical: load followed by save
/// reproduces the bytes.
void save_index(const std::string& path, const Dataset& data, const Graph& g,
                const VpTree* tree = nullptr);
LoadedIndex load_index(const std::string& path);

}  // namespace onng
