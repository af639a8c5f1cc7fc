#include "onng/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace onng {

namespace {

constexpr char kMagic[4] = {'O', 'N', 'N', 'G'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kFlagTree = 1;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void spill(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot create " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed for " + path);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }
void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;

  std::size_t remaining() const { return buf.size() - pos; }

  void need(std::size_t n) const {
    if (remaining() < n) throw FormatError("truncated file");
  }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf[pos++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= std::uint16_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
};

/// Shared record walk for the d-prefixed formats; on_record(reader, d) must
/// consume exactly d components.
template <typename F>
void for_each_record(const std::string& bytes, F&& on_record) {
  Reader r{bytes};
  std::int32_t dim = -1;
  while (r.remaining() > 0) {
    const auto d = static_cast<std::int32_t>(r.u32());
    if (d <= 0) throw FormatError("record dimension must be positive");
    if (dim >= 0 && d != dim) throw FormatError("inconsistent record dimensions");
    dim = d;
    on_record(r, d);
  }
}

std::uint32_t adjacency_crc(const std::string& bytes, std::size_t begin, std::size_t end) {
  const auto* data = reinterpret_cast<const Bytef*>(bytes.data() + begin);
  return static_cast<std::uint32_t>(crc32(0L, data, static_cast<uInt>(end - begin)));
}

}  // namespace

Dataset read_fvecs(const std::string& path, Metric metric) {
  const std::string bytes = slurp(path);
  Dataset out;
  std::vector<float> row;
  for_each_record(bytes, [&](Reader& r, std::int32_t d) {
    if (out.dim() == 0) out = Dataset(static_cast<std::uint32_t>(d), metric);
    row.resize(static_cast<std::size_t>(d));
    for (auto& f : row) f = r.f32();
    out.add(row);
  });
  return out;
}

void write_fvecs(const std::string& path, const Dataset& data) {
  std::string out;
  out.reserve(data.size() * (4 + data.dim() * std::size_t{4}));
  for (std::size_t i = 0; i < data.size(); ++i) {
    put_u32(out, data.dim());
    const float* v = data.vec(static_cast<NodeId>(i));
    for (std::uint32_t c = 0; c < data.dim(); ++c) put_f32(out, v[c]);
  }
  spill(path, out);
}

Dataset read_bvecs(const std::string& path, Metric metric) {
  const std::string bytes = slurp(path);
  Dataset out;
  std::vector<float> row;
  for_each_record(bytes, [&](Reader& r, std::int32_t d) {
    if (out.dim() == 0) out = Dataset(static_cast<std::uint32_t>(d), metric);
    row.resize(static_cast<std::size_t>(d));
    for (auto& f : row) f = static_cast<float>(r.u8());
    out.add(row);
  });
  return out;
}

void write_bvecs(const std::string& path, const std::vector<std::vector<std::uint8_t>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    if (row.empty()) throw FormatError("record dimension must be positive");
    put_u32(out, static_cast<std::uint32_t>(row.size()));
    for (std::uint8_t b : row) out.push_back(static_cast<char>(b));
  }
  spill(path, out);
}

std::vector<std::vector<std::int32_t>> read_ivecs(const std::string& path) {
  const std::string bytes = slurp(path);
  std::vector<std::vector<std::int32_t>> out;
  for_each_record(bytes, [&](Reader& r, std::int32_t d) {
    std::vector<std::int32_t>& row = out.emplace_back();
    row.reserve(static_cast<std::size_t>(d));
    for (std::int32_t i = 0; i < d; ++i) row.push_back(static_cast<std::int32_t>(r.u32()));
  });
  return out;
}

void write_ivecs(const std::string& path, const std::vector<std::vector<std::int32_t>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    if (row.empty()) throw FormatError("record dimension must be positive");
    put_u32(out, static_cast<std::uint32_t>(row.size()));
    for (std::int32_t v : row) put_u32(out, static_cast<std::uint32_t>(v));
  }
  spill(path, out);
}

Dataset read_csv(const std::string& path, Metric metric) {
  const std::string bytes = slurp(path);
  Dataset out;
  std::vector<float> row;
  std::istringstream lines(bytes);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    row.clear();
    std::size_t at = 0;
    while (at <= line.size()) {
      const std::size_t comma = std::min(line.find(',', at), line.size());
      const std::string cell = line.substr(at, comma - at);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw FormatError("bad number: '" + cell + "'");
      row.push_back(static_cast<float>(v));
      at = comma + 1;
    }
    if (out.dim() == 0) out = Dataset(static_cast<std::uint32_t>(row.size()), metric);
    out.add(row);  // add rejects a changed column count
  }
  return out;
}

void save_index(const std::string& path, const Dataset& data, const Graph& g, const VpTree* tree) {
  if (g.node_count() != data.size()) throw InvariantError("graph and dataset sizes differ");

  std::string out;
  out.append(kMagic, sizeof kMagic);
  put_u16(out, kVersion);
  out.push_back(static_cast<char>(static_cast<std::uint8_t>(data.metric())));
  put_u32(out, data.dim());
  put_u64(out, data.size());
  out.push_back(static_cast<char>(tree != nullptr ? kFlagTree : 0));

  for (float f : data.raw()) put_f32(out, f);

  const std::size_t adj_begin = out.size();
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto& edges = g.neighbors(i);
    put_u32(out, static_cast<std::uint32_t>(edges.size()));
    for (const Edge& e : edges) {
      put_u32(out, e.target);
      put_f32(out, e.length);
    }
  }
  put_u32(out, adjacency_crc(out, adj_begin, out.size()));

  if (tree != nullptr) {
    const auto& nodes = tree->nodes();
    put_u32(out, static_cast<std::uint32_t>(nodes.size()));
    for (const auto& node : nodes) {
      put_u32(out, node.pivot);
      put_f64(out, node.radius);
      put_u32(out, static_cast<std::uint32_t>(node.inner));
      put_u32(out, static_cast<std::uint32_t>(node.outer));
      put_u32(out, static_cast<std::uint32_t>(node.members.size()));
      for (NodeId m : node.members) put_u32(out, m);
      put_u32(out, static_cast<std::uint32_t>(node.seeds.size()));
      for (NodeId s : node.seeds) put_u32(out, s);
    }
  }
  spill(path, out);
}

LoadedIndex load_index(const std::string& path) {
  const std::string bytes = slurp(path);
  Reader r{bytes};

  r.need(sizeof kMagic);
  if (bytes.compare(0, sizeof kMagic, kMagic, sizeof kMagic) != 0)
    throw FormatError("bad index magic");
  r.pos += sizeof kMagic;

  if (r.u16() != kVersion) throw FormatError("unsupported index version");
  const std::uint8_t metric_id = r.u8();
  if (metric_id > static_cast<std::uint8_t>(Metric::Angular))
    throw FormatError("unknown metric id");
  const auto metric = static_cast<Metric>(metric_id);
  const std::uint32_t dim = r.u32();
  const std::uint64_t n = r.u64();
  const std::uint8_t flags = r.u8();
  if ((flags & ~kFlagTree) != 0) throw FormatError("unknown index flags");
  if (n > 0 && dim == 0) throw FormatError("vector dimension must be positive");

  LoadedIndex out;
  if (dim > 0) out.data = Dataset(dim, metric);  // keep dim and metric even when n = 0
  if (n > 0) {
    // Bound the claimed sizes by the actual byte count before reserving.
    if (n > bytes.size() || dim > bytes.size()) throw FormatError("truncated file");
    r.need(n * dim * 4);
    out.data.reserve(n);
    std::vector<float> row(dim);
    for (std::uint64_t i = 0; i < n; ++i) {
      for (auto& f : row) f = r.f32();
      out.data.add(row);
    }
  }

  const std::size_t adj_begin = r.pos;
  out.graph = Graph(n);
  std::vector<std::uint32_t> targets;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t count = r.u32();
    if (count >= n) throw FormatError("adjacency count out of range");
    Edge prev{0, 0.0f};
    targets.clear();
    for (std::uint32_t j = 0; j < count; ++j) {
      const Edge e{r.u32(), r.f32()};
      if (e.target >= n || e.target == i) throw FormatError("adjacency target out of range");
      if (!std::isfinite(e.length)) throw FormatError("non-finite edge length");
      if (j > 0 && !edge_less(prev, e)) throw FormatError("adjacency not in sorted order");
      out.graph.insert(static_cast<NodeId>(i), e);
      targets.push_back(e.target);
      prev = e;
    }
    // Sorted order alone permits one target under two lengths; reject that too.
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
      throw FormatError("duplicate adjacency target");
  }
  const std::uint32_t stored_crc = r.u32();
  if (stored_crc != adjacency_crc(bytes, adj_begin, r.pos - 4))
    throw FormatError("adjacency checksum mismatch");

  if ((flags & kFlagTree) != 0) {
    const std::uint32_t node_count = r.u32();
    if (node_count > r.remaining() / 28) throw FormatError("truncated file");
    std::vector<VpTree::Node> nodes(node_count);
    for (std::uint32_t idx = 0; idx < node_count; ++idx) {
      VpTree::Node& node = nodes[idx];
      node.pivot = r.u32();
      if (node.pivot >= n) throw FormatError("tree pivot out of range");
      node.radius = r.f64();
      node.inner = static_cast<std::int32_t>(r.u32());
      node.outer = static_cast<std::int32_t>(r.u32());
      // Children must point forward so routing always terminates.
      if (node.inner >= 0 &&
          (node.inner <= static_cast<std::int32_t>(idx) ||
           node.inner >= static_cast<std::int32_t>(node_count) ||
           node.outer <= static_cast<std::int32_t>(idx) ||
           node.outer >= static_cast<std::int32_t>(node_count)))
        throw FormatError("tree child index out of range");
      const std::uint32_t n_members = r.u32();
      if (n_members > n) throw FormatError("tree member count out of range");
      node.members.resize(n_members);
      for (auto& m : node.members) {
        m = r.u32();
        if (m >= n) throw FormatError("tree member out of range");
      }
      const std::uint32_t n_seeds = r.u32();
      if (n_seeds > n) throw FormatError("tree seed count out of range");
      node.seeds.resize(n_seeds);
      for (auto& s : node.seeds) {
        s = r.u32();
        if (s >= n) throw FormatError("tree seed out of range");
      }
    }
    out.tree = VpTree::from_nodes(std::move(nodes));
  }

  if (r.remaining() != 0) throw FormatError("trailing bytes after index");
  return out;
}

}  // namespace onng
