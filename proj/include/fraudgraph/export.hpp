#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fraudgraph/config.hpp"
#include "fraudgraph/graph.hpp"
#include "fraudgraph/rings.hpp"
#include "fraudgraph/split.hpp"
#include "json.hpp"

namespace fraudgraph {

// Bumped whenever a file layout in docs/FORMATS.md changes.
inline constexpr int kBundleSchemaVersion = 1;

// Run metadata echoed into the manifest.
struct ExportContext {
  GeneratorConfig request;
  ResolvedConfig config;
  double shift_factor = 1.0;
};

struct BundleFile {
  std::string name;
  std::size_t rows = 0;  // data rows, header excluded
  std::string sha256;    // lowercase hex of the file bytes
};

struct ExportInfo {
  std::filesystem::path dir;
  std::string digest;  // bundle digest, lowercase hex
  std::vector<BundleFile> files;  // digest order
};

struct Bundle {
  GraphData graph;
  std::vector<RingRecord> rings;
  SplitAssignment assignment;
  ExportContext context;
  nlohmann::json manifest;
  std::string digest;
};

// Shortest decimal that parses back to the same double. -0 is kept.
std::string FormatReal(double value);

std::string Sha256Hex(std::string_view bytes);

// Table file names in digest order.
std::vector<std::string> BundleTableNames();

// Serializes one table exactly as written to disk.
std::string NodeTableCsv(const GraphData& graph, NodeType type);
std::string EdgeTableCsv(const GraphData& graph, Relation relation);
std::string RingsCsv(const std::vector<RingRecord>& rings);
std::string SplitUsersCsv(const SplitAssignment& assignment);
std::string SplitRingsCsv(const std::vector<RingRecord>& rings,
                          const SplitAssignment& assignment);

// SHA-256 over, for each table in digest order, "<name>\n<byte count>\n"
// followed by the table bytes.
std::string BundleDigest(const std::vector<std::pair<std::string, std::string>>&
                             named_tables);

nlohmann::json CroissantDocument(const ExportContext& context,
                                 const GraphData& graph,
                                 const ExportInfo& info);

// Writes every table, then manifest.json and croissant.json. Creates |dir|
// when missing. Throws ValidationError for an invalid graph, non-finite
// features or an assignment that does not match the graph, and IoError when
// a file cannot be written.
ExportInfo ExportBundle(const GraphData& graph,
                        const std::vector<RingRecord>& rings,
                        const SplitAssignment& assignment,
                        const ExportContext& context,
                        const std::filesystem::path& dir);

// Reads a bundle back. Throws IoError for missing or unreadable files and
// ValidationError for schema-version, digest, header or count mismatches.
Bundle LoadBundle(const std::filesystem::path& dir);

nlohmann::json ToJson(const ResolvedConfig& config);
ResolvedConfig ResolvedConfigFromJson(const nlohmann::json& json);

}  // namespace fraudgraph
