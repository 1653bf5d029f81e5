#include "fraudgraph/export.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/generator.hpp"

namespace fraudgraph {

namespace fs = std::filesystem;

std::string FormatReal(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string Sha256Hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw IoError("sha256 computation failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

namespace {

std::string NodeFile(NodeType t) {
  return "nodes_" + std::string(NodeTypeName(t)) + ".csv";
}
std::string EdgeFile(Relation r) {
  return "edges_" + std::string(RelationName(r)) + ".csv";
}

constexpr const char* kRingsFile = "rings.csv";
constexpr const char* kSplitUsersFile = "split_users.csv";
constexpr const char* kSplitRingsFile = "split_rings.csv";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kCroissantFile = "croissant.json";

std::size_t CountRows(const std::string& csv) {
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  return lines == 0 ? 0 : lines - 1;
}

struct CategoricalColumn {
  NodeType type;
  const char* column;
  const char* table;
};

constexpr CategoricalColumn kCategoricalColumns[] = {
    {NodeType::kUser, "country_code", "country"},
    {NodeType::kDevice, "device_type", "device_type"},
    {NodeType::kIpAddress, "geo_country", "country"},
    {NodeType::kBooking, "cabin_class", "cabin_class"},
    {NodeType::kFlight, "origin", "airport"},
    {NodeType::kFlight, "destination", "airport"},
    {NodeType::kFlight, "airline", "airline"},
    {NodeType::kHotel, "city_code", "city"},
    {NodeType::kPaymentCard, "card_type", "card_type"},
    {NodeType::kPaymentCard, "issuer_country", "country"},
};

nlohmann::json CodeTables() {
  nlohmann::json j;
  j["country"] = CountryCodes();
  j["device_type"] = DeviceTypeCodes();
  j["card_type"] = CardTypeCodes();
  j["airport"] = AirportCodes();
  j["airline"] = AirlineCodes();
  j["cabin_class"] = CabinClassCodes();
  j["city"] = CityCodes();
  return j;
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct RoleList {
  const char* role;
  NodeType type;
  std::vector<NodeId> RingRecord::*ids;
};

constexpr RoleList kRoles[] = {
    {"member", NodeType::kUser, &RingRecord::member_user_ids},
    {"device", NodeType::kDevice, &RingRecord::shared_device_ids},
    {"ip", NodeType::kIpAddress, &RingRecord::shared_ip_ids},
    {"ghost_hotel", NodeType::kHotel, &RingRecord::ghost_hotel_ids},
    {"mule_loyalty", NodeType::kLoyaltyAccount, &RingRecord::mule_loyalty_ids},
};

void CheckExportable(const GraphData& graph,
                     const std::vector<RingRecord>& rings,
                     const SplitAssignment& assignment) {
  const ValidationReport report = Validate(graph);
  if (!report.ok()) {
    throw ValidationError("graph failed validation:\n" + report.Summary());
  }
  for (NodeType t : kAllNodeTypes) {
    for (double v : graph.table(t).features()) {
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite feature in " +
                              std::string(NodeTypeName(t)) + " table");
      }
    }
  }
  for (std::size_t i = 0; i < rings.size(); ++i) {
    if (rings[i].ring_id != static_cast<std::int32_t>(i)) {
      throw ValidationError("ring ids must be 0..n-1 in order");
    }
  }
  if (assignment.user_partition.size() != graph.table(NodeType::kUser).size() ||
      assignment.ring_partition.size() != rings.size()) {
    throw ValidationError("split assignment does not match the graph");
  }
}

}  // namespace

std::vector<std::string> BundleTableNames() {
  std::vector<std::string> names;
  for (NodeType t : kAllNodeTypes) names.push_back(NodeFile(t));
  for (Relation r : kAllRelations) names.push_back(EdgeFile(r));
  names.push_back(kRingsFile);
  names.push_back(kSplitUsersFile);
  names.push_back(kSplitRingsFile);
  return names;
}

std::string NodeTableCsv(const GraphData& graph, NodeType type) {
  const NodeTable& table = graph.table(type);
  std::string out = "id";
  for (const auto& name : table.feature_names()) out += "," + name;
  out += ",is_fraud,ring_id,ring_type\n";
  for (NodeId id = 0; id < table.size(); ++id) {
    out += std::to_string(id);
    for (double v : table.Row(id)) {
      out += ',';
      out += FormatReal(v);
    }
    out += ',';
    out += std::to_string(table.label(id));
    out += ',';
    out += std::to_string(table.ring_id(id));
    out += ',';
    out += RingTypeName(table.ring_type(id));
    out += '\n';
  }
  return out;
}

std::string EdgeTableCsv(const GraphData& graph, Relation relation) {
  std::string out = "src_id,dst_id\n";
  for (const Edge& e : graph.edge_list(relation)) {
    out += std::to_string(e.src);
    out += ',';
    out += std::to_string(e.dst);
    out += '\n';
  }
  return out;
}

std::string RingsCsv(const std::vector<RingRecord>& rings) {
  std::string out = "ring_id,ring_type,node_type,node_id,role,position\n";
  for (const RingRecord& ring : rings) {
    const std::string prefix = std::to_string(ring.ring_id) + "," +
                               std::string(RingTypeName(ring.type)) + ",";
    for (const RoleList& role : kRoles) {
      const auto& ids = ring.*role.ids;
      for (std::size_t k = 0; k < ids.size(); ++k) {
        out += prefix;
        out += NodeTypeName(role.type);
        out += ',';
        out += std::to_string(ids[k]);
        out += ',';
        out += role.role;
        out += ',';
        out += std::to_string(k);
        out += '\n';
      }
    }
  }
  return out;
}

std::string SplitUsersCsv(const SplitAssignment& assignment) {
  std::string out = "user_id,partition\n";
  for (std::size_t u = 0; u < assignment.user_partition.size(); ++u) {
    out += std::to_string(u);
    out += ',';
    out += PartitionName(assignment.user_partition[u]);
    out += '\n';
  }
  return out;
}

std::string SplitRingsCsv(const std::vector<RingRecord>& rings,
                          const SplitAssignment& assignment) {
  std::string out = "ring_id,ring_type,partition\n";
  for (const RingRecord& ring : rings) {
    out += std::to_string(ring.ring_id);
    out += ',';
    out += RingTypeName(ring.type);
    out += ',';
    out += PartitionName(assignment.ring_partition[ring.ring_id]);
    out += '\n';
  }
  return out;
}

std::string BundleDigest(
    const std::vector<std::pair<std::string, std::string>>& named_tables) {
  std::string stream;
  std::size_t total = 0;
  for (const auto& [name, bytes] : named_tables) total += bytes.size() + 64;
  stream.reserve(total);
  for (const auto& [name, bytes] : named_tables) {
    stream += name;
    stream += '\n';
    stream += std::to_string(bytes.size());
    stream += '\n';
    stream += bytes;
  }
  return Sha256Hex(stream);
}

nlohmann::json ToJson(const ResolvedConfig& c) {
  nlohmann::json j;
  j["scale"] = c.scale;
  j["n_users"] = c.n_users;
  j["seed"] = c.seed;
  j["n_ticketing_rings"] = c.n_ticketing_rings;
  j["n_ghost_hotel_rings"] = c.n_ghost_hotel_rings;
  j["n_ato_rings"] = c.n_ato_rings;
  j["ticketing_size"] = {c.ticketing_size.lower, c.ticketing_size.upper};
  j["ghost_reviewers"] = {c.ghost_reviewers.lower, c.ghost_reviewers.upper};
  j["ato_compromised"] = {c.ato_compromised.lower, c.ato_compromised.upper};
  j["widen_size_bounds"] = c.widen_size_bounds;
  j["feature_exclusions"] = c.feature_exclusions;
  j["relation_exclusions"] = c.relation_exclusions;
  j["calibration"] =
      c.calibration == CalibrationMode::kEnforce ? "enforce" : "report";
  return j;
}

ResolvedConfig ResolvedConfigFromJson(const nlohmann::json& j) {
  ResolvedConfig c;
  try {
    auto range = [&](const char* key) {
      const auto& v = j.at(key);
      return SizeRange{v.at(0).get<int>(), v.at(1).get<int>()};
    };
    c.scale = j.at("scale").get<std::string>();
    c.n_users = j.at("n_users").get<std::uint32_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.n_ticketing_rings = j.at("n_ticketing_rings").get<std::uint32_t>();
    c.n_ghost_hotel_rings = j.at("n_ghost_hotel_rings").get<std::uint32_t>();
    c.n_ato_rings = j.at("n_ato_rings").get<std::uint32_t>();
    c.ticketing_size = range("ticketing_size");
    c.ghost_reviewers = range("ghost_reviewers");
    c.ato_compromised = range("ato_compromised");
    c.widen_size_bounds = j.at("widen_size_bounds").get<bool>();
    c.feature_exclusions =
        j.at("feature_exclusions").get<std::vector<std::string>>();
    c.relation_exclusions =
        j.at("relation_exclusions").get<std::vector<std::string>>();
    c.calibration = j.at("calibration").get<std::string>() == "report"
                        ? CalibrationMode::kReport
                        : CalibrationMode::kEnforce;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad resolved config in manifest: ") +
                          e.what());
  }
  return c;
}

nlohmann::json CroissantDocument(const ExportContext& context,
                                 const GraphData& graph,
                                 const ExportInfo& info) {
  const double fraud_rate = UserFraudRate(graph);
  nlohmann::json doc;
  doc["@context"] = {{"@vocab", "https://schema.org/"},
                     {"sc", "https://schema.org/"},
                     {"cr", "http://mlcommons.org/croissant/"},
                     {"rai", "http://mlcommons.org/croissant/RAI/"}};
  doc["@type"] = "sc:Dataset";
  doc["name"] = "fraudgraph-" + context.config.scale + "-seed" +
                std::to_string(context.config.seed);
  doc["description"] =
      "Synthetic heterogeneous travel-platform graph with injected fraud "
      "rings (ticketing, ghost hotel, account takeover) and ring-level "
      "labels. Every record is simulated.";
  doc["version"] = kGeneratorVersion;
  doc["conformsTo"] = "http://mlcommons.org/croissant/1.0";
  doc["license"] = "https://creativecommons.org/licenses/by/4.0/";
  nlohmann::json files = nlohmann::json::array();
  for (const BundleFile& f : info.files) {
    files.push_back({{"@type", "cr:FileObject"},
                     {"name", f.name},
                     {"contentUrl", f.name},
                     {"encodingFormat", "text/csv"},
                     {"sha256", f.sha256}});
  }
  doc["distribution"] = files;
  nlohmann::json rai;
  rai["pii_present"] = false;
  rai["data_collection"] =
      "Generated by an agent-based simulator; no real users, bookings, "
      "payment instruments or reviews were collected.";
  rai["observed_fraud_rate"] = fraud_rate;
  rai["bias_note"] =
      "The fraud rate of " + FormatReal(std::round(fraud_rate * 1e4) / 100) +
      "% is far above real platforms; recalibrate thresholds before "
      "comparing with production rates.";
  rai["intended_use"] =
      "Research benchmarking of graph-based fraud and ring detection "
      "methods. Not suitable for production deployment without validation "
      "on real traffic.";
  rai["prohibited_use"] =
      "Do not use the ring designs or generated data to plan, rehearse or "
      "evade fraud detection systems, and do not present the synthetic "
      "records as real people.";
  doc["rai"] = rai;
  doc["digest"] = {{"algorithm", "sha256"}, {"value", info.digest}};
  return doc;
}

ExportInfo ExportBundle(const GraphData& graph,
                        const std::vector<RingRecord>& rings,
                        const SplitAssignment& assignment,
                        const ExportContext& context, const fs::path& dir) {
  CheckExportable(graph, rings, assignment);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::pair<std::string, std::string>> tables;
  for (NodeType t : kAllNodeTypes) {
    tables.emplace_back(NodeFile(t), NodeTableCsv(graph, t));
  }
  for (Relation r : kAllRelations) {
    tables.emplace_back(EdgeFile(r), EdgeTableCsv(graph, r));
  }
  tables.emplace_back(kRingsFile, RingsCsv(rings));
  tables.emplace_back(kSplitUsersFile, SplitUsersCsv(assignment));
  tables.emplace_back(kSplitRingsFile, SplitRingsCsv(rings, assignment));

  ExportInfo info;
  info.dir = dir;
  info.digest = BundleDigest(tables);
  for (const auto& [name, bytes] : tables) {
    WriteFile(dir / name, bytes);
    info.files.push_back({name, CountRows(bytes), Sha256Hex(bytes)});
  }

  nlohmann::json manifest;
  manifest["schema_version"] = kBundleSchemaVersion;
  manifest["generator_version"] = kGeneratorVersion;
  manifest["digest"] = {{"algorithm", "sha256"}, {"value", info.digest}};
  nlohmann::json files = nlohmann::json::array();
  for (const BundleFile& f : info.files) {
    files.push_back({{"name", f.name}, {"rows", f.rows}, {"sha256", f.sha256}});
  }
  manifest["files"] = files;
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeType t : kAllNodeTypes) {
    nodes.push_back({{"type", NodeTypeName(t)},
                     {"file", NodeFile(t)},
                     {"rows", graph.table(t).size()},
                     {"feature_columns", graph.table(t).feature_names()}});
  }
  manifest["node_tables"] = nodes;
  nlohmann::json edges = nlohmann::json::array();
  for (Relation r : kAllRelations) {
    edges.push_back({{"relation", RelationName(r)},
                     {"source", NodeTypeName(Signature(r).source)},
                     {"target", NodeTypeName(Signature(r).target)},
                     {"file", EdgeFile(r)},
                     {"rows", graph.edge_list(r).size()}});
  }
  manifest["edge_tables"] = edges;
  std::map<std::string, std::size_t> by_type;
  for (RingType t : kAllRingTypes) by_type[std::string(RingTypeName(t))] = 0;
  for (const RingRecord& ring : rings) {
    ++by_type[std::string(RingTypeName(ring.type))];
  }
  manifest["rings"] = {{"count", rings.size()}, {"by_type", by_type}};
  nlohmann::json partition_users;
  for (Partition p : kAllPartitions) {
    partition_users[std::string(PartitionName(p))] =
        assignment.Users(p).size();
  }
  manifest["split"] = {{"fractions",
                        {{"train", assignment.fractions.train},
                         {"val", assignment.fractions.val},
                         {"test", assignment.fractions.test}}},
                       {"users", partition_users},
                       {"warnings", assignment.warnings}};
  manifest["code_tables"] = CodeTables();
  nlohmann::json categorical = nlohmann::json::array();
  for (const CategoricalColumn& c : kCategoricalColumns) {
    const auto& names = graph.table(c.type).feature_names();
    if (std::find(names.begin(), names.end(), c.column) == names.end()) {
      continue;
    }
    categorical.push_back({{"node_type", NodeTypeName(c.type)},
                           {"column", c.column},
                           {"code_table", c.table}});
  }
  manifest["categorical_columns"] = categorical;
  manifest["config"] = {{"request", ToJson(context.request)},
                        {"resolved", ToJson(context.config)},
                        {"shift_factor", context.shift_factor}};
  manifest["user_fraud_rate"] = UserFraudRate(graph);

  WriteFile(dir / kManifestFile, manifest.dump(2) + "\n");
  WriteFile(dir / kCroissantFile,
            CroissantDocument(context, graph, info).dump(2) + "\n");
  return info;
}

namespace {

// Splits one LF-terminated CSV into rows of fields. No quoting is used by
// the format, so a plain comma split is exact.
class CsvReader {
 public:
  CsvReader(std::string name, const std::string& bytes)
      : name_(std::move(name)), bytes_(bytes) {}

  bool Next(std::vector<std::string_view>& fields) {
    if (pos_ >= bytes_.size()) return false;
    const std::size_t end = bytes_.find('\n', pos_);
    if (end == std::string::npos) Fail("missing final newline");
    std::string_view line(bytes_.data() + pos_, end - pos_);
    pos_ = end + 1;
    ++line_;
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    return true;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ValidationError(name_ + " line " + std::to_string(line_) + ": " +
                          what);
  }

  template <typename T>
  T Integer(std::string_view field) const {
    T v{};
    const auto res =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      Fail("bad integer '" + std::string(field) + "'");
    }
    return v;
  }

  double Real(std::string_view field) const {
    double v = 0;
    const auto res =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      Fail("bad number '" + std::string(field) + "'");
    }
    return v;
  }

  void ExpectHeader(const std::vector<std::string>& expected) {
    std::vector<std::string_view> fields;
    if (!Next(fields)) Fail("empty file");
    if (fields.size() != expected.size() ||
        !std::equal(fields.begin(), fields.end(), expected.begin())) {
      Fail("unexpected header");
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const std::string& bytes_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

RingType RingTypeField(const CsvReader& in, std::string_view field) {
  const auto t = ParseRingType(field);
  if (!t) in.Fail("unknown ring type '" + std::string(field) + "'");
  return *t;
}

const nlohmann::json& FindEntry(const nlohmann::json& list, const char* key,
                                std::string_view value) {
  for (const auto& entry : list) {
    if (entry.at(key).get<std::string>() == value) return entry;
  }
  throw ValidationError("manifest has no entry for " + std::string(value));
}

}  // namespace

Bundle LoadBundle(const fs::path& dir) {
  Bundle bundle;
  const std::string manifest_text = ReadFile(dir / kManifestFile);
  try {
    bundle.manifest = nlohmann::json::parse(manifest_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") +
                          e.what());
  }
  const nlohmann::json& m = bundle.manifest;

  std::vector<std::pair<std::string, std::string>> tables;
  std::map<std::string, std::string> bytes;
  try {
    if (m.at("schema_version").get<int>() != kBundleSchemaVersion) {
      throw ValidationError(
          "bundle schema version " +
          std::to_string(m.at("schema_version").get<int>()) +
          " is not supported (expected " +
          std::to_string(kBundleSchemaVersion) + ")");
    }
    for (const std::string& name : BundleTableNames()) {
      tables.emplace_back(name, ReadFile(dir / name));
      bytes[name] = tables.back().second;
    }
    bundle.digest = BundleDigest(tables);
    const std::string expected = m.at("digest").at("value").get<std::string>();
    if (bundle.digest != expected) {
      throw ValidationError("bundle digest mismatch: manifest " + expected +
                            ", files " + bundle.digest);
    }
    for (const auto& [name, data] : tables) {
      const auto rows = FindEntry(m.at("files"), "name", name)
                            .at("rows")
                            .get<std::size_t>();
      if (rows != CountRows(data)) {
        throw ValidationError(name + " has " + std::to_string(CountRows(data)) +
                              " rows, manifest says " + std::to_string(rows));
      }
    }

    const auto& cfg = m.at("config");
    bundle.context.request = GeneratorConfigFromJson(cfg.at("request"));
    bundle.context.config = ResolvedConfigFromJson(cfg.at("resolved"));
    bundle.context.shift_factor = cfg.at("shift_factor").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw ValidationError(std::string("malformed manifest config: ") +
                          e.what());
  }

  GraphData& graph = bundle.graph;
  std::vector<std::string_view> fields;
  for (NodeType t : kAllNodeTypes) {
    const std::string name = NodeFile(t);
    const auto columns = FindEntry(m.at("node_tables"), "type", NodeTypeName(t))
                             .at("feature_columns")
                             .get<std::vector<std::string>>();
    CsvReader in(name, bytes[name]);
    std::vector<std::string> header = {"id"};
    header.insert(header.end(), columns.begin(), columns.end());
    header.insert(header.end(), {"is_fraud", "ring_id", "ring_type"});
    in.ExpectHeader(header);
    NodeTable table(columns);
    std::vector<double> row(columns.size());
    while (in.Next(fields)) {
      if (fields.size() != header.size()) in.Fail("wrong field count");
      if (in.Integer<NodeId>(fields[0]) != table.size()) {
        in.Fail("ids must be dense and in order");
      }
      for (std::size_t c = 0; c < columns.size(); ++c) {
        row[c] = in.Real(fields[c + 1]);
      }
      const auto label = in.Integer<int>(fields[columns.size() + 1]);
      if (label != 0 && label != 1) in.Fail("is_fraud must be 0 or 1");
      table.Add(row, static_cast<std::uint8_t>(label),
                in.Integer<std::int32_t>(fields[columns.size() + 2]),
                RingTypeField(in, fields[columns.size() + 3]));
    }
    graph.table(t) = std::move(table);
  }
  for (Relation r : kAllRelations) {
    const std::string name = EdgeFile(r);
    CsvReader in(name, bytes[name]);
    in.ExpectHeader({"src_id", "dst_id"});
    while (in.Next(fields)) {
      if (fields.size() != 2) in.Fail("wrong field count");
      graph.AddEdge(r, in.Integer<NodeId>(fields[0]),
                    in.Integer<NodeId>(fields[1]));
    }
  }
  const ValidationReport report = Validate(graph);
  if (!report.ok()) {
    throw ValidationError("loaded graph failed validation:\n" +
                          report.Summary());
  }

  {
    CsvReader in(kRingsFile, bytes[kRingsFile]);
    in.ExpectHeader(
        {"ring_id", "ring_type", "node_type", "node_id", "role", "position"});
    while (in.Next(fields)) {
      if (fields.size() != 6) in.Fail("wrong field count");
      const auto ring_id = in.Integer<std::int32_t>(fields[0]);
      if (ring_id < 0) in.Fail("negative ring id");
      if (static_cast<std::size_t>(ring_id) == bundle.rings.size()) {
        bundle.rings.push_back({});
        bundle.rings.back().ring_id = ring_id;
        bundle.rings.back().type = RingTypeField(in, fields[1]);
      } else if (static_cast<std::size_t>(ring_id) + 1 != bundle.rings.size()) {
        in.Fail("ring rows must be grouped by ascending ring id");
      }
      RingRecord& ring = bundle.rings.back();
      if (RingTypeField(in, fields[1]) != ring.type) {
        in.Fail("ring type changes within a ring");
      }
      const RoleList* role = nullptr;
      for (const RoleList& candidate : kRoles) {
        if (fields[4] == candidate.role) role = &candidate;
      }
      if (role == nullptr) in.Fail("unknown role '" + std::string(fields[4]) + "'");
      if (fields[2] != NodeTypeName(role->type)) {
        in.Fail("node type does not match role");
      }
      auto& ids = ring.*role->ids;
      if (in.Integer<std::size_t>(fields[5]) != ids.size()) {
        in.Fail("positions must count up from 0 within a role");
      }
      const auto id = in.Integer<NodeId>(fields[3]);
      if (id >= graph.table(role->type).size()) in.Fail("node id out of range");
      ids.push_back(id);
    }
  }
  if (bundle.rings.size() != m.at("rings").at("count").get<std::size_t>()) {
    throw ValidationError("rings.csv ring count differs from manifest");
  }

  SplitAssignment& a = bundle.assignment;
  const auto& fr = m.at("split").at("fractions");
  a.fractions = {fr.at("train").get<double>(), fr.at("val").get<double>(),
                 fr.at("test").get<double>()};
  a.warnings = m.at("split").at("warnings").get<std::vector<std::string>>();
  auto partition_field = [](const CsvReader& in, std::string_view field) {
    const auto p = ParsePartition(field);
    if (!p) in.Fail("unknown partition '" + std::string(field) + "'");
    return *p;
  };
  {
    CsvReader in(kSplitUsersFile, bytes[kSplitUsersFile]);
    in.ExpectHeader({"user_id", "partition"});
    while (in.Next(fields)) {
      if (fields.size() != 2) in.Fail("wrong field count");
      if (in.Integer<NodeId>(fields[0]) != a.user_partition.size()) {
        in.Fail("user ids must be dense and in order");
      }
      a.user_partition.push_back(partition_field(in, fields[1]));
    }
  }
  {
    CsvReader in(kSplitRingsFile, bytes[kSplitRingsFile]);
    in.ExpectHeader({"ring_id", "ring_type", "partition"});
    while (in.Next(fields)) {
      if (fields.size() != 3) in.Fail("wrong field count");
      const auto id = in.Integer<std::size_t>(fields[0]);
      if (id != a.ring_partition.size() || id >= bundle.rings.size()) {
        in.Fail("ring ids must be dense and in order");
      }
      if (RingTypeField(in, fields[1]) != bundle.rings[id].type) {
        in.Fail("ring type differs from rings.csv");
      }
      a.ring_partition.push_back(partition_field(in, fields[2]));
    }
  }
  if (a.user_partition.size() != graph.table(NodeType::kUser).size() ||
      a.ring_partition.size() != bundle.rings.size()) {
    throw ValidationError("split files do not cover every user and ring");
  }
  return bundle;
}

}  // namespace fraudgraph
