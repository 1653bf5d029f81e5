#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/export.hpp"
#include "fraudgraph/generator.hpp"

namespace fraudgraph {
namespace fs = std::filesystem;
namespace {

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string FirstLine(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(FormatReal(0.0), "0");
  EXPECT_EQ(FormatReal(-0.0), "-0");
  EXPECT_EQ(FormatReal(1.0), "1");
  EXPECT_EQ(FormatReal(0.1), "0.1");
  EXPECT_EQ(FormatReal(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(FormatReal(1234567.0), "1234567");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 5000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15);
    const std::string s = FormatReal(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(back, v) << s;
  }
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(BundleDigest, FramesEachTable) {
  // Moving a byte between tables must change the digest.
  const std::string a = BundleDigest({{"x.csv", "ab"}, {"y.csv", "c"}});
  const std::string b = BundleDigest({{"x.csv", "a"}, {"y.csv", "bc"}});
  EXPECT_NE(a, b);
  EXPECT_EQ(a, Sha256Hex("x.csv\n2\naby.csv\n1\nc"));
}

TEST(BundleTableNames, SchemaOrder) {
  const auto names = BundleTableNames();
  ASSERT_EQ(names.size(), kNodeTypeCount + kRelationCount + 3);
  EXPECT_EQ(names.front(), "nodes_user.csv");
  EXPECT_EQ(names[kNodeTypeCount], "edges_made.csv");
  EXPECT_EQ(names[names.size() - 3], "rings.csv");
  EXPECT_EQ(names[names.size() - 2], "split_users.csv");
  EXPECT_EQ(names.back(), "split_rings.csv");
}

struct ToyBundle {
  GenerationResult gen;
  SplitAssignment split;
  ExportContext context;
};

const ToyBundle& Toy() {
  static const ToyBundle t = [] {
    GeneratorConfig c;
    c.scale = "toy";
    c.relation_exclusions = {"referred"};
    ToyBundle b{Generate(c), {}, {}};
    b.split = Split(b.gen.graph, b.gen.rings, {}, c.seed);
    b.context = {b.gen.request, b.gen.config, b.gen.shift_factor};
    return b;
  }();
  return t;
}

class ExportTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fg_export_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    info_ = ExportBundle(Toy().gen.graph, Toy().gen.rings, Toy().split,
                         Toy().context, dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
  ExportInfo info_;
};

TEST_F(ExportTest, HeadersAndLineEndings) {
  const auto& names = DefaultFeatureNames(NodeType::kUser);
  std::string user_header = "id";
  for (const auto& n : names) user_header += "," + n;
  user_header += ",is_fraud,ring_id,ring_type";
  const std::string users = Slurp(dir_ / "nodes_user.csv");
  EXPECT_EQ(FirstLine(users), user_header);
  EXPECT_EQ(users.find('\r'), std::string::npos);
  EXPECT_EQ(users.back(), '\n');
  EXPECT_EQ(FirstLine(Slurp(dir_ / "edges_uses_device.csv")), "src_id,dst_id");
  EXPECT_EQ(FirstLine(Slurp(dir_ / "rings.csv")),
            "ring_id,ring_type,node_type,node_id,role,position");
  EXPECT_EQ(FirstLine(Slurp(dir_ / "split_users.csv")), "user_id,partition");
  EXPECT_EQ(FirstLine(Slurp(dir_ / "split_rings.csv")),
            "ring_id,ring_type,partition");
  // Excluded relation: header only.
  EXPECT_EQ(Slurp(dir_ / "edges_referred.csv"), "src_id,dst_id\n");
}

TEST_F(ExportTest, FilesMatchInMemorySerialization) {
  EXPECT_EQ(Slurp(dir_ / "nodes_hotel.csv"),
            NodeTableCsv(Toy().gen.graph, NodeType::kHotel));
  EXPECT_EQ(Slurp(dir_ / "edges_about.csv"),
            EdgeTableCsv(Toy().gen.graph, Relation::kAbout));
  EXPECT_EQ(Slurp(dir_ / "rings.csv"), RingsCsv(Toy().gen.rings));
  ASSERT_EQ(info_.files.size(), BundleTableNames().size());
  for (const BundleFile& f : info_.files) {
    EXPECT_EQ(f.sha256, Sha256Hex(Slurp(dir_ / f.name))) << f.name;
  }
}

TEST_F(ExportTest, ManifestCountsAndDigest) {
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "manifest.json"));
  EXPECT_EQ(manifest["schema_version"], kBundleSchemaVersion);
  EXPECT_EQ(manifest["generator_version"], kGeneratorVersion);
  EXPECT_EQ(manifest["digest"]["algorithm"], "sha256");
  EXPECT_EQ(manifest["digest"]["value"], info_.digest);
  EXPECT_EQ(manifest["rings"]["count"], Toy().gen.rings.size());
  const auto& users = manifest["node_tables"][0];
  EXPECT_EQ(users["type"], "user");
  EXPECT_EQ(users["rows"], Toy().gen.graph.table(NodeType::kUser).size());
  for (const auto& e : manifest["edge_tables"]) {
    const Relation r = *ParseRelation(e["relation"].get<std::string>());
    EXPECT_EQ(e["rows"], Toy().gen.graph.edge_list(r).size());
  }
  EXPECT_TRUE(manifest.contains("code_tables"));
  EXPECT_EQ(manifest["config"]["request"], ToJson(Toy().gen.request));
}

TEST_F(ExportTest, CroissantCarriesRaiFields) {
  const auto doc = nlohmann::json::parse(Slurp(dir_ / "croissant.json"));
  EXPECT_EQ(doc["@type"], "sc:Dataset");
  EXPECT_EQ(doc["rai"]["pii_present"], false);
  EXPECT_NE(doc["rai"]["prohibited_use"].get<std::string>().find(
                "evade fraud detection systems"),
            std::string::npos);
  EXPECT_EQ(doc["distribution"].size(), info_.files.size());
  EXPECT_EQ(doc["distribution"][0]["sha256"], info_.files[0].sha256);
}

TEST_F(ExportTest, LoadRestoresEverything) {
  const Bundle b = LoadBundle(dir_);
  EXPECT_EQ(b.digest, info_.digest);
  EXPECT_EQ(b.graph, Toy().gen.graph);
  EXPECT_EQ(b.rings, Toy().gen.rings);
  EXPECT_EQ(b.assignment, Toy().split);
  EXPECT_EQ(b.context.request, Toy().gen.request);
  EXPECT_EQ(b.context.shift_factor, Toy().gen.shift_factor);
  EXPECT_EQ(b.context.config.n_users, Toy().gen.config.n_users);
}

TEST_F(ExportTest, ReexportIsByteIdentical) {
  const Bundle b = LoadBundle(dir_);
  const fs::path again = dir_ / "again";
  const ExportInfo info2 =
      ExportBundle(b.graph, b.rings, b.assignment, b.context, again);
  EXPECT_EQ(info2.digest, info_.digest);
  for (const auto& name : BundleTableNames()) {
    EXPECT_EQ(Slurp(again / name), Slurp(dir_ / name)) << name;
  }
}

TEST_F(ExportTest, CorruptedTableFailsDigest) {
  std::string text = Slurp(dir_ / "nodes_booking.csv");
  const auto pos = text.find('\n') + 1;
  text[pos] = text[pos] == '1' ? '2' : '1';
  std::ofstream(dir_ / "nodes_booking.csv", std::ios::binary) << text;
  try {
    LoadBundle(dir_);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("digest"), std::string::npos)
        << e.what();
  }
}

TEST_F(ExportTest, SchemaVersionMismatchRejected) {
  auto manifest = nlohmann::json::parse(Slurp(dir_ / "manifest.json"));
  manifest["schema_version"] = kBundleSchemaVersion + 1;
  std::ofstream(dir_ / "manifest.json", std::ios::binary) << manifest.dump(2);
  EXPECT_THROW(LoadBundle(dir_), ValidationError);
}

TEST_F(ExportTest, RowCountMismatchRejected) {
  auto manifest = nlohmann::json::parse(Slurp(dir_ / "manifest.json"));
  for (auto& f : manifest["files"]) {
    if (f["name"] == "edges_made.csv") f["rows"] = f["rows"].get<int>() + 1;
  }
  std::ofstream(dir_ / "manifest.json", std::ios::binary) << manifest.dump(2);
  EXPECT_THROW(LoadBundle(dir_), ValidationError);
}

TEST_F(ExportTest, MissingFileIsIoError) {
  fs::remove(dir_ / "edges_wrote.csv");
  EXPECT_THROW(LoadBundle(dir_), IoError);
  EXPECT_THROW(LoadBundle(dir_ / "nowhere"), IoError);
}

TEST(Export, RejectsNonFiniteFeatures) {
  GraphData g = Toy().gen.graph;
  g.table(NodeType::kUser).At(0, 0) = std::numeric_limits<double>::infinity();
  const fs::path dir = fs::temp_directory_path() / "fg_export_nonfinite";
  EXPECT_THROW(ExportBundle(g, Toy().gen.rings, Toy().split, Toy().context, dir),
               ValidationError);
  fs::remove_all(dir);
}

TEST(ResolvedConfigJson, RoundTrips) {
  const ResolvedConfig& r = Toy().gen.config;
  const ResolvedConfig back = ResolvedConfigFromJson(ToJson(r));
  EXPECT_EQ(ToJson(back), ToJson(r));
}

}  // namespace
}  // namespace fraudgraph
