//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "molverdict/data_dir.hpp"
#include "molverdict/pipe/dataset.hpp"

using namespace molverdict;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("fixture ingestion applies substitution, dedup and quarantine") {
  const auto quarantine = fs::temp_directory_path() / "mv_quarantine.csv";
  const auto dedup = fs::temp_directory_path() / "mv_dedup.txt";
  const IngestResult result = ingest_dataset(default_data_dir() + "/fixtures/fixture60.csv",
                                             quarantine.string(), dedup.string());
  CHECK(result.records.size() == 60);
  int approved = 0;
  for (const auto& r : result.records) approved += r.label == Label::kApproved;
  CHECK(approved == 30);
  CHECK(result.stats.rows_read == 63);
  CHECK(result.stats.parent_substituted == 1);
  CHECK(result.stats.duplicates_removed == 2);
  CHECK(result.stats.quarantined == 1);

  std::ifstream qin(quarantine);
  std::string text((std::istreambuf_iterator<char>(qin)), std::istreambuf_iterator<char>());
  CHECK(text.find("MV-U031") != std::string::npos);

  std::ifstream din(dedup);
  std::string dtext((std::istreambuf_iterator<char>(din)), std::istreambuf_iterator<char>());
  CHECK(dtext.find("MV-A031") != std::string::npos);  // written duplicate
  CHECK(dtext.find("MV-A032") != std::string::npos);  // parent-substituted child

  fs::remove(quarantine);
  fs::remove(dedup);
}

TEST_CASE("parent substitution replaces the child's structure") {
  const auto path = temp_file("mv_parent.csv",
                              "id,smiles,label,parent_id\n"
                              "P1,CCO,approved,\n"
                              "C1,OCC.O,approved,P1\n");
  const IngestResult result = ingest_dataset(path.string());
  // child becomes the parent structure, so dedup collapses the pair
  CHECK(result.records.size() == 1);
  CHECK(result.stats.parent_substituted == 1);
  CHECK(result.stats.duplicates_removed == 1);
  fs::remove(path);
}

TEST_CASE("different writings of one molecule deduplicate") {
  const auto path = temp_file("mv_dup.csv",
                              "id,smiles,label\n"
                              "A,CCO,approved\n"
                              "B,OCC,approved\n"
                              "C,CC(C)O,unapproved\n");
  const IngestResult result = ingest_dataset(path.string());
  CHECK(result.records.size() == 2);  // CCO == OCC, isopropanol distinct
  CHECK(result.stats.duplicates_removed == 1);
  fs::remove(path);
}

TEST_CASE("missing required columns") {
  const auto path = temp_file("mv_nocol.csv", "id,structure\nA,CCO\n");
  CHECK_THROWS_AS(ingest_dataset(path.string()), DatasetError);
  fs::remove(path);
}

TEST_CASE("empty dataset") {
  const auto path = temp_file("mv_empty.csv", "id,smiles,label\n");
  CHECK_THROWS_AS(ingest_dataset(path.string()), DatasetError);
  fs::remove(path);
}

TEST_CASE("jsonl ingestion") {
  const auto path = temp_file("mv_rows.jsonl",
                              R"({"id":"J1","smiles":"CCO","label":"approved"})"
                              "\n"
                              R"({"id":"J2","smiles":"c1ccccc1","label":"unapproved"})"
                              "\n");
  const IngestResult result = ingest_dataset(path.string());
  CHECK(result.records.size() == 2);
  CHECK(result.records[0].id == "J1");
  CHECK(result.records[1].label == Label::kUnapproved);
  fs::remove(path);
}

TEST_CASE("rows without an id column get generated ids") {
  const auto path = temp_file("mv_noid.csv", "smiles,label\nCCO,approved\nCCC,unapproved\n");
  const IngestResult result = ingest_dataset(path.string());
  CHECK(result.records[0].id == "row-0");
  CHECK(result.records[1].id == "row-1");
  fs::remove(path);
}

TEST_CASE("records csv round trip") {
  const auto src = temp_file("mv_rt.csv",
                             "id,smiles,label\nA,CCO,approved\nB,c1ccccc1,unapproved\n");
  const IngestResult result = ingest_dataset(src.string());
  const auto out = fs::temp_directory_path() / "mv_rt_out.csv";
  write_records_csv(out.string(), result.records, "test");
  const auto loaded = read_records_csv(out.string());
  REQUIRE(loaded.size() == result.records.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].id == result.records[i].id);
    CHECK(loaded[i].canonical == result.records[i].canonical);
    CHECK(loaded[i].label == result.records[i].label);
  }
  fs::remove(src);
  fs::remove(out);
}

TEST_CASE("duplicate ids are quarantined") {
  const auto path = temp_file("mv_dupid.csv",
                              "id,smiles,label\n"
                              "A,CCO,approved\n"
                              "A,CCC,unapproved\n"
                              "B,CCCC,approved\n");
  const IngestResult result = ingest_dataset(path.string());
  CHECK(result.records.size() == 2);
  CHECK(result.stats.quarantined == 1);
  CHECK(result.records[0].smiles == "CCO");
  fs::remove(path);
}
