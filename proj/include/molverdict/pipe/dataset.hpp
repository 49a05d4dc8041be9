//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "molverdict/chem/molecule.hpp"
#include "molverdict/label.hpp"

namespace molverdict {

class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DatasetRecord {
  std::string id;
  std::string smiles;
  Label label = Label::kUnapproved;
  std::string parent_id;  // empty when the row has no parent
  std::string canonical;  // filled during ingestion
  Molecule mol;
};

struct IngestStats {
  int rows_read = 0;
  int parent_substituted = 0;
  int duplicates_removed = 0;
  int quarantined = 0;
};

struct IngestResult {
  std::vector<DatasetRecord> records;
  IngestStats stats;
};

// Reads CSV (columns smiles,label and optional id,parent_id) or JSON-lines
// (same keys), applies parent substitution, parses and canonicalizes each
// structure, deduplicates by canonical form (first occurrence wins) and
// quarantines unparseable rows instead of aborting. Format chosen by file
// extension (.jsonl/.ndjson are JSON-lines, anything else CSV).
// Throws MissingColumn/EmptyDataset conditions as DatasetError.
IngestResult ingest_dataset(const std::string& path, const std::string& quarantine_path = "",
                            const std::string& dedup_log_path = "");

// prepared-split CSV files: id,smiles,label,canonical
void write_records_csv(const std::string& path, const std::vector<DatasetRecord>& records,
                       const std::string& provenance_comment = "");
std::vector<DatasetRecord> read_records_csv(const std::string& path, bool reparse = true);

}  // namespace molverdict
