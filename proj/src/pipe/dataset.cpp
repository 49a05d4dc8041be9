//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/pipe/dataset.hpp"

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "molverdict/chem/canonical.hpp"
#include "molverdict/chem/smiles.hpp"
#include "molverdict/util/csv.hpp"

namespace molverdict {

namespace {

struct RawRow {
  std::string id, smiles, label_text, parent_id;
};

bool is_jsonl(const std::string& path) {
  return path.ends_with(".jsonl") || path.ends_with(".ndjson");
}

std::vector<RawRow> read_rows_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int smiles_col = table.column("smiles");
  const int label_col = table.column("label");
  if (smiles_col < 0) throw DatasetError("missing required column 'smiles' in " + path);
  if (label_col < 0) throw DatasetError("missing required column 'label' in " + path);
  const int id_col = table.column("id");
  const int parent_col = table.column("parent_id");

  std::vector<RawRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& fields = table.rows[i];
    RawRow row;
    row.smiles = fields[smiles_col];
    row.label_text = fields[label_col];
    row.id = id_col >= 0 && !fields[id_col].empty() ? fields[id_col]
                                                    : "row-" + std::to_string(i);
    if (parent_col >= 0) row.parent_id = fields[parent_col];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> read_rows_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset: " + path);
  std::vector<RawRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.contains("smiles") || !obj.contains("label"))
      throw DatasetError("missing required keys smiles/label at " + path + ":" +
                         std::to_string(lineno));
    RawRow row;
    row.smiles = obj["smiles"].get<std::string>();
    row.label_text = obj["label"].get<std::string>();
    row.id = obj.value("id", "row-" + std::to_string(lineno - 1));
    row.parent_id = obj.value("parent_id", "");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

IngestResult ingest_dataset(const std::string& path, const std::string& quarantine_path,
                            const std::string& dedup_log_path) {
  auto rows = is_jsonl(path) ? read_rows_jsonl(path) : read_rows_csv(path);
  if (rows.empty()) throw DatasetError("dataset is empty: " + path);

  std::ofstream quarantine;
  if (!quarantine_path.empty()) {
    quarantine.open(quarantine_path);
    quarantine << "id,smiles,reason\n";
  }
  std::ofstream dedup_log;
  if (!dedup_log_path.empty()) dedup_log.open(dedup_log_path);

  IngestResult result;
  result.stats.rows_read = static_cast<int>(rows.size());

  // ids must be unique; later collisions are quarantined
  std::unordered_map<std::string, const RawRow*> by_id;
  std::unordered_set<const RawRow*> id_collisions;
  for (const RawRow& row : rows)
    if (!by_id.emplace(row.id, &row).second) id_collisions.insert(&row);

  // parent substitution: a child row takes its parent row's structure
  for (RawRow& row : rows) {
    if (row.parent_id.empty() || row.parent_id == row.id) continue;
    const auto it = by_id.find(row.parent_id);
    if (it == by_id.end()) {
      if (dedup_log)
        dedup_log << row.id << ": parent " << row.parent_id << " not found, keeping own\n";
      continue;
    }
    row.smiles = it->second->smiles;
    ++result.stats.parent_substituted;
  }

  std::unordered_map<std::string, std::string> seen_canonical;  // canonical -> first id
  for (const RawRow& row : rows) {
    if (id_collisions.count(&row) > 0) {
      ++result.stats.quarantined;
      if (quarantine)
        quarantine << csv_escape(row.id) << "," << csv_escape(row.smiles)
                   << ",duplicate id\n";
      continue;
    }
    const auto label = parse_label(row.label_text);
    if (!label) {
      ++result.stats.quarantined;
      if (quarantine)
        quarantine << csv_escape(row.id) << "," << csv_escape(row.smiles)
                   << ",invalid label '" << row.label_text << "'\n";
      continue;
    }
    DatasetRecord record;
    record.id = row.id;
    record.smiles = row.smiles;
    record.label = *label;
    record.parent_id = row.parent_id;
    try {
      record.mol = parse_smiles(row.smiles);
      record.canonical = canonical_form(record.mol);
    } catch (const SmilesError& e) {
      ++result.stats.quarantined;
      if (quarantine)
        quarantine << csv_escape(row.id) << "," << csv_escape(row.smiles) << ","
                   << csv_escape(e.what()) << "\n";
      continue;
    }
    const auto [it, inserted] = seen_canonical.emplace(record.canonical, record.id);
    if (!inserted) {
      ++result.stats.duplicates_removed;
      if (dedup_log)
        dedup_log << record.id << ": duplicate of " << it->second << " ("
                  << record.canonical << ")\n";
      continue;
    }
    result.records.push_back(std::move(record));
  }

  if (result.records.empty())
    throw DatasetError("no usable records after ingestion of " + path);
  return result;
}

void write_records_csv(const std::string& path, const std::vector<DatasetRecord>& records,
                       const std::string& provenance_comment) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path);
  if (!provenance_comment.empty()) out << "# " << provenance_comment << "\n";
  out << "id,smiles,label,canonical\n";
  for (const auto& r : records)
    out << csv_escape(r.id) << "," << csv_escape(r.smiles) << "," << to_string(r.label) << ","
        << csv_escape(r.canonical) << "\n";
}

std::vector<DatasetRecord> read_records_csv(const std::string& path, bool reparse) {
  const CsvTable table = read_csv(path);
  const int id_col = table.column("id");
  const int smiles_col = table.column("smiles");
  const int label_col = table.column("label");
  const int canonical_col = table.column("canonical");
  if (id_col < 0 || smiles_col < 0 || label_col < 0)
    throw DatasetError("missing columns in " + path);
  std::vector<DatasetRecord> records;
  for (const auto& fields : table.rows) {
    DatasetRecord r;
    r.id = fields[id_col];
    r.smiles = fields[smiles_col];
    const auto label = parse_label(fields[label_col]);
    if (!label) throw DatasetError("bad label in " + path + " for " + r.id);
    r.label = *label;
    if (canonical_col >= 0) r.canonical = fields[canonical_col];
    if (reparse) {
      r.mol = parse_smiles(r.smiles);
      if (r.canonical.empty()) r.canonical = canonical_form(r.mol);
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace molverdict
