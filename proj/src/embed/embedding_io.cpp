//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/embed/embedding_io.hpp"

#include <fstream>

#include "molverdict/util/binio.hpp"

namespace molverdict {

namespace {
constexpr char kMagic[8] = {'M', 'V', 'E', 'M', 'B', '0', '0', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_embeddings(const std::string& path, const std::vector<Embedding>& embeddings,
                      int dim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);
  write_magic(out, kMagic);
  write_pod<std::uint32_t>(out, kVersion);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  write_pod<std::uint64_t>(out, embeddings.size());
  std::vector<float> row(dim);
  for (const auto& e : embeddings) {
    if (e.dim() != dim)
      throw std::runtime_error("embedding dimension mismatch while writing " + path);
    write_string(out, e.molecule_id);
    for (int i = 0; i < dim; ++i) row[i] = static_cast<float>(e.values[i]);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(float) * row.size()));
  }
}

std::vector<Embedding> read_embeddings(const std::string& path, int* dim_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  expect_magic(in, kMagic, path);
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kVersion)
    throw std::runtime_error("unsupported embedding file version in " + path);
  const auto dim = read_pod<std::uint32_t>(in);
  const auto count = read_pod<std::uint64_t>(in);
  std::vector<Embedding> out;
  out.reserve(count);
  std::vector<float> row(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    Embedding e;
    e.molecule_id = read_string(in);
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(float) * dim));
    if (!in) throw std::runtime_error("truncated embedding file: " + path);
    e.values.assign(row.begin(), row.end());
    out.push_back(std::move(e));
  }
  if (dim_out != nullptr) *dim_out = static_cast<int>(dim);
  return out;
}

void export_embeddings_csv(const std::string& path, const std::vector<Embedding>& embeddings,
                           int dim) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding CSV: " + path);
  out << "molecule_id";
  for (int i = 0; i < dim; ++i) out << ",v" << i;
  out << "\n";
  out.precision(9);
  for (const auto& e : embeddings) {
    out << e.molecule_id;
    for (double v : e.values) out << "," << v;
    out << "\n";
  }
}

}  // namespace molverdict
