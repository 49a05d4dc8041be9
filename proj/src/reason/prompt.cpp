//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/reason/prompt.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace molverdict {

PromptTemplate PromptTemplate::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PromptError("cannot open prompt template: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return PromptTemplate{buf.str()};
}

std::string PromptTemplate::instantiate(const std::map<std::string, std::string>& vars) const {
  std::string out = text;
  for (const auto& [key, value] : vars) {
    const std::string needle = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return out;
}

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_descriptor_block(const DescriptorVector& d) {
  std::string out;
  out += "molecular_weight: " + fixed3(d.molecular_weight) + "\n";
  out += "logp: " + fixed3(d.logp) + "\n";
  out += "tpsa: " + fixed3(d.tpsa) + "\n";
  out += "hbd: " + std::to_string(d.hbd) + "\n";
  out += "hba: " + std::to_string(d.hba) + "\n";
  out += "rotatable_bonds: " + std::to_string(d.rotatable_bonds) + "\n";
  out += "molar_refractivity: " + fixed3(d.molar_refractivity) + "\n";
  out += "chiral_centers: " + std::to_string(d.chiral_centers) + "\n";
  out += "heavy_atoms: " + std::to_string(d.heavy_atoms) + "\n";
  out += "ring_count: " + std::to_string(d.ring_count) + "\n";
  out += "formal_charge: " + std::to_string(d.formal_charge) + "\n";
  out += std::string("pains_alert: ") + (d.pains_alert ? "yes" : "no") + "\n";
  out += std::string("brenk_alert: ") + (d.brenk_alert ? "yes" : "no") + "\n";
  return out;
}

PromptRecord build_prompt(const DescriptorVector& query, const std::string& query_id,
                          std::optional<Label> truth, const NeighborSet& neighbors,
                          const DescriptorLookup& lookup,
                          const PromptTemplate& system_template) {
  PromptRecord record;
  record.query_id = query_id;
  record.truth = truth;
  record.system_text = system_template.instantiate(
      {{"approved_count", std::to_string(neighbors.approved.size())},
       {"unapproved_count", std::to_string(neighbors.unapproved.size())}});

  std::string user = "Query molecule:\n" + render_descriptor_block(query);
  auto append_group = [&](const std::vector<Neighbor>& group, const std::string& header) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      const auto descriptors = lookup(group[i].id);
      if (!descriptors)
        throw PromptError("missing neighbor descriptors for " + group[i].id);
      user += "\n" + header + " " + std::to_string(i + 1) + ":\n" +
              render_descriptor_block(*descriptors);
    }
  };
  append_group(neighbors.approved, "Similar approved molecule");
  append_group(neighbors.unapproved, "Similar unapproved molecule");
  record.user_text = std::move(user);
  return record;
}

}  // namespace molverdict
