// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/bundle.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sgs {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string certificate_to_json(const GroundStateCertificate& cert) {
  ojson j;
  const int n = cert.initial_config.n_qubits;
  j["n_qubits"] = n;
  j["energy"] = cert.energy;
  j["n_patch"] = cert.n_patch;
  j["patch_support_size"] = cert.patch_support_size;
  j["initial_config"] = cert.initial_config.to_hex();
  j["initial_overlap_sq"] = cert.initial_overlap_sq();
  auto& s = j["support"] = ojson::array();
  for (std::size_t i = 0; i < cert.support.size(); ++i)
    s.push_back({cert.support[i].to_hex(), cert.amplitudes[i]});
  return j.dump(1);
}

GroundStateCertificate certificate_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GroundStateCertificate c;
  const int n = j.at("n_qubits").get<int>();
  c.energy = j.at("energy").get<double>();
  c.n_patch = j.value("n_patch", 1);
  c.patch_support_size = j.value("patch_support_size", 8);
  c.initial_config = Configuration::from_hex(j.at("initial_config").get<std::string>(), n);
  for (const auto& e : j.at("support")) {
    c.support.push_back(Configuration::from_hex(e.at(0).get<std::string>(), n));
    c.amplitudes.push_back(e.at(1).get<double>());
  }
  return c;
}

namespace {

ojson params_to_json(const ConstructionParams& p) {
  ojson j;
  j["m1"] = p.m1;
  j["m2"] = p.m2;
  j["j1"] = p.j1;
  j["mode"] = p.mode == CouplingMode::Main ? "main" : "warmup";
  j["mask_seed"] = p.mask_seed;
  j["vacuum_offset"] = p.vacuum_offset;
  j["padding_pin"] = p.padding_pin;
  j["coupling"] = p.coupling;
  j["core"] = {{"a", p.core.a}, {"b", p.core.b}, {"c", p.core.c}};
  return j;
}

ConstructionParams params_from_json(const nlohmann::json& j) {
  ConstructionParams p;
  p.m1 = j.at("m1").get<double>();
  p.m2 = j.at("m2").get<double>();
  p.j1 = j.at("j1").get<double>();
  p.mode = j.at("mode").get<std::string>() == "main" ? CouplingMode::Main : CouplingMode::Warmup;
  p.mask_seed = j.at("mask_seed").get<std::uint64_t>();
  p.vacuum_offset = j.at("vacuum_offset").get<double>();
  p.padding_pin = j.at("padding_pin").get<double>();
  p.coupling = j.value("coupling", true);
  p.core.a = j.at("core").at("a").get<double>();
  p.core.b = j.at("core").at("b").get<double>();
  p.core.c = j.at("core").at("c").get<double>();
  return p;
}

}  // namespace

void save_bundle(const Instance& inst, const std::string& dir) {
  fs::create_directories(dir);
  write_file((fs::path(dir) / "hamiltonian.json").string(), inst.h.to_json());
  write_file((fs::path(dir) / "certificate.json").string(), certificate_to_json(inst.cert));
  ojson meta;
  meta["version"] = kVersionTag;
  meta["seed"] = inst.seed;
  meta["mask"] = Configuration(inst.mask, inst.h.n_qubits()).to_hex();
  meta["params"] = params_to_json(inst.params);
  meta["layout"] = ojson::parse(layout_to_json(inst.layout, &inst.embedding));
  meta["n_terms"] = inst.h.size();
  meta["one_norm"] = inst.h.one_norm();
  meta["instance_hash"] = instance_hash(inst);
  write_file((fs::path(dir) / "metadata.json").string(), meta.dump(1));
}

Instance load_bundle(const std::string& dir) {
  Instance inst;
  inst.h = PauliSum::from_json(read_file((fs::path(dir) / "hamiltonian.json").string()));
  inst.cert = certificate_from_json(read_file((fs::path(dir) / "certificate.json").string()));
  if (inst.cert.initial_config.n_qubits != inst.h.n_qubits())
    throw std::invalid_argument("certificate width does not match the Hamiltonian");
  const auto meta = nlohmann::json::parse(read_file((fs::path(dir) / "metadata.json").string()));
  inst.seed = meta.at("seed").get<std::uint64_t>();
  inst.mask = Configuration::from_hex(meta.at("mask").get<std::string>(), inst.h.n_qubits()).bits;
  inst.params = params_from_json(meta.at("params"));
  inst.layout = layout_from_json(meta.at("layout").dump(), &inst.embedding);
  return inst;
}

std::string instance_hash(const Instance& inst) {
  u64 h = 0x736773;
  auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) h = mix64(h ^ ch);
  };
  feed(inst.h.to_text());
  for (const auto& c : inst.cert.support) feed(c.to_hex());
  feed(inst.cert.initial_config.to_hex());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sgs
