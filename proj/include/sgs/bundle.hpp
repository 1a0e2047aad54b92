// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "sgs/hamiltonian.hpp"

namespace sgs {

inline constexpr const char* kVersionTag = "sparsegs-0.1.0";

/// Writes hamiltonian.json, certificate.json and metadata.json into `dir`.
void save_bundle(const Instance& inst, const std::string& dir);
Instance load_bundle(const std::string& dir);

std::string certificate_to_json(const GroundStateCertificate& cert);
GroundStateCertificate certificate_from_json(const std::string& text);

/// 16 hex digits over the canonical Hamiltonian text and certificate support.
std::string instance_hash(const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace sgs
