#pragma once

// JSON and CSV output with reproducibility metadata.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvwit/activation.hpp"
#include "cvwit/monotones.hpp"
#include "cvwit/phase_space.hpp"
#include "cvwit/witness.hpp"

namespace cvwit {

inline constexpr std::string_view kToolVersion = "0.3.1";

std::uint64_t fnv1a(std::string_view bytes);

/// FNV-1a of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& resolved);

struct OutputMeta {
  std::string command;
  nlohmann::json resolved_config;
  int cutoff = 0;
  double max_leakage = 0.0;
};

nlohmann::json meta_json(const OutputMeta& m);

/// Fixed 12-significant-digit rendering; identical inputs give identical text.
std::string format_number(double x);

/// Sweep or grid rows. Metadata goes first as '#' comment lines.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(std::ostream& os, const OutputMeta& meta, const CsvTable& table);

nlohmann::json to_json(const WitnessSpec& s);
nlohmann::json to_json(const MonotoneBound& b);
nlohmann::json to_json(const ActivationOutcome& o);
nlohmann::json to_json(const GaussianFidelityResult& r);
nlohmann::json to_json(const NegativityDepthResult& r);
nlohmann::json to_json(const PropertyReport& r);

CsvTable wigner_table(const WignerGrid& g);

}  // namespace cvwit
