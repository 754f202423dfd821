#include "cvwit/serialize.hpp"

#include <cstdio>

namespace cvwit {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const nlohmann::json& resolved) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(resolved.dump())));
  return buf;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

nlohmann::json meta_json(const OutputMeta& m) {
  return {{"command", m.command},
          {"config_hash", config_hash(m.resolved_config)},
          {"cutoff", m.cutoff},
          {"max_leakage", m.max_leakage},
          {"tool_version", std::string(kToolVersion)},
          {"config", m.resolved_config}};
}

void write_csv(std::ostream& os, const OutputMeta& meta, const CsvTable& table) {
  os << "# command: " << meta.command << "\n";
  os << "# tool_version: " << kToolVersion << "\n";
  os << "# config_hash: " << config_hash(meta.resolved_config) << "\n";
  os << "# cutoff: " << meta.cutoff << "\n";
  os << "# max_leakage: " << format_number(meta.max_leakage) << "\n";
  os << "# config: " << meta.resolved_config.dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

namespace {
nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }
}  // namespace

nlohmann::json to_json(const WitnessSpec& s) {
  return {{"witness", s.describe()},
          {"free_set", std::string(to_string(s.free_set))},
          {"box", {{"n", s.box.n}, {"m", s.box.m}}},
          {"scale", s.scale},
          {"lifted", s.lifted},
          {"certified", s.certified()}};
}

nlohmann::json to_json(const MonotoneBound& b) {
  nlohmann::json j{{"lower", b.lower},
                   {"upper", b.upper},
                   {"exact", b.exact},
                   {"free_set", std::string(to_string(b.free_set))},
                   {"certificate", b.certificate}};
  j["witness_used"] = b.witness_used ? to_json(*b.witness_used) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ActivationOutcome& o) {
  return {{"channel", std::string(to_string(o.channel))},
          {"q", o.werner.q()},
          {"E", o.entanglement},
          {"S", o.steering},
          {"D", o.discord},
          {"N", o.chsh},
          {"classification", std::string(to_string(o.classification))},
          {"witness_violation", o.witness_violation},
          {"pt_negativity", o.pt_negativity},
          {"discord_bruteforce", o.discord_bruteforce},
          {"discord_certificate", discord_certificate(o) ? "nonfree" : "inconclusive"},
          {"witness", o.witness}};
}

nlohmann::json to_json(const GaussianFidelityResult& r) {
  return {{"lambda_g", r.lambda_g},
          {"argmax", {{"alpha", complex_json(r.argmax.alpha)}, {"r", r.argmax.r}, {"phi", r.argmax.phi}}},
          {"multistart_spread", r.multistart_spread},
          {"starts_converged", r.starts_converged}};
}

nlohmann::json to_json(const NegativityDepthResult& r) {
  return {{"depth", r.depth},
          {"argmin_alpha", complex_json(r.argmin_alpha)},
          {"refinement_converged", r.refinement_converged},
          {"min_displaced_parity", r.min_parity},
          {"dropped_points", r.dropped_points}};
}

nlohmann::json to_json(const PropertyReport& r) {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.failures) fails.push_back({{"property", f.property}, {"detail", f.detail}, {"excess", f.excess}});
  return {{"checks", r.checks}, {"passed", r.passed()}, {"failures", fails}};
}

CsvTable wigner_table(const WignerGrid& g) {
  CsvTable t{{"re_alpha", "im_alpha", "w_value"}, {}};
  t.rows.reserve(g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    t.rows.push_back({format_number(g.centers[i].real()), format_number(g.centers[i].imag()), format_number(g.values[i])});
  }
  return t;
}

}  // namespace cvwit
