#include "wforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wforge/rng.hpp"

namespace wforge {

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ResourceError("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string digest_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string file_digest(const fs::path& path) { return digest_hex(read_file(path)); }

json witness_to_json(const Witness& w) {
  json j;
  j["n_qubits"] = w.n_qubits;
  j["target"] = w.metadata.target;
  j["terms"] = json::array();
  for (const auto& [p, c] : w.terms) j["terms"].push_back({{"pauli", p.str()}, {"coeff", c}});
  json meta = json::object();
  if (!w.metadata.provenance.empty()) meta["provenance"] = w.metadata.provenance;
  if (w.metadata.seed) meta["seed"] = *w.metadata.seed;
  if (!w.metadata.config_digest.empty()) meta["config_digest"] = w.metadata.config_digest;
  j["metadata"] = meta;
  return j;
}

Witness witness_from_json(const json& j) {
  try {
    Witness w;
    w.n_qubits = j.at("n_qubits").get<int>();
    if (j.contains("target")) w.metadata.target = j.at("target").get<std::string>();
    for (const auto& t : j.at("terms")) {
      const PauliString p(t.at("pauli").get<std::string>());
      if (w.terms.contains(p)) throw InvalidInput("duplicate term " + p.str());
      w.terms[p] = t.at("coeff").get<double>();
    }
    if (j.contains("metadata")) {
      const auto& m = j.at("metadata");
      if (m.contains("provenance")) w.metadata.provenance = m.at("provenance").get<std::string>();
      if (m.contains("seed")) w.metadata.seed = m.at("seed").get<std::uint64_t>();
      if (m.contains("config_digest")) w.metadata.config_digest = m.at("config_digest").get<std::string>();
    }
    w.validate();
    return w;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed witness JSON: ") + e.what());
  }
}

void write_witness(const fs::path& path, const Witness& w) {
  // max_digits10 round-trips every coefficient exactly.
  atomic_write(path, witness_to_json(w).dump(2) + "\n");
}

Witness read_witness(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return witness_from_json(j);
}

std::string samples_to_csv(const TrainingSet& data, int label) {
  std::ostringstream out;
  out.precision(17);
  out << "# n_qubits=" << data.n_qubits << "\n# seed=" << data.seed << "\n# label=" << label << "\n";
  out << "label,origin";
  for (const auto& f : data.features) out << ',' << f.str();
  out << '\n';
  for (const auto& s : data.samples) {
    if (s.label != label) continue;
    out << s.label << ',' << to_string(s.origin);
    for (Eigen::Index k = 0; k < s.features.size(); ++k) out << ',' << s.features(k);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace

void read_samples_csv(const fs::path& path, TrainingSet& into) {
  std::istringstream in(read_file(path));
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (!header) {
      if (cells.size() < 2 || cells[0] != "label" || cells[1] != "origin")
        throw InvalidInput(path.string() + ": missing header row");
      FeatureSet feats;
      for (std::size_t k = 2; k < cells.size(); ++k) feats.emplace_back(cells[k]);
      if (into.features.empty()) {
        into.features = feats;
      } else if (feats != into.features) {
        throw InvalidInput(path.string() + ": feature columns differ from previous sample file");
      }
      header = true;
      continue;
    }
    if (cells.size() != into.features.size() + 2)
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": wrong number of columns");
    LabeledSample s;
    try {
      s.label = std::stoi(cells[0]);
      s.origin = parse_sample_origin(cells[1]);
      s.features.resize(static_cast<Eigen::Index>(into.features.size()));
      for (std::size_t k = 0; k < into.features.size(); ++k) s.features(static_cast<Eigen::Index>(k)) = std::stod(cells[k + 2]);
    } catch (const std::logic_error&) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": unparsable value");
    }
    into.samples.push_back(std::move(s));
  }
  if (!header) throw InvalidInput(path.string() + ": no header row");
}

}  // namespace wforge
