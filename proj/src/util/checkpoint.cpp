#include "seditor/util/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seditor/util/error.hpp"

// Raw double blobs are written by memcpy; a big-endian host would need
// byte swapping that nothing here performs.
static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs assume a little-endian host");

namespace seditor::util {
namespace {

constexpr const char* kMagic = "seditor-checkpoint v1";

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
    throw CheckpointError("checkpoint entry name must be non-empty, no whitespace: '" +
                          name + "'");
  }
}

}  // namespace

void CheckpointWriter::add_array(const std::string& name, const double* data,
                                 long rows, long cols) {
  check_name(name);
  if (rows < 0 || cols < 0) throw CheckpointError("negative array shape");
  for (const auto& existing : arrays_) {
    // A repeated name would silently shadow on read.
    if (existing.name == name) {
      throw CheckpointError("checkpoint already has array '" + name + "'");
    }
  }
  Entry e;
  e.name = name;
  e.rows = rows;
  e.cols = cols;
  e.data.assign(data, data + static_cast<std::size_t>(rows) * cols);
  arrays_.push_back(std::move(e));
}

void CheckpointWriter::add_matrix(const std::string& name,
                                  const Eigen::MatrixXd& m) {
  add_array(name, m.data(), m.rows(), m.cols());
}

void CheckpointWriter::add_vector(const std::string& name,
                                  const Eigen::VectorXd& v) {
  add_array(name, v.data(), v.size(), 1);
}

void CheckpointWriter::add_scalar(const std::string& name, double value) {
  add_array(name, &value, 1, 1);
}

void CheckpointWriter::add_text(const std::string& key,
                                const std::string& value) {
  check_name(key);
  for (const auto& [existing, unused] : texts_) {
    if (existing == key) {
      throw CheckpointError("checkpoint already has text entry '" + key + "'");
    }
  }
  texts_.emplace_back(key, value);
}

void CheckpointWriter::save(const std::string& prefix) const {
  std::ostringstream manifest;
  manifest << kMagic << "\n";
  long offset = 0;
  for (const auto& e : arrays_) {
    manifest << "array " << e.name << " " << e.rows << " " << e.cols << " "
             << offset << "\n";
    offset += static_cast<long>(e.data.size());
  }
  for (const auto& [key, value] : texts_) {
    manifest << "text " << key << " " << value.size() << "\n" << value << "\n";
  }
  manifest << "blob " << offset << "\n";

  {
    std::ofstream out(prefix + ".manifest", std::ios::binary);
    if (!out) throw IoError("cannot write " + prefix + ".manifest");
    out << manifest.str();
    if (!out) throw IoError("write failed for " + prefix + ".manifest");
  }
  {
    std::ofstream out(prefix + ".blob", std::ios::binary);
    if (!out) throw IoError("cannot write " + prefix + ".blob");
    for (const auto& e : arrays_) {
      out.write(reinterpret_cast<const char*>(e.data.data()),
                static_cast<std::streamsize>(e.data.size() * sizeof(double)));
    }
    if (!out) throw IoError("write failed for " + prefix + ".blob");
  }
}

CheckpointReader::CheckpointReader(const CheckpointWriter& snapshot)
    : arrays_(snapshot.arrays_), texts_(snapshot.texts_) {}

CheckpointReader::CheckpointReader(const std::string& prefix) {
  std::ifstream manifest(prefix + ".manifest", std::ios::binary);
  if (!manifest) throw CheckpointError("cannot open " + prefix + ".manifest");
  std::string line;
  if (!std::getline(manifest, line) || line != kMagic) {
    throw CheckpointError("unsupported checkpoint version in " + prefix +
                          ".manifest (expected '" + kMagic + "')");
  }

  struct Placement {
    long offset;
  };
  std::vector<Placement> placements;
  long declared_total = -1;
  while (std::getline(manifest, line)) {
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    if (kind == "array") {
      CheckpointWriter::Entry e;
      long offset = 0;
      in >> e.name >> e.rows >> e.cols >> offset;
      if (in.fail() || e.rows < 0 || e.cols < 0 || offset < 0) {
        throw CheckpointError("malformed array line: " + line);
      }
      arrays_.push_back(std::move(e));
      placements.push_back({offset});
    } else if (kind == "text") {
      std::string key;
      std::size_t len = 0;
      in >> key >> len;
      if (in.fail()) throw CheckpointError("malformed text line: " + line);
      std::string value(len, '\0');
      manifest.read(value.data(), static_cast<std::streamsize>(len));
      char newline = 0;
      manifest.get(newline);
      if (manifest.fail() || newline != '\n') {
        throw CheckpointError("truncated text entry '" + key + "'");
      }
      texts_.emplace_back(std::move(key), std::move(value));
    } else if (kind == "blob") {
      in >> declared_total;
      if (in.fail() || declared_total < 0) {
        throw CheckpointError("malformed blob line: " + line);
      }
    } else if (!kind.empty()) {
      throw CheckpointError("unknown manifest entry: " + line);
    }
  }
  if (declared_total < 0) {
    throw CheckpointError("manifest missing blob size: " + prefix);
  }

  std::ifstream blob(prefix + ".blob", std::ios::binary | std::ios::ate);
  if (!blob) throw CheckpointError("cannot open " + prefix + ".blob");
  const auto bytes = static_cast<long>(blob.tellg());
  if (bytes != declared_total * static_cast<long>(sizeof(double))) {
    throw CheckpointError("truncated blob: " + prefix + ".blob holds " +
                          std::to_string(bytes) + " bytes, manifest declares " +
                          std::to_string(declared_total) + " doubles");
  }
  for (std::size_t i = 0; i < arrays_.size(); ++i) {
    auto& e = arrays_[i];
    const auto count = static_cast<std::size_t>(e.rows) * e.cols;
    if (placements[i].offset + static_cast<long>(count) > declared_total) {
      throw CheckpointError("array '" + e.name + "' overruns blob");
    }
    e.data.resize(count);
    blob.seekg(placements[i].offset * static_cast<long>(sizeof(double)));
    blob.read(reinterpret_cast<char*>(e.data.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
    if (blob.fail()) throw CheckpointError("read failed for array '" + e.name + "'");
  }
}

const CheckpointWriter::Entry& CheckpointReader::find(
    const std::string& name) const {
  for (const auto& e : arrays_) {
    if (e.name == name) return e;
  }
  throw CheckpointError("checkpoint has no array '" + name + "'");
}

Eigen::VectorXd CheckpointReader::array(const std::string& name, long rows,
                                        long cols) const {
  const auto& e = find(name);
  if (e.rows != rows || e.cols != cols) {
    throw CheckpointError("array '" + name + "' has shape " +
                          std::to_string(e.rows) + "x" + std::to_string(e.cols) +
                          ", expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  return Eigen::Map<const Eigen::VectorXd>(e.data.data(),
                                           static_cast<long>(e.data.size()));
}

Eigen::MatrixXd CheckpointReader::matrix(const std::string& name, long rows,
                                         long cols) const {
  const Eigen::VectorXd flat = array(name, rows, cols);
  return Eigen::Map<const Eigen::MatrixXd>(flat.data(), rows, cols);
}

std::pair<long, long> CheckpointReader::shape(const std::string& name) const {
  const auto& e = find(name);
  return {e.rows, e.cols};
}

Eigen::VectorXd CheckpointReader::vector(const std::string& name,
                                         long size) const {
  return array(name, size, 1);
}

double CheckpointReader::scalar(const std::string& name) const {
  return array(name, 1, 1)(0);
}

const std::string& CheckpointReader::text(const std::string& key) const {
  for (const auto& [k, v] : texts_) {
    if (k == key) return v;
  }
  throw CheckpointError("checkpoint has no text entry '" + key + "'");
}

bool CheckpointReader::has_text(const std::string& key) const {
  for (const auto& [k, v] : texts_) {
    if (k == key) return true;
  }
  return false;
}

}  // namespace seditor::util
