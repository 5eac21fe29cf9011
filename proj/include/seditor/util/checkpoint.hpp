#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace seditor::util {

// Named-array store backing both checkpoints and in-memory state
// snapshots (iteration rollback). On disk it becomes two files:
//   <prefix>.manifest  versioned text: names, shapes, blob offsets,
//                      length-prefixed text entries
//   <prefix>.blob      all array data concatenated as little-endian
//                      IEEE-754 doubles
// Entries keep insertion order, so identical state always serializes to
// byte-identical files.
class CheckpointWriter {
 public:
  void add_array(const std::string& name, const double* data, long rows,
                 long cols);
  // Stored column-major, Eigen's default layout.
  void add_matrix(const std::string& name, const Eigen::MatrixXd& m);
  void add_vector(const std::string& name, const Eigen::VectorXd& v);
  void add_scalar(const std::string& name, double value);
  void add_text(const std::string& key, const std::string& value);

  void save(const std::string& prefix) const;

 private:
  friend class CheckpointReader;
  struct Entry {
    std::string name;
    long rows = 0;
    long cols = 0;
    std::vector<double> data;
  };
  std::vector<Entry> arrays_;
  std::vector<std::pair<std::string, std::string>> texts_;
};

class CheckpointReader {
 public:
  // Load from <prefix>.manifest / <prefix>.blob.
  explicit CheckpointReader(const std::string& prefix);
  // Read back an in-memory snapshot without touching the filesystem.
  explicit CheckpointReader(const CheckpointWriter& snapshot);

  // Shape-checked accessors; wrong name or shape is a CheckpointError.
  Eigen::VectorXd array(const std::string& name, long rows, long cols) const;
  Eigen::MatrixXd matrix(const std::string& name, long rows, long cols) const;
  std::pair<long, long> shape(const std::string& name) const;
  Eigen::VectorXd vector(const std::string& name, long size) const;
  double scalar(const std::string& name) const;
  const std::string& text(const std::string& key) const;
  bool has_text(const std::string& key) const;

 private:
  const CheckpointWriter::Entry& find(const std::string& name) const;
  std::vector<CheckpointWriter::Entry> arrays_;
  std::vector<std::pair<std::string, std::string>> texts_;
};

}  // namespace seditor::util
