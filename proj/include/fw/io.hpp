#pragma once

#include <map>
#include <string>
#include <vector>

#include "fw/objectives.hpp"
#include "fw/solver.hpp"

namespace fw {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rows + labels as read from a LIBSVM-format text file. Indices are
/// converted to 0-based; labels are normalized to {-1, +1}.
struct SparseDataset {
  std::vector<SparseRow> rows;
  std::vector<double> labels;
  int dim = 0;
};

SparseDataset parse_libsvm(const std::string& path);
void write_libsvm(const std::string& path, const SparseDataset& data);

/// "user item rating [timestamp]" whitespace-separated triples.
std::unique_ptr<MatrixCompletionObjective> load_ratings(const std::string& path);

void write_trace(const std::string& path, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_trace(const std::string& path);

/// Flat key=value run configuration; CLI --set overrides win.
struct RunConfig {
  std::string problem = "quadratic";  // quadratic | logistic | matcomp
  std::string dataset;                // optional; synthetic when empty
  std::string constraint = "l2";      // l2 | l1 | nsupport | nuclear
  double radius = 1.0;
  int nsupport = 2;
  std::string algorithm = "hfw";  // fw | hfw | restart
  std::string policy = "open-loop-2";
  double delta = 0.8;
  double c = 2.0;
  double k0 = 2.0;
  int grid_size = 65;
  long max_iter = 1000;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  std::string trace_path;
  bool emit_vanilla_gap = false;
  // synthetic-instance shape
  int dim = 20;
  int num_samples = 50;
  double density = 0.3;
  int mat_rows = 60;
  int mat_cols = 40;
  int mat_rank = 3;
  double observed_fraction = 0.1;
  double target_norm = 0.5;  // quadratic target radius

  static RunConfig from_file(const std::string& path);
  void apply_override(const std::string& key, const std::string& value);
  void validate() const;
};

}  // namespace fw
