#include "fw/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fw {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

SparseDataset parse_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  SparseDataset data;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    double label;
    if (tok == "+1" || tok == "1") label = 1.0;
    else if (tok == "-1") label = -1.0;
    else if (tok == "0") label = -1.0;
    else parse_fail(path, lineno, "unsupported label '" + tok + "'");

    SparseRow row;
    int prev_idx = 0;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) parse_fail(path, lineno, "malformed token '" + tok + "'");
      int idx;
      double val;
      try {
        std::size_t used;
        idx = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
        val = std::stod(tok.substr(colon + 1), &used);
        if (used != tok.size() - colon - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        parse_fail(path, lineno, "malformed token '" + tok + "'");
      }
      if (idx < 1) parse_fail(path, lineno, "feature index must be >= 1");
      if (idx <= prev_idx) parse_fail(path, lineno, "feature indices not strictly increasing");
      prev_idx = idx;
      row.idx.push_back(idx - 1);
      row.val.push_back(val);
      data.dim = std::max(data.dim, idx);
    }
    data.rows.push_back(std::move(row));
    data.labels.push_back(label);
  }
  return data;
}

void write_libsvm(const std::string& path, const SparseDataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    out << (data.labels[i] > 0 ? "+1" : "-1");
    const auto& r = data.rows[i];
    for (std::size_t t = 0; t < r.idx.size(); ++t) {
      out << ' ' << (r.idx[t] + 1) << ':' << fmt17(r.val[t]);
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

std::unique_ptr<MatrixCompletionObjective> load_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<MatrixCompletionObjective::Entry> entries;
  std::set<std::pair<int, int>> seen;
  int rows = 0, cols = 0, lineno = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    if (blank(raw)) continue;
    std::istringstream ss(raw);
    long user, item;
    double rating;
    if (!(ss >> user >> item >> rating)) {
      parse_fail(path, lineno, "expected 'user item rating [timestamp]'");
    }
    if (user < 1 || item < 1) parse_fail(path, lineno, "user/item indices must be >= 1");
    const auto key = std::make_pair(static_cast<int>(user - 1), static_cast<int>(item - 1));
    if (!seen.insert(key).second) {
      parse_fail(path, lineno, "duplicate (user, item) entry");
    }
    entries.push_back({key.first, key.second, rating});
    rows = std::max(rows, key.first + 1);
    cols = std::max(cols, key.second + 1);
  }
  if (entries.empty()) throw ParseError(path + ": at least one observation required");
  return std::make_unique<MatrixCompletionObjective>(std::move(entries), rows, cols);
}

void write_trace(const std::string& path, const std::vector<TraceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "k,f,gap_gen,gap_vanilla,delta,eta,elapsed_ns,structure\n";
  for (const auto& r : records) {
    out << r.k << ',' << fmt17(r.f) << ',' << fmt17(r.gap_gen) << ',';
    if (r.gap_vanilla) out << fmt17(*r.gap_vanilla);
    out << ',' << fmt17(r.delta) << ',' << fmt17(r.eta) << ',' << r.elapsed_ns << ','
        << fmt17(r.structure) << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty trace file");
  std::vector<TraceRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 8) parse_fail(path, lineno, "expected 8 CSV fields");
    TraceRecord r;
    try {
      r.k = std::stol(fields[0]);
      r.f = std::stod(fields[1]);
      r.gap_gen = std::stod(fields[2]);
      if (!fields[3].empty()) r.gap_vanilla = std::stod(fields[3]);
      r.delta = std::stod(fields[4]);
      r.eta = std::stod(fields[5]);
      r.elapsed_ns = std::stoll(fields[6]);
      r.structure = std::stod(fields[7]);
    } catch (const std::exception&) {
      parse_fail(path, lineno, "malformed numeric field");
    }
    out.push_back(r);
  }
  return out;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  RunConfig cfg;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip_comment(raw);
    if (blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(path, lineno, "expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    try {
      cfg.apply_override(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& ex) {
      parse_fail(path, lineno, ex.what());
    }
  }
  return cfg;
}

void RunConfig::apply_override(const std::string& key, const std::string& value) {
  auto as_bool = [&]() {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("boolean expected for " + key);
  };
  if (key == "problem") problem = value;
  else if (key == "dataset") dataset = value;
  else if (key == "constraint") constraint = value;
  else if (key == "radius") radius = std::stod(value);
  else if (key == "n" || key == "nsupport") nsupport = std::stoi(value);
  else if (key == "algorithm") algorithm = value;
  else if (key == "policy") policy = value;
  else if (key == "delta") delta = std::stod(value);
  else if (key == "c") c = std::stod(value);
  else if (key == "k0") k0 = std::stod(value);
  else if (key == "grid_size") grid_size = std::stoi(value);
  else if (key == "max_iter") max_iter = std::stol(value);
  else if (key == "epsilon") epsilon = std::stod(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "trace") trace_path = value;
  else if (key == "emit_vanilla_gap") emit_vanilla_gap = as_bool();
  else if (key == "dim") dim = std::stoi(value);
  else if (key == "num_samples") num_samples = std::stoi(value);
  else if (key == "density") density = std::stod(value);
  else if (key == "mat_rows") mat_rows = std::stoi(value);
  else if (key == "mat_cols") mat_cols = std::stoi(value);
  else if (key == "mat_rank") mat_rank = std::stoi(value);
  else if (key == "observed_fraction") observed_fraction = std::stod(value);
  else if (key == "target_norm") target_norm = std::stod(value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("config: " + what);
  };
  require(problem == "quadratic" || problem == "logistic" || problem == "matcomp",
          "problem must be quadratic|logistic|matcomp");
  require(constraint == "l2" || constraint == "l1" || constraint == "nsupport" ||
              constraint == "nuclear",
          "constraint must be l2|l1|nsupport|nuclear");
  require(algorithm == "fw" || algorithm == "hfw" || algorithm == "restart",
          "algorithm must be fw|hfw|restart");
  require(radius > 0.0, "radius must be positive");
  require(max_iter >= 0, "max_iter must be >= 0");
  require(nsupport >= 1, "n must be >= 1");
  require(grid_size >= 2, "grid_size must be >= 2");
  require(dim >= 1 && num_samples >= 1 && mat_rows >= 1 && mat_cols >= 1,
          "instance shape parameters must be positive");
  if (!dataset.empty()) {
    std::ifstream probe(dataset);
    require(static_cast<bool>(probe), "dataset file not readable: " + dataset);
  }
}

}  // namespace fw
