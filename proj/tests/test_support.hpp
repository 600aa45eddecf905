#pragma once

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "binaryne/codes.hpp"
#include "binaryne/graph.hpp"
#include "binaryne/rng.hpp"

namespace testsupport {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = fs::temp_directory_path() / "binaryne-test-XXXXXX";
    std::string tmpl = base.string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Erdos-Renyi-ish graph over n nodes with roughly m undirected edges,
// built directly (no file round trip). External ids are decimal strings.
inline binaryne::Graph random_graph(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
  binaryne::Rng rng(seed);
  std::vector<std::pair<binaryne::NodeId, binaryne::NodeId>> edges;
  edges.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    edges.emplace_back(rng.below(n), rng.below(n));
  }
  std::vector<std::string> ids(n);
  for (std::uint32_t v = 0; v < n; ++v) ids[v] = std::to_string(v);
  return binaryne::Graph::build(std::move(edges), std::move(ids));
}

inline binaryne::CodeMatrix random_codes(std::uint32_t n, std::uint32_t dim,
                                         std::uint64_t seed) {
  binaryne::CodeMatrix codes(n, dim);
  binaryne::Rng rng(seed);
  for (binaryne::NodeId v = 0; v < n; ++v) {
    for (std::uint32_t r = 0; r < dim; ++r) {
      if (rng.next() & 1) codes.set_bit(v, r, true);
    }
  }
  return codes;
}

// Upper chi-square quantile via the Wilson-Hilferty approximation; good to a
// few percent, plenty for goodness-of-fit gates in tests.
inline double chi2_quantile(double df, double z_upper) {
  const double a = 2.0 / (9.0 * df);
  const double base = 1.0 - a + z_upper * std::sqrt(a);
  return df * base * base * base;
}

constexpr double kZ999 = 3.0902;  // standard normal upper 0.001 quantile

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI binary named by BINARYNE_CLI with stdout/stderr captured.
inline CliResult run_cli(const std::string& args) {
  const char* cli = std::getenv("BINARYNE_CLI");
  if (!cli) throw std::runtime_error("BINARYNE_CLI is not set");
  TempDir dir;
  const fs::path out_path = dir.file("out");
  const fs::path err_path = dir.file("err");
  const std::string cmd = std::string(cli) + " " + args + " >" + out_path.string() + " 2>" +
                          err_path.string();
  const int rc = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

}  // namespace testsupport
