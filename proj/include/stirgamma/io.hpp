#pragma once

// CSV and edge-list ingestion/serialization used by the command-line tool
// and the experiment pipelines.  All numeric output is written with
// round-trip decimal precision.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirgamma/sbm.hpp"

namespace stirgamma {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

/// Headerless CSV of real numbers; every row must have the same width.
inline std::vector<std::vector<double>> read_matrix_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& tok : split_csv_line(line)) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(lineno) + ": not a number: " + tok);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": empty matrix");
  return rows;
}

/// Adjacency input: dense 0/1 CSV, or an "i,j" edge list (1-indexed) when
/// rows have exactly two entries and the matrix interpretation fails.
/// Asymmetric dense input is symmetrized by OR with a warning on stderr.
inline BinaryMatrix read_adjacency(const std::string& path, long expected_n = 0) {
  const std::vector<std::vector<double>> raw = read_matrix_csv(path);
  const bool square = raw.size() == raw.front().size() &&
                      (expected_n == 0 || static_cast<long>(raw.size()) == expected_n);
  if (square && raw.front().size() != 2) {
    const long n = static_cast<long>(raw.size());
    BinaryMatrix adj(static_cast<std::size_t>(n),
                     std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
    bool asymmetric = false;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        const double v = raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v != 0.0 && v != 1.0)
          throw IoError(path + ": adjacency entries must be 0 or 1");
        if (i == j) continue;
        if (v != raw[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
          asymmetric = true;
        if (v == 1.0) {
          adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
          adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
        }
      }
    if (asymmetric)
      std::cerr << "warning: " << path << " is asymmetric; symmetrized by union\n";
    return adj;
  }
  // edge list: i,j pairs, 1-indexed
  if (expected_n <= 0)
    throw IoError(path + ": edge-list input needs the node count (--n)");
  BinaryMatrix adj(static_cast<std::size_t>(expected_n),
                   std::vector<std::uint8_t>(static_cast<std::size_t>(expected_n), 0));
  for (const auto& row : raw) {
    if (row.size() != 2) throw IoError(path + ": edge list rows must be i,j");
    const long i = static_cast<long>(row[0]), j = static_cast<long>(row[1]);
    if (i < 1 || j < 1 || i > expected_n || j > expected_n)
      throw IoError(path + ": edge endpoint out of range");
    if (i == j) continue;
    adj[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = 1;
    adj[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = 1;
  }
  return adj;
}

inline void write_pmf_csv(const std::string& path, const ClusterCountPmf& pmf) {
  std::ofstream out = open_output(path);
  out << "k,probability\n";
  for (std::size_t k = 0; k < pmf.probabilities.size(); ++k)
    out << (k + 1) << ',' << pmf.probabilities[k] << '\n';
}

template <class Matrix>
void write_dense_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_output(path);
  for (long i = 0; i < static_cast<long>(m.rows()); ++i) {
    for (long j = 0; j < static_cast<long>(m.cols()); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

inline void write_flat_matrix_csv(const std::string& path,
                                  const std::vector<double>& values, long n) {
  std::ofstream out = open_output(path);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (j) out << ',';
      out << values[static_cast<std::size_t>(i * n + j)];
    }
    out << '\n';
  }
}

}  // namespace io
}  // namespace stirgamma
