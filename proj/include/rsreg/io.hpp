#pragma once

#include <optional>
#include <string>

#include "rsreg/model.hpp"
#include "rsreg/solver.hpp"

namespace rsreg {

// Dense CSV: UTF-8, LF, no header, one row per line, comma separated.
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const Matrix& m, const std::string& path);

// Vectors are a single CSV column (a single row is also accepted on read).
Vector read_csv_vector(const std::string& path);
void write_csv_vector(const Vector& v, const std::string& path);

// Matrix Market coordinate format, real general, 1-based indices.
Matrix read_matrix_market(const std::string& path);
void write_matrix_market(const Matrix& m, const std::string& path);

// Reads A from CSV or Matrix Market (sniffed via the %%MatrixMarket banner /
// .mtx extension), b and optional w from CSV, and cross-checks dimensions.
// Without a weights file w defaults to all ones.
ProblemInstance ingest(FunctionKind kind, const std::string& matrix_path,
                       const std::string& target_path,
                       const std::optional<std::string>& weights_path);

// Config echo embedded at the top of every trace document.
struct RunConfig {
    std::string function = "exp";
    std::string mode = "exact";
    double eps = 1e-8;
    double delta = 0.05;
    double eps1 = 0.05;
    int max_iters = 50;
    std::uint64_t seed = 0;
    double radius = 1.0;
    Index n = 0;
    Index d = 0;
    std::string weight_policy = "explicit";
    std::string matrix_path;
    std::string target_path;
    std::string weights_path;
    bool synthesized = false;
    bool timing = true;
};

// Serializes config echo, per-iteration array (iter, loss, grad_norm,
// step_norm, dist_to_ref, sketch_nnz, wall_ms), terminal status, and the
// final iterate. Numbers use shortest round-trip decimals; key order is
// fixed, so identical runs produce identical bytes.
std::string trace_to_json(const ConvergenceTrace& trace,
                          const RunConfig& config);
void write_trace(const ConvergenceTrace& trace, const RunConfig& config,
                 const std::string& path);

}  // namespace rsreg
