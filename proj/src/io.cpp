#include "rsreg/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace rsreg {

namespace {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_double(const std::string& token, std::size_t line,
                    std::size_t column) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "line " << line << ", column " << column
            << ": cannot parse number '" << token << "'";
        throw ParseError(msg.str());
    }
    while (consumed < token.size() &&
           std::isspace(static_cast<unsigned char>(token[consumed])))
        ++consumed;
    if (consumed != token.size()) {
        std::ostringstream msg;
        msg << "line " << line << ", column " << column
            << ": trailing characters in '" << token << "'";
        throw ParseError(msg.str());
    }
    return value;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

bool has_matrix_market_banner(const std::string& path) {
    std::ifstream in(path);
    std::string first;
    if (!in || !std::getline(in, first)) return false;
    return first.rfind("%%MatrixMarket", 0) == 0;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string token;
        std::size_t column = 0;
        while (std::getline(ss, token, ',')) {
            ++column;
            row.push_back(parse_double(token, lineno, column));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream msg;
            msg << "line " << lineno << ": expected " << rows.front().size()
                << " columns, got " << row.size();
            throw ParseError(msg.str());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("'" + path + "' contains no data");
    Matrix m(static_cast<Index>(rows.size()),
             static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_csv_matrix(const Matrix& m, const std::string& path) {
    auto out = open_for_write(path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Vector read_csv_vector(const std::string& path) {
    const Matrix m = read_csv_matrix(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw ParseError("'" + path + "' is not a vector (got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ")");
}

void write_csv_vector(const Vector& v, const std::string& path) {
    write_csv_matrix(v, path);
}

Matrix read_matrix_market(const std::string& path) {
    auto in = open_for_read(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
        throw ParseError("'" + path + "' is empty");
    ++lineno;
    {
        std::stringstream ss(line);
        std::string banner, object, fmt, field, symmetry;
        ss >> banner >> object >> fmt >> field >> symmetry;
        std::transform(fmt.begin(), fmt.end(), fmt.begin(), ::tolower);
        std::transform(field.begin(), field.end(), field.begin(), ::tolower);
        std::transform(symmetry.begin(), symmetry.end(), symmetry.begin(),
                       ::tolower);
        if (banner != "%%MatrixMarket" || object != "matrix" ||
            fmt != "coordinate" || field != "real" || symmetry != "general")
            throw ParseError(
                "line 1: expected '%%MatrixMarket matrix coordinate real "
                "general'");
    }
    // skip comments
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] != '%') break;
    }
    Index n = 0, d = 0;
    std::size_t nnz = 0;
    {
        std::stringstream ss(line);
        if (!(ss >> n >> d >> nnz) || n < 1 || d < 1)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'rows cols nnz'");
    }
    Matrix m = Matrix::Zero(n, d);
    for (std::size_t k = 0; k < nnz; ++k) {
        if (!std::getline(in, line))
            throw ParseError("unexpected end of file: expected " +
                             std::to_string(nnz) + " entries");
        ++lineno;
        std::stringstream ss(line);
        Index i = 0, j = 0;
        std::string token;
        if (!(ss >> i >> j >> token))
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'i j value'");
        if (i < 1 || i > n || j < 1 || j > d)
            throw ParseError("line " + std::to_string(lineno) +
                             ": index out of range");
        m(i - 1, j - 1) = parse_double(token, lineno, 3);
    }
    return m;
}

void write_matrix_market(const Matrix& m, const std::string& path) {
    auto out = open_for_write(path);
    std::size_t nnz = 0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0)
                out << (i + 1) << ' ' << (j + 1) << ' '
                    << format_double(m(i, j)) << '\n';
}

ProblemInstance ingest(FunctionKind kind, const std::string& matrix_path,
                       const std::string& target_path,
                       const std::optional<std::string>& weights_path) {
    ProblemInstance instance;
    instance.kind = kind;
    const bool is_mm = has_matrix_market_banner(matrix_path) ||
                       (matrix_path.size() > 4 &&
                        matrix_path.substr(matrix_path.size() - 4) == ".mtx");
    instance.A = is_mm ? read_matrix_market(matrix_path)
                       : read_csv_matrix(matrix_path);
    instance.b = read_csv_vector(target_path);
    if (instance.b.size() != instance.A.rows())
        throw DimensionMismatch(
            "target has length " + std::to_string(instance.b.size()) +
            " but the matrix has " + std::to_string(instance.A.rows()) +
            " rows");
    if (weights_path) {
        instance.w = read_csv_vector(*weights_path);
        if (instance.w.size() != instance.A.rows())
            throw DimensionMismatch(
                "weights have length " + std::to_string(instance.w.size()) +
                " but the matrix has " + std::to_string(instance.A.rows()) +
                " rows");
    } else {
        instance.w = Vector::Ones(instance.A.rows());
    }
    instance.validate();
    return instance;
}

std::string trace_to_json(const ConvergenceTrace& trace,
                          const RunConfig& config) {
    nlohmann::ordered_json doc;
    doc["config"] = {
        {"function", config.function},
        {"mode", config.mode},
        {"eps", config.eps},
        {"delta", config.delta},
        {"eps1", config.eps1},
        {"max_iters", config.max_iters},
        {"seed", config.seed},
        {"radius", config.radius},
        {"n", config.n},
        {"d", config.d},
        {"weight_policy", config.weight_policy},
        {"matrix", config.matrix_path},
        {"target", config.target_path},
        {"weights", config.weights_path},
        {"synthesized", config.synthesized},
        {"timing", config.timing},
    };
    doc["status"] = to_string(trace.status);
    nlohmann::ordered_json iterations = nlohmann::ordered_json::array();
    for (const auto& record : trace.iterations) {
        nlohmann::ordered_json row;
        row["iter"] = record.iter;
        row["loss"] = record.loss;
        row["grad_norm"] = record.grad_norm;
        row["step_norm"] = record.step_norm;
        if (record.dist_to_ref)
            row["dist_to_ref"] = *record.dist_to_ref;
        else
            row["dist_to_ref"] = nullptr;
        row["sketch_nnz"] = record.sketch_nnz;
        row["wall_ms"] = record.wall_ms;
        iterations.push_back(std::move(row));
    }
    doc["iterations"] = std::move(iterations);
    doc["solution"] = std::vector<double>(
        trace.final_x.data(), trace.final_x.data() + trace.final_x.size());
    return doc.dump(2) + "\n";
}

void write_trace(const ConvergenceTrace& trace, const RunConfig& config,
                 const std::string& path) {
    auto out = open_for_write(path);
    out << trace_to_json(trace, config);
}

}  // namespace rsreg
