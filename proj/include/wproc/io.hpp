#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/oracle.hpp"
#include "wproc/schatten.hpp"
#include "wproc/shorted.hpp"
#include "wproc/solver.hpp"
#include "wproc/types.hpp"

namespace wproc {

// Insertion-ordered JSON so emitted reports are byte-stable across runs.
using Json = nlohmann::ordered_json;

namespace detail {

inline double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ParseError(where + ": expected a number, got " + std::string(j.type_name()));
  }
  return j.get<double>();
}

}  // namespace detail

/// Matrix to the canonical schema: {"rows": r, "cols": c, "data": [rows]},
/// each entry a real number or a two-element [re, im] array.  Purely real
/// entries are written as plain numbers so real matrices stay human-readable.
inline Json matrix_to_json(const DenseMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      const Complex z = m(i, k);
      if (z.imag() == 0.0) {
        row.push_back(z.real());
      } else {
        row.push_back(Json::array({z.real(), z.imag()}));
      }
    }
    data.push_back(std::move(row));
  }
  j["data"] = std::move(data);
  return j;
}

/// Parse the canonical matrix schema; `where` (usually the file name) prefixes
/// every complaint.
inline DenseMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw ParseError(where + ": expected an object with rows, cols and data");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw ParseError(where + ": rows and cols must be integers");
  }
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 0 || cols < 0) {
    throw ParseError(where + ": rows and cols must be nonnegative");
  }
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows) {
    throw ParseError(where + ": data must be an array of " + std::to_string(rows) + " rows");
  }
  DenseMatrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const Json& row = data[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long long>(row.size()) != cols) {
      throw ParseError(where + ": row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    }
    for (long long k = 0; k < cols; ++k) {
      const Json& entry = row[static_cast<std::size_t>(k)];
      const std::string at =
          where + ": entry (" + std::to_string(i) + "," + std::to_string(k) + ")";
      if (entry.is_number()) {
        m(i, k) = Complex(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2) {
        m(i, k) = Complex(detail::number_at(entry[0], at), detail::number_at(entry[1], at));
      } else {
        throw ParseError(at + ": expected a number or a two-element [re, im] array");
      }
    }
  }
  if (!is_finite(m)) throw ParseError(where + ": non-finite entries");
  return m;
}

/// CSV with real entries only: comma-separated, one row per line.
inline DenseMatrix read_matrix_csv(std::istream& in, const std::string& where) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const std::string at = where + ": line " + std::to_string(rows.size() + 1);
      try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) {
          ++used;
        }
        if (used != field.size()) throw ParseError(at + ": trailing characters in '" + field + "'");
        row.push_back(v);
      } catch (const std::invalid_argument&) {
        throw ParseError(at + ": '" + field + "' is not a number");
      } catch (const std::out_of_range&) {
        throw ParseError(at + ": '" + field + "' overflows");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ParseError(where + ": line " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(cols));
    }
  }
  DenseMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  return m;
}

/// Load a matrix from disk: .csv files as real CSV, everything else as the
/// JSON schema.  Errors name the file.
inline DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) return read_matrix_csv(in, path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return matrix_from_json(j, path);
}

/// Serialize with two-space indentation and a trailing newline; the doubles
/// round-trip exactly (shortest-representation printing), which is what makes
/// regeneration byte-identical.
inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw Error(path + ": write failed");
}

inline Json tolerances_to_json(const ToleranceProfile& tol) {
  Json j;
  j["rank_rtol"] = tol.rank_rtol;
  j["herm_tol"] = tol.herm_tol;
  j["psd_tol"] = tol.psd_tol;
  j["residual_tol"] = tol.residual_tol;
  return j;
}

inline Json schatten_order_to_json(const SchattenOrder& p) {
  if (p.is_infinity()) return Json("inf");
  return Json(p.value());
}

/// Parse "inf" or a JSON number / numeric string as a SchattenOrder.
inline SchattenOrder schatten_order_from_string(const std::string& text) {
  if (text == "inf") return SchattenOrder::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return SchattenOrder(v);
  } catch (const std::invalid_argument&) {
    throw ParseError("p: '" + text + "' is not a number or 'inf'");
  } catch (const std::out_of_range&) {
    throw ParseError("p: '" + text + "' overflows");
  }
}

/// Solve report consumed by `wproc solve --out`; self-describing via the
/// tolerance profile.
inline Json solution_report(const ProcrustesProblem& prob, const ProcrustesSolution& sol) {
  Json j;
  j["x0"] = matrix_to_json(sol.x0);
  j["min_value"] = sol.min_value;
  j["shorted"] = matrix_to_json(sol.shorted.matrix());
  j["infimum_operator"] = matrix_to_json(sol.infimum_operator.matrix());
  j["normal_residual"] = sol.normal_residual;
  j["condition_holds"] = sol.condition_holds;
  j["condition_routes_agree"] = sol.condition_routes_agree;
  j["manifold_nullspace_dim"] = sol.manifold_nullspace.dim();
  j["p"] = schatten_order_to_json(prob.p);
  j["tolerances"] = tolerances_to_json(sol.tol);
  return j;
}

inline Json shorted_report(const ShortedPair& pair, const ShortedRangeReport& ranges,
                           const ToleranceProfile& tol) {
  Json j;
  j["shorted"] = matrix_to_json(pair.shorted.matrix());
  j["compression"] = matrix_to_json(pair.compression.matrix());
  j["range_equality"] = ranges.range_equality;
  j["nullspace_equality"] = ranges.nullspace_equality;
  j["tolerances"] = tolerances_to_json(tol);
  return j;
}

/// InstanceSpec from a generator spec file.  Required: n, k, m, seed.
/// Optional: rank_a (default min(n,k)), rank_w (default n), p (default 2,
/// number or "inf").  Unknown keys are rejected so typos surface.
inline InstanceSpec instance_spec_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": spec must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "n" && key != "k" && key != "m" && key != "rank_a" && key != "rank_w" &&
        key != "p" && key != "seed") {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  const auto require_int = [&](const char* key) -> long long {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw ParseError(where + ": missing or non-integer '" + std::string(key) + "'");
    }
    return j[key].get<long long>();
  };
  InstanceSpec spec;
  spec.n = require_int("n");
  spec.k = require_int("k");
  spec.m = require_int("m");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ParseError(where + ": seed must be an integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  } else {
    throw ParseError(where + ": missing 'seed'");
  }
  spec.rank_a = j.contains("rank_a") ? require_int("rank_a") : std::min(spec.n, spec.k);
  spec.rank_w = j.contains("rank_w") ? require_int("rank_w") : spec.n;
  if (j.contains("p")) {
    const Json& p = j["p"];
    if (p.is_string()) {
      spec.p = schatten_order_from_string(p.get<std::string>());
    } else if (p.is_number()) {
      spec.p = SchattenOrder(p.get<double>());
    } else {
      throw ParseError(where + ": p must be a number or 'inf'");
    }
  }
  if (!spec.valid()) {
    throw ParseError(where + ": ranks out of bounds (need rank_a <= min(n,k), rank_w <= n)");
  }
  return spec;
}

}  // namespace wproc
