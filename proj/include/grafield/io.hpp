#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grafield/density_field.hpp"
#include "grafield/diagnostics.hpp"
#include "grafield/graph.hpp"
#include "grafield/graphon.hpp"

namespace grafield {

//! Input that could not be parsed; the message carries the line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// All reals are emitted with 17 significant digits, '.' decimal point, no
// locale dependence; this round-trips every finite double exactly.
inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline double parse_real(std::string_view tok, int line_no, const char* what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line_no) + ": invalid " + what + " '" +
                     std::string(tok) + "'");
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) toks.push_back(line.substr(start, i - start));
  }
  return toks;
}

}  // namespace detail

//! Edge-list reader. Lines are "src dst" or "src dst weight"; '#' begins a
//! comment line; node IDs are arbitrary tokens assigned indices in first
//! appearance order; repeated edges accumulate weight. For undirected
//! input each line contributes to both (x,y) and (y,x); a self-loop line
//! contributes once.
inline Graph parse_edge_list(std::string_view text, bool directed) {
  std::unordered_map<std::string, int> index;
  std::vector<std::string> labels;
  struct Entry {
    int x, y;
    double w;
  };
  std::vector<Entry> entries;

  auto node_of = [&](std::string_view tok) {
    auto [it, inserted] = index.try_emplace(std::string(tok), static_cast<int>(labels.size()));
    if (inserted) labels.emplace_back(tok);
    return it->second;
  };

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks.size() != 2 && toks.size() != 3)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'src dst' or 'src dst weight'");
    double w = 1.0;
    if (toks.size() == 3) {
      w = detail::parse_real(toks[2], line_no, "weight");
      if (w < 0.0)
        throw ParseError("line " + std::to_string(line_no) + ": negative weight");
    }
    const int x = node_of(toks[0]);
    const int y = node_of(toks[1]);
    entries.push_back({x, y, w});
  }
  if (entries.empty()) throw ParseError("empty graph");

  const int n = static_cast<int>(labels.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : entries) {
    a(e.x, e.y) += e.w;
    if (!directed && e.x != e.y) a(e.y, e.x) += e.w;
  }
  return Graph(std::move(a), directed, std::move(labels));
}

//! Adjacency reader: n rows of n comma-separated nonnegative reals.
inline Graph parse_adjacency_csv(std::string_view text, bool directed) {
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t') blank = false;
    if (blank) continue;
    std::vector<double> row;
    size_t i = 0;
    while (true) {
      size_t comma = line.find(',', i);
      std::string_view cell = line.substr(i, comma == std::string_view::npos ? line.size() - i
                                                                             : comma - i);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      row.push_back(detail::parse_real(cell, line_no, "adjacency entry"));
      if (comma == std::string_view::npos) break;
      i = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty graph");
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd a(n, n);
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(rows[x].size()) != n)
      throw ParseError("adjacency row " + std::to_string(x + 1) + ": expected " +
                       std::to_string(n) + " columns, got " + std::to_string(rows[x].size()));
    for (int y = 0; y < n; ++y) a(x, y) = rows[x][y];
  }
  return Graph(std::move(a), directed);
}

//! Edge-list writer, inverse of parse_edge_list up to node ordering.
//! Undirected graphs emit each unordered pair once (x <= y).
inline std::string write_edge_list(const Graph& g) {
  std::string out;
  const int n = g.n();
  auto label = [&](int x) {
    return g.node_labels().empty() ? std::to_string(x + 1) : g.node_labels()[x];
  };
  for (int x = 0; x < n; ++x)
    for (int y = g.directed() ? 0 : x; y < n; ++y) {
      const double w = g.weights()(x, y);
      if (w == 0.0) continue;
      out += label(x);
      out += ' ';
      out += label(y);
      if (w != 1.0) {
        out += ' ';
        out += detail::fmt_real(w);
      }
      out += '\n';
    }
  return out;
}

// ---------------------------------------------------------------------------
// artifact emission

inline std::string graph_metadata_json(const Graph& g) {
  std::ostringstream os;
  os << "{\"n\": " << g.n() << ", \"directed\": " << (g.directed() ? "true" : "false")
     << ", \"total_weight\": " << detail::fmt_real(g.total_weight()) << ", \"labels\": [";
  for (size_t i = 0; i < g.node_labels().size(); ++i) {
    if (i) os << ", ";
    os << '"' << detail::json_escape(g.node_labels()[i]) << '"';
  }
  os << "]}\n";
  return os.str();
}

inline std::string basis_json(const LPBasis& b) {
  std::ostringstream os;
  os << "{\"m\": " << b.m << ", \"support\": [";
  for (size_t i = 0; i < b.marginal.support.size(); ++i) {
    if (i) os << ", ";
    os << b.marginal.support[i];
  }
  os << "], \"values\": [";
  for (Eigen::Index j = 0; j < b.values.rows(); ++j)
    for (Eigen::Index x = 0; x < b.values.cols(); ++x) {
      if (j || x) os << ", ";
      os << detail::fmt_real(b.values(j, x));
    }
  os << "], \"breakpoints\": [";
  for (Eigen::Index i = 0; i < b.breakpoints.size(); ++i) {
    if (i) os << ", ";
    os << detail::fmt_real(b.breakpoints[i]);
  }
  os << "]}";
  return os.str();
}

inline std::string selection_json(const Selection& sel) {
  std::ostringstream os;
  os << "{\"k_star\": " << sel.k_star << ", \"chosen\": [";
  for (size_t i = 0; i < sel.chosen.size(); ++i) {
    if (i) os << ", ";
    os << '[' << sel.chosen[i].first << ", " << sel.chosen[i].second << ']';
  }
  os << "], \"criterion_trace\": [";
  for (size_t i = 0; i < sel.criterion_trace.size(); ++i) {
    if (i) os << ", ";
    os << detail::fmt_real(sel.criterion_trace[i]);
  }
  os << "]}\n";
  return os.str();
}

inline std::string test_result_json(const TestResult& r) {
  std::ostringstream os;
  os << "{\"statistic\": " << detail::fmt_real(r.statistic) << ", \"df\": " << r.df
     << ", \"p_value\": " << detail::fmt_real(r.p_value)
     << ", \"reject_at_5pct\": " << (r.reject_at_5pct ? "true" : "false")
     << ", \"post_selection\": " << (r.post_selection ? "true" : "false") << "}\n";
  return os.str();
}

inline std::string grid_json(const Grid& g) {
  std::ostringstream os;
  os << "{\"resolution\": " << g.resolution
     << ", \"clip\": " << (g.clipped ? "true" : "false") << ", \"values\": [";
  for (Eigen::Index i = 0; i < g.values.rows(); ++i)
    for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
      if (i || j) os << ", ";
      os << detail::fmt_real(g.values(i, j));
    }
  os << "]}\n";
  return os.str();
}

inline std::string coefficients_json(const LPMatrix& lp) {
  std::ostringstream os;
  os << "{\"total_weight\": " << detail::fmt_real(lp.total_weight)
     << ", \"basis_x\": {\"m\": " << lp.basis_x.m << ", \"n\": " << lp.basis_x.marginal.n()
     << "}, \"basis_y\": {\"m\": " << lp.basis_y.m << ", \"n\": " << lp.basis_y.marginal.n()
     << "}, \"coeffs\": [";
  for (Eigen::Index j = 0; j < lp.coeffs.rows(); ++j)
    for (Eigen::Index k = 0; k < lp.coeffs.cols(); ++k) {
      if (j || k) os << ", ";
      os << detail::fmt_real(lp.coeffs(j, k));
    }
  os << "]}\n";
  return os.str();
}

inline std::string coefficients_csv(const LPMatrix& lp) {
  std::string out = "j,k,lp\n";
  for (Eigen::Index j = 0; j < lp.coeffs.rows(); ++j)
    for (Eigen::Index k = 0; k < lp.coeffs.cols(); ++k) {
      out += std::to_string(j + 1);
      out += ',';
      out += std::to_string(k + 1);
      out += ',';
      out += detail::fmt_real(lp.coeffs(j, k));
      out += '\n';
    }
  return out;
}

inline std::string grid_csv(const Grid& g) {
  std::string out = "u,v,value\n";
  for (int i = 0; i < g.resolution; ++i) {
    const double u = (i + 0.5) / g.resolution;
    for (int j = 0; j < g.resolution; ++j) {
      const double v = (j + 0.5) / g.resolution;
      out += detail::fmt_real(u);
      out += ',';
      out += detail::fmt_real(v);
      out += ',';
      out += detail::fmt_real(g.values(i, j));
      out += '\n';
    }
  }
  return out;
}

inline std::string correlogram_csv(const Correlogram& c) {
  std::string out = "j,k,lp,standardized,outside_band\n";
  for (const auto& e : c.entries) {
    out += std::to_string(e.j);
    out += ',';
    out += std::to_string(e.k);
    out += ',';
    out += detail::fmt_real(e.lp);
    out += ',';
    out += detail::fmt_real(e.standardized);
    out += ',';
    out += e.outside_band ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string graphon_metadata_json(const GraphonEstimate& w) {
  std::ostringstream os;
  os << "{\"scale_convention\": \""
     << (w.scaled_by_total_weight ? "total_weight" : "raw_density")
     << "\", \"marginal_mode\": \""
     << (w.marginal_mode == MarginalMode::smoothed ? "smoothed" : "empirical")
     << "\", \"clipped_cells\": " << w.clipped_cells
     << ", \"over_one_cells\": " << w.over_one_cells << "}\n";
  return os.str();
}

//! Write a whole file through a temporary sibling and rename, so readers
//! never observe a partial artifact.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace grafield
