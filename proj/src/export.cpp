#include "coword/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coword {
namespace fs = std::filesystem;

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& what) {
  throw DataError("line " + std::to_string(lineno) + ": " + what);
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Cursor over one Pajek line: whitespace-separated words and quoted labels.
class LineReader {
 public:
  LineReader(std::string_view line, std::size_t lineno)
      : line_(line), lineno_(lineno) {}

  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }

  std::string word() {
    skip_space();
    const auto start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
    if (start == pos_) parse_fail(lineno_, "unexpected end of line");
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string quoted() {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != '"')
      parse_fail(lineno_, "expected a quoted label");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= line_.size()) parse_fail(lineno_, "unterminated label");
      const char c = line_[pos_++];
      if (c == '"') {
        if (pos_ < line_.size() && line_[pos_] == '"') {
          out.push_back('"');
          ++pos_;
        } else {
          break;
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  long long integer(const char* what) {
    const std::string w = word();
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size())
      parse_fail(lineno_, std::string("invalid ") + what + " '" + w + "'");
    return v;
  }

  double real(const char* what) {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size() || !std::isfinite(v))
      parse_fail(lineno_, std::string("invalid ") + what + " '" + w + "'");
    return v;
  }

  bool next_is_number() {
    skip_space();
    if (pos_ >= line_.size()) return false;
    const char c = line_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
           c == '.';
  }

 private:
  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  std::string_view line_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

// Parses `*Vertices N` and returns N, failing with the line number otherwise.
long long parse_vertices_header(const std::string& line, std::size_t lineno) {
  LineReader r(line, lineno);
  if (r.at_end() || lower(r.word()) != "*vertices")
    parse_fail(lineno, "expected '*Vertices N'");
  const long long n = r.integer("vertex count");
  if (n < 0) parse_fail(lineno, "negative vertex count");
  return n;
}

// Pajek colour names for groups past the factor palette. Group g is written
// as the g-th name of palette + this list, wrapping after the end.
constexpr std::array<std::string_view, 48> kExtraPajekColours = {
    "GreenYellow", "Goldenrod",   "Dandelion",      "Apricot",     "Peach",
    "Melon",       "YellowOrange", "BurntOrange",   "Bittersweet", "RedOrange",
    "Mahogany",    "Maroon",      "BrickRed",       "OrangeRed",   "RubineRed",
    "WildStrawberry", "CarnationPink", "VioletRed", "Rhodamine",   "Mulberry",
    "RedViolet",   "Fuchsia",     "Lavender",       "Thistle",     "Orchid",
    "DarkOrchid",  "Plum",        "Violet",         "RoyalPurple", "BlueViolet",
    "Periwinkle",  "CadetBlue",   "CornflowerBlue", "MidnightBlue", "NavyBlue",
    "RoyalBlue",   "Cerulean",    "ProcessBlue",    "SkyBlue",     "Turquoise",
    "TealBlue",    "Aquamarine",  "BlueGreen",      "Emerald",     "JungleGreen",
    "SeaGreen",    "PineGreen",   "LimeGreen"};

constexpr std::size_t kPajekColourCount = 12 + kExtraPajekColours.size();

std::string_view pajek_colour(std::size_t group) {
  const std::size_t i = group % kPajekColourCount;
  if (i < factor_palette().size()) return factor_palette()[i].pajek;
  return kExtraPajekColours[i - factor_palette().size()];
}

std::optional<int> palette_index(std::string_view name) {
  const auto& pal = factor_palette();
  for (std::size_t i = 0; i < pal.size(); ++i)
    if (pal[i].pajek == name) return static_cast<int>(i);
  for (std::size_t i = 0; i < kExtraPajekColours.size(); ++i)
    if (kExtraPajekColours[i] == name) return static_cast<int>(pal.size() + i);
  return std::nullopt;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

double parse_double_cell(const std::string& s, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw DataError("csv row " + std::to_string(row) + ": invalid number '" + s + "'");
  return v;
}

}  // namespace

const std::array<PaletteColor, 12>& factor_palette() {
  static const std::array<PaletteColor, 12> palette = {{
      {"Red", "#e41a1c"},
      {"Blue", "#377eb8"},
      {"ForestGreen", "#228b22"},
      {"Orange", "#ff7f00"},
      {"Purple", "#984ea3"},
      {"Cyan", "#00bcd4"},
      {"Magenta", "#e7298a"},
      {"Brown", "#a65628"},
      {"Yellow", "#ffd92f"},
      {"Gray", "#999999"},
      {"OliveGreen", "#6b8e23"},
      {"Salmon", "#fa8072"},
  }};
  return palette;
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string pajek_quote(std::string_view label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_pajek_net(const Graph& g, const Layout* layout) {
  if (layout && layout->positions.size() != g.node_count())
    throw DataError("layout does not cover every node");
  std::string out = "*Vertices " + std::to_string(g.node_count()) + "\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& node = g.nodes()[i];
    const Point p = layout ? layout->positions[i] : Point{0.5, 0.5};
    out += std::to_string(i + 1) + " " + pajek_quote(node.label) + " " +
           fixed4(p.x) + " " + fixed4(p.y) + " 0.5000";
    if (node.group) {
      out += " ic ";
      out += pajek_colour(static_cast<std::size_t>(*node.group));
    }
    out += "\n";
  }
  out += "*Edges\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.a + 1) + " " + std::to_string(e.b + 1) + " " +
           fixed4(e.weight);
    if (e.style == EdgeStyle::Dotted) out += " p Dots";
    out += "\n";
  }
  return out;
}

void write_pajek_net(const Graph& g, const Layout* layout, const fs::path& path) {
  write_text_file(path, format_pajek_net(g, layout));
}

PajekNetwork parse_pajek_net(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  auto skip_blank = [&] {
    while (i < lines.size() && (is_blank(lines[i]) || lines[i][0] == '%')) ++i;
  };
  skip_blank();
  if (i >= lines.size()) parse_fail(1, "expected '*Vertices N'");
  const long long n = parse_vertices_header(lines[i], i + 1);
  ++i;

  PajekNetwork net;
  std::vector<std::optional<Node>> nodes(static_cast<std::size_t>(n));
  net.coordinates.assign(static_cast<std::size_t>(n), Point{0.5, 0.5});
  for (; i < lines.size(); ++i) {
    if (is_blank(lines[i]) || lines[i][0] == '%') continue;
    if (lines[i][0] == '*') break;
    const std::size_t lineno = i + 1;
    LineReader r(lines[i], lineno);
    const long long id = r.integer("vertex id");
    if (id < 1 || id > n)
      parse_fail(lineno, "vertex id " + std::to_string(id) + " out of range 1.." +
                             std::to_string(n));
    auto& slot = nodes[static_cast<std::size_t>(id - 1)];
    if (slot) parse_fail(lineno, "duplicate vertex id " + std::to_string(id));
    Node node{r.quoted(), std::nullopt, 1.0};
    if (r.next_is_number()) {
      Point p;
      p.x = r.real("x coordinate");
      p.y = r.real("y coordinate");
      if (r.next_is_number()) r.real("z coordinate");
      net.coordinates[static_cast<std::size_t>(id - 1)] = p;
    }
    while (!r.at_end()) {
      const std::string key = r.word();
      if (key != "ic") parse_fail(lineno, "unknown vertex attribute '" + key + "'");
      const std::string colour = r.word();
      node.group = palette_index(colour);
      if (!node.group && colour != "White")
        parse_fail(lineno, "unknown colour '" + colour + "'");
    }
    slot = std::move(node);
  }
  for (long long v = 0; v < n; ++v) {
    auto& slot = nodes[static_cast<std::size_t>(v)];
    net.graph.add_node(slot ? std::move(*slot)
                            : Node{std::to_string(v + 1), std::nullopt, 1.0});
  }

  if (i < lines.size()) {
    const std::size_t header_line = i + 1;
    if (lower(lines[i]).rfind("*edges", 0) != 0)
      parse_fail(header_line, "expected '*Edges'");
    for (++i; i < lines.size(); ++i) {
      if (is_blank(lines[i]) || lines[i][0] == '%') continue;
      const std::size_t lineno = i + 1;
      if (lines[i][0] == '*') parse_fail(lineno, "unexpected section '" + lines[i] + "'");
      LineReader r(lines[i], lineno);
      const long long a = r.integer("edge endpoint");
      const long long b = r.integer("edge endpoint");
      for (long long id : {a, b}) {
        if (id < 1 || id > n)
          parse_fail(lineno, "edge references vertex " + std::to_string(id) +
                                 " (valid ids 1.." + std::to_string(n) + ")");
      }
      double w = 1.0;
      if (r.next_is_number()) w = r.real("edge weight");
      EdgeStyle style = EdgeStyle::Solid;
      while (!r.at_end()) {
        const std::string key = r.word();
        if (key != "p") parse_fail(lineno, "unknown edge attribute '" + key + "'");
        const std::string pattern = r.word();
        if (pattern == "Dots" || pattern == "Dotted") {
          style = EdgeStyle::Dotted;
        } else if (pattern != "Solid") {
          parse_fail(lineno, "unknown line pattern '" + pattern + "'");
        }
      }
      try {
        net.graph.add_edge(static_cast<std::size_t>(a - 1),
                           static_cast<std::size_t>(b - 1), w, style);
      } catch (const DataError& e) {
        parse_fail(lineno, e.what());
      }
    }
  }
  return net;
}

PajekNetwork read_pajek_net(const fs::path& path) {
  try {
    return parse_pajek_net(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_pajek_matrix(const CoocMatrix& m) {
  const auto n = m.values.rows();
  if (m.values.cols() != n || static_cast<std::size_t>(n) != m.labels.size())
    throw DataError("pajek matrix must be square and labelled");
  std::string out = "*Vertices " + std::to_string(n) + "\n";
  for (Eigen::Index i = 0; i < n; ++i)
    out += std::to_string(i + 1) + " " + pajek_quote(m.labels[i]) + "\n";
  out += "*Matrix\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j > 0) out.push_back(' ');
      out += std::to_string(m.values(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_pajek_matrix(const CoocMatrix& m, const fs::path& path) {
  write_text_file(path, format_pajek_matrix(m));
}

CoocMatrix parse_pajek_matrix(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && is_blank(lines[i])) ++i;
  if (i >= lines.size()) parse_fail(1, "expected '*Vertices N'");
  const long long n = parse_vertices_header(lines[i], i + 1);
  ++i;
  CoocMatrix m;
  m.labels.assign(static_cast<std::size_t>(n), {});
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (; i < lines.size() && (lines[i].empty() || lines[i][0] != '*'); ++i) {
    if (is_blank(lines[i])) continue;
    LineReader r(lines[i], i + 1);
    const long long id = r.integer("vertex id");
    if (id < 1 || id > n) parse_fail(i + 1, "vertex id " + std::to_string(id) + " out of range");
    m.labels[static_cast<std::size_t>(id - 1)] = r.quoted();
    seen[static_cast<std::size_t>(id - 1)] = 1;
  }
  for (long long v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) m.labels[static_cast<std::size_t>(v)] = std::to_string(v + 1);
  if (i >= lines.size() || lower(lines[i]).rfind("*matrix", 0) != 0)
    parse_fail(std::min(i + 1, lines.size() + 1), "expected '*Matrix'");
  ++i;
  m.values.resize(n, n);
  Eigen::Index row = 0;
  for (; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    if (row >= n) parse_fail(i + 1, "too many matrix rows");
    LineReader r(lines[i], i + 1);
    for (Eigen::Index j = 0; j < n; ++j) m.values(row, j) = r.integer("matrix entry");
    if (!r.at_end()) parse_fail(i + 1, "too many matrix columns");
    ++row;
  }
  if (row != n) parse_fail(lines.size(), "expected " + std::to_string(n) + " matrix rows");
  return m;
}

CoocMatrix read_pajek_matrix(const fs::path& path) {
  try {
    return parse_pajek_matrix(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out.push_back(',');
      if (needs_quotes(row[j])) {
        out.push_back('"');
        for (char c : row[j]) {
          if (c == '"') out.push_back('"');
          out.push_back(c);
        }
        out.push_back('"');
      } else {
        out += row[j];
      }
    }
    out.push_back('\n');
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

void write_csv(const CsvTable& table, const fs::path& path) {
  write_text_file(path, format_csv(table));
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (in_quotes) throw DataError("csv: unterminated quoted field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  CsvTable table;
  if (records.empty()) throw DataError("csv: missing header row");
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw DataError("csv row " + std::to_string(r + 1) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(records[r].size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const fs::path& path) {
  try {
    return parse_csv(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

CsvTable counts_table(const WordDocMatrix& m) {
  CsvTable t;
  t.header.emplace_back(kRowHeader);
  t.header.insert(t.header.end(), m.col_labels().begin(), m.col_labels().end());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row{m.row_labels()[i]};
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(std::to_string(m.counts()(i, k)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable real_matrix_table(const LabeledMatrix& m) {
  CsvTable t;
  t.header.emplace_back(kRowHeader);
  t.header.insert(t.header.end(), m.col_labels.begin(), m.col_labels.end());
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    std::vector<std::string> row{m.row_labels[i]};
    for (Eigen::Index k = 0; k < m.values.cols(); ++k)
      row.push_back(format_real(m.values(i, k)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable terms_table(const TermScores& ranked,
                     const std::vector<std::string>& selected) {
  CsvTable t;
  t.header = {"term", "freq", "docfreq", "tfidf", "chi2", "obs_exp_sum", "selected"};
  const std::set<std::string> chosen(selected.begin(), selected.end());
  for (const auto& s : ranked) {
    t.rows.push_back({s.term, std::to_string(s.freq), std::to_string(s.doc_freq),
                      format_real(s.tfidf), format_real(s.chi2),
                      format_real(s.obs_exp_sum), chosen.count(s.term) ? "1" : "0"});
  }
  return t;
}

CsvTable loadings_table(const FactorSolution& sol) {
  CsvTable t;
  t.header.emplace_back("variable");
  for (std::size_t f = 0; f < sol.factors(); ++f)
    t.header.push_back("factor" + std::to_string(f + 1));
  t.header.emplace_back("communality");
  const auto h = sol.communalities();
  for (std::size_t j = 0; j < sol.variables(); ++j) {
    std::vector<std::string> row{sol.variable_labels[j]};
    for (std::size_t f = 0; f < sol.factors(); ++f)
      row.push_back(format_real(sol.loadings(j, f)));
    row.push_back(format_real(h[j]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

WordDocMatrix word_doc_matrix_from_table(const CsvTable& table) {
  if (table.header.empty() || table.header[0] != kRowHeader)
    throw DataError("counts csv must start with a '" + std::string(kRowHeader) +
                    "' column");
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(table.header.size() - 1);
  CountMatrix counts(rows, cols);
  std::vector<std::string> row_labels;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = table.rows[i];
    row_labels.push_back(r[0]);
    for (Eigen::Index k = 0; k < cols; ++k) {
      const std::string& cell = r[k + 1];
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw DataError("csv row " + std::to_string(i + 2) + ": invalid count '" +
                        cell + "'");
      counts(i, k) = v;
    }
  }
  return WordDocMatrix::from_counts(
      std::move(counts), std::move(row_labels),
      std::vector<std::string>(table.header.begin() + 1, table.header.end()));
}

LabeledMatrix real_matrix_from_table(const CsvTable& table) {
  LabeledMatrix m;
  if (table.header.empty()) throw DataError("csv: empty header");
  m.col_labels.assign(table.header.begin() + 1, table.header.end());
  m.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                  static_cast<Eigen::Index>(m.col_labels.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    m.row_labels.push_back(table.rows[i][0]);
    for (std::size_t k = 0; k < m.col_labels.size(); ++k)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_double_cell(table.rows[i][k + 1], i + 2);
  }
  return m;
}

std::string format_svg_map(const Graph& g, const Layout& layout,
                           const FactorAssignment* assignment,
                           const SvgStyle& style) {
  if (layout.positions.size() != g.node_count())
    throw DataError("layout does not cover every node");
  if (assignment && assignment->size() != g.node_count())
    throw DataError("factor assignment does not cover every node");
  const double span = style.canvas - 2.0 * style.margin;
  auto px = [&](const Point& p) {
    return Point{style.margin + p.x * span, style.margin + p.y * span};
  };

  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
      fixed2(style.canvas) + "\" height=\"" + fixed2(style.canvas) +
      "\" viewBox=\"0 0 " + fixed2(style.canvas) + " " + fixed2(style.canvas) +
      "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  double max_weight = 0.0;
  for (const auto& e : g.edges()) max_weight = std::max(max_weight, std::abs(e.weight));
  out += "<g stroke=\"#808080\" stroke-opacity=\"0.7\">\n";
  for (const auto& e : g.edges()) {
    const Point a = px(layout.positions[e.a]);
    const Point b = px(layout.positions[e.b]);
    const double width =
        0.5 + (max_weight > 0.0 ? 2.5 * std::abs(e.weight) / max_weight : 0.0);
    out += "<line x1=\"" + fixed2(a.x) + "\" y1=\"" + fixed2(a.y) + "\" x2=\"" +
           fixed2(b.x) + "\" y2=\"" + fixed2(b.y) + "\" stroke-width=\"" +
           fixed2(width) + "\"";
    if (e.style == EdgeStyle::Dotted) out += " stroke-dasharray=\"4 3\"";
    out += "/>\n";
  }
  out += "</g>\n";

  double max_size = 0.0;
  for (const auto& n : g.nodes()) max_size = std::max(max_size, n.size);
  const auto& pal = factor_palette();
  out += "<g stroke=\"#000000\" stroke-width=\"0.8\">\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& node = g.nodes()[i];
    std::optional<std::size_t> colour;
    if (assignment) {
      if ((*assignment)[i]) colour = (*assignment)[i]->factor;
    } else if (node.group) {
      colour = static_cast<std::size_t>(*node.group);
    }
    const std::string fill =
        colour ? std::string(pal[*colour % pal.size()].hex) : std::string(kUnassignedFill);
    const double rel =
        max_size > 0.0 ? std::sqrt(std::max(node.size, 0.0) / max_size) : 0.0;
    const double r = style.min_radius + (style.max_radius - style.min_radius) * rel;
    const Point c = px(layout.positions[i]);
    out += "<circle cx=\"" + fixed2(c.x) + "\" cy=\"" + fixed2(c.y) + "\" r=\"" +
           fixed2(r) + "\" fill=\"" + fill + "\"/>\n";
  }
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#000000\">\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point c = px(layout.positions[i]);
    const double rel = max_size > 0.0
                           ? std::sqrt(std::max(g.nodes()[i].size, 0.0) / max_size)
                           : 0.0;
    const double r = style.min_radius + (style.max_radius - style.min_radius) * rel;
    out += "<text x=\"" + fixed2(c.x + r + 2.0) + "\" y=\"" + fixed2(c.y + 4.0) +
           "\">" + xml_escape(g.nodes()[i].label) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

void render_svg_map(const Graph& g, const Layout& layout,
                    const FactorAssignment* assignment, const fs::path& path,
                    const SvgStyle& style) {
  write_text_file(path, format_svg_map(g, layout, assignment, style));
}

}  // namespace coword
