#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coword/common.hpp"
#include "coword/corpus.hpp"
#include "coword/factors.hpp"
#include "coword/layout.hpp"
#include "coword/termstats.hpp"
#include "coword/vectorspace.hpp"

namespace coword {

struct PaletteColor {
  std::string_view pajek;  // Pajek colour name
  std::string_view hex;    // SVG fill
};

/// Factor colours; factor f uses entry f % 12.
const std::array<PaletteColor, 12>& factor_palette();

inline constexpr std::string_view kUnassignedFill = "#ffffff";

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Pajek network: `*Vertices N`, `i "label" x y 0.5000 [ic Colour]`,
// `*Edges`, `a b w [p Dots]`. Numbers use 4 decimals, LF line ends. Node
// groups travel as vertex colours (the factor palette, then 48 further Pajek
// names; groups past 60 wrap), dotted edges as the Dots line pattern.
std::string format_pajek_net(const Graph& g, const Layout* layout = nullptr);
void write_pajek_net(const Graph& g, const Layout* layout,
                     const std::filesystem::path& path);

struct PajekNetwork {
  Graph graph;
  std::vector<Point> coordinates;  // 0.5, 0.5 when absent in the file
};

/// Throws DataError("line N: ...") on malformed input.
PajekNetwork parse_pajek_net(std::string_view text);
PajekNetwork read_pajek_net(const std::filesystem::path& path);

// Pajek matrix: `*Vertices N`, `i "label"` lines, `*Matrix`, N rows of N
// integers.
std::string format_pajek_matrix(const CoocMatrix& m);
void write_pajek_matrix(const CoocMatrix& m, const std::filesystem::path& path);
CoocMatrix parse_pajek_matrix(std::string_view text);
CoocMatrix read_pajek_matrix(const std::filesystem::path& path);

/// Quoted Pajek label with embedded quotes doubled.
std::string pajek_quote(std::string_view label);

/// A CSV table: header row plus data rows (RFC 4180 quoting, LF ends).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Six significant digits.
std::string format_real(double v);

inline constexpr std::string_view kRowHeader = "doc";

CsvTable counts_table(const WordDocMatrix& m);
CsvTable real_matrix_table(const LabeledMatrix& m);
CsvTable terms_table(const TermScores& ranked,
                     const std::vector<std::string>& selected);
CsvTable loadings_table(const FactorSolution& sol);

/// Reloads a counts table written by counts_table.
WordDocMatrix word_doc_matrix_from_table(const CsvTable& table);
LabeledMatrix real_matrix_from_table(const CsvTable& table);

struct SvgStyle {
  double canvas = 800.0;
  double margin = 60.0;
  double min_radius = 4.0;
  double max_radius = 16.0;
};

/// Nodes are coloured by `assignment` when given (indexed like the graph
/// nodes), otherwise by node group; unassigned nodes are white with a black
/// stroke. Radius grows with sqrt(node size); dotted edges are dashed.
std::string format_svg_map(const Graph& g, const Layout& layout,
                           const FactorAssignment* assignment = nullptr,
                           const SvgStyle& style = {});
void render_svg_map(const Graph& g, const Layout& layout,
                    const FactorAssignment* assignment,
                    const std::filesystem::path& path,
                    const SvgStyle& style = {});

}  // namespace coword
