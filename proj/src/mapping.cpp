#include "mrgnn/mapping.hpp"

#include "mrgnn/error.hpp"
#include "text_util.hpp"

namespace mrgnn {

std::vector<double> distribution_coefficients(const Hierarchy& h, std::size_t level,
                                              std::span<const double> original_degrees) {
  if (level >= h.levels.size()) throw InvalidInput("hierarchy level out of range");
  if (original_degrees.size() != h.original_size)
    throw InvalidInput("degree vector must cover the original graph");
  const auto& lv = h.levels[level];
  std::vector<double> coef(h.original_size, 0.0);
  for (const auto& members : lv.members) {
    double total = 0.0;
    for (NodeId v : members) total += original_degrees[v];
    for (NodeId v : members)
      coef[v] = total > 0.0 ? original_degrees[v] / total : 1.0 / static_cast<double>(members.size());
  }
  return coef;
}

ResolutionFeatures distribute(const Hierarchy& h, std::size_t level, const FeatureMatrix& f_bar,
                              std::span<const double> original_degrees) {
  if (level >= h.levels.size()) throw InvalidInput("hierarchy level out of range");
  const auto& lv = h.levels[level];
  if (static_cast<std::size_t>(f_bar.rows()) != lv.graph.num_nodes())
    throw InvalidInput("embedding rows do not match the level's node count");
  std::vector<double> coef = distribution_coefficients(h, level, original_degrees);
  ResolutionFeatures out{level, FeatureMatrix(h.original_size, f_bar.cols())};
  for (std::size_t v = 0; v < h.original_size; ++v)
    out.matrix.row(static_cast<Eigen::Index>(v)) = coef[v] * f_bar.row(lv.original_to_node[v]);
  return out;
}

FeatureMatrix aggregate(std::span<const ResolutionFeatures> parts) {
  if (parts.empty()) throw InvalidInput("cannot aggregate an empty list of resolutions");
  FeatureMatrix sum = parts.front().matrix;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].matrix.rows() != sum.rows() || parts[i].matrix.cols() != sum.cols())
      throw InvalidInput("resolution feature matrices differ in shape");
    sum += parts[i].matrix;
  }
  return sum / static_cast<double>(parts.size());
}

void save_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += detail::format_double(m(i, j));
    }
    out += '\n';
  }
  detail::write_file(path, out);
}

FeatureMatrix load_matrix(const std::filesystem::path& path) {
  std::string text = detail::read_file(path);
  std::size_t pos = 0, line_no = 0;
  auto next_line = [&] {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    auto toks = detail::split_ws(std::string_view(text.data() + pos, end - pos));
    pos = end + 1;
    ++line_no;
    return toks;
  };
  auto header = next_line();
  Eigen::Index rows = 0, cols = 0;
  if (header.size() != 2 || !detail::parse_number(header[0], rows) ||
      !detail::parse_number(header[1], cols) || rows < 0 || cols < 0)
    throw ParseError("expected \"rows cols\"", line_no);
  FeatureMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (pos >= text.size()) throw ParseError("missing matrix row", line_no + 1);
    auto toks = next_line();
    if (static_cast<Eigen::Index>(toks.size()) != cols) throw ParseError("wrong column count", line_no);
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!detail::parse_number(toks[j], m(i, j))) throw ParseError("bad number", line_no);
  }
  return m;
}

}  // namespace mrgnn
