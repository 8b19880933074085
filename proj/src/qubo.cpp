#include "mrgnn/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mrgnn/error.hpp"
#include "text_util.hpp"

namespace mrgnn {

const char* problem_name(Problem p) noexcept {
  switch (p) {
    case Problem::MaxCut: return "maxcut";
    case Problem::MIS: return "mis";
    case Problem::GP: return "gp";
  }
  return "?";
}

Problem parse_problem(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "maxcut") return Problem::MaxCut;
  if (lower == "mis") return Problem::MIS;
  if (lower == "gp") return Problem::GP;
  throw InvalidInput("unknown problem '" + s + "' (expected maxcut, mis or gp)");
}

double default_penalty(Problem p) noexcept {
  switch (p) {
    case Problem::MIS: return 2.0;
    case Problem::GP: return 10.0;
    case Problem::MaxCut: return 0.0;
  }
  return 0.0;
}

QuboMatrix::QuboMatrix(std::size_t n, std::vector<Triplet> entries, double uniform, double offset)
    : n_(n), uniform_(uniform), offset_(offset) {
  std::map<std::pair<std::int32_t, std::int32_t>, double> merged;
  for (auto t : entries) {
    if (t.i < 0 || t.j < 0 || static_cast<std::size_t>(t.i) >= n || static_cast<std::size_t>(t.j) >= n)
      throw InvalidInput("QUBO index out of range");
    if (!std::isfinite(t.q)) throw InvalidInput("QUBO entry must be finite");
    if (t.i > t.j) std::swap(t.i, t.j);
    merged[{t.i, t.j}] += t.q;
  }
  diag_.assign(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const auto& [ij, q] : merged) {
    if (q == 0.0) continue;
    entries_.push_back({ij.first, ij.second, q});
    if (ij.first == ij.second) {
      diag_[ij.first] = q;
    } else {
      ++count[ij.first];
      ++count[ij.second];
    }
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + count[i];
  row_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& t : entries_) {
    if (t.i == t.j) continue;
    row_[fill[t.i]++] = {t.j, t.q};
    row_[fill[t.j]++] = {t.i, t.q};
  }
}

std::vector<std::vector<double>> QuboMatrix::dense() const {
  std::vector<std::vector<double>> m(n_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) m[i][j] = uniform_;
  for (const auto& t : entries_) {
    m[t.i][t.j] += t.q;
    if (t.i != t.j) m[t.j][t.i] += t.q;
  }
  return m;
}

QuboMatrix build_qubo(Problem problem, const Graph& g, double penalty, GpSignMode gp_mode) {
  if (problem != Problem::MaxCut && !(penalty > 0.0))
    throw InvalidInput(std::string("penalty must be positive for ") + problem_name(problem));
  const auto n = g.num_nodes();
  const double nd = static_cast<double>(n);
  std::vector<Triplet> t;
  double uniform = 0.0;
  double offset = 0.0;
  switch (problem) {
    case Problem::MaxCut:
      // sum w (2 x_i x_j - x_i - x_j)
      for (const auto& e : g.edges()) {
        if (e.u == e.v) continue;
        t.push_back({e.u, e.u, -e.w});
        t.push_back({e.v, e.v, -e.w});
        t.push_back({e.u, e.v, e.w});
      }
      break;
    case Problem::MIS:
      // -sum x_i + beta sum w x_i x_j
      for (std::size_t i = 0; i < n; ++i)
        t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), -1.0});
      for (const auto& e : g.edges()) {
        if (e.u == e.v) continue;
        t.push_back({e.u, e.v, 0.5 * penalty * e.w});
      }
      break;
    case Problem::GP:
      // cut term: sum w (x_i + x_j - 2 x_i x_j)
      for (const auto& e : g.edges()) {
        if (e.u == e.v) continue;
        t.push_back({e.u, e.u, e.w});
        t.push_back({e.v, e.v, e.w});
        t.push_back({e.u, e.v, -e.w});
      }
      // (sum x - n/2)^2 = (1 - n) sum x_i + 2 sum_{i<j} x_i x_j + n^2/4 on binary x
      if (gp_mode == GpSignMode::Corrected) {
        for (std::size_t i = 0; i < n; ++i)
          t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), penalty * (1.0 - nd)});
        uniform = penalty;
        offset = penalty * nd * nd / 4.0;
      } else {
        for (std::size_t i = 0; i < n; ++i)
          t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), -penalty * (1.0 - nd)});
        uniform = -penalty;
      }
      break;
  }
  QuboMatrix q(n, std::move(t), uniform, offset);
  q.problem = problem;
  q.penalty = penalty;
  return q;
}

namespace {

void check_size(const QuboMatrix& q, std::size_t len) {
  if (len != q.size())
    throw InvalidInput("assignment length " + std::to_string(len) + " does not match QUBO size " +
                       std::to_string(q.size()));
}

}  // namespace

double hamiltonian(const QuboMatrix& q, std::span<const std::uint8_t> x) {
  check_size(q, x.size());
  double h = q.offset();
  double ones = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1) throw InvalidInput("assignment entries must be 0 or 1");
    ones += x[i];
  }
  for (const auto& t : q.entries()) {
    if (t.i == t.j)
      h += t.q * x[t.i];
    else if (x[t.i] && x[t.j])
      h += 2.0 * t.q;
  }
  h += q.uniform() * (ones * ones - ones);
  return h;
}

double relaxed(const QuboMatrix& q, std::span<const double> p) {
  check_size(q, p.size());
  double h = q.offset();
  double sum = 0.0;
  double sq = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("soft assignment entries must lie in [0, 1]");
    sum += v;
    sq += v * v;
  }
  for (const auto& t : q.entries())
    h += t.i == t.j ? t.q * p[t.i] : 2.0 * t.q * p[t.i] * p[t.j];
  h += q.uniform() * (sum * sum - sq);
  return h;
}

std::vector<double> relaxed_gradient(const QuboMatrix& q, std::span<const double> p) {
  check_size(q, p.size());
  double sum = 0.0;
  for (double v : p) sum += v;
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double acc = q.diag(i) + 2.0 * q.uniform() * (sum - p[i]);
    for (const auto& nb : q.row(i)) acc += 2.0 * nb.w * p[nb.node];
    g[i] = acc;
  }
  return g;
}

double flip_delta(const QuboMatrix& q, std::span<const std::uint8_t> x, std::size_t i,
                  std::size_t ones) {
  double field = q.diag(i) + 2.0 * q.uniform() * static_cast<double>(ones - x[i]);
  for (const auto& nb : q.row(i))
    if (x[nb.node]) field += 2.0 * nb.w;
  return x[i] ? -field : field;
}

std::size_t cut_size(const Graph& g, std::span<const std::uint8_t> x) {
  std::size_t c = 0;
  for (const auto& e : g.edges())
    if (e.u != e.v && x[e.u] != x[e.v]) ++c;
  return c;
}

std::size_t mis_violations(const Graph& g, std::span<const std::uint8_t> x) {
  std::size_t c = 0;
  for (const auto& e : g.edges())
    if (e.u != e.v && x[e.u] && x[e.v]) ++c;
  return c;
}

SolutionMetrics evaluate(Problem problem, const Graph& g, std::span<const std::uint8_t> x,
                         double penalty, GpSignMode gp_mode) {
  if (x.size() != g.num_nodes()) throw InvalidInput("assignment length does not match graph");
  SolutionMetrics m;
  m.objective = hamiltonian(build_qubo(problem, g, penalty, gp_mode), x);
  std::size_t ones = 0;
  for (auto v : x) ones += v;
  m.set_size = ones;
  m.cut_size = cut_size(g, x);
  if (problem == Problem::MIS) m.violations = mis_violations(g, x);
  if (problem == Problem::GP && !x.empty())
    m.balance = static_cast<double>(std::min(ones, x.size() - ones)) / static_cast<double>(x.size());
  return m;
}

std::string format_qubo(const QuboMatrix& q) {
  std::string out = std::to_string(q.size()) + "\n";
  if (q.uniform() != 0.0) out += "uniform " + detail::format_double(q.uniform()) + "\n";
  if (q.offset() != 0.0) out += "offset " + detail::format_double(q.offset()) + "\n";
  for (const auto& t : q.entries())
    out += std::to_string(t.i) + " " + std::to_string(t.j) + " " + detail::format_double(t.q) + "\n";
  return out;
}

QuboMatrix parse_qubo(const std::string& text) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_n = false;
  double uniform = 0.0;
  double offset = 0.0;
  std::vector<Triplet> t;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (!have_n) {
      if (toks.size() != 1 || !detail::parse_number(toks[0], n))
        throw ParseError("expected QUBO dimension", line_no);
      have_n = true;
      continue;
    }
    if (toks.size() == 2 && (toks[0] == "uniform" || toks[0] == "offset")) {
      double v = 0.0;
      if (!detail::parse_number(toks[1], v)) throw ParseError("bad directive value", line_no);
      (toks[0] == "uniform" ? uniform : offset) = v;
      continue;
    }
    Triplet tr{};
    if (toks.size() != 3 || !detail::parse_number(toks[0], tr.i) ||
        !detail::parse_number(toks[1], tr.j) || !detail::parse_number(toks[2], tr.q))
      throw ParseError("expected \"i j q\"", line_no);
    if (tr.i < 0 || tr.j < 0 || static_cast<std::size_t>(tr.i) >= n ||
        static_cast<std::size_t>(tr.j) >= n)
      throw ParseError("index out of range", line_no);
    t.push_back(tr);
  }
  if (!have_n) throw ParseError("missing QUBO dimension", 1);
  return QuboMatrix(n, std::move(t), uniform, offset);
}

QuboMatrix load_qubo(const std::filesystem::path& path) {
  return parse_qubo(detail::read_file(path));
}

void save_qubo(const QuboMatrix& q, const std::filesystem::path& path) {
  detail::write_file(path, format_qubo(q));
}

std::string to_bitstring(std::span<const std::uint8_t> x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? '1' : '0';
  return s;
}

}  // namespace mrgnn
