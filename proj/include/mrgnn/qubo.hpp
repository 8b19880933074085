#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mrgnn/graph.hpp"

namespace mrgnn {

enum class Problem { MaxCut, MIS, GP };
enum class GpSignMode { Corrected, Literal };

const char* problem_name(Problem p) noexcept;
Problem parse_problem(const std::string& s);
double default_penalty(Problem p) noexcept;

using Binary = std::vector<std::uint8_t>;

struct Triplet {
  std::int32_t i;
  std::int32_t j;
  double q;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Symmetric QUBO matrix stored as its upper triangle.
///
/// For binary x the Hamiltonian is
///   H(x) = sum_i q_ii x_i + 2 sum_{i<j} q_ij x_i x_j + c sum_{i!=j} x_i x_j + offset
/// where c is an optional uniform off-diagonal coupling. The uniform term keeps
/// the all-pairs balance penalty of graph partitioning out of sparse storage;
/// expanded, it is c added to every off-diagonal entry of Q.
class QuboMatrix {
 public:
  QuboMatrix() = default;
  QuboMatrix(std::size_t n, std::vector<Triplet> entries, double uniform = 0.0, double offset = 0.0);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Triplet>& entries() const noexcept { return entries_; }
  double uniform() const noexcept { return uniform_; }
  double offset() const noexcept { return offset_; }
  double diag(std::size_t i) const { return diag_[i]; }
  std::span<const Neighbor> row(std::size_t i) const {
    return {row_.data() + offsets_[i], row_.data() + offsets_[i + 1]};
  }
  /// Dense expansion of Q (uniform coupling folded in); test use only.
  std::vector<std::vector<double>> dense() const;

  Problem problem = Problem::MaxCut;
  double penalty = 0.0;

 private:
  std::size_t n_ = 0;
  std::vector<Triplet> entries_;
  double uniform_ = 0.0;
  double offset_ = 0.0;
  std::vector<double> diag_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> row_;
};

/// Builds the problem Hamiltonian. Edge weights scale couplings; self-loops are ignored.
QuboMatrix build_qubo(Problem problem, const Graph& g, double penalty,
                      GpSignMode gp_mode = GpSignMode::Corrected);

double hamiltonian(const QuboMatrix& q, std::span<const std::uint8_t> x);

/// Multilinear extension: diagonal terms stay linear, so the value is the
/// expectation of H under independent Bernoulli(p_i) and agrees with
/// hamiltonian() on binary inputs.
double relaxed(const QuboMatrix& q, std::span<const double> p);
std::vector<double> relaxed_gradient(const QuboMatrix& q, std::span<const double> p);

/// Change in H when x_i is flipped, O(row length). `ones` is sum(x).
double flip_delta(const QuboMatrix& q, std::span<const std::uint8_t> x, std::size_t i,
                  std::size_t ones);

struct SolutionMetrics {
  double objective = 0.0;
  std::size_t violations = 0;
  double balance = 0.0;
  std::size_t cut_size = 0;
  std::size_t set_size = 0;
};

SolutionMetrics evaluate(Problem problem, const Graph& g, std::span<const std::uint8_t> x,
                         double penalty, GpSignMode gp_mode = GpSignMode::Corrected);

std::size_t cut_size(const Graph& g, std::span<const std::uint8_t> x);
std::size_t mis_violations(const Graph& g, std::span<const std::uint8_t> x);

/// Text triplets: "n" on the first line, then "i j q" per stored entry.
/// Optional "uniform c" and "offset c" directive lines precede the triplets.
std::string format_qubo(const QuboMatrix& q);
QuboMatrix parse_qubo(const std::string& text);
QuboMatrix load_qubo(const std::filesystem::path& path);
void save_qubo(const QuboMatrix& q, const std::filesystem::path& path);

std::string to_bitstring(std::span<const std::uint8_t> x);

}  // namespace mrgnn
