#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "vdcs/rng.hpp"

namespace vdcs::info {

// All logarithms are base-2 and 0 log 0 := 0 throughout.

// Dense joint probability tables over two / three finite alphabets.
struct Joint2 {
  int na = 0;
  int nb = 0;
  std::vector<double> p;

  Joint2(int a, int b);
  double& at(int a, int b) { return p[static_cast<std::size_t>(a) * nb + b]; }
  double at(int a, int b) const { return p[static_cast<std::size_t>(a) * nb + b]; }
};

struct Joint3 {
  int na = 0;
  int nb = 0;
  int nc = 0;
  std::vector<double> p;

  Joint3(int a, int b, int c);
  double& at(int a, int b, int c) {
    return p[(static_cast<std::size_t>(a) * nb + b) * nc + c];
  }
  double at(int a, int b, int c) const {
    return p[(static_cast<std::size_t>(a) * nb + b) * nc + c];
  }
};

// Shannon entropy in bits. Negative mass is an error.
double entropy(std::span<const double> pmf);

// h(p) = -p log p - (1-p) log(1-p) for p in [0,1].
double binary_entropy(double p);

// Reconstruction slack C(eps) = eps*log2(k_count) + h(eps), eps in [0, 1/2];
// C(0) = 0 by continuity.
double slack_C(double eps, int k_count);

// Fano lower-bound RHS: log2 K - h(pe) - pe*log2(K-1). Zero exactly at
// pe = 1 - 1/K.
double fano_rhs(double pe, int k_count);

// I(A;B) by exact summation.
double mutual_info(const Joint2& j);

// I(A;B|C) by exact summation.
double cond_mutual_info(const Joint3& j);

// Explicit joint pmf over (S, K, X). The theory checks require the
// balanced-modes and exogenous flags, which validate() enforces against
// the table itself.
struct FiniteJoint {
  int ns = 0;
  int nk = 0;
  int nx = 0;
  std::vector<double> p;  // [s][k][x]
  bool balanced_modes = false;
  bool exogenous = false;

  FiniteJoint(int s, int k, int x);
  double& at(int s, int k, int x) {
    return p[(static_cast<std::size_t>(s) * nk + k) * nx + x];
  }
  double at(int s, int k, int x) const {
    return p[(static_cast<std::size_t>(s) * nk + k) * nx + x];
  }
  double marginal_s(int s) const;
  void validate() const;
};

// Deterministic encoder X -> Z and decoder Z -> X̂ over index alphabets.
struct EncoderMap {
  int nx = 0;
  int nz = 0;
  std::vector<int> z_of_x;

  EncoderMap(int x_count, int z_count, std::vector<int> map);
  static EncoderMap identity(int n);
  static EncoderMap constant(int x_count, int z = 0);
};

struct DecoderMap {
  int nz = 0;
  int nx = 0;
  std::vector<int> xhat_of_z;

  DecoderMap(int z_count, int x_count, std::vector<int> map);
  static DecoderMap identity(int n);
};

// Row-stochastic encoder representation; the IB identity only holds for
// deterministic encoders, so passing a non-degenerate row is an error.
struct StochasticEncoder {
  int nx = 0;
  int nz = 0;
  std::vector<double> rows;  // p(z|x), row-major

  EncoderMap require_deterministic() const;
};

// Normalized distortion table d(x, xhat) in [0,1] satisfying the
// mismatch property 1{x != xhat} <= d(x, xhat), checked exhaustively.
struct DistortionSpec {
  int nx = 0;
  std::vector<double> d;

  DistortionSpec(int x_count, std::vector<double> table);
  double at(int x, int xhat) const { return d[static_cast<std::size_t>(x) * nx + xhat]; }
  // The minimal admissible table: 0 on the diagonal, 1 off it.
  static DistortionSpec indicator(int x_count);
};

// Conditional Bayes error of the optimal mode predictor,
// P_e(s) = 1 - sum_x max_k p(k, x | s). Zero-mass s is an error.
double bayes_error(const FiniteJoint& joint, int s);

struct ContaminationReport {
  double i_xk_given_s = 0.0;
  double i_zk_given_s = 0.0;
  double epsilon = 0.0;
  double c_eps = 0.0;
  double margin = 0.0;  // i_zk_given_s - i_xk_given_s + c_eps
  bool eps_clamped = false;
  bool violated = false;  // margin < -1e-9
};

// The representation-contamination bound:
//   I(Z;K|S) >= I(X;K|S) - C(min(eps, 1/2)),  eps = E[d(X, X̂)].
ContaminationReport check_contamination(const FiniteJoint& joint, const EncoderMap& enc,
                                        const DecoderMap& dec, const DistortionSpec& dist);

struct FanoReport {
  bool identifiable = false;  // P_e(s) < 1 - 1/K for every s
  std::vector<double> pe_per_s;
  std::vector<double> lhs_per_s;     // I(X;K|S=s)
  std::vector<double> rhs_per_s;     // fano_rhs(P_e(s), K)
  std::vector<double> margin_per_s;  // lhs - rhs
  double min_margin = 0.0;
  double avg_i_xk_given_s = 0.0;
  bool positivity_holds = false;  // avg > 0, claimed only when identifiable
};

// Per-state Fano lower bound I(X;K|S=s) >= log2 K - h(Pe) - Pe log2(K-1)
// and positivity of the average. A failed identifiability precondition is
// reported, not thrown.
FanoReport check_fano_positivity(const FiniteJoint& joint);

struct ForegroundAnchorReport {
  double i_fk_given_y = 0.0;  // must be 0 within 1e-12
  double i_fy = 0.0;
  double h_y = 0.0;
  double eta = 0.0;  // H(Y|F), computed independently as H(F,Y) - H(F)
};

// Corollary check with F = h1(S), Y = h2(S) and K uniform over k_count,
// independent of S by construction.
ForegroundAnchorReport check_foreground_anchor(const std::vector<double>& p_s,
                                               const std::vector<int>& f_of_s,
                                               const std::vector<int>& y_of_s, int k_count);

struct IbReport {
  double i_zx = 0.0;
  double i_zy = 0.0;
  double i_zx_given_y = 0.0;
  double h_z_given_y = 0.0;
  double identity_residual = 0.0;  // |I(Z;X) - I(Z;Y) - I(Z;X|Y)|
  std::optional<double> i_zk_given_y;
};

// Chain-rule identity I(Z;X) = I(Z;Y) + I(Z;X|Y) for deterministic
// Z = f(X), plus I(Z;X|Y) = H(Z|Y) >= I(Z;K|Y) >= 0 when K is present.
IbReport check_ib_decomposition(const Joint2& pxy, const EncoderMap& enc);
IbReport check_ib_decomposition(const Joint3& pxyk, const EncoderMap& enc);
IbReport check_ib_decomposition(const Joint2& pxy, const StochasticEncoder& enc);

// Dirichlet-uniform instance satisfying both flags by construction:
// p(s) ~ Dir(1), p(k) = 1/nk, p(x|s,k) ~ Dir(1) rows.
FiniteJoint random_exogenous_balanced(int ns, int nk, int nx, RngStream& rng);

EncoderMap random_encoder(int nx, RngStream& rng);
DecoderMap random_decoder(int nz, int nx, RngStream& rng);

struct SweepSummary {
  int instances = 0;
  int contamination_violations = 0;
  int fano_violations = 0;
  int ib_violations = 0;
  int anchor_violations = 0;

  int total_violations() const {
    return contamination_violations + fano_violations + ib_violations + anchor_violations;
  }
};

// Runs the full battery (contamination, Fano, IB with Y = S, foreground
// anchor) on `instances` random instances with alphabet sizes in
// {2..max_alphabet}. Instance i draws from substream
// (kTheoryStreamTag, i) of the seed's root stream. Per-instance JSONL
// reports and a final summary line go to `out` when given; offending
// instances are dumped in full for replay.
SweepSummary run_theory_sweep(int instances, int max_alphabet, std::uint64_t seed,
                              std::ostream* out);

}  // namespace vdcs::info
