#include "vdcs/infolab.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "vdcs/errors.hpp"
#include "vdcs/scheduler.hpp"

namespace vdcs::info {

using nlohmann::json;

namespace {

constexpr double kLog2E = 1.4426950408889634074;  // 1/ln(2)

double xlog2x(double p) { return p > 0.0 ? p * std::log(p) * kLog2E : 0.0; }

void check_alphabet(int n, const char* what) {
  if (n <= 0) throw ValidationError(std::string(what) + " alphabet size must be positive");
}

double exp1_draw(RngStream& rng) { return -std::log1p(-rng.uniform01()); }

}  // namespace

Joint2::Joint2(int a, int b) : na(a), nb(b) {
  check_alphabet(a, "A");
  check_alphabet(b, "B");
  p.assign(static_cast<std::size_t>(a) * b, 0.0);
}

Joint3::Joint3(int a, int b, int c) : na(a), nb(b), nc(c) {
  check_alphabet(a, "A");
  check_alphabet(b, "B");
  check_alphabet(c, "C");
  p.assign(static_cast<std::size_t>(a) * b * c, 0.0);
}

double entropy(std::span<const double> pmf) {
  double h = 0.0;
  for (double v : pmf) {
    if (v < 0.0) throw ValidationError("entropy: negative probability mass");
    h -= xlog2x(v);
  }
  return h;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary_entropy: p must lie in [0,1]");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double slack_C(double eps, int k_count) {
  if (!(eps >= 0.0 && eps <= 0.5)) throw ValidationError("slack_C: eps must lie in [0, 1/2]");
  if (k_count < 1) throw ValidationError("slack_C: k_count must be positive");
  return eps * std::log2(static_cast<double>(k_count)) + binary_entropy(eps);
}

double fano_rhs(double pe, int k_count) {
  if (!(pe >= 0.0 && pe <= 1.0)) throw ValidationError("fano_rhs: pe must lie in [0,1]");
  if (k_count < 2) throw ValidationError("fano_rhs: k_count must be at least 2");
  return std::log2(static_cast<double>(k_count)) - binary_entropy(pe) -
         pe * std::log2(static_cast<double>(k_count - 1));
}

double mutual_info(const Joint2& j) {
  std::vector<double> pa(j.na, 0.0);
  std::vector<double> pb(j.nb, 0.0);
  for (int a = 0; a < j.na; ++a) {
    for (int b = 0; b < j.nb; ++b) {
      const double v = j.at(a, b);
      if (v < 0.0) throw ValidationError("mutual_info: negative probability mass");
      pa[a] += v;
      pb[b] += v;
    }
  }
  double mi = 0.0;
  for (int a = 0; a < j.na; ++a) {
    for (int b = 0; b < j.nb; ++b) {
      const double v = j.at(a, b);
      if (v > 0.0) mi += v * std::log2(v / (pa[a] * pb[b]));
    }
  }
  return mi;
}

double cond_mutual_info(const Joint3& j) {
  std::vector<double> pc(j.nc, 0.0);
  Joint2 pac(j.na, j.nc);
  Joint2 pbc(j.nb, j.nc);
  for (int a = 0; a < j.na; ++a) {
    for (int b = 0; b < j.nb; ++b) {
      for (int c = 0; c < j.nc; ++c) {
        const double v = j.at(a, b, c);
        if (v < 0.0) throw ValidationError("cond_mutual_info: negative probability mass");
        pc[c] += v;
        pac.at(a, c) += v;
        pbc.at(b, c) += v;
      }
    }
  }
  double mi = 0.0;
  for (int a = 0; a < j.na; ++a) {
    for (int b = 0; b < j.nb; ++b) {
      for (int c = 0; c < j.nc; ++c) {
        const double v = j.at(a, b, c);
        if (v > 0.0) mi += v * std::log2(v * pc[c] / (pac.at(a, c) * pbc.at(b, c)));
      }
    }
  }
  return mi;
}

FiniteJoint::FiniteJoint(int s, int k, int x) : ns(s), nk(k), nx(x) {
  check_alphabet(s, "S");
  check_alphabet(k, "K");
  check_alphabet(x, "X");
  p.assign(static_cast<std::size_t>(s) * k * x, 0.0);
}

double FiniteJoint::marginal_s(int s) const {
  double total = 0.0;
  for (int k = 0; k < nk; ++k) {
    for (int x = 0; x < nx; ++x) total += at(s, k, x);
  }
  return total;
}

void FiniteJoint::validate() const {
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError("FiniteJoint: negative probability mass");
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ValidationError("FiniteJoint: table does not sum to 1");
  }
  if (balanced_modes) {
    for (int k = 0; k < nk; ++k) {
      double pk = 0.0;
      for (int s = 0; s < ns; ++s) {
        for (int x = 0; x < nx; ++x) pk += at(s, k, x);
      }
      if (std::fabs(pk - 1.0 / nk) > 1e-12) {
        throw ValidationError("FiniteJoint: balanced-modes flag set but p(k) != 1/|K|");
      }
    }
  }
  if (exogenous) {
    for (int s = 0; s < ns; ++s) {
      const double ps = marginal_s(s);
      for (int k = 0; k < nk; ++k) {
        double psk = 0.0;
        double pk = 0.0;
        for (int x = 0; x < nx; ++x) psk += at(s, k, x);
        for (int s2 = 0; s2 < ns; ++s2) {
          for (int x = 0; x < nx; ++x) pk += at(s2, k, x);
        }
        if (std::fabs(psk - ps * pk) > 1e-12) {
          throw ValidationError("FiniteJoint: exogenous flag set but p(s,k) != p(s)p(k)");
        }
      }
    }
  }
}

EncoderMap::EncoderMap(int x_count, int z_count, std::vector<int> map)
    : nx(x_count), nz(z_count), z_of_x(std::move(map)) {
  check_alphabet(x_count, "X");
  check_alphabet(z_count, "Z");
  if (z_of_x.size() != static_cast<std::size_t>(nx)) {
    throw ValidationError("EncoderMap: map must cover the X alphabet");
  }
  for (int z : z_of_x) {
    if (z < 0 || z >= nz) throw ValidationError("EncoderMap: image outside Z alphabet");
  }
}

EncoderMap EncoderMap::identity(int n) {
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) map[i] = i;
  return EncoderMap(n, n, std::move(map));
}

EncoderMap EncoderMap::constant(int x_count, int z) {
  return EncoderMap(x_count, std::max(z + 1, 1), std::vector<int>(x_count, z));
}

DecoderMap::DecoderMap(int z_count, int x_count, std::vector<int> map)
    : nz(z_count), nx(x_count), xhat_of_z(std::move(map)) {
  check_alphabet(z_count, "Z");
  check_alphabet(x_count, "X");
  if (xhat_of_z.size() != static_cast<std::size_t>(nz)) {
    throw ValidationError("DecoderMap: map must cover the Z alphabet");
  }
  for (int x : xhat_of_z) {
    if (x < 0 || x >= nx) throw ValidationError("DecoderMap: image outside X alphabet");
  }
}

DecoderMap DecoderMap::identity(int n) {
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) map[i] = i;
  return DecoderMap(n, n, std::move(map));
}

EncoderMap StochasticEncoder::require_deterministic() const {
  if (rows.size() != static_cast<std::size_t>(nx) * nz) {
    throw ValidationError("StochasticEncoder: row table has wrong shape");
  }
  std::vector<int> map(nx, -1);
  for (int x = 0; x < nx; ++x) {
    for (int z = 0; z < nz; ++z) {
      const double v = rows[static_cast<std::size_t>(x) * nz + z];
      if (v == 1.0 && map[x] == -1) {
        map[x] = z;
      } else if (v != 0.0) {
        throw ValidationError("stochastic encoder supplied; the IB identity requires a deterministic one");
      }
    }
    if (map[x] == -1) {
      throw ValidationError("StochasticEncoder: row is not a point mass");
    }
  }
  return EncoderMap(nx, nz, std::move(map));
}

DistortionSpec::DistortionSpec(int x_count, std::vector<double> table)
    : nx(x_count), d(std::move(table)) {
  check_alphabet(x_count, "X");
  if (d.size() != static_cast<std::size_t>(nx) * nx) {
    throw ValidationError("DistortionSpec: table must be |X| x |X|");
  }
  for (int x = 0; x < nx; ++x) {
    for (int xh = 0; xh < nx; ++xh) {
      const double v = at(x, xh);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("DistortionSpec: values must lie in [0,1]");
      }
      if (x != xh && v < 1.0) {
        throw ValidationError("DistortionSpec: mismatch property 1{x!=xhat} <= d fails");
      }
    }
  }
}

DistortionSpec DistortionSpec::indicator(int x_count) {
  std::vector<double> table(static_cast<std::size_t>(x_count) * x_count, 1.0);
  for (int x = 0; x < x_count; ++x) table[static_cast<std::size_t>(x) * x_count + x] = 0.0;
  return DistortionSpec(x_count, std::move(table));
}

double bayes_error(const FiniteJoint& joint, int s) {
  if (s < 0 || s >= joint.ns) throw ValidationError("bayes_error: s outside the alphabet");
  const double ps = joint.marginal_s(s);
  if (ps <= 0.0) throw ValidationError("bayes_error: conditioning state has zero mass");
  double correct = 0.0;
  for (int x = 0; x < joint.nx; ++x) {
    double best = 0.0;
    for (int k = 0; k < joint.nk; ++k) best = std::max(best, joint.at(s, k, x));
    correct += best;
  }
  return 1.0 - correct / ps;
}

namespace {

// I(U;K|S) for U = u_of_x(X); identity map gives I(X;K|S).
double cond_mi_mapped(const FiniteJoint& joint, const std::vector<int>& u_of_x, int nu) {
  Joint3 t(nu, joint.nk, joint.ns);
  for (int s = 0; s < joint.ns; ++s) {
    for (int k = 0; k < joint.nk; ++k) {
      for (int x = 0; x < joint.nx; ++x) {
        t.at(u_of_x[x], k, s) += joint.at(s, k, x);
      }
    }
  }
  return cond_mutual_info(t);
}

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

}  // namespace

ContaminationReport check_contamination(const FiniteJoint& joint, const EncoderMap& enc,
                                        const DecoderMap& dec, const DistortionSpec& dist) {
  if (!joint.balanced_modes || !joint.exogenous) {
    throw ValidationError(
        "check_contamination: the bound is only claimed for balanced exogenous joints");
  }
  joint.validate();
  if (enc.nx != joint.nx || dec.nz != enc.nz || dec.nx != joint.nx || dist.nx != joint.nx) {
    throw ValidationError("check_contamination: alphabet shapes disagree");
  }

  ContaminationReport report;
  double eps = 0.0;
  for (int s = 0; s < joint.ns; ++s) {
    for (int k = 0; k < joint.nk; ++k) {
      for (int x = 0; x < joint.nx; ++x) {
        eps += joint.at(s, k, x) * dist.at(x, dec.xhat_of_z[enc.z_of_x[x]]);
      }
    }
  }
  report.epsilon = eps;
  report.eps_clamped = eps > 0.5;
  report.c_eps = slack_C(std::min(eps, 0.5), joint.nk);
  report.i_xk_given_s = cond_mi_mapped(joint, identity_map(joint.nx), joint.nx);
  report.i_zk_given_s = cond_mi_mapped(joint, enc.z_of_x, enc.nz);
  report.margin = report.i_zk_given_s - report.i_xk_given_s + report.c_eps;
  report.violated = report.margin < -1e-9;
  return report;
}

FanoReport check_fano_positivity(const FiniteJoint& joint) {
  if (!joint.balanced_modes || !joint.exogenous) {
    throw ValidationError(
        "check_fano_positivity: balanced exogenous joint required");
  }
  joint.validate();

  FanoReport report;
  report.identifiable = true;
  const double guess_floor = 1.0 - 1.0 / static_cast<double>(joint.nk);
  double avg = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < joint.ns; ++s) {
    const double ps = joint.marginal_s(s);
    if (ps <= 0.0) continue;
    const double pe = bayes_error(joint, s);
    if (!(pe < guess_floor)) report.identifiable = false;

    Joint2 kx(joint.nk, joint.nx);
    for (int k = 0; k < joint.nk; ++k) {
      for (int x = 0; x < joint.nx; ++x) kx.at(k, x) = joint.at(s, k, x) / ps;
    }
    const double lhs = mutual_info(kx);
    const double rhs = fano_rhs(pe, joint.nk);
    report.pe_per_s.push_back(pe);
    report.lhs_per_s.push_back(lhs);
    report.rhs_per_s.push_back(rhs);
    report.margin_per_s.push_back(lhs - rhs);
    min_margin = std::min(min_margin, lhs - rhs);
    avg += ps * lhs;
  }
  report.min_margin = report.margin_per_s.empty() ? 0.0 : min_margin;
  report.avg_i_xk_given_s = avg;
  report.positivity_holds = report.identifiable && avg > 0.0;
  return report;
}

ForegroundAnchorReport check_foreground_anchor(const std::vector<double>& p_s,
                                               const std::vector<int>& f_of_s,
                                               const std::vector<int>& y_of_s, int k_count) {
  const int ns = static_cast<int>(p_s.size());
  check_alphabet(ns, "S");
  if (k_count < 1) throw ValidationError("check_foreground_anchor: k_count must be positive");
  if (f_of_s.size() != p_s.size() || y_of_s.size() != p_s.size()) {
    throw ValidationError("check_foreground_anchor: maps must cover the S alphabet");
  }
  double total = 0.0;
  for (double v : p_s) {
    if (v < 0.0) throw ValidationError("check_foreground_anchor: negative mass in p(s)");
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ValidationError("check_foreground_anchor: p(s) does not sum to 1");
  }

  const int nf = *std::max_element(f_of_s.begin(), f_of_s.end()) + 1;
  const int ny = *std::max_element(y_of_s.begin(), y_of_s.end()) + 1;
  for (int v : f_of_s) {
    if (v < 0) throw ValidationError("check_foreground_anchor: negative F index");
  }
  for (int v : y_of_s) {
    if (v < 0) throw ValidationError("check_foreground_anchor: negative Y index");
  }

  // p(f,k,y) = p(f,y)/|K| with (F,Y) = (h1(S), h2(S)).
  Joint3 fky(nf, k_count, ny);
  Joint2 fy(nf, ny);
  for (int s = 0; s < ns; ++s) {
    fy.at(f_of_s[s], y_of_s[s]) += p_s[s];
    for (int k = 0; k < k_count; ++k) {
      fky.at(f_of_s[s], k, y_of_s[s]) += p_s[s] / static_cast<double>(k_count);
    }
  }

  ForegroundAnchorReport report;
  report.i_fk_given_y = cond_mutual_info(fky);
  report.i_fy = mutual_info(fy);

  std::vector<double> py(ny, 0.0);
  std::vector<double> pf(nf, 0.0);
  for (int f = 0; f < nf; ++f) {
    for (int y = 0; y < ny; ++y) {
      py[y] += fy.at(f, y);
      pf[f] += fy.at(f, y);
    }
  }
  report.h_y = entropy(py);
  // Independent route for eta = H(Y|F).
  report.eta = entropy(std::span<const double>(fy.p)) - entropy(pf);
  return report;
}

namespace {

IbReport ib_from_tables(const Joint3* pxyk, const Joint2* pxy, const EncoderMap& enc) {
  const int nx = pxyk ? pxyk->na : pxy->na;
  const int ny = pxyk ? pxyk->nb : pxy->nb;
  if (enc.nx != nx) throw ValidationError("check_ib_decomposition: encoder alphabet mismatch");

  Joint2 zx(enc.nz, nx);
  Joint2 zy(enc.nz, ny);
  Joint3 zxy(enc.nz, nx, ny);
  std::vector<double> py(ny, 0.0);
  Joint2 zy_joint(enc.nz, ny);

  const auto accumulate = [&](int x, int y, double v) {
    const int z = enc.z_of_x[x];
    zx.at(z, x) += v;
    zy.at(z, y) += v;
    zxy.at(z, x, y) += v;
    py[y] += v;
    zy_joint.at(z, y) += v;
  };
  if (pxyk) {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        for (int k = 0; k < pxyk->nc; ++k) accumulate(x, y, pxyk->at(x, y, k));
      }
    }
  } else {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) accumulate(x, y, pxy->at(x, y));
    }
  }

  IbReport report;
  report.i_zx = mutual_info(zx);
  report.i_zy = mutual_info(zy);
  {
    // I(Z;X|Y) over the (Z,X,Y) tensor.
    Joint3 t(enc.nz, nx, ny);
    t.p = zxy.p;
    report.i_zx_given_y = cond_mutual_info(t);
  }
  report.h_z_given_y = entropy(std::span<const double>(zy_joint.p)) - entropy(py);
  report.identity_residual =
      std::fabs(report.i_zx - report.i_zy - report.i_zx_given_y);

  if (pxyk) {
    Joint3 zky(enc.nz, pxyk->nc, ny);
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        for (int k = 0; k < pxyk->nc; ++k) {
          zky.at(enc.z_of_x[x], k, y) += pxyk->at(x, y, k);
        }
      }
    }
    report.i_zk_given_y = cond_mutual_info(zky);
  }
  return report;
}

}  // namespace

IbReport check_ib_decomposition(const Joint2& pxy, const EncoderMap& enc) {
  return ib_from_tables(nullptr, &pxy, enc);
}

IbReport check_ib_decomposition(const Joint3& pxyk, const EncoderMap& enc) {
  return ib_from_tables(&pxyk, nullptr, enc);
}

IbReport check_ib_decomposition(const Joint2& pxy, const StochasticEncoder& enc) {
  return check_ib_decomposition(pxy, enc.require_deterministic());
}

FiniteJoint random_exogenous_balanced(int ns, int nk, int nx, RngStream& rng) {
  FiniteJoint joint(ns, nk, nx);
  std::vector<double> ps(ns);
  double ps_sum = 0.0;
  for (double& v : ps) {
    v = exp1_draw(rng);
    ps_sum += v;
  }
  for (double& v : ps) v /= ps_sum;

  std::vector<double> row(nx);
  for (int s = 0; s < ns; ++s) {
    for (int k = 0; k < nk; ++k) {
      double row_sum = 0.0;
      for (double& v : row) {
        v = exp1_draw(rng);
        row_sum += v;
      }
      for (int x = 0; x < nx; ++x) {
        joint.at(s, k, x) = ps[s] / static_cast<double>(nk) * (row[x] / row_sum);
      }
    }
  }
  joint.balanced_modes = true;
  joint.exogenous = true;
  return joint;
}

EncoderMap random_encoder(int nx, RngStream& rng) {
  const int nz = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(nx)));
  std::vector<int> map(nx);
  for (int& z : map) z = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(nz)));
  return EncoderMap(nx, nz, std::move(map));
}

DecoderMap random_decoder(int nz, int nx, RngStream& rng) {
  std::vector<int> map(nz);
  for (int& x : map) x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(nx)));
  return DecoderMap(nz, nx, std::move(map));
}

namespace {

json dump_instance(const FiniteJoint& joint, const EncoderMap& enc, const DecoderMap& dec) {
  json j;
  j["ns"] = joint.ns;
  j["nk"] = joint.nk;
  j["nx"] = joint.nx;
  j["p"] = joint.p;
  j["encoder"] = enc.z_of_x;
  j["nz"] = enc.nz;
  j["decoder"] = dec.xhat_of_z;
  return j;
}

int dim_draw(RngStream& rng, int max_alphabet) {
  return 2 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_alphabet - 1)));
}

}  // namespace

SweepSummary run_theory_sweep(int instances, int max_alphabet, std::uint64_t seed,
                              std::ostream* out) {
  if (instances < 1) throw ValidationError("theory sweep needs at least one instance");
  if (max_alphabet < 2) throw ValidationError("theory sweep needs alphabets of size >= 2");
  if (max_alphabet > 8) {
    std::cerr << "warning: alphabets above 8 make the exact sweep slow\n";
  }

  const RngStream root = RngStream::from_seed(seed);
  SweepSummary summary;
  summary.instances = instances;

  if (out) {
    json header;
    header["type"] = "header";
    header["seed"] = seed;
    header["instances"] = instances;
    header["max_alphabet"] = max_alphabet;
    *out << header.dump() << "\n";
  }

  for (int i = 0; i < instances; ++i) {
    RngStream rng = root.substream(kTheoryStreamTag, static_cast<std::uint64_t>(i));

    // Contamination + Fano + IB share one (S,K,X) instance; draw order:
    // dims, joint, encoder, decoder, then the anchor construction.
    const int ns = dim_draw(rng, max_alphabet);
    const int nk = dim_draw(rng, max_alphabet);
    const int nx = dim_draw(rng, max_alphabet);
    const FiniteJoint joint = random_exogenous_balanced(ns, nk, nx, rng);
    const EncoderMap enc = random_encoder(nx, rng);
    const DecoderMap dec = random_decoder(enc.nz, nx, rng);
    const DistortionSpec dist = DistortionSpec::indicator(nx);

    const ContaminationReport con = check_contamination(joint, enc, dec, dist);
    const FanoReport fano = check_fano_positivity(joint);

    Joint3 pxyk(nx, ns, nk);  // Y = S: the policy target exposes the state
    for (int s = 0; s < ns; ++s) {
      for (int k = 0; k < nk; ++k) {
        for (int x = 0; x < nx; ++x) pxyk.at(x, s, k) += joint.at(s, k, x);
      }
    }
    const IbReport ib = check_ib_decomposition(pxyk, enc);

    const int anchor_ns = dim_draw(rng, max_alphabet);
    const int anchor_nk = dim_draw(rng, max_alphabet);
    std::vector<double> anchor_ps(anchor_ns);
    double ps_sum = 0.0;
    for (double& v : anchor_ps) {
      v = exp1_draw(rng);
      ps_sum += v;
    }
    for (double& v : anchor_ps) v /= ps_sum;
    const int nf = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(anchor_ns)));
    const int ny = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(anchor_ns)));
    std::vector<int> f_of_s(anchor_ns);
    std::vector<int> y_of_s(anchor_ns);
    for (int& v : f_of_s) v = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(nf)));
    for (int& v : y_of_s) v = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(ny)));
    const ForegroundAnchorReport anchor =
        check_foreground_anchor(anchor_ps, f_of_s, y_of_s, anchor_nk);

    const bool con_violated = con.violated;
    const bool fano_violated =
        fano.identifiable && (fano.min_margin < -1e-9 || !fano.positivity_holds);
    const bool ib_violated = ib.identity_residual > 1e-10 ||
                             std::fabs(ib.i_zx_given_y - ib.h_z_given_y) > 1e-10 ||
                             *ib.i_zk_given_y < -1e-12 ||
                             ib.i_zx_given_y - *ib.i_zk_given_y < -1e-10;
    const bool anchor_violated = std::fabs(anchor.i_fk_given_y) > 1e-12 ||
                                 std::fabs(anchor.i_fy - (anchor.h_y - anchor.eta)) > 1e-10;
    summary.contamination_violations += con_violated ? 1 : 0;
    summary.fano_violations += fano_violated ? 1 : 0;
    summary.ib_violations += ib_violated ? 1 : 0;
    summary.anchor_violations += anchor_violated ? 1 : 0;
    const int violations = (con_violated ? 1 : 0) + (fano_violated ? 1 : 0) +
                           (ib_violated ? 1 : 0) + (anchor_violated ? 1 : 0);

    if (out) {
      json j;
      j["instance_id"] = i;
      j["I_XKgS"] = con.i_xk_given_s;
      j["I_ZKgS"] = con.i_zk_given_s;
      j["epsilon"] = con.epsilon;
      j["C_eps"] = con.c_eps;
      j["margin"] = con.margin;
      j["fano_margin_per_s"] = fano.margin_per_s;
      j["fano_identifiable"] = fano.identifiable;
      j["ib_residual"] = ib.identity_residual;
      j["anchor_I_FKgY"] = anchor.i_fk_given_y;
      j["violations"] = violations;
      if (violations > 0) j["instance"] = dump_instance(joint, enc, dec);
      *out << j.dump() << "\n";
    }
  }

  if (out) {
    json j;
    j["type"] = "summary";
    j["instances"] = summary.instances;
    j["violations"] = summary.total_violations();
    j["contamination_violations"] = summary.contamination_violations;
    j["fano_violations"] = summary.fano_violations;
    j["ib_violations"] = summary.ib_violations;
    j["anchor_violations"] = summary.anchor_violations;
    *out << j.dump() << "\n";
  }
  return summary;
}

}  // namespace vdcs::info
