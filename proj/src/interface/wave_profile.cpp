#include "meancurve/interface/wave_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/quadrature.hpp"

namespace meancurve {
namespace {

struct Node {
  double z;
  double s;     // logit of u
  double ds_dz;
};

}  // namespace

WaveProfile wave_profile(const PotentialW& W, const WaveProfileOptions& options) {
  const Hydrodynamics& h = W.hydro();
  const double am = h.alpha_minus(), as = h.alpha_star(), ap = h.alpha_plus();
  const double fpm = h.f_prime(am), fpp = h.f_prime(ap);
  if (!(fpm < 0.0) || !(fpp < 0.0)) {
    std::ostringstream msg;
    msg << "f'(alpha-) = " << fpm << ", f'(alpha+) = " << fpp << "; both must be negative";
    throw EndpointSingularity(msg.str());
  }
  if (options.n_nodes < 3 || options.u_intervals_per_side < 2 || !(options.endpoint_gap > 0.0))
    throw std::invalid_argument("wave_profile: invalid options");

  WaveProfile out;
  out.mu_plus = std::sqrt(-fpp / h.phi_prime(ap));
  out.mu_minus = std::sqrt(-fpm / h.phi_prime(am));

  // u-grid: uniform on each side of alpha*, then halving gaps towards alpha+-.
  std::vector<double> us;
  const int m = options.u_intervals_per_side;
  const double hm = (as - am) / m, hp = (ap - as) / m;
  for (double gap = hm; gap > options.endpoint_gap; gap *= 0.5) us.push_back(am + gap * 0.5);
  std::reverse(us.begin(), us.end());
  for (int k = 1; k < m; ++k) us.push_back(am + k * hm);
  for (int k = 0; k < m; ++k) us.push_back(as + k * hp);
  for (double gap = hp; gap > options.endpoint_gap; gap *= 0.5) us.push_back(ap - gap * 0.5);
  const auto star_it = std::find(us.begin(), us.end(), as);
  const std::size_t star = static_cast<std::size_t>(star_it - us.begin());

  auto dz_du = [&](double s) {
    const double w = std::max(W(s), 0.0);
    return -h.phi_prime(s) / (std::numbers::sqrt2 * std::sqrt(w));
  };
  std::vector<double> zs(us.size(), 0.0);
  for (std::size_t k = star + 1; k < us.size(); ++k) zs[k] = zs[k - 1] + gauss_legendre(dz_du, us[k - 1], us[k]);
  for (std::size_t k = star; k-- > 0;) zs[k] = zs[k + 1] - gauss_legendre(dz_du, us[k], us[k + 1]);

  // Nodes in ascending z, i.e. descending u.
  std::vector<Node> nodes;
  nodes.reserve(us.size());
  for (std::size_t k = us.size(); k-- > 0;) {
    const double u = us[k];
    const double du_dz = 1.0 / dz_du(u);
    nodes.push_back({zs[k], std::log((u - am) / (ap - u)), du_dz * (1.0 / (u - am) + 1.0 / (ap - u))});
  }
  for (std::size_t k = 1; k < nodes.size(); ++k)
    if (!(nodes[k].z > nodes[k - 1].z)) throw std::runtime_error("wave_profile: z(u) is not monotone");

  const double reach = std::min(-nodes.front().z, nodes.back().z);
  const double Z = options.z_half_width > 0.0 ? std::min(options.z_half_width, reach) : reach;
  const int n = options.n_nodes | 1;
  const double dz = 2.0 * Z / (n - 1);
  out.z.resize(n);
  out.U0.resize(n);
  out.U0_z.resize(n);
  std::size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    const double z = i == (n - 1) / 2 ? 0.0 : -Z + i * dz;
    while (seg + 2 < nodes.size() && nodes[seg + 1].z < z) ++seg;
    const Node& a = nodes[seg];
    const Node& b = nodes[seg + 1];
    double s;
    if (z == a.z) {
      s = a.s;
    } else if (z == b.z) {
      s = b.s;
    } else {
      const double w = b.z - a.z;
      const double t = (z - a.z) / w, t2 = t * t, omt = 1.0 - t;
      s = (1 + 2 * t) * omt * omt * a.s + t * omt * omt * w * a.ds_dz + t2 * (3 - 2 * t) * b.s + t2 * (t - 1) * w * b.ds_dz;
    }
    const double e = std::exp(-std::abs(s));
    const double u = s >= 0 ? (ap + am * e) / (1 + e) : (am + ap * e) / (1 + e);
    out.z[i] = z;
    out.U0[i] = u;
    out.U0_z[i] = -std::numbers::sqrt2 * std::sqrt(std::max(W(u), 0.0)) / h.phi_prime(u);
  }
  out.U0[(n - 1) / 2] = as;
  return out;
}

double profile_residual(const WaveProfile& profile, const Hydrodynamics& hydro, double fraction) {
  const std::size_t n = profile.z.size();
  if (n < 3) return 0.0;
  const double h = profile.spacing();
  const auto skip = static_cast<std::size_t>(std::ceil(0.5 * (1.0 - fraction) * static_cast<double>(n)));
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = hydro.phi(profile.U0[i]);
  double worst = 0.0;
  for (std::size_t i = std::max<std::size_t>(1, skip); i + std::max<std::size_t>(1, skip) < n; ++i) {
    const double lap = (p[i + 1] - 2 * p[i] + p[i - 1]) / (h * h);
    worst = std::max(worst, std::abs(lap + hydro.f(profile.U0[i])));
  }
  return worst;
}

double measured_tail_rate(const WaveProfile& profile, const Hydrodynamics& hydro, bool plus_side, double lo, double hi) {
  const double alpha = plus_side ? hydro.alpha_plus() : hydro.alpha_minus();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < profile.z.size(); ++i) {
    const double z = profile.z[i];
    if (plus_side ? z >= 0 : z <= 0) continue;
    const double gap = std::abs(profile.U0[i] - alpha);
    if (gap < lo || gap > hi) continue;
    const double y = std::log(gap);
    sx += z;
    sy += y;
    sxx += z * z;
    sxy += z * y;
    ++count;
  }
  if (count < 2) throw std::runtime_error("measured_tail_rate: no tail nodes in range");
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::abs(slope);
}

void write_profile_csv(const WaveProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "z,U0,U0_z\n" << std::setprecision(17);
  for (std::size_t i = 0; i < profile.z.size(); ++i)
    out << profile.z[i] << ',' << profile.U0[i] << ',' << profile.U0_z[i] << '\n';
}

}  // namespace meancurve
