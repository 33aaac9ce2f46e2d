#pragma once

// Physical layer: planar geometry, ULA response and power-domain array
// factor, distance-squared path loss, and the exact / approximated SINR of
// RIS-aided links. Amplitudes are complex; powers are squared magnitudes.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace risnet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Wrap into (-pi, pi].
inline double wrap_pm_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Wrap into [0, 2*pi).
inline double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Bearing of `to` as seen from `from`, measured from the +y axis toward +x,
// in (-pi, pi]. A broadside-facing array at `from` sees boresight along +y.
inline double azimuth(Vec2 from, Vec2 to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  if (dx == 0.0 && dy == 0.0)
    throw std::invalid_argument("azimuth: coincident points");
  return std::atan2(dx, dy);
}

inline double to_db(double linear) {
  if (linear < 0.0)
    throw std::invalid_argument("to_db: negative power");
  return 10.0 * std::log10(linear);  // -inf for zero
}

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

struct ArrayGeometry {
  int elements = 10;
  double spacing = 0.05;      // meters
  double wavelength = 0.1;    // meters

  void validate() const {
    if (elements < 1) throw std::invalid_argument("ArrayGeometry: elements < 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("ArrayGeometry: spacing <= 0");
    if (!(wavelength > 0.0)) throw std::invalid_argument("ArrayGeometry: wavelength <= 0");
  }
};

// Per-element reflection phases in [0, 2*pi).
struct PhaseProfile {
  std::vector<double> phases;

  PhaseProfile() = default;
  explicit PhaseProfile(std::vector<double> raw) : phases(std::move(raw)) {
    for (double& p : phases) {
      if (!std::isfinite(p)) throw std::invalid_argument("PhaseProfile: non-finite phase");
      p = wrap_2pi(p);
    }
  }
  int size() const { return static_cast<int>(phases.size()); }
};

// cos^q element pattern over the front half-plane, zero behind.
struct ElementPattern {
  double boresight_gain = 2.0;
  double exponent = 1.0;

  double gain(double angle) const {
    if (std::abs(angle) >= kPi / 2.0) return 0.0;
    return boresight_gain * std::pow(std::cos(angle), exponent);
  }
};

struct RadioConstants {
  double tx_power = 1.0;            // W
  double ref_path_gain = 1e-6;      // channel gain at 1 m
  double noise_power = 1e-16;       // W
  double carrier_hz = 3e9;
  double bandwidth_hz = 250e3;
  double d2d_snr_threshold_db = 83.0;
  double ris_sinr_threshold_db = 30.0;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }

  void validate() const {
    if (!(tx_power > 0.0)) throw std::invalid_argument("RadioConstants: tx_power <= 0");
    if (!(ref_path_gain > 0.0)) throw std::invalid_argument("RadioConstants: ref_path_gain <= 0");
    if (!(noise_power > 0.0)) throw std::invalid_argument("RadioConstants: noise_power <= 0");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("RadioConstants: carrier_hz <= 0");
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("RadioConstants: bandwidth_hz <= 0");
  }
};

// Distance-squared decay from the reference gain: beta(d) = beta0 / d^2.
inline double path_loss(const RadioConstants& c, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("path_loss: distance must be positive");
  return c.ref_path_gain / (d * d);
}

// Static snapshot of the network: UE and RIS placement, array geometry
// shared by all RISs, and the symmetric complex fading of every UE pair.
struct Scenario {
  std::vector<Vec2> ue_positions;
  std::vector<Vec2> ris_positions;
  std::vector<double> ris_orientations;  // boresight rotation, radians
  ArrayGeometry geometry;
  ElementPattern pattern;
  RadioConstants constants;
  std::vector<std::vector<std::complex<double>>> d2d_fading;  // [u][r], h_ur = h_ru
  std::uint64_t seed = 0;

  int ue_count() const { return static_cast<int>(ue_positions.size()); }
  int ris_count() const { return static_cast<int>(ris_positions.size()); }

  void validate() const {
    geometry.validate();
    constants.validate();
    const int u = ue_count();
    if (u < 2) throw std::invalid_argument("Scenario: need at least 2 UEs");
    if (ris_orientations.size() != ris_positions.size())
      throw std::invalid_argument("Scenario: orientation count mismatch");
    if (d2d_fading.size() != static_cast<std::size_t>(u))
      throw std::invalid_argument("Scenario: fading matrix row count mismatch");
    for (const auto& row : d2d_fading)
      if (row.size() != static_cast<std::size_t>(u))
        throw std::invalid_argument("Scenario: fading matrix column count mismatch");
    for (int a = 0; a < u; ++a)
      for (int b = a + 1; b < u; ++b)
        if (distance(ue_positions[a], ue_positions[b]) <= 0.0)
          throw std::invalid_argument("Scenario: duplicate UE positions");
  }
};

// Departure/arrival angle at RIS m toward a point, in the array's own frame.
inline double ris_angle(const Scenario& s, int m, Vec2 point) {
  if (m < 0 || m >= s.ris_count())
    throw std::invalid_argument("ris_angle: RIS index out of range");
  return wrap_pm_pi(azimuth(s.ris_positions[m], point) + s.ris_orientations[m]);
}

// ULA steering entries a_n = exp(-j * 2*pi*spacing*n/lambda * sin(angle)),
// n = 0..N-1.
inline std::vector<std::complex<double>> array_response(const ArrayGeometry& g, double angle) {
  g.validate();
  std::vector<std::complex<double>> a(static_cast<std::size_t>(g.elements));
  const double k = 2.0 * kPi * g.spacing / g.wavelength * std::sin(angle);
  for (int n = 0; n < g.elements; ++n)
    a[static_cast<std::size_t>(n)] = std::polar(1.0, -k * n);
  return a;
}

// Coherent sum over elements of the reflect-phase and the two steering
// phases; its squared magnitude is the power-domain array factor.
inline std::complex<double> cascade_sum(const ArrayGeometry& g, const PhaseProfile& profile,
                                        double incident, double departure) {
  g.validate();
  if (profile.size() != g.elements)
    throw std::invalid_argument("cascade_sum: profile length mismatch");
  const double k =
      2.0 * kPi * g.spacing / g.wavelength * (std::sin(incident) + std::sin(departure));
  std::complex<double> acc{0.0, 0.0};
  for (int n = 0; n < g.elements; ++n)
    acc += std::polar(1.0, profile.phases[static_cast<std::size_t>(n)] - k * n);
  return acc;
}

// Power-domain array factor in [0, N^2].
inline double pdaf(const ArrayGeometry& g, const PhaseProfile& profile, double incident,
                   double departure) {
  return std::norm(cascade_sum(g, profile, incident, departure));
}

// SNR of the direct u->r link in dB (-inf when fading vanishes).
inline double d2d_snr(const Scenario& s, int u, int r) {
  if (u == r) throw std::invalid_argument("d2d_snr: identical endpoints");
  if (u < 0 || r < 0 || u >= s.ue_count() || r >= s.ue_count())
    throw std::invalid_argument("d2d_snr: UE index out of range");
  const double beta = path_loss(s.constants, distance(s.ue_positions[u], s.ue_positions[r]));
  const double h2 = std::norm(s.d2d_fading[static_cast<std::size_t>(u)][static_cast<std::size_t>(r)]);
  return to_db(s.constants.tx_power * beta * h2 / s.constants.noise_power);
}

// Active transmitter u feeding RIS m.
struct TxRisPair {
  int tx = -1;
  int ris = -1;
};

namespace detail {

// Complex amplitude received at UE r from transmitter `tx` reflecting off
// RIS `ris`: direct fading term plus the cascaded RIS term.
inline std::complex<double> received_amplitude(const Scenario& s,
                                               const std::vector<PhaseProfile>& profiles,
                                               int tx, int ris, int r) {
  const double beta_d = path_loss(s.constants, distance(s.ue_positions[tx], s.ue_positions[r]));
  const std::complex<double> direct =
      std::sqrt(beta_d) * s.d2d_fading[static_cast<std::size_t>(tx)][static_cast<std::size_t>(r)];

  const double theta_in = ris_angle(s, ris, s.ue_positions[tx]);
  const double theta_out = ris_angle(s, ris, s.ue_positions[r]);
  const double beta_in = path_loss(s.constants, distance(s.ue_positions[tx], s.ris_positions[ris]));
  const double beta_out = path_loss(s.constants, distance(s.ris_positions[ris], s.ue_positions[r]));
  const double amp2 =
      beta_in * beta_out * s.pattern.gain(theta_in) * s.pattern.gain(theta_out);
  const std::complex<double> cascade =
      std::sqrt(amp2) * cascade_sum(s.geometry, profiles[static_cast<std::size_t>(ris)],
                                    theta_in, theta_out);
  return direct + cascade;
}

inline void check_link_args(const Scenario& s, const std::vector<PhaseProfile>& profiles,
                            const std::vector<TxRisPair>& active, int u, int m, int r) {
  if (profiles.size() != static_cast<std::size_t>(s.ris_count()))
    throw std::invalid_argument("sinr: one profile required per RIS");
  if (r < 0 || r >= s.ue_count()) throw std::invalid_argument("sinr: receiver out of range");
  bool found = false;
  for (const TxRisPair& p : active) {
    if (p.tx < 0 || p.tx >= s.ue_count() || p.ris < 0 || p.ris >= s.ris_count())
      throw std::invalid_argument("sinr: active pair out of range");
    if (p.tx == r)
      throw std::invalid_argument("sinr: receiver is also an active transmitter");
    if (p.tx == u && p.ris == m) found = true;
  }
  if (!found) throw std::invalid_argument("sinr: (u, m) is not an active pair");
}

}  // namespace detail

// Exact SINR in dB of the RIS-aided link u --(m)--> r, with every other
// active pair contributing its full direct-plus-cascaded amplitude.
inline double exact_sinr(const Scenario& s, const std::vector<PhaseProfile>& profiles,
                         const std::vector<TxRisPair>& active, int u, int m, int r) {
  detail::check_link_args(s, profiles, active, u, m, r);
  const double p = s.constants.tx_power;
  const double signal = p * std::norm(detail::received_amplitude(s, profiles, u, m, r));
  double denom = s.constants.noise_power;
  for (const TxRisPair& other : active) {
    if (other.tx == u) continue;
    denom += p * std::norm(detail::received_amplitude(s, profiles, other.tx, other.ris, r));
  }
  return to_db(signal / denom);
}

// Approximated SINR in dB: interference keeps only the direct fading term of
// each other transmitter, dropping its RIS leakage.
inline double approx_sinr(const Scenario& s, const std::vector<PhaseProfile>& profiles,
                          const std::vector<TxRisPair>& active, int u, int m, int r) {
  detail::check_link_args(s, profiles, active, u, m, r);
  const double p = s.constants.tx_power;
  const double signal = p * std::norm(detail::received_amplitude(s, profiles, u, m, r));
  double denom = s.constants.noise_power;
  for (const TxRisPair& other : active) {
    if (other.tx == u) continue;
    const double beta =
        path_loss(s.constants, distance(s.ue_positions[other.tx], s.ue_positions[r]));
    denom += p * beta *
             std::norm(s.d2d_fading[static_cast<std::size_t>(other.tx)][static_cast<std::size_t>(r)]);
  }
  return to_db(signal / denom);
}

// Shannon sum rate in bit/s over links with the given SINRs.
inline double sum_rate(const std::vector<double>& sinrs_db, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("sum_rate: bandwidth <= 0");
  double total = 0.0;
  for (double g : sinrs_db) total += bandwidth_hz * std::log2(1.0 + from_db(g));
  return total;
}

}  // namespace risnet
