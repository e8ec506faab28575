#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "rislab/cmatrix.hpp"
#include "rislab/rng.hpp"

namespace rislab {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);
double norm(const Vec3& a);
double distance(const Vec3& a, const Vec3& b);

struct ScenarioGeometry {
    Vec3 bs;
    Vec3 ris;
    Vec3 ue;
    std::vector<Vec3> scatterers_bs_ris;
    std::vector<Vec3> scatterers_ris_ue;
};

struct ArrayConfig {
    std::size_t m_bs = 4;  // BS antennas (ULA)
    std::size_t k_ue = 4;  // UE antennas (ULA)
    std::size_t n_x = 7;   // RIS horizontal elements
    std::size_t n_y = 7;   // RIS vertical elements

    std::size_t ris_elements() const { return n_x * n_y; }
};

struct PathLossConfig {
    double c0_db = -20.0;      // path loss at 1 m reference distance
    double alpha_bs_ris = 2.0;
    double alpha_ris_ue = 2.8;
};

struct AngleSet {
    double azimuth = 0.0;   // psi, (-pi, pi]
    double elevation = 0.0; // phi, [-pi/2, pi/2]
};

// One realization of (G, H_r) for a UE location.
struct ChannelPair {
    CMatrix g;   // N x M, BS -> RIS
    CMatrix h_r; // K x N, RIS -> UE
};

// Per-path additive contributions (prefactor included); summing a link's
// paths gives the link matrix. Kept so golden-file fixtures and rank checks
// can see individual paths.
struct ChannelRealization {
    std::vector<CMatrix> g_paths;
    std::vector<CMatrix> h_r_paths;

    ChannelPair total() const;
};

// Half-wavelength ULA response, entry n = e^{j pi n sin(phi)} / sqrt(n_elements).
CMatrix ula_steering(double elevation, std::size_t n_elements);

// Half-wavelength UPA response, entry (nx, ny) =
// e^{j pi (nx sin(psi) cos(phi) + ny sin(phi))} / sqrt(n_x n_y), flattened
// with the horizontal index fastest: n = ny * n_x + nx.
CMatrix upa_steering(double azimuth, double elevation, std::size_t n_x, std::size_t n_y);

// Angles of the ray from `from` toward `to`; throws for coincident points.
AngleSet angles_between(const Vec3& from, const Vec3& to);

// Linear power gain 10^(c0_db/10) * d^-alpha; throws for d <= 0.
double path_loss_linear(double distance_m, double alpha, const PathLossConfig& cfg);

// Sparse multipath synthesis (Saleh-Valenzuela style): path 0 of each link
// is the LoS segment;
// each scatterer adds one path whose distance is the sum of its two
// segments. Path gains are sqrt(PL) e^{j chi} with chi drawn from rng, so
// the realization is deterministic given the stream.
ChannelRealization synthesize_channel_paths(const ScenarioGeometry& geom,
                                            const ArrayConfig& arrays, const PathLossConfig& pl,
                                            RngStream rng);
ChannelPair synthesize_channels(const ScenarioGeometry& geom, const ArrayConfig& arrays,
                                const PathLossConfig& pl, RngStream rng);

// H_r diag(theta) G; theta is N x 1 with unit-modulus entries.
CMatrix composite_channel(const ChannelPair& pair, const CMatrix& theta);

// Fixture CSV: header (link,path,row,col,re,im), one row per entry of each
// per-path contribution.
void write_channel_fixture(std::ostream& out, const ChannelRealization& ch);
ChannelRealization read_channel_fixture(std::istream& in);

} // namespace rislab
