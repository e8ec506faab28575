#include "rislab/channel.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rislab {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }

double norm(const Vec3& a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }
double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

ChannelPair ChannelRealization::total() const {
    if (g_paths.empty() || h_r_paths.empty()) {
        throw std::invalid_argument("ChannelRealization::total: no paths");
    }
    ChannelPair pair{g_paths.front(), h_r_paths.front()};
    for (std::size_t i = 1; i < g_paths.size(); ++i) {
        pair.g += g_paths[i];
    }
    for (std::size_t i = 1; i < h_r_paths.size(); ++i) {
        pair.h_r += h_r_paths[i];
    }
    return pair;
}

CMatrix ula_steering(double elevation, std::size_t n_elements) {
    if (n_elements == 0) {
        throw std::invalid_argument("ula_steering: element count must be positive");
    }
    CMatrix a(n_elements, 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
    const double s = std::sin(elevation);
    for (std::size_t n = 0; n < n_elements; ++n) {
        const double arg = M_PI * static_cast<double>(n) * s;
        a(n, 0) = scale * Complex(std::cos(arg), std::sin(arg));
    }
    return a;
}

CMatrix upa_steering(double azimuth, double elevation, std::size_t n_x, std::size_t n_y) {
    if (n_x == 0 || n_y == 0) {
        throw std::invalid_argument("upa_steering: element counts must be positive");
    }
    CMatrix a(n_x * n_y, 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_x * n_y));
    const double sx = std::sin(azimuth) * std::cos(elevation);
    const double sy = std::sin(elevation);
    for (std::size_t iy = 0; iy < n_y; ++iy) {
        for (std::size_t ix = 0; ix < n_x; ++ix) {
            const double arg =
                M_PI * (static_cast<double>(ix) * sx + static_cast<double>(iy) * sy);
            a(iy * n_x + ix, 0) = scale * Complex(std::cos(arg), std::sin(arg));
        }
    }
    return a;
}

AngleSet angles_between(const Vec3& from, const Vec3& to) {
    const Vec3 d = to - from;
    const double r = norm(d);
    if (!(r > 0.0)) {
        throw std::invalid_argument("angles_between: points coincide");
    }
    AngleSet out;
    out.elevation = std::asin(d.z / r);
    out.azimuth = std::atan2(d.y, d.x);
    return out;
}

double path_loss_linear(double distance_m, double alpha, const PathLossConfig& cfg) {
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("path_loss_linear: distance must be positive");
    }
    return std::pow(10.0, cfg.c0_db / 10.0) * std::pow(distance_m, -alpha);
}

namespace {

Complex random_phase(RngStream& rng) {
    const double chi = rng.uniform(0.0, 2.0 * M_PI);
    return Complex(std::cos(chi), std::sin(chi));
}

} // namespace

ChannelRealization synthesize_channel_paths(const ScenarioGeometry& geom,
                                            const ArrayConfig& arrays, const PathLossConfig& pl,
                                            RngStream rng) {
    const std::size_t n = arrays.ris_elements();
    const std::size_t m = arrays.m_bs;
    const std::size_t k = arrays.k_ue;

    ChannelRealization out;

    // G: BS -> RIS. Arrival at the RIS (UPA), departure from the BS (ULA).
    {
        const std::size_t l_g = 1 + geom.scatterers_bs_ris.size();
        const double prefactor =
            std::sqrt(static_cast<double>(m * n) / static_cast<double>(l_g));
        for (std::size_t p = 0; p < l_g; ++p) {
            double d;
            AngleSet aoa_ris, aod_bs;
            if (p == 0) {
                d = distance(geom.bs, geom.ris);
                aoa_ris = angles_between(geom.ris, geom.bs);
                aod_bs = angles_between(geom.bs, geom.ris);
            } else {
                const Vec3& sc = geom.scatterers_bs_ris[p - 1];
                d = distance(geom.bs, sc) + distance(sc, geom.ris);
                aoa_ris = angles_between(geom.ris, sc);
                aod_bs = angles_between(geom.bs, sc);
            }
            const double gain = std::sqrt(path_loss_linear(d, pl.alpha_bs_ris, pl));
            const Complex coef = prefactor * gain * random_phase(rng);
            const CMatrix a_p = upa_steering(aoa_ris.azimuth, aoa_ris.elevation, arrays.n_x,
                                             arrays.n_y);
            const CMatrix a_l_h = conj_transpose(ula_steering(aod_bs.elevation, m));
            out.g_paths.push_back(coef * matmul(a_p, a_l_h));
        }
    }

    // H_r: RIS -> UE. Arrival at the UE (ULA), departure from the RIS (UPA).
    {
        const std::size_t l_d = 1 + geom.scatterers_ris_ue.size();
        const double prefactor =
            std::sqrt(static_cast<double>(n * k) / static_cast<double>(l_d));
        for (std::size_t p = 0; p < l_d; ++p) {
            double d;
            AngleSet aoa_ue, aod_ris;
            if (p == 0) {
                d = distance(geom.ris, geom.ue);
                aoa_ue = angles_between(geom.ue, geom.ris);
                aod_ris = angles_between(geom.ris, geom.ue);
            } else {
                const Vec3& sc = geom.scatterers_ris_ue[p - 1];
                d = distance(geom.ris, sc) + distance(sc, geom.ue);
                aoa_ue = angles_between(geom.ue, sc);
                aod_ris = angles_between(geom.ris, sc);
            }
            const double gain = std::sqrt(path_loss_linear(d, pl.alpha_ris_ue, pl));
            const Complex coef = prefactor * gain * random_phase(rng);
            const CMatrix a_l = ula_steering(aoa_ue.elevation, k);
            const CMatrix a_p_h = conj_transpose(
                upa_steering(aod_ris.azimuth, aod_ris.elevation, arrays.n_x, arrays.n_y));
            out.h_r_paths.push_back(coef * matmul(a_l, a_p_h));
        }
    }

    return out;
}

ChannelPair synthesize_channels(const ScenarioGeometry& geom, const ArrayConfig& arrays,
                                const PathLossConfig& pl, RngStream rng) {
    return synthesize_channel_paths(geom, arrays, pl, rng).total();
}

CMatrix composite_channel(const ChannelPair& pair, const CMatrix& theta) {
    const std::size_t n = pair.g.rows();
    if (theta.rows() != n || theta.cols() != 1) {
        throw std::invalid_argument("composite_channel: theta must be " + std::to_string(n) +
                                    "x1");
    }
    if (pair.h_r.cols() != n) {
        throw std::invalid_argument("composite_channel: H_r column count does not match G rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(std::abs(theta(i, 0)) - 1.0) > 1e-9) {
            throw std::invalid_argument("composite_channel: theta entry " + std::to_string(i) +
                                        " is not unit modulus");
        }
    }
    // H_r diag(theta) G without forming the diagonal matrix.
    CMatrix scaled = pair.g;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex t = theta(i, 0);
        for (std::size_t j = 0; j < scaled.cols(); ++j) {
            scaled(i, j) *= t;
        }
    }
    return matmul(pair.h_r, scaled);
}

void write_channel_fixture(std::ostream& out, const ChannelRealization& ch) {
    out << "link,path,row,col,re,im\n";
    char buf[64];
    auto dump = [&](const char* link, const std::vector<CMatrix>& paths) {
        for (std::size_t p = 0; p < paths.size(); ++p) {
            const CMatrix& m = paths[p];
            for (std::size_t i = 0; i < m.rows(); ++i) {
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(),
                                  m(i, j).imag());
                    out << link << "," << p << "," << i << "," << j << "," << buf << "\n";
                }
            }
        }
    };
    dump("G", ch.g_paths);
    dump("Hr", ch.h_r_paths);
}

ChannelRealization read_channel_fixture(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "link,path,row,col,re,im") {
        throw std::runtime_error("channel fixture: bad header");
    }
    struct Entry {
        std::size_t row, col;
        Complex value;
    };
    std::map<std::pair<std::string, std::size_t>, std::vector<Entry>> cells;
    std::map<std::pair<std::string, std::size_t>, std::pair<std::size_t, std::size_t>> dims;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string link, tok;
        std::getline(ss, link, ',');
        std::getline(ss, tok, ',');
        const std::size_t path = std::stoul(tok);
        std::getline(ss, tok, ',');
        const std::size_t row = std::stoul(tok);
        std::getline(ss, tok, ',');
        const std::size_t col = std::stoul(tok);
        std::getline(ss, tok, ',');
        const double re = std::strtod(tok.c_str(), nullptr);
        std::getline(ss, tok, ',');
        const double im = std::strtod(tok.c_str(), nullptr);
        auto key = std::make_pair(link, path);
        cells[key].push_back({row, col, Complex(re, im)});
        auto& d = dims[key];
        d.first = std::max(d.first, row + 1);
        d.second = std::max(d.second, col + 1);
    }
    ChannelRealization out;
    auto build = [&](const std::string& link, std::vector<CMatrix>& dest) {
        for (std::size_t p = 0;; ++p) {
            auto key = std::make_pair(link, p);
            auto it = cells.find(key);
            if (it == cells.end()) {
                break;
            }
            CMatrix m(dims[key].first, dims[key].second);
            for (const Entry& e : it->second) {
                m(e.row, e.col) = e.value;
            }
            dest.push_back(std::move(m));
        }
    };
    build("G", out.g_paths);
    build("Hr", out.h_r_paths);
    if (out.g_paths.empty() || out.h_r_paths.empty()) {
        throw std::runtime_error("channel fixture: missing link data");
    }
    return out;
}

} // namespace rislab
