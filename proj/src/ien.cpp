#include "rislab/ien.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rislab {

namespace {

double minmax_scale(double v, double lo, double hi) {
    if (!(hi > lo)) {
        return 0.0;
    }
    return 2.0 * (v - lo) / (hi - lo) - 1.0;
}

RealVector encode_coords(const Vec3& a, const Vec3& b, const Vec3& lo, const Vec3& hi) {
    return {minmax_scale(a.x, lo.x, hi.x), minmax_scale(a.y, lo.y, hi.y),
            minmax_scale(a.z, lo.z, hi.z), minmax_scale(b.x, lo.x, hi.x),
            minmax_scale(b.y, lo.y, hi.y), minmax_scale(b.z, lo.z, hi.z)};
}

// diag(theta) * g
CMatrix scale_theta_rows(const CMatrix& g, const RisPhases& theta) {
    CMatrix out = g;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const Complex t = theta.theta[i];
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) *= t;
        }
    }
    return out;
}

// h * diag(theta)
CMatrix scale_theta_cols(const CMatrix& h, const RisPhases& theta) {
    CMatrix out = h;
    for (std::size_t j = 0; j < out.cols(); ++j) {
        const Complex t = theta.theta[j];
        for (std::size_t i = 0; i < out.rows(); ++i) {
            out(i, j) *= t;
        }
    }
    return out;
}

} // namespace

IenModel make_ien_model(std::size_t m, std::size_t k, std::size_t n, const Vec3& box_lo,
                        const Vec3& box_hi, double channel_scale, RngStream rng) {
    if (m == 0 || k == 0 || n == 0) {
        throw std::invalid_argument("make_ien_model: array dimensions must be positive");
    }
    IenModel model;
    model.m = m;
    model.k = k;
    model.n = n;
    model.box_lo = box_lo;
    model.box_hi = box_hi;
    model.channel_scale = channel_scale;
    const std::vector<Activation> acts{Activation::Tanh, Activation::Tanh, Activation::Linear};
    model.bs_ris_net = init_mlp({6, 128, 64, 2 * m * n}, acts, rng.split("bs-ris-net"));
    model.ris_ue_net = init_mlp({6, 128, 64, 2 * k * n}, acts, rng.split("ris-ue-net"));
    return model;
}

IenPrediction ien_predict(const IenModel& model, const IenLocations& locs,
                          const RisPhases& theta) {
    if (theta.size() != model.n) {
        throw std::invalid_argument("ien_predict: theta length does not match N");
    }
    const double root_scale = std::sqrt(model.channel_scale);
    const RealVector in_br = encode_coords(locs.bs, locs.ris, model.box_lo, model.box_hi);
    const RealVector in_ru = encode_coords(locs.ris, locs.ue, model.box_lo, model.box_hi);

    IenPrediction pred;
    pred.g_hat = realvec_to_complex(forward(model.bs_ris_net, in_br), model.n, model.m);
    pred.g_hat *= Complex(root_scale, 0.0);
    pred.h_r_hat = realvec_to_complex(forward(model.ris_ue_net, in_ru), model.k, model.n);
    pred.h_r_hat *= Complex(root_scale, 0.0);
    pred.h_hat = matmul(pred.h_r_hat, scale_theta_rows(pred.g_hat, theta));
    return pred;
}

double ien_mse(const std::vector<CMatrix>& h_hats, const std::vector<CMatrix>& labels) {
    if (h_hats.size() != labels.size()) {
        throw std::invalid_argument("ien_mse: list lengths differ");
    }
    if (h_hats.empty()) {
        throw std::invalid_argument("ien_mse: empty batch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < h_hats.size(); ++i) {
        CMatrix diff = h_hats[i];
        diff -= labels[i];
        acc += frob_norm_sq(diff);
    }
    return acc / static_cast<double>(h_hats.size());
}

namespace {

// Scratch buffers reused across a training loop's samples.
struct IenBackwardWork {
    ForwardTape tape_br, tape_ru;
    BackwardResult back_br, back_ru;
};

void ien_backward_impl(const IenModel& model, const IenLocations& locs, const RisPhases& theta,
                       const CMatrix& label, IenBackwardWork& work) {
    const double root_scale = std::sqrt(model.channel_scale);
    const RealVector in_br = encode_coords(locs.bs, locs.ris, model.box_lo, model.box_hi);
    const RealVector in_ru = encode_coords(locs.ris, locs.ue, model.box_lo, model.box_hi);

    CMatrix g_hat = realvec_to_complex(forward(model.bs_ris_net, in_br, &work.tape_br),
                                       model.n, model.m);
    g_hat *= Complex(root_scale, 0.0);
    CMatrix h_r_hat = realvec_to_complex(forward(model.ris_ue_net, in_ru, &work.tape_ru),
                                         model.k, model.n);
    h_r_hat *= Complex(root_scale, 0.0);

    const CMatrix theta_g = scale_theta_rows(g_hat, theta);     // Theta G
    const CMatrix h_r_theta = scale_theta_cols(h_r_hat, theta); // H_r Theta
    CMatrix err = matmul(h_r_hat, theta_g);
    err -= label; // E = H_hat - label

    // d||E||^2 / dG = 2 (H_r Theta)^H E, d/dH_r = 2 E (Theta G)^H; the real
    // encoding of these complex gradients is exactly the gradient w.r.t.
    // the stacked re/im network outputs, up to the sqrt-scale factor.
    CMatrix grad_g = matmul(conj_transpose(h_r_theta), err);
    grad_g *= Complex(2.0 * root_scale, 0.0);
    CMatrix grad_h_r = matmul(err, conj_transpose(theta_g));
    grad_h_r *= Complex(2.0 * root_scale, 0.0);

    backward_into(model.bs_ris_net, work.tape_br, complex_to_realvec(grad_g), work.back_br);
    backward_into(model.ris_ue_net, work.tape_ru, complex_to_realvec(grad_h_r), work.back_ru);
}

} // namespace

IenGrads ien_backward(const IenModel& model, const IenLocations& locs, const RisPhases& theta,
                      const CMatrix& label) {
    IenBackwardWork work;
    ien_backward_impl(model, locs, theta, label, work);
    return {std::move(work.back_br.grads), std::move(work.back_ru.grads)};
}

std::vector<IenSample> generate_ien_dataset(const ScenarioGeometry& geom_base,
                                            const UeArea& ue_area, const ArrayConfig& arrays,
                                            const PathLossConfig& pl,
                                            const IenDatasetConfig& cfg) {
    if (cfg.u_locations == 0 || cfg.f_thetas_per_location == 0) {
        throw std::invalid_argument("generate_ien_dataset: U and F must be positive");
    }
    RngStream root(cfg.rng_seed);
    RngStream loc_rng = root.split("ue-locations");
    RngStream theta_rng = root.split("theta-draws");
    RngStream noise_rng = root.split("label-noise");
    RngStream perturb_rng = root.split("location-error");
    // One phase stream for every synthesis call: path phases depend on the
    // path identity only, not on the UE position, so the location-to-channel
    // map is a fixed function.
    const RngStream phase_rng = root.split("path-phases");

    const std::size_t n = arrays.ris_elements();
    std::vector<IenSample> dataset;
    dataset.reserve(cfg.u_locations * cfg.f_thetas_per_location);
    for (std::size_t u = 0; u < cfg.u_locations; ++u) {
        ScenarioGeometry geom = geom_base;
        const double r = ue_area.radius * std::sqrt(loc_rng.uniform());
        const double ang = loc_rng.uniform(0.0, 2.0 * M_PI);
        geom.ue = {ue_area.center.x + r * std::cos(ang), ue_area.center.y + r * std::sin(ang),
                   ue_area.center.z};
        const ChannelPair pair = synthesize_channels(geom, arrays, pl, phase_rng);
        const Vec3 recorded_ue =
            perturb_location(geom.ue, cfg.location_error_eta, ue_area, perturb_rng);
        for (std::size_t f = 0; f < cfg.f_thetas_per_location; ++f) {
            IenSample sample;
            sample.loc_bs = geom.bs;
            sample.loc_ris = geom.ris;
            sample.loc_ue = recorded_ue;
            sample.theta.theta.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double phi = theta_rng.uniform(0.0, 2.0 * M_PI);
                sample.theta.theta[i] = Complex(std::cos(phi), std::sin(phi));
            }
            sample.label = composite_channel(pair, sample.theta.as_column());
            if (cfg.label_noise_std > 0.0) {
                for (Complex& e : sample.label.entries()) {
                    e += cfg.label_noise_std *
                         Complex(noise_rng.gaussian(), noise_rng.gaussian());
                }
            }
            dataset.push_back(std::move(sample));
        }
    }
    return dataset;
}

double dataset_label_scale(const std::vector<IenSample>& dataset) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const IenSample& s : dataset) {
        acc += frob_norm_sq(s.label);
        count += s.label.size();
    }
    if (count == 0 || acc <= 0.0) {
        return 1.0;
    }
    return std::sqrt(acc / static_cast<double>(count));
}

IenTrainResult train_ien(IenModel& model, const std::vector<IenSample>& dataset,
                         const IenTrainConfig& cfg) {
    if (dataset.empty()) {
        throw std::invalid_argument("train_ien: dataset is empty");
    }
    IenTrainResult result;
    if (cfg.epochs == 0) {
        return result;
    }
    RngStream shuffle_rng = RngStream(cfg.shuffle_seed).split("ien-shuffle");
    const std::size_t batch = std::max<std::size_t>(1, cfg.batch);
    const double inv_norm = 1.0 / (model.channel_scale * model.channel_scale);

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto dataset_mse = [&]() {
        double acc = 0.0;
        for (const IenSample& s : dataset) {
            const IenPrediction pred =
                ien_predict(model, {s.loc_bs, s.loc_ris, s.loc_ue}, s.theta);
            CMatrix diff = pred.h_hat;
            diff -= s.label;
            acc += frob_norm_sq(diff);
        }
        return acc / static_cast<double>(dataset.size());
    };

    IenBackwardWork work;
    MlpGrads acc_br = MlpGrads::zeros_like(model.bs_ris_net);
    MlpGrads acc_ru = MlpGrads::zeros_like(model.ris_ue_net);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with the seeded stream
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);
        }
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t stop = std::min(order.size(), start + batch);
            acc_br.set_zero();
            acc_ru.set_zero();
            for (std::size_t idx = start; idx < stop; ++idx) {
                const IenSample& s = dataset[order[idx]];
                ien_backward_impl(model, {s.loc_bs, s.loc_ris, s.loc_ue}, s.theta, s.label,
                                  work);
                acc_br.accumulate(work.back_br.grads);
                acc_ru.accumulate(work.back_ru.grads);
            }
            const double scale = inv_norm / static_cast<double>(stop - start);
            acc_br.scale(scale);
            acc_ru.scale(scale);
            sgd_step(model.bs_ris_net, acc_br, cfg.sgd);
            sgd_step(model.ris_ue_net, acc_ru, cfg.sgd);
        }
        result.mse_trace.push_back(dataset_mse());
    }
    return result;
}

double ien_predicted_rate(const IenModel& model, const IenLocations& locs,
                          const RisPhases& theta, const TransmitCovariance& q, double sigma2) {
    const IenPrediction pred = ien_predict(model, locs, theta);
    return achievable_rate(pred.h_hat, q, sigma2);
}

void save_ien(const IenModel& model, std::ostream& out) {
    char buf[256];
    out << "ien 1\n";
    out << "dims " << model.m << " " << model.k << " " << model.n << "\n";
    std::snprintf(buf, sizeof(buf), "box %a %a %a %a %a %a\n", model.box_lo.x, model.box_lo.y,
                  model.box_lo.z, model.box_hi.x, model.box_hi.y, model.box_hi.z);
    out << buf;
    std::snprintf(buf, sizeof(buf), "scale %a\n", model.channel_scale);
    out << buf;
    save_mlp(model.bs_ris_net, out);
    save_mlp(model.ris_ue_net, out);
}

IenModel load_ien(std::istream& in) {
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "ien" || version != 1) {
        throw std::runtime_error("ien checkpoint: bad header");
    }
    IenModel model;
    if (!(in >> tag >> model.m >> model.k >> model.n) || tag != "dims") {
        throw std::runtime_error("ien checkpoint: missing dims");
    }
    std::string x[6];
    if (!(in >> tag >> x[0] >> x[1] >> x[2] >> x[3] >> x[4] >> x[5]) || tag != "box") {
        throw std::runtime_error("ien checkpoint: missing box");
    }
    model.box_lo = {std::strtod(x[0].c_str(), nullptr), std::strtod(x[1].c_str(), nullptr),
                    std::strtod(x[2].c_str(), nullptr)};
    model.box_hi = {std::strtod(x[3].c_str(), nullptr), std::strtod(x[4].c_str(), nullptr),
                    std::strtod(x[5].c_str(), nullptr)};
    if (!(in >> tag >> x[0]) || tag != "scale") {
        throw std::runtime_error("ien checkpoint: missing scale");
    }
    model.channel_scale = std::strtod(x[0].c_str(), nullptr);
    model.bs_ris_net = load_mlp(in);
    model.ris_ue_net = load_mlp(in);
    return model;
}

void save_ien_file(const IenModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    save_ien(model, out);
}

IenModel load_ien_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    return load_ien(in);
}

void write_ien_dataset(std::ostream& out, const std::vector<IenSample>& dataset) {
    out << "sample,bs_x,bs_y,bs_z,ris_x,ris_y,ris_z,ue_x,ue_y,ue_z,theta,label\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const IenSample& s = dataset[i];
        out << i << "," << num(s.loc_bs.x) << "," << num(s.loc_bs.y) << "," << num(s.loc_bs.z)
            << "," << num(s.loc_ris.x) << "," << num(s.loc_ris.y) << "," << num(s.loc_ris.z)
            << "," << num(s.loc_ue.x) << "," << num(s.loc_ue.y) << "," << num(s.loc_ue.z);
        out << ",";
        for (std::size_t t = 0; t < s.theta.size(); ++t) {
            out << (t ? ";" : "") << num(s.theta.theta[t].real()) << ";"
                << num(s.theta.theta[t].imag());
        }
        out << ",";
        const RealVector lab = complex_to_realvec(s.label);
        for (std::size_t t = 0; t < lab.size(); ++t) {
            out << (t ? ";" : "") << num(lab[t]);
        }
        out << "\n";
    }
}

std::vector<IenSample> read_ien_dataset(std::istream& in, std::size_t m, std::size_t k,
                                        std::size_t n) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("ien dataset: empty file");
    }
    std::vector<IenSample> dataset;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) {
            fields.push_back(tok);
        }
        if (fields.size() != 12) {
            throw std::runtime_error("ien dataset: bad row with " +
                                     std::to_string(fields.size()) + " fields");
        }
        IenSample s;
        auto d = [&](std::size_t i) { return std::strtod(fields[i].c_str(), nullptr); };
        s.loc_bs = {d(1), d(2), d(3)};
        s.loc_ris = {d(4), d(5), d(6)};
        s.loc_ue = {d(7), d(8), d(9)};
        std::vector<double> theta_vals;
        {
            std::stringstream ts(fields[10]);
            while (std::getline(ts, tok, ';')) {
                theta_vals.push_back(std::strtod(tok.c_str(), nullptr));
            }
        }
        if (theta_vals.size() != 2 * n) {
            throw std::runtime_error("ien dataset: theta length mismatch");
        }
        s.theta.theta.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.theta.theta[i] = Complex(theta_vals[2 * i], theta_vals[2 * i + 1]);
        }
        RealVector lab;
        {
            std::stringstream ls(fields[11]);
            while (std::getline(ls, tok, ';')) {
                lab.push_back(std::strtod(tok.c_str(), nullptr));
            }
        }
        s.label = realvec_to_complex(lab, k, m);
        dataset.push_back(std::move(s));
    }
    return dataset;
}

} // namespace rislab
