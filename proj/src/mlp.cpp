#include "rislab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rislab {

const char* activation_name(Activation a) {
    switch (a) {
    case Activation::Tanh:
        return "tanh";
    case Activation::Linear:
        return "linear";
    }
    return "linear";
}

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") {
        return Activation::Tanh;
    }
    if (name == "linear") {
        return Activation::Linear;
    }
    throw std::invalid_argument("unknown activation: " + name);
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const DenseLayer& l : layers) {
        n += l.weights.size() + l.biases.size();
    }
    return n;
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
    MlpGrads g;
    g.layers.reserve(net.layers.size());
    for (const DenseLayer& l : net.layers) {
        g.layers.push_back({std::vector<double>(l.weights.size(), 0.0),
                            std::vector<double>(l.biases.size(), 0.0)});
    }
    return g;
}

void MlpGrads::resize_like(const Mlp& net) {
    layers.resize(net.layers.size());
    for (std::size_t k = 0; k < layers.size(); ++k) {
        layers[k].weights.resize(net.layers[k].weights.size());
        layers[k].biases.resize(net.layers[k].biases.size());
    }
}

void MlpGrads::set_zero() {
    for (LayerGrads& l : layers) {
        std::fill(l.weights.begin(), l.weights.end(), 0.0);
        std::fill(l.biases.begin(), l.biases.end(), 0.0);
    }
}

void MlpGrads::accumulate(const MlpGrads& other, double s) {
    if (layers.size() != other.layers.size()) {
        throw std::invalid_argument("MlpGrads::accumulate: layer count mismatch");
    }
    for (std::size_t k = 0; k < layers.size(); ++k) {
        for (std::size_t i = 0; i < layers[k].weights.size(); ++i) {
            layers[k].weights[i] += s * other.layers[k].weights[i];
        }
        for (std::size_t i = 0; i < layers[k].biases.size(); ++i) {
            layers[k].biases[i] += s * other.layers[k].biases[i];
        }
    }
}

void MlpGrads::scale(double s) {
    for (LayerGrads& l : layers) {
        for (double& w : l.weights) {
            w *= s;
        }
        for (double& b : l.biases) {
            b *= s;
        }
    }
}

Mlp init_mlp(const std::vector<std::size_t>& dims, const std::vector<Activation>& activations,
             RngStream rng) {
    if (dims.empty() || dims.size() != activations.size() + 1) {
        throw std::invalid_argument("init_mlp: dims must have one more entry than activations");
    }
    Mlp net;
    net.layers.resize(activations.size());
    for (std::size_t k = 0; k < activations.size(); ++k) {
        DenseLayer& l = net.layers[k];
        l.in_dim = dims[k];
        l.out_dim = dims[k + 1];
        l.activation = activations[k];
        if (l.in_dim == 0 || l.out_dim == 0) {
            throw std::invalid_argument("init_mlp: zero layer dimension");
        }
        const double limit = std::sqrt(6.0 / static_cast<double>(l.in_dim + l.out_dim));
        l.weights.resize(l.out_dim * l.in_dim);
        for (double& w : l.weights) {
            w = rng.uniform(-limit, limit);
        }
        l.biases.assign(l.out_dim, 0.0);
    }
    return net;
}

RealVector forward(const Mlp& net, const RealVector& input, ForwardTape* tape) {
    if (net.layers.empty()) {
        throw std::invalid_argument("forward: empty network");
    }
    if (input.size() != net.input_dim()) {
        throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                    " does not match first layer in_dim " +
                                    std::to_string(net.input_dim()));
    }
    if (tape) {
        tape->inputs.clear();
        tape->pre_acts.clear();
    }
    RealVector x = input;
    for (const DenseLayer& l : net.layers) {
        RealVector z(l.out_dim);
        for (std::size_t i = 0; i < l.out_dim; ++i) {
            double acc = l.biases[i];
            const double* wrow = &l.weights[i * l.in_dim];
            for (std::size_t j = 0; j < l.in_dim; ++j) {
                acc += wrow[j] * x[j];
            }
            z[i] = acc;
        }
        if (tape) {
            tape->inputs.push_back(std::move(x));
            tape->pre_acts.push_back(z);
        }
        if (l.activation == Activation::Tanh) {
            for (double& v : z) {
                v = std::tanh(v);
            }
        }
        x = std::move(z);
    }
    if (tape) {
        tape->output = x;
    }
    return x;
}

void backward_into(const Mlp& net, const ForwardTape& tape, const RealVector& output_grad,
                   BackwardResult& out) {
    if (tape.inputs.size() != net.layers.size() || tape.pre_acts.size() != net.layers.size()) {
        throw std::invalid_argument("backward: tape does not match network layer count");
    }
    if (output_grad.size() != net.output_dim()) {
        throw std::invalid_argument("backward: output_grad length " +
                                    std::to_string(output_grad.size()) +
                                    " does not match output dim " +
                                    std::to_string(net.output_dim()));
    }
    out.grads.resize_like(net);
    RealVector dy = output_grad; // gradient w.r.t. layer output (post-activation)
    for (std::size_t k = net.layers.size(); k-- > 0;) {
        const DenseLayer& l = net.layers[k];
        const RealVector& x = tape.inputs[k];
        const RealVector& z = tape.pre_acts[k];
        if (x.size() != l.in_dim || z.size() != l.out_dim) {
            throw std::invalid_argument("backward: tape shapes do not match layer " +
                                        std::to_string(k));
        }
        RealVector& dz = dy; // activation derivative applied in place
        if (l.activation == Activation::Tanh) {
            for (std::size_t i = 0; i < l.out_dim; ++i) {
                const double t = std::tanh(z[i]);
                dz[i] *= 1.0 - t * t;
            }
        }
        LayerGrads& g = out.grads.layers[k];
        for (std::size_t i = 0; i < l.out_dim; ++i) {
            g.biases[i] = dz[i];
            double* grow = &g.weights[i * l.in_dim];
            for (std::size_t j = 0; j < l.in_dim; ++j) {
                grow[j] = dz[i] * x[j];
            }
        }
        RealVector dx(l.in_dim, 0.0);
        for (std::size_t i = 0; i < l.out_dim; ++i) {
            const double* wrow = &l.weights[i * l.in_dim];
            const double d = dz[i];
            for (std::size_t j = 0; j < l.in_dim; ++j) {
                dx[j] += wrow[j] * d;
            }
        }
        dy = std::move(dx);
    }
    out.input_grad = std::move(dy);
}

BackwardResult backward(const Mlp& net, const ForwardTape& tape, const RealVector& output_grad) {
    BackwardResult res;
    backward_into(net, tape, output_grad, res);
    return res;
}

void sgd_step(Mlp& net, const MlpGrads& grads, const SgdConfig& cfg) {
    if (grads.layers.size() != net.layers.size()) {
        throw std::invalid_argument("sgd_step: gradient layer count mismatch");
    }
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        DenseLayer& l = net.layers[k];
        const LayerGrads& g = grads.layers[k];
        if (g.weights.size() != l.weights.size() || g.biases.size() != l.biases.size()) {
            throw std::invalid_argument("sgd_step: gradient shape mismatch at layer " +
                                        std::to_string(k));
        }
        for (std::size_t i = 0; i < l.weights.size(); ++i) {
            l.weights[i] -= cfg.learning_rate * g.weights[i];
        }
        for (std::size_t i = 0; i < l.biases.size(); ++i) {
            l.biases[i] -= cfg.learning_rate * g.biases[i];
        }
    }
}

namespace {

void write_doubles(std::ostream& out, const std::vector<double>& v) {
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%a", v[i]);
        out << buf << (i + 1 == v.size() ? "" : " ");
    }
    out << "\n";
}

std::vector<double> read_doubles(std::istream& in, std::size_t count) {
    std::vector<double> v(count);
    std::string tok;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> tok)) {
            throw std::runtime_error("mlp checkpoint: unexpected end of parameter data");
        }
        v[i] = std::strtod(tok.c_str(), nullptr);
    }
    return v;
}

} // namespace

void save_mlp(const Mlp& net, std::ostream& out) {
    out << "mlp 1\n";
    out << "layers " << net.layers.size() << "\n";
    for (const DenseLayer& l : net.layers) {
        out << "layer " << l.in_dim << " " << l.out_dim << " " << activation_name(l.activation)
            << "\n";
        write_doubles(out, l.weights);
        write_doubles(out, l.biases);
    }
}

Mlp load_mlp(std::istream& in) {
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "mlp" || version != 1) {
        throw std::runtime_error("mlp checkpoint: bad header");
    }
    std::size_t count = 0;
    if (!(in >> tag >> count) || tag != "layers") {
        throw std::runtime_error("mlp checkpoint: missing layer count");
    }
    Mlp net;
    net.layers.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        DenseLayer& l = net.layers[k];
        std::string act;
        if (!(in >> tag >> l.in_dim >> l.out_dim >> act) || tag != "layer") {
            throw std::runtime_error("mlp checkpoint: bad layer header");
        }
        l.activation = activation_from_name(act);
        l.weights = read_doubles(in, l.in_dim * l.out_dim);
        l.biases = read_doubles(in, l.out_dim);
    }
    return net;
}

void save_mlp_file(const Mlp& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    save_mlp(net, out);
}

Mlp load_mlp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    return load_mlp(in);
}

} // namespace rislab
