#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rislab/cmatrix.hpp"
#include "rislab/rng.hpp"

namespace rislab {

enum class Activation { Tanh, Linear };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct DenseLayer {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weights; // out_dim x in_dim, row-major
    std::vector<double> biases;  // out_dim
    Activation activation = Activation::Linear;
};

// Dense feed-forward network. Layer dims chain: layer k's out_dim is
// layer k+1's in_dim.
struct Mlp {
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }
    std::size_t parameter_count() const;
};

struct SgdConfig {
    double learning_rate = 1e-3;
};

struct LayerGrads {
    std::vector<double> weights;
    std::vector<double> biases;
};

struct MlpGrads {
    std::vector<LayerGrads> layers;

    static MlpGrads zeros_like(const Mlp& net);
    void resize_like(const Mlp& net);
    void set_zero();
    void accumulate(const MlpGrads& other, double scale = 1.0);
    void scale(double s);
};

// Per-layer cache from a forward pass, sufficient to run backward without
// re-evaluating the network.
struct ForwardTape {
    std::vector<RealVector> inputs;   // input to each layer
    std::vector<RealVector> pre_acts; // z = Wx + b per layer
    RealVector output;
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
// dims has one more entry than activations.
Mlp init_mlp(const std::vector<std::size_t>& dims, const std::vector<Activation>& activations,
             RngStream rng);

RealVector forward(const Mlp& net, const RealVector& input, ForwardTape* tape = nullptr);

struct BackwardResult {
    MlpGrads grads;
    RealVector input_grad;
};

// Exact reverse-mode gradients of the scalar whose output gradient is
// supplied, with respect to every weight, bias, and the input.
BackwardResult backward(const Mlp& net, const ForwardTape& tape, const RealVector& output_grad);

// Allocation-free variant for training loops: overwrites (and reshapes if
// needed) the caller's result buffers.
void backward_into(const Mlp& net, const ForwardTape& tape, const RealVector& output_grad,
                   BackwardResult& out);

// p <- p - learning_rate * grad(p), in place.
void sgd_step(Mlp& net, const MlpGrads& grads, const SgdConfig& cfg);

// Checkpoint format: line-oriented text with hexfloat parameters, so a
// load reproduces the parameters bit-exactly.
void save_mlp(const Mlp& net, std::ostream& out);
Mlp load_mlp(std::istream& in);
void save_mlp_file(const Mlp& net, const std::string& path);
Mlp load_mlp_file(const std::string& path);

} // namespace rislab
