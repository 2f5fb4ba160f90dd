#include "nn/model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "autodiff/ops.hpp"

namespace copsurv::nn {

using nlohmann::json;

std::string_view to_string(Architecture a) {
  return a == Architecture::lstm ? "lstm" : "cnn-lstm";
}

Architecture architecture_from_string(std::string_view s) {
  if (s == "lstm") return Architecture::lstm;
  if (s == "cnn-lstm") return Architecture::cnn_lstm;
  throw std::invalid_argument("unknown architecture '" + std::string(s) + "'");
}

std::string_view display_name(Architecture a) {
  return a == Architecture::lstm ? "LSTM" : "CNN-LSTM";
}

std::size_t ModelSpec::lstm_input_length() const {
  std::size_t len = timesteps;
  if (architecture == Architecture::lstm) return len;
  for (int stage = 0; stage < 2; ++stage) {
    if (len < conv_kernel) {
      throw std::invalid_argument("timesteps " + std::to_string(timesteps) +
                                  " too short for the conv/pool stack");
    }
    len = len - conv_kernel + 1;
    if (len < pool) {
      throw std::invalid_argument("timesteps " + std::to_string(timesteps) +
                                  " too short for the conv/pool stack");
    }
    len /= pool;
  }
  return len;
}

void ModelSpec::validate() const {
  if (timesteps == 0 || features == 0 || hidden == 0 || heads == 0 || lstm_layers == 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (conv_kernel == 0 || conv_channels[0] == 0 || conv_channels[1] == 0) {
    throw std::invalid_argument("conv kernel and channels must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("dropout must lie in [0,1)");
  lstm_input_length();
}

std::string ModelSpec::label() const {
  return std::string(display_name(architecture)) + " " +
         std::string(copula::display_name(variant));
}

namespace {

Tensor glorot(std::size_t rows, std::size_t cols, double fan_in, double fan_out, Rng& rng) {
  double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = rng.uniform(-limit, limit);
  return Tensor::matrix(rows, cols, std::move(v), true);
}

LstmWeights make_lstm(std::size_t d, std::size_t h, Rng& rng) {
  auto w = [&] { return glorot(h, d, static_cast<double>(d), static_cast<double>(h), rng); };
  auto u = [&] { return glorot(h, h, static_cast<double>(h), static_cast<double>(h), rng); };
  LstmWeights l;
  l.w_f = w(); l.w_i = w(); l.w_c = w(); l.w_o = w();
  l.u_f = u(); l.u_i = u(); l.u_c = u(); l.u_o = u();
  l.b_f = Tensor::full({h}, 1.0, true);
  l.b_i = Tensor::zeros({h}, true);
  l.b_c = Tensor::zeros({h}, true);
  l.b_o = Tensor::zeros({h}, true);
  return l;
}

json tensor_json(const Tensor& t) {
  return {{"shape", t.shape()}, {"data", std::vector<double>(t.data().begin(), t.data().end())}};
}

Tensor tensor_from_json(const json& j) {
  return Tensor::from(j.at("shape").get<ad::Shape>(), j.at("data").get<std::vector<double>>(),
                      true);
}

}  // namespace

Model Model::build(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model m;
  m.spec_ = spec;
  m.seed_ = seed;
  Rng rng = Rng::substream(seed, 0x1a17);

  std::size_t width = spec.features;
  if (spec.architecture == Architecture::cnn_lstm) {
    for (std::size_t out : spec.conv_channels) {
      double k = static_cast<double>(spec.conv_kernel);
      ConvWeights c;
      c.k = spec.conv_kernel;
      c.kernel = glorot(out, spec.conv_kernel * width, k * static_cast<double>(width),
                        k * static_cast<double>(out), rng);
      c.bias = Tensor::zeros({out}, true);
      m.convs_.push_back(std::move(c));
      width = out;
    }
  }
  for (std::size_t l = 0; l < spec.lstm_layers; ++l) {
    m.lstms_.push_back(make_lstm(width, spec.hidden, rng));
    m.norms_.push_back(BatchNorm::create(spec.hidden));
    width = spec.hidden;
  }
  m.w_out_ = glorot(spec.heads, spec.hidden, static_cast<double>(spec.hidden),
                    static_cast<double>(spec.heads), rng);
  m.b_out_ = Tensor::zeros({spec.heads}, true);
  m.copula_ = copula::CopulaParams::initial(spec.variant, spec.heads);
  m.target_scale_.assign(spec.heads, 1.0);
  return m;
}

void Model::set_target_scale(std::vector<double> scale) {
  if (scale.size() != spec_.heads) throw std::invalid_argument("target scale needs one value per head");
  for (double s : scale) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("target scale must be finite and > 0");
  }
  target_scale_ = std::move(scale);
}

Tensor Model::forward(const Sequence& input, Mode mode, Rng& rng) {
  if (input.size() != spec_.timesteps) {
    throw std::invalid_argument("forward: expected " + std::to_string(spec_.timesteps) +
                                " steps, got " + std::to_string(input.size()));
  }
  Sequence seq = input;
  for (const auto& conv : convs_) seq = maxpool1d(conv1d_forward(seq, conv), spec_.pool);

  Tensor last;
  for (std::size_t l = 0; l < lstms_.size(); ++l) {
    Sequence out = lstm_layer_forward(seq, lstms_[l]);
    if (l + 1 < lstms_.size()) {
      std::size_t batch = out[0].rows();
      Tensor stacked = ad::concat_rows(out);
      stacked = dropout_forward(batchnorm_forward(stacked, norms_[l], mode), spec_.dropout, mode,
                                rng);
      seq.clear();
      for (std::size_t t = 0; t < out.size(); ++t) {
        seq.push_back(ad::slice_rows(stacked, t * batch, batch));
      }
    } else {
      last = dropout_forward(batchnorm_forward(out.back(), norms_[l], mode), spec_.dropout, mode,
                             rng);
    }
  }
  Tensor pre = dense_forward(last, w_out_, b_out_);
  return copula::apply_activation(pre, copula_);
}

std::vector<Tensor> Model::parameters() const {
  std::vector<Tensor> out;
  for (const auto& c : convs_) {
    out.push_back(c.kernel);
    out.push_back(c.bias);
  }
  for (std::size_t l = 0; l < lstms_.size(); ++l) {
    auto p = lstms_[l].parameters();
    out.insert(out.end(), p.begin(), p.end());
    out.push_back(norms_[l].gamma);
    out.push_back(norms_[l].beta);
  }
  out.push_back(w_out_);
  out.push_back(b_out_);
  auto phi = copula_.trainable();
  out.insert(out.end(), phi.begin(), phi.end());
  return out;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.size();
  return n;
}

json Model::to_json() const {
  json doc;
  doc["format"] = "copsurv-model";
  doc["version"] = 1;
  doc["seed"] = seed_;
  doc["spec"] = {{"architecture", to_string(spec_.architecture)},
                 {"variant", copula::to_string(spec_.variant)},
                 {"timesteps", spec_.timesteps},
                 {"features", spec_.features},
                 {"hidden", spec_.hidden},
                 {"lstm_layers", spec_.lstm_layers},
                 {"conv_kernel", spec_.conv_kernel},
                 {"conv_channels", spec_.conv_channels},
                 {"pool", spec_.pool},
                 {"dropout", spec_.dropout},
                 {"heads", spec_.heads}};
  json convs = json::array();
  for (const auto& c : convs_) {
    convs.push_back({{"k", c.k}, {"kernel", tensor_json(c.kernel)}, {"bias", tensor_json(c.bias)}});
  }
  doc["convs"] = convs;
  json lstms = json::array();
  for (std::size_t l = 0; l < lstms_.size(); ++l) {
    const auto& w = lstms_[l];
    const auto& bn = norms_[l];
    lstms.push_back({{"w_f", tensor_json(w.w_f)}, {"w_i", tensor_json(w.w_i)},
                     {"w_c", tensor_json(w.w_c)}, {"w_o", tensor_json(w.w_o)},
                     {"u_f", tensor_json(w.u_f)}, {"u_i", tensor_json(w.u_i)},
                     {"u_c", tensor_json(w.u_c)}, {"u_o", tensor_json(w.u_o)},
                     {"b_f", tensor_json(w.b_f)}, {"b_i", tensor_json(w.b_i)},
                     {"b_c", tensor_json(w.b_c)}, {"b_o", tensor_json(w.b_o)},
                     {"batchnorm",
                      {{"gamma", tensor_json(bn.gamma)},
                       {"beta", tensor_json(bn.beta)},
                       {"running_mean", bn.running_mean},
                       {"running_var", bn.running_var},
                       {"eps", bn.eps},
                       {"momentum", bn.momentum}}}});
  }
  doc["lstms"] = lstms;
  doc["w_out"] = tensor_json(w_out_);
  doc["b_out"] = tensor_json(b_out_);
  auto phis = [](const std::vector<Tensor>& v) {
    std::vector<double> out;
    for (const auto& t : v) out.push_back(t.item());
    return out;
  };
  doc["copula"] = {{"family", copula::to_string(copula_.family)},
                   {"phi_clayton", phis(copula_.phi_clayton)},
                   {"phi_gumbel", phis(copula_.phi_gumbel)},
                   {"theta_clayton", copula_.theta_clayton()},
                   {"theta_gumbel", copula_.theta_gumbel()}};
  doc["target_scale"] = target_scale_;
  return doc;
}

Model Model::from_json(const json& doc) {
  if (doc.value("format", "") != "copsurv-model") {
    throw std::invalid_argument("not a copsurv model document");
  }
  Model m;
  const auto& s = doc.at("spec");
  m.spec_.architecture = architecture_from_string(s.at("architecture").get<std::string>());
  m.spec_.variant = copula::activation_from_string(s.at("variant").get<std::string>());
  m.spec_.timesteps = s.at("timesteps").get<std::size_t>();
  m.spec_.features = s.at("features").get<std::size_t>();
  m.spec_.hidden = s.at("hidden").get<std::size_t>();
  m.spec_.lstm_layers = s.at("lstm_layers").get<std::size_t>();
  m.spec_.conv_kernel = s.at("conv_kernel").get<std::size_t>();
  m.spec_.conv_channels = s.at("conv_channels").get<std::array<std::size_t, 2>>();
  m.spec_.pool = s.at("pool").get<std::size_t>();
  m.spec_.dropout = s.at("dropout").get<double>();
  m.spec_.heads = s.at("heads").get<std::size_t>();
  m.spec_.validate();
  m.seed_ = doc.at("seed").get<std::uint64_t>();

  for (const auto& c : doc.at("convs")) {
    ConvWeights w;
    w.k = c.at("k").get<std::size_t>();
    w.kernel = tensor_from_json(c.at("kernel"));
    w.bias = tensor_from_json(c.at("bias"));
    m.convs_.push_back(std::move(w));
  }
  for (const auto& l : doc.at("lstms")) {
    LstmWeights w;
    w.w_f = tensor_from_json(l.at("w_f"));
    w.w_i = tensor_from_json(l.at("w_i"));
    w.w_c = tensor_from_json(l.at("w_c"));
    w.w_o = tensor_from_json(l.at("w_o"));
    w.u_f = tensor_from_json(l.at("u_f"));
    w.u_i = tensor_from_json(l.at("u_i"));
    w.u_c = tensor_from_json(l.at("u_c"));
    w.u_o = tensor_from_json(l.at("u_o"));
    w.b_f = tensor_from_json(l.at("b_f"));
    w.b_i = tensor_from_json(l.at("b_i"));
    w.b_c = tensor_from_json(l.at("b_c"));
    w.b_o = tensor_from_json(l.at("b_o"));
    w.validate();
    m.lstms_.push_back(std::move(w));
    const auto& b = l.at("batchnorm");
    BatchNorm bn;
    bn.gamma = tensor_from_json(b.at("gamma"));
    bn.beta = tensor_from_json(b.at("beta"));
    bn.running_mean = b.at("running_mean").get<std::vector<double>>();
    bn.running_var = b.at("running_var").get<std::vector<double>>();
    bn.eps = b.at("eps").get<double>();
    bn.momentum = b.at("momentum").get<double>();
    m.norms_.push_back(std::move(bn));
  }
  bool conv_ok = m.spec_.architecture == Architecture::cnn_lstm ? m.convs_.size() == 2
                                                                 : m.convs_.empty();
  if (!conv_ok || m.lstms_.size() != m.spec_.lstm_layers) {
    throw std::invalid_argument("model document layer count does not match its spec");
  }
  m.w_out_ = tensor_from_json(doc.at("w_out"));
  m.b_out_ = tensor_from_json(doc.at("b_out"));

  const auto& c = doc.at("copula");
  m.copula_.family = copula::activation_from_string(c.at("family").get<std::string>());
  for (double phi : c.at("phi_clayton").get<std::vector<double>>())
    m.copula_.phi_clayton.push_back(Tensor::scalar(phi, true));
  for (double phi : c.at("phi_gumbel").get<std::vector<double>>())
    m.copula_.phi_gumbel.push_back(Tensor::scalar(phi, true));
  m.set_target_scale(doc.value("target_scale", std::vector<double>(m.spec_.heads, 1.0)));
  return m;
}

void Model::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path);
  out << to_json().dump(1) << '\n';
  if (!out) throw std::runtime_error("failed writing model file " + path);
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file " + path);
  return from_json(json::parse(in));
}

Model Model::clone() const { return from_json(to_json()); }

}  // namespace copsurv::nn
