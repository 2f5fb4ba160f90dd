#include "autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace copsurv::ad {

namespace {

template <class F, class D>
Tensor unary(const char* op, const Tensor& a, F f, D df) {
  auto av = a.data();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = f(av[i]);
  return make_result(op, a.shape(), std::move(out), {a}, [df](Node& self) {
    Node& in = *self.inputs[0];
    if (!in.requires_grad) return;
    auto& g = in.grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] += self.grad[i] * df(in.value[i], self.value[i]);
    }
  });
}

// da/db receive (x, y, out) and return the partial derivative.
template <class F, class DA, class DB>
Tensor binary(const char* op, const Tensor& a, const Tensor& b, F f, DA da, DB db) {
  bool bcast_a = false;
  bool bcast_b = false;
  Shape shape;
  if (a.shape() == b.shape()) {
    shape = a.shape();
  } else if (b.size() == 1 && (a.size() != 1 || a.rank() >= b.rank())) {
    shape = a.shape();
    bcast_b = true;
  } else if (a.size() == 1) {
    shape = b.shape();
    bcast_a = true;
  } else {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
  auto n = shape_size(shape);
  auto av = a.data();
  auto bv = b.data();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(av[bcast_a ? 0 : i], bv[bcast_b ? 0 : i]);
  return make_result(op, shape, std::move(out), {a, b},
                     [da, db, bcast_a, bcast_b](Node& self) {
                       Node& na = *self.inputs[0];
                       Node& nb = *self.inputs[1];
                       auto n = self.value.size();
                       if (na.requires_grad) {
                         auto& g = na.grad_buffer();
                         for (std::size_t i = 0; i < n; ++i) {
                           double x = na.value[bcast_a ? 0 : i];
                           double y = nb.value[bcast_b ? 0 : i];
                           g[bcast_a ? 0 : i] += self.grad[i] * da(x, y, self.value[i]);
                         }
                       }
                       if (nb.requires_grad) {
                         auto& g = nb.grad_buffer();
                         for (std::size_t i = 0; i < n; ++i) {
                           double x = na.value[bcast_a ? 0 : i];
                           double y = nb.value[bcast_b ? 0 : i];
                           g[bcast_b ? 0 : i] += self.grad[i] * db(x, y, self.value[i]);
                         }
                       }
                     });
}

double clamp_denominator(double b) {
  if (std::abs(b) >= kDomainEps) return b;
  return b < 0.0 ? -kDomainEps : kDomainEps;
}

bool is_integer(double p) { return std::floor(p) == p; }

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

void require_matrix(const char* op, const Tensor& t) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected a matrix, got " + shape_str(t.shape()));
  }
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double, double) { return 1.0; }, [](double, double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double, double) { return 1.0; }, [](double, double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double, double y, double) { return y; }, [](double x, double, double) { return x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
  return binary(
      "div", a, b, [](double x, double y) { return x / clamp_denominator(y); },
      [](double, double y, double) { return 1.0 / clamp_denominator(y); },
      [](double x, double y, double) {
        if (std::abs(y) < kDomainEps) return 0.0;
        return -x / (y * y);
      });
}

Tensor maximum(const Tensor& a, const Tensor& b) {
  return binary(
      "maximum", a, b, [](double x, double y) { return x >= y ? x : y; },
      [](double x, double y, double) { return x >= y ? 1.0 : 0.0; },
      [](double x, double y, double) { return x >= y ? 0.0 : 1.0; });
}

Tensor neg(const Tensor& a) {
  return unary("neg", a, [](double x) { return -x; }, [](double, double) { return -1.0; });
}

Tensor exp(const Tensor& a) {
  return unary("exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  return unary(
      "log", a, [](double x) { return std::log(std::max(x, kDomainEps)); },
      [](double x, double) { return x < kDomainEps ? 0.0 : 1.0 / x; });
}

Tensor pow(const Tensor& a, double p) {
  if (is_integer(p) && p >= 0.0) {
    return unary(
        "pow", a, [p](double x) { return std::pow(x, p); },
        [p](double x, double) { return p == 0.0 ? 0.0 : p * std::pow(x, p - 1.0); });
  }
  bool integral = is_integer(p);
  auto base = [integral](double x) {
    if (integral) return clamp_denominator(x);
    return std::max(x, kDomainEps);
  };
  auto clamped = [integral](double x) {
    return integral ? std::abs(x) < kDomainEps : x < kDomainEps;
  };
  return unary(
      "pow", a, [p, base](double x) { return std::pow(base(x), p); },
      [p, clamped](double x, double) { return clamped(x) ? 0.0 : p * std::pow(x, p - 1.0); });
}

Tensor sigmoid(const Tensor& a) {
  return unary("sigmoid", a, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary(
      "tanh", a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& a) {
  return unary(
      "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor erf(const Tensor& a) {
  return unary(
      "erf", a, [](double x) { return std::erf(x); },
      [](double x, double) { return 2.0 * std::numbers::inv_sqrtpi * std::exp(-x * x); });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("clamp: lo must not exceed hi");
  return unary(
      "clamp", a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Tensor sqrt(const Tensor& a) {
  return unary(
      "sqrt", a, [](double x) { return std::sqrt(std::max(x, kDomainEps)); },
      [](double x, double y) { return x < kDomainEps ? 0.0 : 0.5 / y; });
}

Tensor softplus(const Tensor& a) {
  return unary(
      "softplus", a,
      [](double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); },
      [](double x, double) { return stable_sigmoid(x); });
}

Tensor scale(const Tensor& a, double c) {
  return unary("scale", a, [c](double x) { return c * x; }, [c](double, double) { return c; });
}

Tensor shift(const Tensor& a, double c) {
  return unary("shift", a, [c](double x) { return x + c; }, [](double, double) { return 1.0; });
}

Tensor elementwise(OpKind kind, const Tensor& a, const Tensor& b, std::vector<double> param) {
  auto need_b = [&] {
    if (!b.defined()) throw std::invalid_argument("binary op requires a second operand");
  };
  switch (kind) {
    case OpKind::add: need_b(); return add(a, b);
    case OpKind::sub: need_b(); return sub(a, b);
    case OpKind::mul: need_b(); return mul(a, b);
    case OpKind::div: need_b(); return div(a, b);
    case OpKind::neg: return neg(a);
    case OpKind::exp: return exp(a);
    case OpKind::log: return log(a);
    case OpKind::pow:
      if (param.size() != 1) throw std::invalid_argument("pow requires one exponent");
      return pow(a, param[0]);
    case OpKind::sigmoid: return sigmoid(a);
    case OpKind::tanh: return tanh(a);
    case OpKind::relu: return relu(a);
    case OpKind::erf: return erf(a);
    case OpKind::clamp:
      if (param.size() != 2) throw std::invalid_argument("clamp requires {lo, hi}");
      return clamp(a, param[0], param[1]);
    case OpKind::sqrt: return sqrt(a);
    case OpKind::softplus: return softplus(a);
  }
  throw std::invalid_argument("unknown op kind");
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix("matmul", a);
  require_matrix("matmul", b);
  std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw ShapeError("matmul: inner extents differ " + shape_str(a.shape()) + " * " +
                     shape_str(b.shape()));
  }
  auto av = a.data();
  auto bv = b.data();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double aip = av[i * k + p];
      const double* brow = bv.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  return make_result("matmul", {m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const double* g = self.grad.data();
    if (na.requires_grad) {
      auto& ga = na.grad_buffer();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          const double* brow = nb.value.data() + p * n;
          const double* grow = g + i * n;
          for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          ga[i * k + p] += acc;
        }
      }
    }
    if (nb.requires_grad) {
      auto& gb = nb.grad_buffer();
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = g + i * n;
        for (std::size_t p = 0; p < k; ++p) {
          double aip = na.value[i * k + p];
          double* gbrow = gb.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) gbrow[j] += aip * grow[j];
        }
      }
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_matrix("transpose", a);
  std::size_t r = a.rows(), c = a.cols();
  auto av = a.data();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = av[i * c + j];
  return make_result("transpose", {c, r}, std::move(out), {a}, [r, c](Node& self) {
    Node& in = *self.inputs[0];
    if (!in.requires_grad) return;
    auto& g = in.grad_buffer();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[j * r + i];
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& bias) {
  require_matrix("linear", w);
  std::size_t batch = x.rows(), in = x.cols(), out_dim = w.rows();
  if (w.cols() != in) {
    throw ShapeError("linear: input width " + std::to_string(in) + " vs weight " +
                     shape_str(w.shape()));
  }
  bool has_bias = bias.defined();
  if (has_bias && bias.size() != out_dim) {
    throw ShapeError("linear: bias length " + std::to_string(bias.size()) + " vs " +
                     std::to_string(out_dim));
  }
  auto xv = x.data();
  auto wv = w.data();
  std::vector<double> out(batch * out_dim);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xrow = xv.data() + b * in;
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double* wrow = wv.data() + o * in;
      double acc = has_bias ? bias[o] : 0.0;
      for (std::size_t p = 0; p < in; ++p) acc += xrow[p] * wrow[p];
      out[b * out_dim + o] = acc;
    }
  }
  std::vector<Tensor> inputs{x, w};
  if (has_bias) inputs.push_back(bias);
  return make_result("linear", {batch, out_dim}, std::move(out), std::move(inputs),
                     [batch, in, out_dim](Node& self) {
                       Node& nx = *self.inputs[0];
                       Node& nw = *self.inputs[1];
                       const double* g = self.grad.data();
                       if (nx.requires_grad) {
                         auto& gx = nx.grad_buffer();
                         for (std::size_t b = 0; b < batch; ++b) {
                           double* gxrow = gx.data() + b * in;
                           for (std::size_t o = 0; o < out_dim; ++o) {
                             double go = g[b * out_dim + o];
                             if (go == 0.0) continue;
                             const double* wrow = nw.value.data() + o * in;
                             for (std::size_t p = 0; p < in; ++p) gxrow[p] += go * wrow[p];
                           }
                         }
                       }
                       if (nw.requires_grad) {
                         auto& gw = nw.grad_buffer();
                         for (std::size_t b = 0; b < batch; ++b) {
                           const double* xrow = nx.value.data() + b * in;
                           for (std::size_t o = 0; o < out_dim; ++o) {
                             double go = g[b * out_dim + o];
                             if (go == 0.0) continue;
                             double* gwrow = gw.data() + o * in;
                             for (std::size_t p = 0; p < in; ++p) gwrow[p] += go * xrow[p];
                           }
                         }
                       }
                       if (self.inputs.size() == 3 && self.inputs[2]->requires_grad) {
                         auto& gb = self.inputs[2]->grad_buffer();
                         for (std::size_t b = 0; b < batch; ++b)
                           for (std::size_t o = 0; o < out_dim; ++o) gb[o] += g[b * out_dim + o];
                       }
                     });
}

Tensor sum(const Tensor& a) {
  auto av = a.data();
  double s = 0.0;
  for (double x : av) s += x;
  return make_result("sum", {1}, {s}, {a}, [](Node& self) {
    Node& in = *self.inputs[0];
    if (!in.requires_grad) return;
    auto& g = in.grad_buffer();
    for (auto& v : g) v += self.grad[0];
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_size(shape) != a.size()) {
    throw ShapeError("reshape: " + shape_str(a.shape()) + " -> " + shape_str(shape));
  }
  std::vector<double> out(a.data().begin(), a.data().end());
  return make_result("reshape", std::move(shape), std::move(out), {a}, [](Node& self) {
    Node& in = *self.inputs[0];
    if (!in.requires_grad) return;
    auto& g = in.grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count) {
  require_matrix("slice_cols", a);
  std::size_t r = a.rows(), c = a.cols();
  if (count == 0 || begin + count > c) throw ShapeError("slice_cols: range out of bounds");
  auto av = a.data();
  std::vector<double> out(r * count);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < count; ++j) out[i * count + j] = av[i * c + begin + j];
  return make_result("slice_cols", {r, count}, std::move(out), {a},
                     [r, c, begin, count](Node& self) {
                       Node& in = *self.inputs[0];
                       if (!in.requires_grad) return;
                       auto& g = in.grad_buffer();
                       for (std::size_t i = 0; i < r; ++i)
                         for (std::size_t j = 0; j < count; ++j)
                           g[i * c + begin + j] += self.grad[i * count + j];
                     });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  std::size_t r = parts[0].rows();
  std::size_t total = 0;
  std::vector<std::size_t> widths;
  for (const auto& p : parts) {
    require_matrix("concat_cols", p);
    if (p.rows() != r) throw ShapeError("concat_cols: row counts differ");
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<double> out(r * total);
  std::size_t off = 0;
  for (const auto& p : parts) {
    auto pv = p.data();
    std::size_t w = p.cols();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < w; ++j) out[i * total + off + j] = pv[i * w + j];
    off += w;
  }
  return make_result("concat_cols", {r, total}, std::move(out), parts,
                     [r, total, widths](Node& self) {
                       std::size_t off = 0;
                       for (std::size_t k = 0; k < widths.size(); ++k) {
                         Node& in = *self.inputs[k];
                         std::size_t w = widths[k];
                         if (in.requires_grad) {
                           auto& g = in.grad_buffer();
                           for (std::size_t i = 0; i < r; ++i)
                             for (std::size_t j = 0; j < w; ++j)
                               g[i * w + j] += self.grad[i * total + off + j];
                         }
                         off += w;
                       }
                     });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t count) {
  require_matrix("slice_rows", a);
  std::size_t r = a.rows(), c = a.cols();
  if (count == 0 || begin + count > r) throw ShapeError("slice_rows: range out of bounds");
  auto av = a.data();
  std::vector<double> out(av.begin() + begin * c, av.begin() + (begin + count) * c);
  return make_result("slice_rows", {count, c}, std::move(out), {a}, [begin, c](Node& self) {
    Node& in = *self.inputs[0];
    if (!in.requires_grad) return;
    auto& g = in.grad_buffer();
    for (std::size_t i = 0; i < self.grad.size(); ++i) g[begin * c + i] += self.grad[i];
  });
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  std::size_t c = parts[0].cols();
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_matrix("concat_rows", p);
    if (p.cols() != c) throw ShapeError("concat_rows: column counts differ");
    total += p.rows();
  }
  std::vector<double> out;
  out.reserve(total * c);
  for (const auto& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
  return make_result("concat_rows", {total, c}, std::move(out), parts, [](Node& self) {
    std::size_t off = 0;
    for (auto& in : self.inputs) {
      std::size_t n = in->value.size();
      if (in->requires_grad) {
        auto& g = in->grad_buffer();
        for (std::size_t i = 0; i < n; ++i) g[i] += self.grad[off + i];
      }
      off += n;
    }
  });
}

}  // namespace copsurv::ad
