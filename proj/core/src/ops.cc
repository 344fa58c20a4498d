// Copyright 2026 The CompGCN-cpp Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "compgcn/ops.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace compgcn {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

std::string Pair(const Tensor& a, const Tensor& b) {
  return ShapeToString(a.shape()) + " and " + ShapeToString(b.shape());
}

void CheckSameTape(Var a, Var b) {
  if (a.tape() != b.tape()) throw std::invalid_argument("operands live on different tapes");
}

bool IsMatrix(const Tensor& t) { return t.rank() == 2; }

// Rows and row width of a rank 1 or rank 2 tensor viewed as a table.
std::pair<int64_t, int64_t> AsTable(const Tensor& t) {
  if (t.rank() == 1) return {t.dim(0), 1};
  Require(t.rank() == 2, "expected rank 1 or 2 tensor, got " + ShapeToString(t.shape()));
  return {t.dim(0), t.dim(1)};
}

}  // namespace

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kTanh:
      return "tanh";
    case Activation::kRelu:
      return "relu";
  }
  return "?";
}

Activation ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

void CircularCorrelate(std::span<const double> a, std::span<const double> b,
                       std::span<double> out) {
  const size_t d = a.size();
  // Ascending i in two runs, split where (i + k) wraps.
  for (size_t k = 0; k < d; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < d - k; ++i) acc += a[i] * b[i + k];
    for (size_t i = d - k; i < d; ++i) acc += a[i] * b[i + k - d];
    out[k] = acc;
  }
}

Var MatMul(Var a, Var b) {
  CheckSameTape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Require(IsMatrix(av) && IsMatrix(bv) && av.dim(1) == bv.dim(0),
          "matmul shape mismatch: " + Pair(av, bv));
  const int64_t m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  Tensor out(Shape{m, n});
  for (int64_t i = 0; i < m; ++i) {
    double* orow = &out.at(i, 0);
    for (int64_t p = 0; p < k; ++p) {
      const double aip = av.at(i, p);
      if (aip == 0.0) continue;
      const double* brow = &bv.data()[p * n];
      for (int64_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  const Var inputs[] = {a, b};
  return a.tape()->Record(std::move(out), inputs,
                          [a, b, m, k, n](const Tensor& g, std::span<Tensor* const> grads) {
                            const Tensor& av = a.value();
                            const Tensor& bv = b.value();
                            if (Tensor* ga = grads[0]) {
                              for (int64_t i = 0; i < m; ++i) {
                                for (int64_t p = 0; p < k; ++p) {
                                  double acc = 0.0;
                                  for (int64_t j = 0; j < n; ++j) acc += g.at(i, j) * bv.at(p, j);
                                  ga->at(i, p) += acc;
                                }
                              }
                            }
                            if (Tensor* gb = grads[1]) {
                              for (int64_t i = 0; i < m; ++i) {
                                for (int64_t p = 0; p < k; ++p) {
                                  const double aip = av.at(i, p);
                                  if (aip == 0.0) continue;
                                  for (int64_t j = 0; j < n; ++j) gb->at(p, j) += aip * g.at(i, j);
                                }
                              }
                            }
                          });
}

Var Transpose(Var a) {
  const Tensor& av = a.value();
  Require(IsMatrix(av), "transpose expects a matrix, got " + ShapeToString(av.shape()));
  const int64_t m = av.dim(0), n = av.dim(1);
  Tensor out(Shape{n, m});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out.at(j, i) = av.at(i, j);
  const Var inputs[] = {a};
  return a.tape()->Record(std::move(out), inputs,
                          [m, n](const Tensor& g, std::span<Tensor* const> grads) {
                            Tensor* ga = grads[0];
                            for (int64_t i = 0; i < m; ++i)
                              for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(j, i);
                          });
}

Var Elementwise(ElementwiseOp op, Var a, Var b) {
  CheckSameTape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const bool same = av.shape() == bv.shape();
  // With two single-element operands of different shape, b broadcasts.
  const bool b_scalar = !same && bv.size() == 1;
  const bool a_scalar = !same && !b_scalar && av.size() == 1;
  Require(same || a_scalar || b_scalar, "elementwise shape mismatch: " + Pair(av, bv));

  const Tensor& big = a_scalar ? bv : av;
  Tensor out(big.shape());
  const int64_t n = out.size();
  auto at_a = [&](int64_t i) { return a_scalar ? av[0] : av[i]; };
  auto at_b = [&](int64_t i) { return b_scalar ? bv[0] : bv[i]; };
  for (int64_t i = 0; i < n; ++i) {
    switch (op) {
      case ElementwiseOp::kAdd:
        out[i] = at_a(i) + at_b(i);
        break;
      case ElementwiseOp::kSub:
        out[i] = at_a(i) - at_b(i);
        break;
      case ElementwiseOp::kMul:
        out[i] = at_a(i) * at_b(i);
        break;
    }
  }
  const Var inputs[] = {a, b};
  return a.tape()->Record(
      std::move(out), inputs,
      [a, b, op, a_scalar, b_scalar, n](const Tensor& g, std::span<Tensor* const> grads) {
        const Tensor& av = a.value();
        const Tensor& bv = b.value();
        for (int64_t i = 0; i < n; ++i) {
          const double x = a_scalar ? av[0] : av[i];
          const double y = b_scalar ? bv[0] : bv[i];
          double da = 0.0, db = 0.0;
          switch (op) {
            case ElementwiseOp::kAdd:
              da = g[i];
              db = g[i];
              break;
            case ElementwiseOp::kSub:
              da = g[i];
              db = -g[i];
              break;
            case ElementwiseOp::kMul:
              da = g[i] * y;
              db = g[i] * x;
              break;
          }
          if (grads[0]) (*grads[0])[a_scalar ? 0 : i] += da;
          if (grads[1]) (*grads[1])[b_scalar ? 0 : i] += db;
        }
      });
}

Var CircularCorrelation(Var a, Var b) {
  CheckSameTape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Require(av.shape() == bv.shape() && (av.rank() == 1 || av.rank() == 2) && av.size() > 0,
          "circular correlation shape mismatch: " + Pair(av, bv));
  const int64_t rows = av.rows(), d = av.cols();
  Tensor out(av.shape());
  for (int64_t r = 0; r < rows; ++r) CircularCorrelate(av.row(r), bv.row(r), out.row(r));
  const Var inputs[] = {a, b};
  return a.tape()->Record(
      std::move(out), inputs, [a, b, rows, d](const Tensor& g, std::span<Tensor* const> grads) {
        const Tensor& av = a.value();
        const Tensor& bv = b.value();
        for (int64_t r = 0; r < rows; ++r) {
          auto ar = av.row(r);
          auto br = bv.row(r);
          auto gr = g.row(r);
          if (grads[0]) {
            auto ga = grads[0]->row(r);
            for (int64_t i = 0; i < d; ++i) {
              double acc = 0.0;
              for (int64_t k = 0; k < d - i; ++k) acc += gr[k] * br[i + k];
              for (int64_t k = d - i; k < d; ++k) acc += gr[k] * br[i + k - d];
              ga[i] += acc;
            }
          }
          if (grads[1]) {
            auto gb = grads[1]->row(r);
            for (int64_t i = 0; i < d; ++i) {
              const double ai = ar[i];
              for (int64_t k = 0; k < d - i; ++k) gb[i + k] += gr[k] * ai;
              for (int64_t k = d - i; k < d; ++k) gb[i + k - d] += gr[k] * ai;
            }
          }
        }
      });
}

Var Activate(Activation kind, Var x) {
  if (kind == Activation::kIdentity) return x;
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  const int64_t n = xv.size();
  for (int64_t i = 0; i < n; ++i) {
    out[i] = kind == Activation::kTanh ? std::tanh(xv[i]) : std::max(0.0, xv[i]);
  }
  const Var inputs[] = {x};
  return x.tape()->Record(std::move(out), inputs,
                          [x, kind, n](const Tensor& g, std::span<Tensor* const> grads) {
                            const Tensor& xv = x.value();
                            Tensor& gx = *grads[0];
                            for (int64_t i = 0; i < n; ++i) {
                              if (kind == Activation::kTanh) {
                                const double t = std::tanh(xv[i]);
                                gx[i] += g[i] * (1.0 - t * t);
                              } else if (xv[i] > 0.0) {
                                gx[i] += g[i];
                              }
                            }
                          });
}

Var Dropout(Var x, double p, Rng& rng, bool training) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("dropout probability must lie in [0, 1), got " +
                                std::to_string(p));
  }
  if (!training || p == 0.0) return x;
  const Tensor& xv = x.value();
  const int64_t n = xv.size();
  const double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(n);
  for (int64_t i = 0; i < n; ++i) mask[i] = UniformUnit(rng) < p ? 0.0 : keep_scale;
  Tensor out(xv.shape());
  for (int64_t i = 0; i < n; ++i) out[i] = xv[i] * mask[i];
  const Var inputs[] = {x};
  return x.tape()->Record(std::move(out), inputs,
                          [mask = std::move(mask)](const Tensor& g, std::span<Tensor* const> grads) {
                            Tensor& gx = *grads[0];
                            for (size_t i = 0; i < mask.size(); ++i) gx[i] += g[i] * mask[i];
                          });
}

Var Sum(Var x) {
  const Tensor& xv = x.value();
  double acc = 0.0;
  for (double v : xv.data()) acc += v;
  const Var inputs[] = {x};
  return x.tape()->Record(Tensor::Scalar(acc), inputs,
                          [](const Tensor& g, std::span<Tensor* const> grads) {
                            const double s = g[0];
                            for (double& v : grads[0]->data()) v += s;
                          });
}

Var GatherRows(Var x, std::span<const int32_t> index) {
  const Tensor& xv = x.value();
  const auto [n, width] = AsTable(xv);
  const auto m = static_cast<int64_t>(index.size());
  Shape shape = xv.rank() == 1 ? Shape{m} : Shape{m, width};
  Tensor out(shape);
  std::vector<int32_t> idx(index.begin(), index.end());
  for (int64_t i = 0; i < m; ++i) {
    const int32_t src = idx[i];
    if (src < 0 || src >= n) {
      throw std::out_of_range("gather index " + std::to_string(src) + " out of range for " +
                              std::to_string(n) + " rows");
    }
    std::copy_n(&xv.data()[src * width], width, &out.data()[i * width]);
  }
  const Var inputs[] = {x};
  return x.tape()->Record(std::move(out), inputs,
                          [idx = std::move(idx), width](const Tensor& g,
                                                        std::span<Tensor* const> grads) {
                            auto gx = grads[0]->data();
                            auto gd = g.data();
                            for (size_t i = 0; i < idx.size(); ++i) {
                              for (int64_t c = 0; c < width; ++c) {
                                gx[idx[i] * width + c] += gd[i * width + c];
                              }
                            }
                          });
}

Var ScatterAddRows(Var x, std::span<const int32_t> index, int64_t num_rows) {
  const Tensor& xv = x.value();
  const auto [m, width] = AsTable(xv);
  Require(static_cast<int64_t>(index.size()) == m,
          "scatter index has " + std::to_string(index.size()) + " entries for " +
              std::to_string(m) + " rows");
  Shape shape = xv.rank() == 1 ? Shape{num_rows} : Shape{num_rows, width};
  Tensor out(shape);
  std::vector<int32_t> idx(index.begin(), index.end());
  for (int64_t i = 0; i < m; ++i) {
    const int32_t dst = idx[i];
    if (dst < 0 || dst >= num_rows) {
      throw std::out_of_range("scatter index " + std::to_string(dst) + " out of range for " +
                              std::to_string(num_rows) + " rows");
    }
    for (int64_t c = 0; c < width; ++c) out.data()[dst * width + c] += xv.data()[i * width + c];
  }
  const Var inputs[] = {x};
  return x.tape()->Record(std::move(out), inputs,
                          [idx = std::move(idx), width](const Tensor& g,
                                                        std::span<Tensor* const> grads) {
                            auto gx = grads[0]->data();
                            auto gd = g.data();
                            for (size_t i = 0; i < idx.size(); ++i) {
                              for (int64_t c = 0; c < width; ++c) {
                                gx[i * width + c] += gd[idx[i] * width + c];
                              }
                            }
                          });
}

Var ScaleRows(Var x, Var scales) {
  CheckSameTape(x, scales);
  const Tensor& xv = x.value();
  const Tensor& sv = scales.value();
  const auto [n, width] = AsTable(xv);
  Require(sv.rank() == 1 && sv.dim(0) == n, "row scaling shape mismatch: " + Pair(xv, sv));
  Tensor out(xv.shape());
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t c = 0; c < width; ++c) {
      out.data()[i * width + c] = sv[i] * xv.data()[i * width + c];
    }
  }
  const Var inputs[] = {x, scales};
  return x.tape()->Record(
      std::move(out), inputs,
      [x, scales, n, width](const Tensor& g, std::span<Tensor* const> grads) {
        const Tensor& xv = x.value();
        const Tensor& sv = scales.value();
        for (int64_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int64_t c = 0; c < width; ++c) {
            const double gi = g.data()[i * width + c];
            if (grads[0]) grads[0]->data()[i * width + c] += sv[i] * gi;
            acc += gi * xv.data()[i * width + c];
          }
          if (grads[1]) (*grads[1])[i] += acc;
        }
      });
}

Var SegmentMean(Var x, std::span<const int32_t> segment, int64_t num_segments) {
  const Tensor& xv = x.value();
  Require(IsMatrix(xv) && xv.dim(0) == static_cast<int64_t>(segment.size()),
          "segment mean expects one segment id per row of " + ShapeToString(xv.shape()));
  const int64_t d = xv.dim(1);
  std::vector<std::vector<int64_t>> members(num_segments);
  for (size_t i = 0; i < segment.size(); ++i) {
    const int32_t s = segment[i];
    if (s < 0 || s >= num_segments) throw std::out_of_range("segment id out of range");
    members[s].push_back(static_cast<int64_t>(i));
  }
  // Each column is summed in ascending value order, so the result depends
  // only on the multiset of member rows and not on their order.
  Tensor out(Shape{num_segments, d});
  std::vector<double> column;
  for (int64_t s = 0; s < num_segments; ++s) {
    if (members[s].empty()) throw std::invalid_argument("empty segment " + std::to_string(s));
    const double count = static_cast<double>(members[s].size());
    for (int64_t c = 0; c < d; ++c) {
      column.clear();
      for (int64_t i : members[s]) column.push_back(xv.at(i, c));
      std::sort(column.begin(), column.end());
      double acc = 0.0;
      for (double v : column) acc += v;
      out.at(s, c) = acc / count;
    }
  }
  std::vector<int32_t> seg(segment.begin(), segment.end());
  std::vector<double> counts(num_segments);
  for (int64_t s = 0; s < num_segments; ++s) counts[s] = static_cast<double>(members[s].size());
  const Var inputs[] = {x};
  return x.tape()->Record(
      std::move(out), inputs,
      [seg = std::move(seg), counts = std::move(counts), d](const Tensor& g,
                                                             std::span<Tensor* const> grads) {
        if (grads[0] == nullptr) return;
        Tensor& gx = *grads[0];
        for (size_t i = 0; i < seg.size(); ++i) {
          const int64_t row = static_cast<int64_t>(i);
          for (int64_t c = 0; c < d; ++c) gx.at(row, c) += g.at(seg[i], c) / counts[seg[i]];
        }
      });
}

Var NegativeDistances(Var queries, Var candidates, int p) {
  CheckSameTape(queries, candidates);
  Require(p == 1 || p == 2, "distance norm must be 1 or 2");
  const Tensor& qv = queries.value();
  const Tensor& cv = candidates.value();
  Require(IsMatrix(qv) && IsMatrix(cv) && qv.dim(1) == cv.dim(1),
          "distance shape mismatch: " + Pair(qv, cv));
  const int64_t b = qv.dim(0), n = cv.dim(0), d = qv.dim(1);
  Tensor out(Shape{b, n});
  for (int64_t i = 0; i < b; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double diff = qv.at(i, c) - cv.at(j, c);
        acc += p == 1 ? std::abs(diff) : diff * diff;
      }
      out.at(i, j) = p == 1 ? -acc : -std::sqrt(acc);
    }
  }
  const Var inputs[] = {queries, candidates};
  Tensor dist = out;
  return queries.tape()->Record(
      std::move(out), inputs,
      [queries, candidates, dist = std::move(dist), b, n, d, p](const Tensor& g,
                                                                std::span<Tensor* const> grads) {
        const Tensor& qv = queries.value();
        const Tensor& cv = candidates.value();
        for (int64_t i = 0; i < b; ++i) {
          for (int64_t j = 0; j < n; ++j) {
            const double gij = g.at(i, j);
            if (gij == 0.0) continue;
            // dist holds -||q - c||; its derivative w.r.t. q is -sign(diff)
            // for p = 1 and -diff / ||diff|| for p = 2 (zero at coincidence).
            const double norm = -dist.at(i, j);
            if (p == 2 && norm == 0.0) continue;
            for (int64_t c = 0; c < d; ++c) {
              const double diff = qv.at(i, c) - cv.at(j, c);
              const double dq = p == 1 ? -static_cast<double>((diff > 0.0) - (diff < 0.0))
                                       : -diff / norm;
              if (grads[0]) grads[0]->at(i, c) += gij * dq;
              if (grads[1]) grads[1]->at(j, c) -= gij * dq;
            }
          }
        }
      });
}

Tensor SmoothLabels(const Tensor& targets, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("label smoothing must lie in [0, 1), got " + std::to_string(eps));
  }
  const int64_t n = targets.rank() == 0 ? 1 : targets.shape().back();
  Tensor out(targets.shape());
  for (int64_t i = 0; i < targets.size(); ++i) {
    out[i] = (1.0 - eps) * targets[i] + eps / static_cast<double>(n);
  }
  return out;
}

Var BceWithLabelSmoothing(Var logits, const Tensor& targets, double eps) {
  const Tensor& lv = logits.value();
  Require(lv.shape() == targets.shape(), "bce shape mismatch: " + Pair(lv, targets));
  Require(lv.size() > 0, "bce on empty logits");
  for (double l : lv.data()) {
    if (!std::isfinite(l)) throw NumericError("non-finite logit in binary cross entropy");
  }
  Tensor smoothed = SmoothLabels(targets, eps);
  const int64_t n = lv.size();
  double total = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double l = lv[i];
    total += std::max(l, 0.0) - l * smoothed[i] + std::log1p(std::exp(-std::abs(l)));
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const Var inputs[] = {logits};
  return logits.tape()->Record(
      Tensor::Scalar(total * inv_n), inputs,
      [logits, smoothed = std::move(smoothed), inv_n](const Tensor& g,
                                                      std::span<Tensor* const> grads) {
        const Tensor& lv = logits.value();
        Tensor& gl = *grads[0];
        const double scale = g[0] * inv_n;
        for (int64_t i = 0; i < lv.size(); ++i) {
          const double l = lv[i];
          const double sig = l >= 0.0 ? 1.0 / (1.0 + std::exp(-l))
                                      : std::exp(l) / (1.0 + std::exp(l));
          gl[i] += scale * (sig - smoothed[i]);
        }
      });
}

Var SoftmaxCrossEntropy(Var logits, std::span<const int32_t> labels) {
  const Tensor& lv = logits.value();
  Require(IsMatrix(lv) && lv.dim(0) == static_cast<int64_t>(labels.size()) && lv.dim(0) > 0,
          "softmax cross entropy expects [n x c] logits with n labels, got " +
              ShapeToString(lv.shape()));
  const int64_t n = lv.dim(0), c = lv.dim(1);
  Tensor probs(lv.shape());
  double total = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const int32_t y = labels[i];
    if (y < 0 || y >= c) throw std::out_of_range("class label " + std::to_string(y));
    auto row = lv.row(i);
    for (double l : row) {
      if (!std::isfinite(l)) throw NumericError("non-finite logit in cross entropy");
    }
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (int64_t j = 0; j < c; ++j) z += std::exp(row[j] - mx);
    const double log_z = mx + std::log(z);
    for (int64_t j = 0; j < c; ++j) probs.at(i, j) = std::exp(row[j] - log_z);
    total += log_z - row[y];
  }
  std::vector<int32_t> ys(labels.begin(), labels.end());
  const Var inputs[] = {logits};
  return logits.tape()->Record(
      Tensor::Scalar(total / static_cast<double>(n)), inputs,
      [probs = std::move(probs), ys = std::move(ys), n, c](const Tensor& g,
                                                           std::span<Tensor* const> grads) {
        Tensor& gl = *grads[0];
        const double scale = g[0] / static_cast<double>(n);
        for (int64_t i = 0; i < n; ++i) {
          for (int64_t j = 0; j < c; ++j) {
            const double target = j == ys[i] ? 1.0 : 0.0;
            gl.at(i, j) += scale * (probs.at(i, j) - target);
          }
        }
      });
}

}  // namespace compgcn
