// Copyright 2026 The CBE Authors.
//
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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>

#include "cbe/errors.hpp"
#include "cbe/eval.hpp"
#include "cbe/io.hpp"
#include "cbe/optimizer.hpp"

namespace py = pybind11;
using namespace cbe;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DataMatrix to_matrix(const F64Array& a, bool normalize) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array, got " + std::to_string(a.ndim()) + "-D");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto d = static_cast<std::size_t>(a.shape(1));
  std::vector<double> v(a.data(), a.data() + n * d);
  return normalize ? DataMatrix::normalized(n, d, std::move(v)) : DataMatrix(n, d, std::move(v));
}

std::vector<double> to_vector(const F64Array& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-D array, got " + std::to_string(a.ndim()) + "-D");
  return {a.data(), a.data() + a.size()};
}

// Unpacked n x k matrix of +-1 values.
py::array_t<std::int8_t> unpack(const BinaryCodeMatrix& c) {
  py::array_t<std::int8_t> out({c.rows(), c.bits()});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.bits(); ++j) m(i, j) = static_cast<std::int8_t>(c.logical(i, j));
  return out;
}

py::array_t<std::uint64_t> packed_words(const BinaryCodeMatrix& c) {
  py::array_t<std::uint64_t> out({c.rows(), c.words_per_row()});
  std::memcpy(out.mutable_data(), c.words().data(), c.words().size() * sizeof(std::uint64_t));
  return out;
}

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kRandom: return "random";
    case ModelKind::kOptimized: return "optimized";
    case ModelKind::kSemiSupervised: return "semi-supervised";
  }
  return "unknown";
}

PairConstraints make_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& similar,
                           const std::vector<std::pair<std::size_t, std::size_t>>& dissimilar) {
  PairConstraints p;
  p.similar = similar;
  p.dissimilar = dissimilar;
  return p;
}

py::dict train_py(const F64Array& x, std::size_t k, double lambda, std::size_t iters, std::uint64_t seed,
                  double rel_tolerance, double mu, const std::vector<std::pair<std::size_t, std::size_t>>& similar,
                  const std::vector<std::pair<std::size_t, std::size_t>>& dissimilar, std::size_t threads) {
  TrainConfig cfg;
  cfg.k = k;
  cfg.lambda = lambda;
  cfg.outer_iters = iters;
  cfg.seed = seed;
  cfg.rel_tolerance = rel_tolerance;
  cfg.mu = mu;
  cfg.threads = threads;
  const DataMatrix data = to_matrix(x, true);
  const PairConstraints pairs = make_pairs(similar, dissimilar);
  TrainResult res;
  {
    py::gil_scoped_release release;
    res = pairs.empty() && mu == 0.0 ? train(data, cfg) : train_semisupervised(data, cfg, pairs);
  }
  py::list history;
  for (const auto& h : res.history) {
    py::dict rec;
    rec["iteration"] = h.iteration;
    rec["step"] = h.step == HalfStep::kCodes ? "codes" : "spectrum";
    rec["objective"] = h.objective;
    rec["pair_term"] = h.pair_term;
    history.append(rec);
  }
  py::dict out;
  out["model"] = res.params;
  out["history"] = history;
  return out;
}

}  // namespace

PYBIND11_MODULE(_cbe, m) {
  m.doc() = "Circulant binary embedding";
  m.attr("__version__") = "0.1.0";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<UnboundedError>(m, "UnboundedError", PyExc_ArithmeticError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<CirculantParams>(m, "Model")
      .def_property_readonly("d", [](const CirculantParams& p) { return p.d; })
      .def_property_readonly("k", [](const CirculantParams& p) { return p.k; })
      .def_property_readonly("seed", [](const CirculantParams& p) { return p.seed; })
      .def_property_readonly("kind", [](const CirculantParams& p) { return kind_name(p.kind); })
      .def_property_readonly("r", [](const CirculantParams& p) { return py::array_t<double>(p.r.size(), p.r.data()); })
      .def_property_readonly("signs",
                             [](const CirculantParams& p) {
                               py::array_t<std::int8_t> s(p.signs.size());
                               std::memcpy(s.mutable_data(), p.signs.data(), p.signs.size());
                               return s;
                             })
      .def(
          "encode",
          [](const CirculantParams& p, const F64Array& x, std::size_t threads) {
            BinaryCodeMatrix c;
            const DataMatrix data = to_matrix(x, false);
            {
              py::gil_scoped_release release;
              c = encode_batch(p, data, threads);
            }
            return unpack(c);
          },
          py::arg("x"), py::arg("threads") = 1, "+-1 codes of shape (n, k) for the rows of x.")
      .def(
          "encode_packed",
          [](const CirculantParams& p, const F64Array& x, std::size_t threads) {
            return packed_words(encode_batch(p, to_matrix(x, false), threads));
          },
          py::arg("x"), py::arg("threads") = 1, "Codes packed LSB-first into uint64 words, shape (n, ceil(k/64)).")
      .def(
          "project",
          [](const CirculantParams& p, const F64Array& x) {
            const std::vector<double> y = CirculantProjector(p).project(to_vector(x));
            return py::array_t<double>(y.size(), y.data());
          },
          py::arg("x"), "All d projections circ(r) diag(signs) x.")
      .def("save", [](const CirculantParams& p, const std::string& path) { io::save_model(path, p); })
      .def("to_bytes",
           [](const CirculantParams& p) {
             const io::Bytes b = io::serialize_model(p);
             return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
           })
      .def("__eq__", [](const CirculantParams& a, const CirculantParams& b) { return a == b; })
      .def("__repr__", [](const CirculantParams& p) {
        return "Model(d=" + std::to_string(p.d) + ", k=" + std::to_string(p.k) + ", kind=" + kind_name(p.kind) + ")";
      });

  m.def("sample_params", &sample_params, py::arg("d"), py::arg("k"), py::arg("seed") = 0,
        "Random model: Gaussian r and uniform sign flips.");
  m.def("load_model", [](const std::string& path) { return io::load_model(path); }, py::arg("path"));
  m.def(
      "model_from_bytes",
      [](const py::bytes& b) {
        const std::string s = b;
        return io::deserialize_model({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
      },
      py::arg("data"));

  m.def("train", &train_py, py::arg("x"), py::arg("k"), py::arg("lam") = 1.0, py::arg("iters") = 10,
        py::arg("seed") = 0, py::arg("rel_tolerance") = 1e-6, py::arg("mu") = 0.0,
        py::arg("similar") = std::vector<std::pair<std::size_t, std::size_t>>{},
        py::arg("dissimilar") = std::vector<std::pair<std::size_t, std::size_t>>{}, py::arg("threads") = 1,
        "Learns r by alternating minimization. Rows of x are normalized first.");

  m.def(
      "hamming",
      [](const py::array_t<std::int8_t, py::array::c_style | py::array::forcecast>& a,
         const py::array_t<std::int8_t, py::array::c_style | py::array::forcecast>& b) {
        if (a.ndim() != 1 || b.ndim() != 1 || a.size() != b.size())
          throw DimensionError("hamming expects two 1-D codes of equal length");
        std::size_t dist = 0;
        for (py::ssize_t i = 0; i < a.size(); ++i) dist += (a.data()[i] > 0) != (b.data()[i] > 0);
        return dist;
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "dft",
      [](const F64Array& x) {
        const ComplexVector s = dft(to_vector(x));
        return py::array_t<Complex>(s.size(), s.data());
      },
      py::arg("x"), "Unnormalized forward DFT of a real vector.");
  m.def(
      "circulant_multiply",
      [](const F64Array& r, const F64Array& x) {
        const std::vector<double> y = circulant_multiply(to_vector(r), to_vector(x));
        return py::array_t<double>(y.size(), y.data());
      },
      py::arg("r"), py::arg("x"), "circ(r) @ x via FFT.");

  m.def(
      "simulate_variance",
      [](double theta, std::size_t k, std::size_t d, std::size_t inner, std::size_t outer, std::uint64_t seed,
         std::size_t threads) {
        VarianceReport rep;
        {
          py::gil_scoped_release release;
          rep = simulate_variance(theta, k, d, inner, outer, seed, threads);
        }
        py::dict out;
        out["sample_mean"] = rep.sample_mean;
        out["sample_var"] = rep.sample_var;
        out["analytic_mean"] = rep.analytic_mean;
        out["analytic_var"] = rep.analytic_var;
        return out;
      },
      py::arg("theta"), py::arg("k"), py::arg("d") = 256, py::arg("inner") = 200, py::arg("outer") = 200,
      py::arg("seed") = 0, py::arg("threads") = 1,
      "Monte-Carlo mean and variance of the normalized Hamming distance at angle theta.");

  m.def(
      "recall",
      [](const CirculantParams& p, const F64Array& database, const F64Array& queries, std::size_t n_gt,
         std::size_t r_max, std::size_t threads) {
        const EvalReport rep =
            evaluate_model(p, to_matrix(database, true), to_matrix(queries, true), n_gt, r_max, threads);
        const std::vector<double>& curve = rep.recall.begin()->second;
        return py::array_t<double>(curve.size(), curve.data());
      },
      py::arg("model"), py::arg("database"), py::arg("queries"), py::arg("n_gt") = 10, py::arg("r_max") = 100,
      py::arg("threads") = 1, "recall@1..r_max of the model's Hamming ranking against exact l2 neighbours.");
}
