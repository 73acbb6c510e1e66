#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "a2nlf/errors.hpp"
#include "a2nlf/harness.hpp"
#include "a2nlf/model_io.hpp"

namespace py = pybind11;
using namespace a2nlf;

namespace {

py::array_t<double> to_numpy(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  return out;
}

void from_numpy(DenseMatrix& m, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != m.rows() ||
      static_cast<std::size_t>(a.shape(1)) != m.cols())
    throw DomainError("array shape does not match the factor matrix");
  auto view = a.unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = view(r, c);
}

template <DenseMatrix FactorState::*M>
void def_matrix(py::class_<FactorState>& cls, const char* name) {
  cls.def_property(
      name, [](const FactorState& s) { return to_numpy(s.*M); },
      [](FactorState& s, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
        from_numpy(s.*M, a);
      });
}

HdiMatrix matrix_from_arrays(std::size_t rows, std::size_t cols, const std::vector<Index>& r,
                             const std::vector<Index>& c, const std::vector<double>& v) {
  if (r.size() != c.size() || r.size() != v.size())
    throw DomainError("row, column and value arrays differ in length");
  std::vector<Entry> entries(r.size());
  for (std::size_t n = 0; n < r.size(); ++n) entries[n] = {r[n], c[n], v[n]};
  return HdiMatrix(rows, cols, std::move(entries));
}

struct AdaptiveResult {
  TrainReport report;
  Swarm swarm;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonnegative latent factor learning with swarm-adapted ADMM";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<HdiMatrix>(m, "HdiMatrix")
      .def(py::init(&matrix_from_arrays), py::arg("num_rows"), py::arg("num_cols"), py::arg("rows"),
           py::arg("cols"), py::arg("values"))
      .def_property_readonly("num_rows", &HdiMatrix::num_rows)
      .def_property_readonly("num_cols", &HdiMatrix::num_cols)
      .def("__len__", &HdiMatrix::size)
      .def("row_count", &HdiMatrix::row_count)
      .def("col_count", &HdiMatrix::col_count)
      .def("transposed", &HdiMatrix::transposed)
      .def("entries", [](const HdiMatrix& h) {
        std::vector<Index> r, c;
        std::vector<double> v;
        for (const Entry& e : h.entries()) {
          r.push_back(e.row);
          c.push_back(e.col);
          v.push_back(e.value);
        }
        return py::make_tuple(py::array(py::cast(r)), py::array(py::cast(c)), py::array(py::cast(v)));
      });

  py::class_<RatingData>(m, "RatingData")
      .def_readonly("matrix", &RatingData::matrix)
      .def_readonly("row_ids", &RatingData::row_ids)
      .def_readonly("col_ids", &RatingData::col_ids);

  py::class_<DatasetSplit>(m, "DatasetSplit")
      .def_readonly("train", &DatasetSplit::train)
      .def_readonly("validation", &DatasetSplit::validation)
      .def_readonly("test", &DatasetSplit::test);

  m.def("parse_ratings_text", [](const std::string& text, const std::string& sep) {
    std::istringstream in(text);
    return parse_ratings(in, parse_separator(sep));
  }, py::arg("text"), py::arg("sep") = "dcolon");
  m.def("parse_ratings_file", [](const std::string& path, const std::string& sep) {
    return parse_ratings_file(path, parse_separator(sep));
  }, py::arg("path"), py::arg("sep") = "dcolon");
  m.def("density", &density);
  m.def("ten_fold_splits", &ten_fold_splits, py::arg("matrix"), py::arg("seed"));

  py::class_<HyperParams>(m, "HyperParams")
      .def(py::init<double, double>(), py::arg("lam"), py::arg("eta"))
      .def_property_readonly("lam", &HyperParams::lambda)
      .def_property_readonly("eta", &HyperParams::eta);

  py::class_<FactorState> state(m, "FactorState");
  state.def_readonly("rank", &FactorState::rank)
      .def_property_readonly("num_rows", &FactorState::num_rows)
      .def_property_readonly("num_cols", &FactorState::num_cols)
      .def("copy", [](const FactorState& s) { return s; })
      .def("__eq__", [](const FactorState& a, const FactorState& b) { return a == b; });
  def_matrix<&FactorState::P>(state, "P");
  def_matrix<&FactorState::Z>(state, "Z");
  def_matrix<&FactorState::A>(state, "A");
  def_matrix<&FactorState::X>(state, "X");
  def_matrix<&FactorState::H>(state, "H");
  def_matrix<&FactorState::W>(state, "W");

  m.def("init_state", &init_state, py::arg("num_rows"), py::arg("num_cols"), py::arg("rank"), py::arg("seed"));
  using Kernel = void (*)(FactorState&, const HdiMatrix&, const HyperParams&, std::size_t);
  m.def("update_p_column", static_cast<Kernel>(&update_p_column));
  m.def("update_z_column", static_cast<Kernel>(&update_z_column));
  m.def("project_a_column", &project_a_column);
  m.def("project_x_column", &project_x_column);
  m.def("update_h_column", &update_h_column);
  m.def("update_w_column", &update_w_column);
  m.def("train_iteration",
        static_cast<void (*)(FactorState&, const HdiMatrix&, const HyperParams&)>(&train_iteration));
  m.def("predict", &predict);
  m.def("rmse", [](const FactorState& s, const HdiMatrix& t) { return rmse(s, t).value; });
  m.def("mae", [](const FactorState& s, const HdiMatrix& t) { return mae(s, t).value; });

  py::class_<TerminationPolicy>(m, "TerminationPolicy")
      .def(py::init([](double tol, std::size_t patience, std::size_t max_iters) {
             TerminationPolicy p{tol, patience, max_iters};
             p.validate();
             return p;
           }),
           py::arg("tol") = 1e-5, py::arg("patience") = 5, py::arg("max_iters") = 1000)
      .def_readonly("tol", &TerminationPolicy::tol)
      .def_readonly("patience", &TerminationPolicy::patience)
      .def_readonly("max_iters", &TerminationPolicy::max_iters);
  m.def("check_termination", [](const std::vector<double>& history, const TerminationPolicy& p) -> std::optional<std::string> {
    if (const auto stop = check_termination(history, p)) return std::string(to_string(*stop));
    return std::nullopt;
  });

  py::class_<SwarmConfig>(m, "SwarmConfig")
      .def(py::init<>())
      .def_readwrite("size", &SwarmConfig::size)
      .def_readwrite("inertia", &SwarmConfig::inertia)
      .def_readwrite("accel_local", &SwarmConfig::accel_local)
      .def_readwrite("accel_global", &SwarmConfig::accel_global)
      .def_readwrite("velocity_fraction", &SwarmConfig::velocity_fraction)
      .def_property("lambda_bounds", [](const SwarmConfig& c) { return std::make_pair(c.lambda.lo, c.lambda.hi); },
                    [](SwarmConfig& c, std::pair<double, double> b) { c.lambda = {b.first, b.second}; })
      .def_property("eta_bounds", [](const SwarmConfig& c) { return std::make_pair(c.eta.lo, c.eta.hi); },
                    [](SwarmConfig& c, std::pair<double, double> b) { c.eta = {b.first, b.second}; });

  py::class_<Swarm>(m, "Swarm")
      .def_readonly("f_hat", &Swarm::f_hat)
      .def_readonly("gbest_m", &Swarm::gbest_m)
      .def_property_readonly("gbest", [](const Swarm& s) { return std::make_pair(s.gbest.lambda, s.gbest.eta); })
      .def_property_readonly("positions", [](const Swarm& s) {
        std::vector<std::pair<double, double>> out;
        for (const Particle& p : s.particles) out.emplace_back(p.position.lambda, p.position.eta);
        return out;
      })
      .def_property_readonly("velocities", [](const Swarm& s) {
        std::vector<std::pair<double, double>> out;
        for (const Particle& p : s.particles) out.emplace_back(p.velocity.lambda, p.velocity.eta);
        return out;
      });
  m.def("init_swarm", &init_swarm, py::arg("config"), py::arg("seed"));
  m.def("evolve_particle", static_cast<void (*)(Swarm&, std::size_t)>(&evolve_particle));
  m.def("measure_and_update", &measure_and_update);

  py::class_<TrainReport>(m, "TrainReport")
      .def_property_readonly("reason", [](const TrainReport& r) { return std::string(to_string(r.reason)); })
      .def_property_readonly("final_hyper", [](const TrainReport& r) {
        return std::make_pair(r.final_hyper.lambda, r.final_hyper.eta);
      })
      .def_property_readonly("train_rmse", [](const TrainReport& r) {
        std::vector<double> v;
        for (const auto& rec : r.records) v.push_back(rec.train_rmse);
        return v;
      })
      .def_property_readonly("validation_m", [](const TrainReport& r) {
        std::vector<double> v;
        for (const auto& rec : r.records) v.push_back(rec.validation_m);
        return v;
      })
      .def("metrics_csv", &metrics_csv);

  py::class_<AdaptiveResult>(m, "AdaptiveResult")
      .def_readonly("report", &AdaptiveResult::report)
      .def_readonly("swarm", &AdaptiveResult::swarm);

  m.def("train_fixed", [](FactorState& s, const HdiMatrix& train, const HdiMatrix& validation,
                          const HyperParams& hp, const TerminationPolicy& policy, const std::string& metric) {
    SessionOptions o;
    o.policy = policy;
    o.metric = parse_metric(metric);
    return train_fixed(s, train, validation, hp, o);
  }, py::arg("state"), py::arg("train"), py::arg("validation"), py::arg("hp"),
     py::arg("policy") = TerminationPolicy{}, py::arg("metric") = "rmse");

  m.def("adaptive_train", [](FactorState& s, const HdiMatrix& train, const HdiMatrix& validation,
                             const SwarmConfig& config, std::uint64_t seed, const TerminationPolicy& policy,
                             const std::string& metric) {
    SessionOptions o;
    o.policy = policy;
    o.metric = parse_metric(metric);
    AdaptiveResult result{{}, init_swarm(config, seed)};
    result.report = adaptive_train(s, train, validation, result.swarm, o);
    return result;
  }, py::arg("state"), py::arg("train"), py::arg("validation"), py::arg("config") = SwarmConfig{},
     py::arg("seed") = 0, py::arg("policy") = TerminationPolicy{}, py::arg("metric") = "rmse");

  m.def("run_cross_validation", [](const std::string& data, const std::string& sep, std::size_t rank,
                                   const std::string& mode, double lam, double eta, const SwarmConfig& swarm,
                                   const TerminationPolicy& policy, const std::vector<std::size_t>& folds,
                                   std::uint64_t seed, const std::string& out) {
    RunConfig c;
    c.data_path = data;
    c.sep = parse_separator(sep);
    c.rank = rank;
    c.mode = parse_mode(mode);
    c.lambda = lam;
    c.eta = eta;
    c.swarm = swarm;
    c.policy = policy;
    c.folds = folds;
    c.seed = seed;
    c.out_dir = out;
    return summary_json(run_cross_validation(c), c);
  }, "Runs the ten-fold protocol and returns the summary JSON text.",
     py::arg("data"), py::arg("sep") = "dcolon", py::arg("rank") = 20, py::arg("mode") = "a2nlf",
     py::arg("lam") = 0.5, py::arg("eta") = 1.0, py::arg("swarm") = SwarmConfig{},
     py::arg("policy") = TerminationPolicy{}, py::arg("folds") = std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9},
     py::arg("seed") = 42, py::arg("out") = "");

  m.def("load_model", [](const std::string& path) {
    ModelArtifact a = load_model(path);
    return py::make_tuple(a.state, a.row_ids, a.col_ids, a.fold);
  });
  m.def("evaluate_model", [](const std::string& model, const std::string& data, const std::string& sep,
                             const std::string& subset) {
    const EvaluationResult r = evaluate_model(model, parse_ratings_file(data, parse_separator(sep)), parse_subset(subset));
    return py::make_tuple(r.rmse.value, r.mae.value);
  }, py::arg("model"), py::arg("data"), py::arg("sep") = "dcolon", py::arg("subset") = "test");
}
