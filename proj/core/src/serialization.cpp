#include "holograph/serialization.hpp"

#include "holograph/errors.hpp"

namespace holograph {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows.push_back(m(i, j));
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, int n) {
  if (static_cast<int>(j.size()) != n * n)
    throw FormatError("matrix payload has wrong length");
  Eigen::MatrixXd m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) m(i, c) = j[static_cast<std::size_t>(k++)];
  return m;
}

}  // namespace

json state_to_json(const CausalState& state) {
  return json{{"context", state.context().ids()},
              {"W", matrix_to_json(state.W())},
              {"L", matrix_to_json(state.L())}};
}

CausalState state_from_json(const json& j) {
  const std::vector<int> ids = j.at("context").get<std::vector<int>>();
  const Context context(ids);
  const int n = context.size();
  return CausalState(context, matrix_from_json(j.at("W"), n),
                     matrix_from_json(j.at("L"), n));
}

json loss_to_json(const LossBreakdown& loss) {
  return json{{"semantic", loss.semantic},
              {"descent", loss.descent},
              {"acyclicity", loss.acyclicity},
              {"spectral", loss.spectral},
              {"total", loss.total}};
}

LossBreakdown loss_from_json(const json& j) {
  LossBreakdown loss;
  loss.semantic = j.at("semantic");
  loss.descent = j.at("descent");
  loss.acyclicity = j.at("acyclicity");
  loss.spectral = j.at("spectral");
  loss.total = j.at("total");
  return loss;
}

json axiom_report_to_json(const AxiomReport& report) {
  return json{{"axiom", axiom_name(report.axiom)},
              {"error", report.error},
              {"passed", report.passed},
              {"threshold", report.threshold}};
}

}  // namespace holograph
