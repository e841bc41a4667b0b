#include "saddle/json_io.hpp"

#include <cmath>

#include "saddle/errors.hpp"

namespace saddle {

namespace {

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::Config, std::string(what) + " must be an array of numbers");
  Vector v;
  for (const Json& x : j) {
    if (!x.is_number()) throw Error(ErrorKind::Config, std::string(what) + " must contain numbers only");
    v.push_back(x.get<double>());
  }
  return v;
}

Vector optional_vector(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  return vector_from_json(j.at(key), key);
}

double optional_number(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return 0.0;
  if (!j.at(key).is_number()) throw Error(ErrorKind::Config, std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

// Non-finite numbers have no JSON encoding; they are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const Matrix& m) { return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

Matrix matrix_from_json(const Json& j) {
  // Nested rows: [[a, b], [c, d]].
  if (j.is_array()) {
    if (j.empty() || !j.front().is_array()) throw Error(ErrorKind::Config, "matrix rows must be arrays");
    const std::size_t cols = j.front().size();
    Vector data;
    for (const Json& row : j) {
      Vector r = vector_from_json(row, "matrix row");
      if (r.size() != cols) throw Error(ErrorKind::Config, "matrix rows must have equal length");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(j.size(), cols, std::move(data));
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorKind::Config, "matrix needs rows, cols and data");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  Vector data = vector_from_json(j.at("data"), "matrix data");
  if (data.size() != rows * cols) throw Error(ErrorKind::Config, "matrix data length must equal rows * cols");
  return Matrix(rows, cols, std::move(data));
}

Json to_json(const BilinearGame& game) {
  return Json{{"A", to_json(game.A)}, {"B", to_json(game.B)}, {"b", game.b},     {"c", game.c},
              {"e", game.e},          {"f", game.f},          {"d", game.d},     {"g", game.g},
              {"zero_sum", game.is_zero_sum()}};
}

BilinearGame game_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("A")) throw Error(ErrorKind::Config, "game needs a matrix A");
  Matrix A = matrix_from_json(j.at("A"));
  const bool has_B = j.contains("B") && !j.at("B").is_null();
  // Without B the game is zero-sum unless stated otherwise.
  const bool zero_sum = j.value("zero_sum", !has_B);
  if (zero_sum && !has_B)
    return BilinearGame::zero_sum(std::move(A), optional_vector(j, "b"), optional_vector(j, "c"), optional_number(j, "d"));
  if (!has_B) throw Error(ErrorKind::Config, "general-sum game needs a matrix B");
  try {
    return BilinearGame(std::move(A), matrix_from_json(j.at("B")), optional_vector(j, "b"), optional_vector(j, "c"),
                        optional_vector(j, "e"), optional_vector(j, "f"), optional_number(j, "d"),
                        optional_number(j, "g"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DimensionMismatch) throw Error(ErrorKind::Config, e.what());
    throw;
  }
}

Json to_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json to_json(const SpectralReport& r) {
  Json mu = Json::array();
  for (Complex z : r.mu_set) mu.push_back(to_json(z));
  Json j{{"algorithm", to_string(r.algorithm)},
         {"eta", r.eta},
         {"zero_sum", r.zero_sum},
         {"mu_set", mu},
         {"mu_min", number(r.mu_min)},
         {"mu_max", number(r.mu_max)},
         {"lambda_star", number(r.lambda_star)},
         {"lambda_dstar", number(r.lambda_dstar)},
         {"lambda_max", number(r.lambda_max)},
         {"C", r.C ? number(*r.C) : Json(nullptr)},
         {"mu_star", r.mu_star ? number(*r.mu_star) : Json(nullptr)},
         {"mu_dstar", r.mu_dstar ? number(*r.mu_dstar) : Json(nullptr)},
         {"eta_regime", to_string(r.eta_regime)},
         {"diagonalizable", to_string(r.diagonalizable)},
         {"assumptions",
          {{"nash_nonempty", r.assumptions.nash_nonempty},
           {"spectrum_real_nonpositive", r.assumptions.spectrum_real_nonpositive},
           {"eta_in_range", r.assumptions.eta_in_range},
           {"diagonalizable_or_invertible", r.assumptions.diagonalizable_or_invertible}}},
         {"violated", r.violated}};
  return j;
}

Json to_json(const LimitPrediction& p) {
  return Json{{"valid", p.valid},
              {"reason", p.reason},
              {"geometry", to_string(p.geometry)},
              {"part3b", p.part3b},
              {"x_inf", p.x_inf},
              {"y_inf", p.y_inf}};
}

Json to_json(const VerificationReport& report) {
  Json checks = Json::array();
  for (const CheckResult& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", number(c.measured)},
                      {"tolerance", number(c.tolerance)},
                      {"detail", c.detail}});
  return Json{{"all_pass", report.all_pass()}, {"checks", checks}};
}

}  // namespace saddle
