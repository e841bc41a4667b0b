#pragma once

#include <json.hpp>

#include "saddle/dynamics.hpp"
#include "saddle/games.hpp"
#include "saddle/linalg.hpp"
#include "saddle/predict.hpp"
#include "saddle/spectral.hpp"
#include "saddle/verify.hpp"

namespace saddle {

using Json = nlohmann::json;

/// {"rows", "cols", "data"} with row-major data.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {"A", "B", "b", "c", "e", "f", "d", "g", "zero_sum"}. B may be null when
/// zero_sum is true, meaning B = -A; omitted vectors are zero. In the
/// zero-sum form only A, b, c, d are read.
Json to_json(const BilinearGame& game);
BilinearGame game_from_json(const Json& j);

Json to_json(Complex z);
Json to_json(const SpectralReport& report);
Json to_json(const LimitPrediction& prediction);
Json to_json(const VerificationReport& report);

}  // namespace saddle
