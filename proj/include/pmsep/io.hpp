#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "pmsep/forward.hpp"
#include "pmsep/model.hpp"
#include "pmsep/piecewise.hpp"

namespace pmsep::io {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Throws InputError naming the file and the
/// byte offset of a syntax error.
Json read_json_file(const std::filesystem::path& path);

/// Strings ("p/q", decimals), JSON numbers, or {"exact": "p/q", ...}
/// objects. Throws InputError mentioning `where` on failure.
Scalar parse_scalar(const Json& j, const std::string& where);

/// {"exact": "p/q", "approx": double}.
Json scalar_json(const Scalar& x);

/// Plain "p/q" string, used inside dataset files.
Json scalar_text(const Scalar& x);

StateSpace parse_states(const Json& j);
Prior parse_prior(const Json& j, const StateSpace& space, const std::string& fallback_id);
Menu parse_menu(const Json& j, const StateSpace& space);

/// Accepts {"points": [[z, v], ...]}, {"segments": [{lo, hi, c0, c1, c2}]}
/// or {"variance": {"kappa": k}} (requires the prior mean).
PiecewiseFunction parse_function(const Json& j, const std::optional<Scalar>& prior_mean = std::nullopt);

/// Breakpoint table plus segment coefficients, all scalars in exact form.
Json function_json(const PiecewiseFunction& f);

/// Throws InputError for unresolved references or mismatched shapes.
Dataset parse_dataset(const Json& j);
Json dataset_json(const Dataset& d);

struct ForwardInput {
  ForwardProblem problem;
  std::optional<std::size_t> refine;
};

ForwardInput parse_forward_problem(const Json& j);

struct GeneratorSpec {
  Prior prior;
  std::vector<Menu> menus;
  PiecewiseFunction cost;
  TieBreak tie_break = TieBreak::lowest_index;
};

GeneratorSpec parse_generator_spec(const Json& j);

/// A named (x, y) series sampled at the function's breakpoints and `samples`
/// evenly spaced points, as decimals.
struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

Series sample(const std::string& name, const std::function<Scalar(const Scalar&)>& f,
              std::vector<Scalar> extra_points, int samples = 100);

/// {"name", "points", "csv"} with a "z,<name>" CSV body.
Json series_json(const Series& s);

/// Long-format CSV: series,z,value.
std::string series_csv(const std::vector<Series>& series);

}  // namespace pmsep::io
