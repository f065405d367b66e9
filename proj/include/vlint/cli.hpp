#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <vlint/diagnostics.hpp>
#include <vlint/prk.hpp>
#include <vlint/system.hpp>

namespace vlint::cli {

inline constexpr const char* version = "0.1.0";

enum exit_code : int {
    ok = 0,
    failure = 1,
    config_error = 2,
    solver_divergence = 3,
};

/// Raised for malformed or inconsistent configuration; maps to exit code 2.
class config_error_exception : public vlint::error {
public:
    using vlint::error::error;
};

/// Everything a subcommand needs. Loaded from a flat JSON object whose keys
/// match the field names; command-line flags override file values.
struct run_config {
    std::string model = "kepler";
    std::string method = "gauss1";
    std::vector<std::string> methods; ///< convergence: empty means the default method list

    double h = 0.1;
    double t_final = 7.0;
    std::optional<vector> q0; ///< default: the model's standard initial state

    // Model parameters.
    double e = 0.5;
    double a_axis = 1.0;
    std::optional<double> h0;
    std::vector<double> gammas{4.0, 2.0};
    double separation = 1.0;

    solver_config solver;

    // Convergence.
    std::vector<double> step_sizes; ///< empty: dividing_step_sizes(t_final, h_max, h_min, step_count)
    double h_max = 0.35;
    double h_min = 0.0035;
    std::size_t step_count = 12;
    double reference_h = 1e-6;
    double error_floor = 1e-12;

    // Drift.
    std::size_t max_samples = 2000;

    std::filesystem::path out_dir = ".";
};

/// Parses a JSON document into `base`, overriding only the keys present.
/// Unknown keys are rejected.
run_config parse_config(const std::string& json_text, run_config base = {});
run_config load_config_file(const std::filesystem::path& path, run_config base = {});

velocity_linear_system make_model(const run_config& cfg);
vector default_initial_state(const run_config& cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

int cmd_run(const run_config& cfg, std::ostream& log);
int cmd_convergence(const run_config& cfg, std::ostream& log);
int cmd_drift(const run_config& cfg, std::ostream& log);
int cmd_tableau_check(std::ostream& out);

/// Entry point shared by the executable and the tests.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vlint::cli
