#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "gapforce/io.hpp"
#include "gapforce/parallel.hpp"
#include "gapforce/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gapforce;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct GlobalOptions {
    int threads = 1;
    bool verbose = false;
    std::string output_dir;  // --output-dir flag, highest precedence
};

void log_verbose(const GlobalOptions& global, const std::string& msg) {
    if (global.verbose) std::cerr << "gapforce: " << msg << '\n';
}

// Precedence: --output-dir flag, config value, GAPFORCE_OUTPUT_DIR, cwd.
fs::path resolve_output_dir(const GlobalOptions& global, const std::string& config_value) {
    if (!global.output_dir.empty()) return global.output_dir;
    if (!config_value.empty()) return config_value;
    if (const char* env = std::getenv("GAPFORCE_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

fs::path prepare_output_dir(const GlobalOptions& global, const std::string& config_value) {
    const fs::path dir = resolve_output_dir(global, config_value);
    fs::create_directories(dir);
    return dir;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig config = read_config_file(path);
    for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParseError("override '" + item + "' must look like section.key=value");
        }
        apply_override(config, item.substr(0, eq), item.substr(eq + 1));
    }
    if (!overrides.empty()) validate_run_config(config);
    return config;
}

void write_json_file(const fs::path& path, const nlohmann::json& value) {
    write_text_file(path, value.dump(2) + "\n");
}

int run_skew_table(const GlobalOptions& global, int poles, int slots, int g_max, double theta_deg,
                   bool theta_set, const std::vector<int>& segment_counts) {
    const double theta = theta_set ? theta_deg * kDegToRad : optimal_skew_angle(poles, slots);
    const HarmonicOrderSet orders = harmonic_orders(poles, slots, g_max);

    std::ostringstream csv;
    csv << "g,nu,nu_value,kappa_continuous";
    for (int q : segment_counts) csv << ",kappa_q" << q;
    csv << '\n';
    for (const HarmonicOrder& entry : orders.orders) {
        const double nu = entry.order.value();
        csv << entry.generator << ',' << entry.order.str() << ',' << format_double(nu) << ','
            << format_double(skew_factor(theta, nu));
        for (int q : segment_counts) {
            csv << ',' << format_double(discrete_skew_factor(theta, q, nu));
        }
        csv << '\n';
    }

    const fs::path dir = prepare_output_dir(global, "");
    write_text_file(dir / "skew_table.csv", csv.str());

    std::cout << "poles=" << poles << " slots=" << slots << "\n"
              << "theta_skew = " << format_double(theta) << " rad = "
              << format_double(theta / kDegToRad) << " deg\n"
              << csv.str();
    log_verbose(global, "wrote " + (dir / "skew_table.csv").string());
    return 0;
}

int run_synth(const GlobalOptions& global, const std::string& config_path,
              const std::vector<std::string>& overrides, std::string out_file) {
    const RunConfig config = load_config(config_path, overrides);
    const AirGapFieldMap field = build_field(config);
    const fs::path dir = prepare_output_dir(global, config.evaluation.output_dir);
    const fs::path out = out_file.empty() ? dir / "field_map.csv" : fs::path(out_file);
    write_field_csv_file(field, out);
    std::cout << "wrote " << out.string() << " (" << field.slices << " slices, "
              << field.time_samples << " x " << field.angle_samples << " grid)\n";
    return 0;
}

int run_torque_cmd(const GlobalOptions& global, const std::string& config_path,
                   const std::vector<std::string>& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    const TorqueRun run = run_torque(config);
    const fs::path dir = prepare_output_dir(global, config.evaluation.output_dir);

    write_torque_csv_file(run.torque, dir / "torque_series.csv");
    write_spectrum_csv_file(run.spectrum, dir / "torque_spectrum.csv");
    write_json_file(dir / "summary.json", torque_summary_json(config, run));

    std::cout << "mean torque   = " << format_double(run.metrics.mean) << " N*m\n"
              << "peak-to-peak  = " << format_double(run.metrics.peak_to_peak) << " N*m\n"
              << "artifacts in " << dir.string() << "\n";
    return 0;
}

int run_tooth_forces_cmd(const GlobalOptions& global, const std::string& config_path,
                         const std::vector<std::string>& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    const AirGapFieldMap field = build_field(config);
    const ToothForceSeries series = run_tooth_forces(config, field);
    const fs::path dir = prepare_output_dir(global, config.evaluation.output_dir);

    write_tooth_forces_csv_file(series, dir / "tooth_forces.csv");
    write_tooth_forces_per_slice_csv_file(series, dir / "tooth_forces_per_slice.csv");

    std::cout << "path mode     = " << to_string(series.path) << "\n"
              << "sign          = " << series.sign_convention << "\n"
              << "artifacts in " << dir.string() << "\n";
    return 0;
}

int run_spectrum2d(const GlobalOptions& global, const std::string& config_path,
                   const std::vector<std::string>& overrides, const std::string& component_name,
                   const std::string& mode_name) {
    const RunConfig config = load_config(config_path, overrides);
    const AirGapFieldMap field = build_field(config);
    const ToothForceSeries series = run_tooth_forces(config, field);

    FieldComponent component = FieldComponent::radial;
    if (component_name == "tangential") component = FieldComponent::tangential;
    if (component_name == "axial") component = FieldComponent::axial;
    const ToothSpectrumMode mode = mode_name == "mean" ? ToothSpectrumMode::mean_of_teeth
                                                       : ToothSpectrumMode::teeth_as_samples;

    const Spectrum2D spectrum =
        spectrum_space_time(series, component, mode, config.geometry.pole_count,
                            config.geometry.slot_count);
    const fs::path dir = prepare_output_dir(global, config.evaluation.output_dir);
    const fs::path out = dir / ("force_spectrum2d_" + component_name + ".csv");
    write_spectrum_csv_file(spectrum, out);
    std::cout << "wrote " << out.string() << " (spatial axis in multiples of "
              << spectrum.spatial_label_base << ", temporal of " << spectrum.temporal_label_base
              << ")\n";
    return 0;
}

int run_axial_force(double torque, double diameter, double theta, bool radians) {
    const double theta_rad = radians ? theta : theta * kDegToRad;
    std::cout << format_double(axial_force_estimate(torque, diameter, theta_rad)) << "\n";
    return 0;
}

int run_compare_cmd(const GlobalOptions& global, const std::string& reference_path,
                    const std::string& variant_path,
                    const std::vector<std::string>& reference_overrides,
                    const std::vector<std::string>& variant_overrides) {
    const RunConfig reference = load_config(reference_path, reference_overrides);
    const RunConfig variant = load_config(variant_path, variant_overrides);
    const CompareRun run = run_compare(reference, variant);
    const fs::path dir = prepare_output_dir(global, variant.evaluation.output_dir);

    write_torque_csv_file(run.reference.torque, dir / "reference_torque.csv");
    write_torque_csv_file(run.variant.torque, dir / "variant_torque.csv");
    write_spectrum_csv_file(run.reference.spectrum, dir / "reference_spectrum.csv");
    write_spectrum_csv_file(run.variant.spectrum, dir / "variant_spectrum.csv");

    std::ostringstream csv;
    csv << "order,reference_amplitude,variant_amplitude,ratio\n";
    for (std::size_t k = 0; k < run.ratio.size(); ++k) {
        csv << k << ',' << format_double(run.reference.spectrum.amplitude[k]) << ','
            << format_double(run.variant.spectrum.amplitude[k]) << ',';
        if (run.ratio[k].has_value()) csv << format_double(*run.ratio[k]);
        csv << '\n';
    }
    write_text_file(dir / "suppression_ratios.csv", csv.str());
    write_json_file(dir / "compare_summary.json", compare_summary_json(reference, variant, run));

    std::cout << "reference peak-to-peak = " << format_double(run.reference.metrics.peak_to_peak)
              << " N*m\n"
              << "variant peak-to-peak   = " << format_double(run.variant.metrics.peak_to_peak)
              << " N*m\n"
              << "artifacts in " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Air-gap field post-processing for skewed PMSMs: MST torque, tooth forces,\n"
                 "skew factors and space-time force spectra."};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--threads", global.threads, "worker threads (results are identical for any count)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", global.verbose, "progress output on stderr");
    app.add_option("--output-dir", global.output_dir,
                   "output directory (overrides config and GAPFORCE_OUTPUT_DIR)");

    // skew-table
    auto* skew_cmd = app.add_subcommand("skew-table",
                                        "tabulate the optimal skew angle, harmonic orders and "
                                        "skew factors");
    int poles = 0, slots = 0, g_max = 2;
    double theta_deg = 0.0;
    std::vector<int> segment_counts{2, 3, 4};
    skew_cmd->add_option("--poles", poles, "pole count")->required();
    skew_cmd->add_option("--slots", slots, "slot count")->required();
    skew_cmd->add_option("--gmax", g_max, "largest harmonic generator index");
    auto* theta_opt =
        skew_cmd->add_option("--theta", theta_deg, "skew angle in degrees (default: optimal)");
    skew_cmd->add_option("--segments", segment_counts, "segment counts for discrete factors");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "emit the configured field map as CSV");
    std::string synth_config, synth_out;
    std::vector<std::string> synth_sets;
    synth_cmd->add_option("--config", synth_config, "run configuration")->required();
    synth_cmd->add_option("--set", synth_sets, "override section.key=value");
    synth_cmd->add_option("--out", synth_out, "output file (default <outdir>/field_map.csv)");

    // torque
    auto* torque_cmd = app.add_subcommand("torque",
                                          "torque series, spectrum and ripple metrics");
    std::string torque_config;
    std::vector<std::string> torque_sets;
    torque_cmd->add_option("--config", torque_config, "run configuration")->required();
    torque_cmd->add_option("--set", torque_sets, "override section.key=value");

    // tooth-forces
    auto* tooth_cmd = app.add_subcommand("tooth-forces", "per-tooth force waveforms");
    std::string tooth_config;
    std::vector<std::string> tooth_sets;
    tooth_cmd->add_option("--config", tooth_config, "run configuration")->required();
    tooth_cmd->add_option("--set", tooth_sets, "override section.key=value");

    // spectrum2d
    auto* spec2d_cmd = app.add_subcommand("spectrum2d",
                                          "space-time spectrum of the tooth forces");
    std::string spec2d_config, spec2d_component = "radial", spec2d_mode = "teeth";
    std::vector<std::string> spec2d_sets;
    spec2d_cmd->add_option("--config", spec2d_config, "run configuration")->required();
    spec2d_cmd->add_option("--set", spec2d_sets, "override section.key=value");
    spec2d_cmd->add_option("--component", spec2d_component, "radial|tangential|axial")
        ->check(CLI::IsMember({"radial", "tangential", "axial"}));
    spec2d_cmd->add_option("--mode", spec2d_mode, "teeth (2D FFT) or mean (tooth-averaged)")
        ->check(CLI::IsMember({"teeth", "mean"}));

    // axial-force
    auto* axial_cmd = app.add_subcommand("axial-force",
                                         "torque-based axial force estimate for a skewed rotor");
    double axial_torque = 0.0, axial_diameter = 0.0, axial_theta = 0.0;
    bool axial_radians = false;
    axial_cmd->add_option("--torque", axial_torque, "torque [N*m]")->required();
    axial_cmd->add_option("--diameter", axial_diameter, "rotor diameter [m]")->required();
    axial_cmd->add_option("--theta", axial_theta, "skew angle (degrees unless --radians)")
        ->required();
    axial_cmd->add_flag("--radians", axial_radians, "interpret --theta as radians");

    // compare
    auto* compare_cmd = app.add_subcommand("compare",
                                           "run two configurations and form per-order "
                                           "suppression ratios");
    std::string compare_reference, compare_variant;
    std::vector<std::string> compare_ref_sets, compare_var_sets;
    compare_cmd->add_option("--reference", compare_reference, "reference configuration")
        ->required();
    compare_cmd->add_option("--variant", compare_variant, "variant configuration")->required();
    compare_cmd->add_option("--set-reference", compare_ref_sets, "override for the reference");
    compare_cmd->add_option("--set-variant", compare_var_sets, "override for the variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n"
                  << "run 'gapforce --help' for the command list\n";
        return 1;
    }

    set_worker_threads(global.threads);

    try {
        if (skew_cmd->parsed()) {
            return run_skew_table(global, poles, slots, g_max, theta_deg, theta_opt->count() > 0,
                                  segment_counts);
        }
        if (synth_cmd->parsed()) {
            return run_synth(global, synth_config, synth_sets, synth_out);
        }
        if (torque_cmd->parsed()) {
            return run_torque_cmd(global, torque_config, torque_sets);
        }
        if (tooth_cmd->parsed()) {
            return run_tooth_forces_cmd(global, tooth_config, tooth_sets);
        }
        if (spec2d_cmd->parsed()) {
            return run_spectrum2d(global, spec2d_config, spec2d_sets, spec2d_component,
                                  spec2d_mode);
        }
        if (axial_cmd->parsed()) {
            return run_axial_force(axial_torque, axial_diameter, axial_theta, axial_radians);
        }
        if (compare_cmd->parsed()) {
            return run_compare_cmd(global, compare_reference, compare_variant, compare_ref_sets,
                                   compare_var_sets);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
