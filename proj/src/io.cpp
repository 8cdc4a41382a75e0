#include "gapforce/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gapforce/skew.hpp"

namespace gapforce {

std::string format_double(double value) {
    char buf[64];
    const auto result =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t pos = line.find(sep, begin);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(begin));
            break;
        }
        fields.push_back(line.substr(begin, pos - begin));
        begin = pos + 1;
    }
    return fields;
}

std::string trim(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const std::size_t last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& msg) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

int parse_index(const std::string& token, const std::string& source, std::size_t line,
                const char* what) {
    int value = 0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
        fail_at(source, line, std::string("malformed ") + what + " index '" + token + "'");
    }
    if (value < 0) {
        fail_at(source, line, std::string(what) + " index must be non-negative, got '" + token +
                                  "'");
    }
    return value;
}

double parse_value(const std::string& token, const std::string& source, std::size_t line,
                   const char* what) {
    double value = 0.0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
        fail_at(source, line, std::string("malformed ") + what + " value '" + token + "'");
    }
    if (!std::isfinite(value)) {
        fail_at(source, line, std::string(what) + " value must be finite, got '" + token + "'");
    }
    return value;
}

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

constexpr const char* kFieldHeader6 = "slice,itime,itheta,Br,Btheta,Bz";
constexpr const char* kFieldHeader5 = "slice,itime,itheta,Br,Btheta";
constexpr const char* kSlotHeader = "slice,slot,itime,isample,Br,Btheta,Bz";
constexpr const char* kSpectrumHeader = "m,n,amplitude,phase";

}  // namespace

AirGapFieldMap read_field_csv(std::istream& in, const std::string& source_name) {
    const std::vector<std::string> lines = read_lines(in);
    if (lines.empty()) fail_at(source_name, 1, "empty file, expected a field-map header");

    bool has_bz = true;
    if (lines[0] == kFieldHeader6) {
        has_bz = true;
    } else if (lines[0] == kFieldHeader5) {
        has_bz = false;
    } else {
        fail_at(source_name, 1,
                std::string("unexpected header '") + lines[0] + "', expected '" + kFieldHeader6 +
                    "'");
    }
    const std::size_t columns = has_bz ? 6 : 5;

    struct Row {
        int slice, itime, itheta;
        double br, bt, bz;
        std::size_t line;
    };
    std::vector<Row> rows;
    rows.reserve(lines.size());
    int max_slice = -1, max_time = -1, max_angle = -1;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li == lines.size() - 1) break;  // trailing newline
        const std::vector<std::string> f = split(lines[li], ',');
        if (f.size() != columns) {
            fail_at(source_name, li + 1,
                    "expected " + std::to_string(columns) + " fields, got " +
                        std::to_string(f.size()));
        }
        Row row{};
        row.slice = parse_index(f[0], source_name, li + 1, "slice");
        row.itime = parse_index(f[1], source_name, li + 1, "time");
        row.itheta = parse_index(f[2], source_name, li + 1, "angle");
        row.br = parse_value(f[3], source_name, li + 1, "Br");
        row.bt = parse_value(f[4], source_name, li + 1, "Btheta");
        row.bz = has_bz ? parse_value(f[5], source_name, li + 1, "Bz") : 0.0;
        row.line = li + 1;
        max_slice = std::max(max_slice, row.slice);
        max_time = std::max(max_time, row.itime);
        max_angle = std::max(max_angle, row.itheta);
        rows.push_back(row);
    }
    if (rows.empty()) fail_at(source_name, lines.size(), "no data rows");

    const std::size_t cells = static_cast<std::size_t>(max_slice + 1) * (max_time + 1) *
                              (max_angle + 1);
    if (cells > rows.size() * 4 || cells > (std::size_t{1} << 27)) {
        throw ParseError(source_name + ": index coverage has gaps: indices span " +
                         std::to_string(cells) + " cells but the file carries " +
                         std::to_string(rows.size()) + " rows");
    }

    AirGapFieldMap map;
    map.slices = max_slice + 1;
    map.time_samples = max_time + 1;
    map.angle_samples = max_angle + 1;
    map.bz_absent = !has_bz;
    map.br.assign(cells, 0.0);
    map.btheta.assign(cells, 0.0);
    map.bz.assign(cells, 0.0);

    std::vector<uint8_t> seen(cells, 0);
    for (const Row& row : rows) {
        const std::size_t at = map.index(row.slice, row.itime, row.itheta);
        if (seen[at]) {
            fail_at(source_name, row.line,
                    "duplicate entry for (slice=" + std::to_string(row.slice) +
                        ", itime=" + std::to_string(row.itime) +
                        ", itheta=" + std::to_string(row.itheta) + ")");
        }
        seen[at] = 1;
        map.br[at] = row.br;
        map.btheta[at] = row.bt;
        map.bz[at] = row.bz;
    }
    for (int s = 0; s <= max_slice; ++s) {
        for (int i = 0; i <= max_time; ++i) {
            for (int j = 0; j <= max_angle; ++j) {
                if (!seen[map.index(s, i, j)]) {
                    throw ParseError(source_name + ": missing entry for (slice=" +
                                     std::to_string(s) + ", itime=" + std::to_string(i) +
                                     ", itheta=" + std::to_string(j) + ")");
                }
            }
        }
    }

    const ValidationReport report = validate_field_map(map);
    if (!report.ok()) throw ParseError(source_name + ": " + report.joined());
    return map;
}

AirGapFieldMap read_field_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open field map '" + path.string() + "'");
    return read_field_csv(in, path.string());
}

void write_field_csv(const AirGapFieldMap& map, std::ostream& out) {
    ensure_valid(map);
    out << (map.bz_absent ? kFieldHeader5 : kFieldHeader6) << '\n';
    for (int s = 0; s < map.slices; ++s) {
        for (int i = 0; i < map.time_samples; ++i) {
            for (int j = 0; j < map.angle_samples; ++j) {
                const std::size_t at = map.index(s, i, j);
                out << s << ',' << i << ',' << j << ',' << format_double(map.br[at]) << ','
                    << format_double(map.btheta[at]);
                if (!map.bz_absent) out << ',' << format_double(map.bz[at]);
                out << '\n';
            }
        }
    }
    if (!out) throw Error("failed while writing field map");
}

void write_field_csv_file(const AirGapFieldMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write field map '" + path.string() + "'");
    write_field_csv(map, out);
}

SlotPathField read_slot_path_csv(std::istream& in, const std::string& source_name) {
    const std::vector<std::string> lines = read_lines(in);
    if (lines.empty()) fail_at(source_name, 1, "empty file, expected a slot-path header");
    if (lines[0] != kSlotHeader) {
        fail_at(source_name, 1,
                std::string("unexpected header '") + lines[0] + "', expected '" + kSlotHeader +
                    "'");
    }

    struct Row {
        int slice, slot, itime, isample;
        double br, bt, bz;
        std::size_t line;
    };
    std::vector<Row> rows;
    int max_slice = -1, max_slot = -1, max_time = -1, max_sample = -1;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li == lines.size() - 1) break;
        const std::vector<std::string> f = split(lines[li], ',');
        if (f.size() != 7) {
            fail_at(source_name, li + 1,
                    "expected 7 fields, got " + std::to_string(f.size()));
        }
        Row row{};
        row.slice = parse_index(f[0], source_name, li + 1, "slice");
        row.slot = parse_index(f[1], source_name, li + 1, "slot");
        row.itime = parse_index(f[2], source_name, li + 1, "time");
        row.isample = parse_index(f[3], source_name, li + 1, "sample");
        row.br = parse_value(f[4], source_name, li + 1, "Br");
        row.bt = parse_value(f[5], source_name, li + 1, "Btheta");
        row.bz = parse_value(f[6], source_name, li + 1, "Bz");
        row.line = li + 1;
        max_slice = std::max(max_slice, row.slice);
        max_slot = std::max(max_slot, row.slot);
        max_time = std::max(max_time, row.itime);
        max_sample = std::max(max_sample, row.isample);
        rows.push_back(row);
    }
    if (rows.empty()) fail_at(source_name, lines.size(), "no data rows");

    SlotPathField paths;
    paths.slices = max_slice + 1;
    paths.slot_count = max_slot + 1;
    paths.time_samples = max_time + 1;
    paths.radial_samples = max_sample + 1;
    const std::size_t cells = paths.grid_size();
    if (cells > rows.size() * 4 || cells > (std::size_t{1} << 27)) {
        throw ParseError(source_name + ": index coverage has gaps: indices span " +
                         std::to_string(cells) + " cells but the file carries " +
                         std::to_string(rows.size()) + " rows");
    }
    paths.br.assign(cells, 0.0);
    paths.btheta.assign(cells, 0.0);
    paths.bz.assign(cells, 0.0);

    std::vector<uint8_t> seen(cells, 0);
    for (const Row& row : rows) {
        const std::size_t at = paths.index(row.slice, row.slot, row.itime, row.isample);
        if (seen[at]) {
            fail_at(source_name, row.line, "duplicate slot-path entry");
        }
        seen[at] = 1;
        paths.br[at] = row.br;
        paths.btheta[at] = row.bt;
        paths.bz[at] = row.bz;
    }
    for (std::size_t at = 0; at < cells; ++at) {
        if (!seen[at]) {
            throw ParseError(source_name + ": slot-path index coverage has gaps");
        }
    }
    return paths;
}

SlotPathField read_slot_path_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open slot paths '" + path.string() + "'");
    return read_slot_path_csv(in, path.string());
}

void write_slot_path_csv(const SlotPathField& paths, std::ostream& out) {
    out << kSlotHeader << '\n';
    for (int s = 0; s < paths.slices; ++s) {
        for (int k = 0; k < paths.slot_count; ++k) {
            for (int i = 0; i < paths.time_samples; ++i) {
                for (int p = 0; p < paths.radial_samples; ++p) {
                    const std::size_t at = paths.index(s, k, i, p);
                    out << s << ',' << k << ',' << i << ',' << p << ','
                        << format_double(paths.br[at]) << ',' << format_double(paths.btheta[at])
                        << ',' << format_double(paths.bz[at]) << '\n';
                }
            }
        }
    }
    if (!out) throw Error("failed while writing slot paths");
}

void write_slot_path_csv_file(const SlotPathField& paths, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write slot paths '" + path.string() + "'");
    write_slot_path_csv(paths, out);
}

void write_spectrum_csv(const Spectrum1D& spectrum, std::ostream& out) {
    out << kSpectrumHeader << '\n';
    for (int k = 0; k < spectrum.order_count(); ++k) {
        out << "0," << k << ',' << format_double(spectrum.amplitude[k]) << ','
            << format_double(spectrum.phase[k]) << '\n';
    }
    if (!out) throw Error("failed while writing spectrum");
}

void write_spectrum_csv(const Spectrum2D& spectrum, std::ostream& out) {
    out << kSpectrumHeader << '\n';
    for (int jm = 0; jm < spectrum.space_bins; ++jm) {
        const int m = jm <= spectrum.space_bins / 2 ? jm : jm - spectrum.space_bins;
        for (int in = 0; in < spectrum.time_bins; ++in) {
            const int n = in <= spectrum.time_bins / 2 ? in : in - spectrum.time_bins;
            const std::complex<double> c =
                spectrum.coeff[static_cast<std::size_t>(jm) * spectrum.time_bins + in];
            out << m << ',' << n << ',' << format_double(std::abs(c)) << ','
                << format_double(std::arg(c)) << '\n';
        }
    }
    if (!out) throw Error("failed while writing spectrum");
}

void write_spectrum_csv_file(const Spectrum1D& spectrum, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write spectrum '" + path.string() + "'");
    write_spectrum_csv(spectrum, out);
}

void write_spectrum_csv_file(const Spectrum2D& spectrum, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write spectrum '" + path.string() + "'");
    write_spectrum_csv(spectrum, out);
}

std::vector<SpectrumRow> read_spectrum_csv(std::istream& in, const std::string& source_name) {
    const std::vector<std::string> lines = read_lines(in);
    if (lines.empty() || lines[0] != kSpectrumHeader) {
        fail_at(source_name, 1, std::string("expected header '") + kSpectrumHeader + "'");
    }
    std::vector<SpectrumRow> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li == lines.size() - 1) break;
        const std::vector<std::string> f = split(lines[li], ',');
        if (f.size() != 4) {
            fail_at(source_name, li + 1, "expected 4 fields, got " + std::to_string(f.size()));
        }
        SpectrumRow row;
        row.m = parse_value(f[0], source_name, li + 1, "m");
        row.n = parse_value(f[1], source_name, li + 1, "n");
        row.amplitude = parse_value(f[2], source_name, li + 1, "amplitude");
        row.phase = parse_value(f[3], source_name, li + 1, "phase");
        rows.push_back(row);
    }
    return rows;
}

std::vector<SpectrumRow> read_spectrum_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open spectrum '" + path.string() + "'");
    return read_spectrum_csv(in, path.string());
}

void write_tooth_forces_csv(const ToothForceSeries& series, std::ostream& out) {
    out << "tooth,itime,Fr,Ft,Fz\n";
    const ToothForcePage& page = series.total;
    for (int k = 0; k < page.tooth_count; ++k) {
        for (int i = 0; i < page.time_samples; ++i) {
            const std::size_t at = page.index(k, i);
            out << k << ',' << i << ',' << format_double(page.fr[at]) << ','
                << format_double(page.ft[at]) << ',' << format_double(page.fz[at]) << '\n';
        }
    }
    if (!out) throw Error("failed while writing tooth forces");
}

void write_tooth_forces_csv_file(const ToothForceSeries& series,
                                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write tooth forces '" + path.string() + "'");
    write_tooth_forces_csv(series, out);
}

void write_tooth_forces_per_slice_csv(const ToothForceSeries& series, std::ostream& out) {
    out << "slice,tooth,itime,Fr,Ft,Fz\n";
    for (std::size_t s = 0; s < series.per_slice.size(); ++s) {
        const ToothForcePage& page = series.per_slice[s];
        for (int k = 0; k < page.tooth_count; ++k) {
            for (int i = 0; i < page.time_samples; ++i) {
                const std::size_t at = page.index(k, i);
                out << s << ',' << k << ',' << i << ',' << format_double(page.fr[at]) << ','
                    << format_double(page.ft[at]) << ',' << format_double(page.fz[at]) << '\n';
            }
        }
    }
    if (!out) throw Error("failed while writing tooth forces");
}

void write_tooth_forces_per_slice_csv_file(const ToothForceSeries& series,
                                           const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write tooth forces '" + path.string() + "'");
    write_tooth_forces_per_slice_csv(series, out);
}

void write_torque_csv(const TorqueSeries& series, std::ostream& out) {
    out << "itime,rotor_angle,Mz\n";
    for (std::size_t i = 0; i < series.torque.size(); ++i) {
        out << i << ',' << format_double(series.rotor_angle[i]) << ','
            << format_double(series.torque[i]) << '\n';
    }
    if (!out) throw Error("failed while writing torque series");
}

void write_torque_csv_file(const TorqueSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write torque series '" + path.string() + "'");
    write_torque_csv(series, out);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed while writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

struct ConfigContext {
    std::string source;
    std::size_t line = 0;
    std::string section;
    std::string key;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(source + ":" + std::to_string(line) + ": [" + section + "] " + key +
                         ": " + msg);
    }
};

double parse_config_double(const std::string& value, const ConfigContext& ctx) {
    double out = 0.0;
    const std::string t = trim(value);
    const auto result = std::from_chars(t.data(), t.data() + t.size(), out);
    if (result.ec != std::errc{} || result.ptr != t.data() + t.size() || !std::isfinite(out)) {
        ctx.fail("expected a finite number, got '" + value + "'");
    }
    return out;
}

int parse_config_int(const std::string& value, const ConfigContext& ctx) {
    int out = 0;
    const std::string t = trim(value);
    const auto result = std::from_chars(t.data(), t.data() + t.size(), out);
    if (result.ec != std::errc{} || result.ptr != t.data() + t.size()) {
        ctx.fail("expected an integer, got '" + value + "'");
    }
    return out;
}

bool parse_config_bool(const std::string& value, const ConfigContext& ctx) {
    const std::string t = trim(value);
    if (t == "true") return true;
    if (t == "false") return false;
    ctx.fail("expected true or false, got '" + value + "'");
}

// "<number> [deg|rad]", default radians.
double parse_config_angle(const std::string& value, const ConfigContext& ctx) {
    std::istringstream stream(trim(value));
    std::string number, unit, extra;
    stream >> number >> unit >> extra;
    if (number.empty() || !extra.empty()) ctx.fail("expected '<number> [deg|rad]'");
    const double raw = parse_config_double(number, ctx);
    if (unit.empty() || unit == "rad") return raw;
    if (unit == "deg") return raw * std::numbers::pi / 180.0;
    ctx.fail("unknown angle unit '" + unit + "' (expected deg or rad)");
}

FieldHarmonic parse_config_harmonic(const std::string& value, const ConfigContext& ctx) {
    std::istringstream stream(trim(value));
    std::vector<std::string> tokens;
    std::string token;
    while (stream >> token) tokens.push_back(token);
    if (tokens.size() != 5 && tokens.size() != 6) {
        ctx.fail("expected '<component> <m> <n> <amplitude> <phase [deg|rad]>'");
    }
    FieldHarmonic h;
    if (tokens[0] == "radial") {
        h.component = FieldComponent::radial;
    } else if (tokens[0] == "tangential") {
        h.component = FieldComponent::tangential;
    } else if (tokens[0] == "axial") {
        h.component = FieldComponent::axial;
    } else {
        ctx.fail("unknown component '" + tokens[0] + "'");
    }
    h.spatial_order = parse_config_int(tokens[1], ctx);
    h.temporal_order = parse_config_int(tokens[2], ctx);
    h.amplitude = parse_config_double(tokens[3], ctx);
    if (h.amplitude < 0.0) ctx.fail("harmonic amplitude must be non-negative");
    const std::string phase_text =
        tokens.size() == 6 ? tokens[4] + " " + tokens[5] : tokens[4];
    h.phase = parse_config_angle(phase_text, ctx);
    return h;
}

ToothPathMode parse_config_path_mode(const std::string& value, const ConfigContext& ctx) {
    const std::string t = trim(value);
    if (t == "one_section") return ToothPathMode::one_section;
    if (t == "three_section") return ToothPathMode::three_section;
    ctx.fail("expected one_section or three_section, got '" + value + "'");
}

SkewStyle parse_config_style(const std::string& value, const ConfigContext& ctx) {
    const std::string t = trim(value);
    if (t == "none") return SkewStyle::none;
    if (t == "step") return SkewStyle::step;
    if (t == "vee") return SkewStyle::vee;
    if (t == "continuous") return SkewStyle::continuous;
    ctx.fail("unknown skew style '" + value + "'");
}

struct ParserState {
    RunConfig config;
    std::set<std::string> seen;  // "section.key"
    bool theta_optimal = false;
};

using KeySetter = std::function<void(ParserState&, const std::string&, const ConfigContext&)>;

const std::map<std::string, std::map<std::string, KeySetter>>& key_table() {
    static const std::map<std::string, std::map<std::string, KeySetter>> table = {
        {"geometry",
         {
             {"poles",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.pole_count = parse_config_int(v, c);
              }},
             {"slots",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.slot_count = parse_config_int(v, c);
              }},
             {"airgap_radius",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.airgap_radius = parse_config_double(v, c);
              }},
             {"rotor_radius",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.rotor_radius = parse_config_double(v, c);
              }},
             {"axial_length",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.axial_length = parse_config_double(v, c);
              }},
             {"rotor_diameter",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.rotor_diameter = parse_config_double(v, c);
              }},
             {"slot_bottom_radius",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.geometry.slot_bottom_radius = parse_config_double(v, c);
              }},
         }},
        {"skew",
         {
             {"style",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.skew.style = parse_config_style(v, c);
              }},
             {"segments",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.skew.segment_count = parse_config_int(v, c);
              }},
             {"theta_skew",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  if (trim(v) == "optimal") {
                      s.theta_optimal = true;
                  } else {
                      s.theta_optimal = false;
                      s.config.skew.total_angle = parse_config_angle(v, c);
                  }
              }},
             {"continuous_resolution",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.skew.continuous_resolution = parse_config_int(v, c);
              }},
         }},
        {"grid",
         {
             {"time_samples",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.grid.time_samples = parse_config_int(v, c);
              }},
             {"angle_samples",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.grid.angle_samples = parse_config_int(v, c);
              }},
             {"slices",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.grid.slices = parse_config_int(v, c);
              }},
         }},
        {"synthesis",
         {
             {"harmonic",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.synthesis.push_back(parse_config_harmonic(v, c));
                  s.config.has_synthesis = true;
              }},
         }},
        {"field",
         {
             {"path",
              [](ParserState& s, const std::string& v, const ConfigContext&) {
                  s.config.field.path = trim(v);
                  s.config.has_field = true;
              }},
             {"interpolate",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.field.interpolate = parse_config_bool(v, c);
              }},
         }},
        {"evaluation",
         {
             {"include_bz",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.evaluation.include_bz = parse_config_bool(v, c);
              }},
             {"tooth_path",
              [](ParserState& s, const std::string& v, const ConfigContext& c) {
                  s.config.evaluation.tooth_path = parse_config_path_mode(v, c);
              }},
             {"slot_path_file",
              [](ParserState& s, const std::string& v, const ConfigContext&) {
                  s.config.evaluation.slot_path_file = trim(v);
              }},
             {"output_dir",
              [](ParserState& s, const std::string& v, const ConfigContext&) {
                  s.config.evaluation.output_dir = trim(v);
              }},
         }},
    };
    return table;
}

void finalize_config(ParserState& state, const std::string& source, bool eager_files) {
    RunConfig& config = state.config;

    static const char* kMandatoryGeometry[] = {"poles",        "slots",
                                               "airgap_radius", "rotor_radius",
                                               "axial_length",  "slot_bottom_radius"};
    for (const char* key : kMandatoryGeometry) {
        if (!state.seen.count(std::string("geometry.") + key)) {
            throw ParseError(source + ": [geometry] missing mandatory key '" + std::string(key) +
                             "'");
        }
    }
    if (!state.seen.count("geometry.rotor_diameter")) {
        config.geometry.rotor_diameter = 2.0 * config.geometry.rotor_radius;
    }
    if (state.theta_optimal) {
        config.skew.total_angle =
            optimal_skew_angle(config.geometry.pole_count, config.geometry.slot_count);
    }
    if (config.has_synthesis == config.has_field) {
        throw ParseError(source +
                         ": exactly one of the [synthesis] and [field] blocks must be present");
    }
    validate_run_config(config);

    if (eager_files) {
        auto check = [&](const std::string& rel, const char* what) {
            if (rel.empty()) return;
            const std::filesystem::path p = config.base_dir / rel;
            if (!std::filesystem::exists(p)) {
                throw ParseError(source + ": referenced " + std::string(what) + " '" +
                                 p.string() + "' does not exist");
            }
        };
        check(config.field.path, "field map");
        check(config.evaluation.slot_path_file, "slot-path file");
    }
}

}  // namespace

void validate_run_config(const RunConfig& config) {
    ValidationReport report = validate_geometry(config.geometry);
    {
        const ValidationReport skew = validate_skew(config.skew);
        report.violations.insert(report.violations.end(), skew.violations.begin(),
                                 skew.violations.end());
    }
    if (config.grid.time_samples < 4) report.violations.push_back("grid.time_samples must be >= 4");
    if (config.grid.angle_samples < 8) {
        report.violations.push_back("grid.angle_samples must be >= 8");
    }
    if (config.grid.slices < 1) report.violations.push_back("grid.slices must be >= 1");
    if (config.has_synthesis == config.has_field) {
        report.violations.push_back(
            "exactly one of the [synthesis] and [field] blocks must be present");
    }
    if (!report.ok()) throw ValidationError("invalid configuration: " + report.joined());
}

RunConfig parse_config(const std::string& text, const std::string& source_name,
                       bool eager_files) {
    ParserState state;
    ConfigContext ctx;
    ctx.source = source_name;

    std::istringstream stream(text);
    std::string raw;
    std::size_t line_no = 0;
    std::string section;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        ctx.line = line_no;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(source_name + ":" + std::to_string(line_no) +
                                 ": malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!key_table().count(section)) {
                throw ParseError(source_name + ":" + std::to_string(line_no) +
                                 ": unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source_name + ":" + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        }
        if (section.empty()) {
            throw ParseError(source_name + ":" + std::to_string(line_no) +
                             ": key outside any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        ctx.section = section;
        ctx.key = key;

        const auto& sections = key_table();
        const auto& keys = sections.at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": [" + section +
                             "] unknown key '" + key + "'");
        }
        it->second(state, value, ctx);
        state.seen.insert(section + "." + key);
    }

    finalize_config(state, source_name, eager_files);
    return state.config;
}

RunConfig read_config_file(const std::filesystem::path& path, bool eager_files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig config = parse_config(buf.str(), path.string(), false);
    config.base_dir = path.parent_path();
    if (eager_files) {
        // Re-run the existence checks now that base_dir is known.
        auto check = [&](const std::string& rel, const char* what) {
            if (rel.empty()) return;
            const std::filesystem::path p = config.base_dir / rel;
            if (!std::filesystem::exists(p)) {
                throw ParseError(path.string() + ": referenced " + std::string(what) + " '" +
                                 p.string() + "' does not exist");
            }
        };
        check(config.field.path, "field map");
        check(config.evaluation.slot_path_file, "slot-path file");
    }
    return config;
}

void apply_override(RunConfig& config, const std::string& dotted_key, const std::string& value) {
    const std::size_t dot = dotted_key.find('.');
    if (dot == std::string::npos) {
        throw ParseError("override key '" + dotted_key + "' must look like section.key");
    }
    const std::string section = dotted_key.substr(0, dot);
    const std::string key = dotted_key.substr(dot + 1);
    const auto& sections = key_table();
    const auto sec = sections.find(section);
    if (sec == sections.end()) {
        throw ParseError("override names unknown section '" + section + "'");
    }
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) {
        throw ParseError("override names unknown key '" + dotted_key + "'");
    }

    ParserState state;
    state.config = std::move(config);
    ConfigContext ctx;
    ctx.source = "<override>";
    ctx.line = 0;
    ctx.section = section;
    ctx.key = key;
    if (section == "skew" && key == "theta_skew" && trim(value) == "optimal") {
        state.config.skew.total_angle = optimal_skew_angle(state.config.geometry.pole_count,
                                                           state.config.geometry.slot_count);
    } else {
        it->second(state, value, ctx);
    }
    config = std::move(state.config);
}

}  // namespace gapforce
