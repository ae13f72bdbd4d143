#include <cstdio>
#include <fstream>
#include <sstream>

#include "eigensense/experiment.hpp"

namespace eigensense {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(key + ": bad numeric value '" + item + "'");
        }
    }
    return out;
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": bad numeric value '" + v + "'");
    }
}

long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": bad integer value '" + v + "'");
    }
}

std::string join(const std::vector<double>& v) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        if (i) out += ",";
        out += buf;
    }
    return out;
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "experiment") {
            if (val == "cdf") spec.experiment = ExperimentKind::Cdf;
            else if (val == "threshold") spec.experiment = ExperimentKind::Threshold;
            else if (val == "detection" || val == "detect")
                spec.experiment = ExperimentKind::Detection;
            else if (val == "sweep") spec.experiment = ExperimentKind::Sweep;
            else throw ConfigError("experiment: unknown value '" + val + "'");
        } else if (key == "detector") {
            if (val == "med") spec.detector = DetectorKind::MED;
            else if (val == "cnd") spec.detector = DetectorKind::CND;
            else throw ConfigError("detector: unknown value '" + val + "'");
        } else if (key == "case") {
            if (val == "real") spec.vc = ValueCase::Real;
            else if (val == "complex") spec.vc = ValueCase::Complex;
            else throw ConfigError("case: unknown value '" + val + "'");
        } else if (key == "scenario") {
            if (val == "S0" || val == "s0") spec.scenario = Scenario::S0;
            else if (val == "S1" || val == "s1") spec.scenario = Scenario::S1;
            else throw ConfigError("scenario: unknown value '" + val + "'");
        } else if (key == "K") spec.K = static_cast<int>(parse_int(val, key));
        else if (key == "N") spec.N = static_cast<int>(parse_int(val, key));
        else if (key == "t") spec.t = static_cast<int>(parse_int(val, key));
        else if (key == "sigma_s2") spec.sigma_s2 = parse_double(val, key);
        else if (key == "sigma_u2") spec.sigma_u2 = parse_double(val, key);
        else if (key == "snr_db") {
            spec.snr_db = parse_double(val, key);
            spec.has_snr_db = true;
        } else if (key == "channel") spec.channel = parse_list(val, key);
        else if (key == "channel_policy") spec.channel_policy = val;
        else if (key == "n_runs") spec.n_runs = static_cast<int>(parse_int(val, key));
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(val, key));
        else if (key == "pfa_grid") spec.pfa_grid = parse_list(val, key);
        else if (key == "sweep_pfa") spec.sweep_pfa = parse_double(val, key);
        else if (key == "snr_grid_db") spec.snr_grid_db = parse_list(val, key);
        else if (key == "output") spec.output_path = val;
        else if (key == "format") {
            if (val == "csv") spec.format = EmitFormat::Csv;
            else if (val == "json") spec.format = EmitFormat::Json;
            else throw ConfigError("format: unknown value '" + val + "'");
        } else if (key == "workers") spec.workers = static_cast<int>(parse_int(val, key));
        else if (key == "tw_table") spec.tw_table_path = val;
        else if (key == "rel_tol") spec.rel_tol = parse_double(val, key);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    return spec;
}

ExperimentSpec parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string serialize_config(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "experiment = " << to_string(spec.experiment) << "\n";
    out << "detector = " << to_string(spec.detector) << "\n";
    out << "case = " << to_string(spec.vc) << "\n";
    out << "scenario = " << to_string(spec.scenario) << "\n";
    out << "K = " << spec.K << "\n";
    out << "N = " << spec.N << "\n";
    out << "t = " << spec.t << "\n";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", spec.sigma_s2);
    out << "sigma_s2 = " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", spec.sigma_u2);
    out << "sigma_u2 = " << buf << "\n";
    if (spec.has_snr_db) {
        std::snprintf(buf, sizeof(buf), "%.17g", spec.snr_db);
        out << "snr_db = " << buf << "\n";
    }
    if (!spec.channel.empty()) out << "channel = " << join(spec.channel) << "\n";
    out << "channel_policy = " << spec.channel_policy << "\n";
    out << "n_runs = " << spec.n_runs << "\n";
    out << "seed = " << spec.seed << "\n";
    if (!spec.pfa_grid.empty()) out << "pfa_grid = " << join(spec.pfa_grid) << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", spec.sweep_pfa);
    out << "sweep_pfa = " << buf << "\n";
    if (!spec.snr_grid_db.empty()) out << "snr_grid_db = " << join(spec.snr_grid_db) << "\n";
    if (!spec.output_path.empty()) out << "output = " << spec.output_path << "\n";
    out << "format = " << to_string(spec.format) << "\n";
    out << "workers = " << spec.workers << "\n";
    if (!spec.tw_table_path.empty()) out << "tw_table = " << spec.tw_table_path << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", spec.rel_tol);
    out << "rel_tol = " << buf << "\n";
    return out.str();
}

}  // namespace eigensense
