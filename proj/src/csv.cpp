#include "ergoprobe/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ergoprobe {

const char* const kCsvHeader =
    "experiment,n_total,n_b,g,beta,seed,delta2,inv_gamma,gamma_fit,dos_bar,chi,chi_times_dos,fit_flag";

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

void check_written(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw std::runtime_error("bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<CsvRow> to_rows(const SweepResult& result) {
    std::vector<CsvRow> rows;
    for (const auto& p : result.points) {
        CsvRow r;
        r.experiment = to_string(result.config.experiment);
        r.n_total = p.grid.n_total;
        r.n_b = p.point.n_b;
        r.g = p.grid.g;
        r.beta = p.grid.beta;
        r.seed = p.grid.seed;
        r.delta2 = p.point.delta2;
        r.inv_gamma = p.point.inv_gamma;
        r.gamma_fit = p.gamma_fit;
        r.dos_bar = p.point.dos_bar;
        r.chi = p.point.chi;
        r.chi_times_dos = p.point.chi * p.point.dos_bar;
        r.fit_flag = p.failed ? "failed" : "ok";
        rows.push_back(r);
    }
    return rows;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    auto out = open_out(path);
    out << kCsvHeader << '\n';
    for (const auto& r : to_rows(result)) {
        out << r.experiment << ',' << r.n_total << ',' << format_double(r.n_b) << ',' << format_double(r.g) << ','
            << format_double(r.beta) << ',' << r.seed << ',' << format_double(r.delta2) << ','
            << format_double(r.inv_gamma) << ',' << format_double(r.gamma_fit) << ',' << format_double(r.dos_bar)
            << ',' << format_double(r.chi) << ',' << format_double(r.chi_times_dos) << ',' << r.fit_flag << '\n';
    }
    check_written(out, path);
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("'" + path + "': unexpected header");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 13)
            throw std::runtime_error("'" + path + "': expected 13 columns");
        CsvRow r;
        r.experiment = f[0];
        r.n_total = std::stoi(f[1]);
        r.n_b = parse_double(f[2]);
        r.g = parse_double(f[3]);
        r.beta = parse_double(f[4]);
        r.seed = std::stoull(f[5]);
        r.delta2 = parse_double(f[6]);
        r.inv_gamma = parse_double(f[7]);
        r.gamma_fit = parse_double(f[8]);
        r.dos_bar = parse_double(f[9]);
        r.chi = parse_double(f[10]);
        r.chi_times_dos = parse_double(f[11]);
        r.fit_flag = f[12];
        rows.push_back(r);
    }
    return rows;
}

void emit_points_csv(const SweepResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "index,n_total,g,beta,seed,estimator,o_free,o_de,inv_gamma_integral,inv_gamma_fit,fit_r2,series_t_end,"
           "gamma_theory,w_o,delta2,delta2_predicted,delta2_continuum,delta2_inf_t,c_prime,chi,chi_predicted,"
           "windowed_delta2,windowed_mu,profile_slow_variation,fit_flag,diagnostic\n";
    for (const auto& p : result.points) {
        std::string diag = p.diagnostic;
        for (char& c : diag)
            if (c == ',' || c == '\n')
                c = ';';
        out << p.grid.index << ',' << p.grid.n_total << ',' << format_double(p.grid.g) << ','
            << format_double(p.grid.beta) << ',' << p.grid.seed << ',' << to_string(p.estimator);
        for (double v : {p.o_free, p.o_de, p.inv_gamma_integral, p.inv_gamma_fit, p.fit_r2, p.series_t_end,
                         p.gamma_theory, p.w_o, p.point.delta2, p.delta2_predicted, p.delta2_continuum,
                         p.delta2_inf_t, p.c_prime, p.point.chi, p.chi_predicted, p.windowed_delta2, p.windowed_mu,
                         p.profile_slow_variation})
            out << ',' << format_double(v);
        out << ',' << (p.failed ? "failed" : "ok") << ',' << diag << '\n';
    }
    check_written(out, path);
}

void emit_fits_csv(const SweepResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "label,kind,n_points,param,value,r_squared,residual_norm\n";
    for (const auto& f : result.fits)
        for (const auto& [name, value] : f.fit.params)
            out << f.label << ',' << f.kind << ',' << f.members.size() << ',' << name << ',' << format_double(value)
                << ',' << format_double(f.fit.r_squared) << ',' << format_double(f.fit.residual_norm) << '\n';
    check_written(out, path);
}

void emit_decay_series_csv(const SweepResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "index,observable,t,measured,predicted,o_de_measured\n";
    for (const auto& p : result.points)
        for (const auto& c : p.curves)
            for (Index i = 0; i < c.measured.size(); ++i)
                out << p.grid.index << ',' << to_string(c.observable) << ',' << format_double(c.measured.times(i))
                    << ',' << format_double(c.measured.values(i)) << ',' << format_double(c.predicted(i)) << ','
                    << format_double(c.o_de) << '\n';
    check_written(out, path);
}

void emit_correlator_csv(const SweepResult& result, const std::string& profile_path, const std::string& pairs_path) {
    auto prof = open_out(profile_path);
    prof << "index,offset_levels,mean_c2,stderr,lorentzian_theory,gamma_theory,gamma_fit\n";
    auto pairs = open_out(pairs_path);
    pairs << "index,mu,nu,alpha,alpha_p,measured,stderr,theory\n";
    for (std::size_t k = 0; k < result.correlators.size(); ++k) {
        const auto& r = result.correlators[k];
        for (std::size_t i = 0; i < r.offsets.size(); ++i)
            prof << k << ',' << format_double(r.offsets[i]) << ',' << format_double(r.profile[i]) << ','
                 << format_double(r.profile_stderr[i]) << ',' << format_double(r.profile_theory[i]) << ','
                 << format_double(r.gamma_theory) << ',' << format_double(r.gamma_fit) << '\n';
        for (const auto& p : r.pairs)
            pairs << k << ',' << p.mu << ',' << p.nu << ',' << p.alpha << ',' << p.alpha_p << ','
                  << format_double(p.measured) << ',' << format_double(p.stderr_) << ',' << format_double(p.theory)
                  << '\n';
    }
    check_written(prof, profile_path);
    check_written(pairs, pairs_path);
}

std::vector<std::string> write_outputs(const SweepResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::string base = (std::filesystem::path(dir) / to_string(result.config.experiment)).string();
    std::vector<std::string> written;
    emit_csv(result, base + ".csv");
    written.push_back(base + ".csv");
    emit_points_csv(result, base + "_points.csv");
    written.push_back(base + "_points.csv");
    switch (result.config.experiment) {
    case ExperimentKind::correlators:
        emit_correlator_csv(result, base + "_profile.csv", base + "_pairs.csv");
        written.push_back(base + "_profile.csv");
        written.push_back(base + "_pairs.csv");
        return written;
    case ExperimentKind::decay:
        emit_decay_series_csv(result, base + "_series.csv");
        written.push_back(base + "_series.csv");
        break;
    default:
        emit_fits_csv(result, base + "_fits.csv");
        written.push_back(base + "_fits.csv");
        break;
    }
    emit_plot(result, default_plot_kind(result.config.experiment), base + ".svg");
    written.push_back(base + ".svg");
    return written;
}

}  // namespace ergoprobe
