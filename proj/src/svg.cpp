#include "ergoprobe/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ergoprobe {

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "fdt_line") return PlotKind::fdt_line;
    if (name == "scaling_semilog") return PlotKind::scaling_semilog;
    if (name == "decay_curves") return PlotKind::decay_curves;
    throw std::invalid_argument("unknown plot kind '" + name + "'");
}

PlotKind default_plot_kind(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::scaling: return PlotKind::scaling_semilog;
    case ExperimentKind::decay: return PlotKind::decay_curves;
    case ExperimentKind::rmt_fdt:
    case ExperimentKind::chain_fdt: return PlotKind::fdt_line;
    case ExperimentKind::correlators: break;
    }
    throw std::invalid_argument("no plot kind for the correlators experiment");
}

namespace {

constexpr double kW = 640, kH = 440, kL = 80, kR = 20, kT = 30, kB = 110;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axes {
    double x0, x1, y0, y1;
    bool log_y = false;

    double px(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return kH - kB - (v - y0) / (y1 - y0) * (kH - kT - kB);
    }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

void pad(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double d = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
        lo -= d;
        hi += d;
    } else {
        const double d = 0.05 * (hi - lo);
        lo -= d;
        hi += d;
    }
}

class Canvas {
public:
    explicit Canvas(const Axes& ax) : ax_(ax) {
        os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        frame();
    }

    void labels(const std::string& x, const std::string& y) {
        text(kL + (kW - kL - kR) / 2, kH - kB + 35, x, "middle");
        os_ << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
            << (kT + kH - kB) / 2 << ")\">" << y << "</text>\n";
    }

    void marker(double x, double y, const char* color) {
        os_ << "<circle cx=\"" << ax_.px(x) << "\" cy=\"" << ax_.py(y) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* color, bool dashed) {
        os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (dashed)
            os_ << " stroke-dasharray=\"6,4\"";
        os_ << " points=\"";
        for (const auto& [x, y] : pts)
            os_ << ax_.px(x) << ',' << ax_.py(y) << ' ';
        os_ << "\"/>\n";
    }

    void caption(const std::vector<std::string>& lines) {
        double y = kH - kB + 55;
        for (const auto& l : lines) {
            text(kL, y, l, "start");
            y += 15;
        }
    }

    std::string str() { return os_.str() + "</svg>\n"; }

private:
    void text(double x, double y, const std::string& s, const char* anchor) {
        os_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"" << anchor << "\">" << s
            << "</text>\n";
    }

    void frame() {
        os_ << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
            << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = ax_.x0 + (ax_.x1 - ax_.x0) * i / 4.0;
            const double fy = ax_.y0 + (ax_.y1 - ax_.y0) * i / 4.0;
            text(ax_.px(fx), kH - kB + 16, num(fx), "middle");
            const double yv = ax_.log_y ? std::pow(10.0, fy) : fy;
            const double ypix = kH - kB - (fy - ax_.y0) / (ax_.y1 - ax_.y0) * (kH - kT - kB);
            text(kL - 6, ypix + 4, num(yv), "end");
        }
    }

    Axes ax_;
    std::ostringstream os_;
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << body;
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

std::string fdt_line(const SweepResult& r) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : r.points)
        if (!p.failed)
            pts.emplace_back(p.point.inv_gamma, p.point.delta2);
    Axes ax{0, 1, 0, 1};
    if (!pts.empty()) {
        ax.x0 = ax.x1 = pts[0].first;
        ax.y0 = ax.y1 = pts[0].second;
        for (const auto& [x, y] : pts) {
            ax.x0 = std::min(ax.x0, x); ax.x1 = std::max(ax.x1, x);
            ax.y0 = std::min(ax.y0, y); ax.y1 = std::max(ax.y1, y);
        }
    }
    pad(ax.x0, ax.x1);
    pad(ax.y0, ax.y1);
    Canvas c(ax);
    c.labels("measured inverse decay rate", "long-time fluctuation");
    std::vector<std::string> cap;
    for (std::size_t k = 0; k < r.fits.size(); ++k) {
        const auto& f = r.fits[k];
        const char* col = kColors[k % 6];
        for (std::size_t i : f.members)
            c.marker(r.points[i].point.inv_gamma, r.points[i].point.delta2, col);
        const double s = f.fit["slope"], b = f.fit["intercept"];
        c.polyline({{ax.x0, s * ax.x0 + b}, {ax.x1, s * ax.x1 + b}}, col, false);
        cap.push_back(f.label + ": slope (chi) = " + num(s) + ", intercept = " + num(b) + ", R^2 = " +
                      num(f.fit.r_squared));
    }
    if (r.fits.empty())
        for (const auto& [x, y] : pts)
            c.marker(x, y, kColors[0]);
    c.caption(cap);
    return c.str();
}

std::string scaling(const SweepResult& r) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : r.points)
        if (!p.failed && p.point.chi * p.point.dos_bar > 0.0)
            pts.emplace_back(p.grid.n_total, p.point.chi * p.point.dos_bar);
    Axes ax{0, 1, 0, 1, true};
    if (!pts.empty()) {
        ax.x0 = ax.x1 = pts[0].first;
        ax.y0 = ax.y1 = std::log10(pts[0].second);
        for (const auto& [x, y] : pts) {
            ax.x0 = std::min(ax.x0, x); ax.x1 = std::max(ax.x1, x);
            ax.y0 = std::min(ax.y0, std::log10(y)); ax.y1 = std::max(ax.y1, std::log10(y));
        }
    }
    pad(ax.x0, ax.x1);
    pad(ax.y0, ax.y1);
    Canvas c(ax);
    c.labels("qubits N", "chi * mean DOS (log scale)");
    for (const auto& [x, y] : pts)
        c.marker(x, y, kColors[0]);
    std::vector<std::string> cap;
    for (std::size_t k = 0; k < r.fits.size(); ++k) {
        const auto& f = r.fits[k];
        const double a = f.fit["a"], cc = f.fit["c"];
        std::vector<std::pair<double, double>> line;
        for (int i = 0; i <= 20; ++i) {
            const double x = ax.x0 + (ax.x1 - ax.x0) * i / 20.0;
            line.emplace_back(x, a * std::exp(-cc * x));
        }
        c.polyline(line, kColors[k % 6], k > 0);
        cap.push_back(f.label + ": a = " + num(a) + ", c = " + num(cc) + ", R^2 = " + num(f.fit.r_squared));
    }
    c.caption(cap);
    return c.str();
}

std::string decay(const SweepResult& r) {
    Axes ax{0, 1, -0.1, 1.05};
    double tmax = 0.0;
    for (const auto& p : r.points)
        for (const auto& cv : p.curves) {
            tmax = std::max(tmax, cv.measured.times(cv.measured.size() - 1) * p.gamma_theory);
            ax.y0 = std::min(ax.y0, cv.measured.values.minCoeff() - 0.05);
            ax.y1 = std::max(ax.y1, cv.measured.values.maxCoeff() + 0.05);
        }
    if (tmax > 0.0)
        ax.x1 = tmax;
    Canvas c(ax);
    c.labels("Gamma t", "observable");
    std::vector<std::string> cap;
    std::size_t k = 0;
    for (const auto& p : r.points)
        for (const auto& cv : p.curves) {
            const char* col = kColors[k++ % 6];
            std::vector<std::pair<double, double>> meas, pred;
            for (Index i = 0; i < cv.measured.size(); ++i) {
                const double x = cv.measured.times(i) * p.gamma_theory;
                meas.emplace_back(x, cv.measured.values(i));
                pred.emplace_back(x, cv.predicted(i));
            }
            c.polyline(meas, col, false);
            c.polyline(pred, col, true);
            cap.push_back(std::string(to_string(cv.observable)) + " (g = " + num(p.grid.g) + ", beta = " +
                          num(p.grid.beta) + "): max |measured - predicted| = " + num(cv.max_abs_deviation) +
                          ", diagonal ensemble = " + num(cv.o_de));
        }
    cap.push_back("solid: exact evolution; dashed: exponential decay to the coarse-grained average");
    c.caption(cap);
    return c.str();
}

}  // namespace

void emit_plot(const SweepResult& result, PlotKind kind, const std::string& path) {
    const ExperimentKind e = result.config.experiment;
    switch (kind) {
    case PlotKind::fdt_line:
        if (e != ExperimentKind::rmt_fdt && e != ExperimentKind::chain_fdt)
            throw std::invalid_argument("fdt_line plot needs an rmt_fdt or chain_fdt result");
        write_file(path, fdt_line(result));
        return;
    case PlotKind::scaling_semilog:
        if (e != ExperimentKind::scaling)
            throw std::invalid_argument("scaling_semilog plot needs a scaling result");
        write_file(path, scaling(result));
        return;
    case PlotKind::decay_curves:
        if (e != ExperimentKind::decay)
            throw std::invalid_argument("decay_curves plot needs a decay result");
        write_file(path, decay(result));
        return;
    }
}

}  // namespace ergoprobe
