#include "afmi/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace afmi {

std::string_view stability_color(StabilityClass c) {
    switch (c) {
        case StabilityClass::StableNode: return "#1a9850";
        case StabilityClass::StableFocus: return "#66bd63";
        case StabilityClass::UnstableNode: return "#d73027";
        case StabilityClass::UnstableFocus: return "#f46d43";
        case StabilityClass::Saddle: return "#4575b4";
        case StabilityClass::NonHyperbolic: return "#984ea3";
    }
    return "#000000";
}

namespace {

std::string f6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Data-to-pixel map for one plot frame.
class Frame {
public:
    Frame(double x0, double x1, double y0, double y1, const SvgStyle& st) : x0_(x0), x1_(x1), y0_(y0), y1_(y1), st_(st) {
        for (double v : {x0, x1, y0, y1}) {
            if (!std::isfinite(v)) throw LayoutError("axis range must be finite");
        }
        if (!(x1 > x0) || !(y1 > y0)) throw LayoutError("degenerate axis range");
        if (st.width <= 2 * st.margin || st.height <= 2 * st.margin) throw LayoutError("canvas smaller than margins");
    }

    double px(double x) const { return st_.margin + (x - x0_) / (x1_ - x0_) * (st_.width - 2 * st_.margin); }
    double py(double y) const { return st_.height - st_.margin - (y - y0_) / (y1_ - y0_) * (st_.height - 2 * st_.margin); }

    std::string points(const std::vector<Eigen::Vector2d>& pts) const {
        std::string s;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!std::isfinite(pts[i](0)) || !std::isfinite(pts[i](1))) continue;
            if (!s.empty()) s += ' ';
            s += f6(px(pts[i](0))) + ',' + f6(py(pts[i](1)));
        }
        return s;
    }

    void open(std::ostringstream& os, std::string_view xlabel, std::string_view ylabel) const {
        const double W = st_.width, H = st_.height, m = st_.margin;
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << st_.width << "\" height=\""
           << st_.height << "\" viewBox=\"0 0 " << st_.width << ' ' << st_.height << "\">\n";
        os << "<defs><clipPath id=\"plot\"><rect x=\"" << f6(m) << "\" y=\"" << f6(m) << "\" width=\"" << f6(W - 2 * m)
           << "\" height=\"" << f6(H - 2 * m) << "\"/></clipPath></defs>\n";
        os << "<rect x=\"0\" y=\"0\" width=\"" << st_.width << "\" height=\"" << st_.height << "\" fill=\"white\"/>\n";
        if (!st_.title.empty()) {
            os << "<text x=\"" << f6(W / 2) << "\" y=\"" << f6(m / 2) << "\" text-anchor=\"middle\" font-size=\"16\">"
               << escape(st_.title) << "</text>\n";
        }
        os << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
           << "<rect x=\"" << f6(m) << "\" y=\"" << f6(m) << "\" width=\"" << f6(W - 2 * m) << "\" height=\""
           << f6(H - 2 * m) << "\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double xv = x0_ + (x1_ - x0_) * i / 5, yv = y0_ + (y1_ - y0_) * i / 5;
            os << "<line x1=\"" << f6(px(xv)) << "\" y1=\"" << f6(H - m) << "\" x2=\"" << f6(px(xv)) << "\" y2=\""
               << f6(H - m + 5) << "\"/>\n";
            os << "<text x=\"" << f6(px(xv)) << "\" y=\"" << f6(H - m + 18)
               << "\" text-anchor=\"middle\" font-size=\"11\" stroke=\"none\" fill=\"black\">" << f6(xv) << "</text>\n";
            os << "<line x1=\"" << f6(m - 5) << "\" y1=\"" << f6(py(yv)) << "\" x2=\"" << f6(m) << "\" y2=\""
               << f6(py(yv)) << "\"/>\n";
            os << "<text x=\"" << f6(m - 8) << "\" y=\"" << f6(py(yv) + 4)
               << "\" text-anchor=\"end\" font-size=\"11\" stroke=\"none\" fill=\"black\">" << f6(yv) << "</text>\n";
        }
        os << "<text x=\"" << f6(W / 2) << "\" y=\"" << f6(H - m / 4)
           << "\" text-anchor=\"middle\" font-size=\"13\" stroke=\"none\" fill=\"black\">" << escape(xlabel)
           << "</text>\n";
        os << "<text x=\"" << f6(m / 5) << "\" y=\"" << f6(H / 2) << "\" transform=\"rotate(-90 " << f6(m / 5)
           << " " << f6(H / 2) << ")\" text-anchor=\"middle\" font-size=\"13\" stroke=\"none\" fill=\"black\">"
           << escape(ylabel)
           << "</text>\n";
        os << "</g>\n";
    }

private:
    double x0_, x1_, y0_, y1_;
    const SvgStyle& st_;
};

}  // namespace

std::string portrait_svg(const PortraitData& d, const SvgStyle& style) {
    const Frame fr(d.x_min, d.x_max, d.y_min, d.y_max, style);
    std::ostringstream os;
    fr.open(os, "prey x", "predator y");

    os << "<g id=\"nullclines\" clip-path=\"url(#plot)\" fill=\"none\" stroke-dasharray=\"6,4\">\n";
    if (d.nullclines) {
        const ModelParams& p = d.params;
        std::vector<Eigen::Vector2d> prey;
        constexpr int kSamples = 400;
        for (int i = 0; i <= kSamples; ++i) {
            const double x = p.k * i / kSamples;
            try {
                const double y = prey_nullcline_y(p, x);
                if (y >= 0) prey.emplace_back(x, y);
            } catch (const InfeasibleError&) {
            }
        }
        os << "<polyline class=\"nullcline prey\" stroke=\"#8c510a\" points=\"" << fr.points(prey) << "\"/>\n";
        const double m = predator_nullcline_slope(p), c = predator_nullcline_intercept(p);
        const std::vector<Eigen::Vector2d> line{{d.x_min, m * d.x_min + c}, {d.x_max, m * d.x_max + c}};
        os << "<polyline class=\"nullcline predator\" stroke=\"#01665e\" points=\"" << fr.points(line) << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"manifolds\" clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"2\">\n";
    for (const auto& m : d.manifolds) {
        std::vector<Eigen::Vector2d> pts{m.origin.location};
        for (const auto& s : m.points) pts.push_back(s);
        const char* colour = is_stable_branch(m.branch) ? "#2166ac" : "#b2182b";
        os << "<polyline class=\"manifold\" data-branch=\"" << to_string(m.branch) << "\" stroke=\"" << colour
           << "\" points=\"" << fr.points(pts) << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"trajectories\" clip-path=\"url(#plot)\" fill=\"none\" stroke=\"#555555\">\n";
    for (const auto& tr : d.trajectories) {
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(tr.samples.size());
        for (const auto& s : tr.samples) pts.push_back(s.state);
        os << "<polyline class=\"trajectory\" points=\"" << fr.points(pts) << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"equilibria\" stroke=\"black\">\n";
    for (const auto& e : d.equilibria) {
        const double x = e.location(0), y = e.location(1);
        if (x < d.x_min || x > d.x_max || y < d.y_min || y > d.y_max) continue;
        os << "<circle class=\"glyph " << (is_interior(e.kind) ? "interior" : "boundary") << "\" data-kind=\""
           << to_string(e.kind) << "\" data-stability=\"" << to_string(e.stability) << "\" cx=\"" << f6(fr.px(x))
           << "\" cy=\"" << f6(fr.py(y)) << "\" r=\"5\" fill=\"" << stability_color(e.stability) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string sweep_svg(const SweepDataset& d, const SvgStyle& style) {
    if (d.rows.empty()) throw LayoutError("empty sweep dataset");
    double y_hi = 0;
    for (const auto& r : d.rows) {
        for (const auto& e : r.interior) y_hi = std::max(y_hi, e.location(0));
    }
    if (y_hi <= 0) y_hi = 1;
    const Frame fr(d.rows.front().xi, d.rows.back().xi, 0.0, 1.05 * y_hi, style);
    std::ostringstream os;
    fr.open(os, "additional food xi", "interior prey level x");

    os << "<g id=\"branches\" stroke=\"none\">\n";
    for (const auto& r : d.rows) {
        for (const auto& e : r.interior) {
            os << "<circle class=\"branch\" data-kind=\"" << to_string(e.kind) << "\" data-stability=\""
               << to_string(e.stability) << "\" cx=\"" << f6(fr.px(r.xi)) << "\" cy=\"" << f6(fr.py(e.location(0)))
               << "\" r=\"2\" fill=\"" << stability_color(e.stability) << "\"/>\n";
        }
    }
    os << "</g>\n<g id=\"events\" stroke=\"#777777\" stroke-dasharray=\"3,3\">\n";
    for (const auto& ev : d.events) {
        os << "<line class=\"event\" data-kind=\"" << to_string(ev.kind) << "\" x1=\"" << f6(fr.px(ev.xi_star))
           << "\" y1=\"" << f6(fr.py(0.0)) << "\" x2=\"" << f6(fr.px(ev.xi_star)) << "\" y2=\""
           << f6(fr.py(1.05 * y_hi)) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

RegimeMap regime_map(const ModelParams& base, double eps_lo, double eps_hi, double xi_lo, double xi_hi, int samples) {
    if (samples < 2) throw DomainError("regime map needs at least 2 samples per axis");
    if (!(eps_hi > eps_lo) || !(xi_hi > xi_lo) || !(eps_lo > 0) || xi_lo < 0) {
        throw DomainError("regime map window must satisfy 0 < eps_lo < eps_hi and 0 <= xi_lo < xi_hi");
    }
    RegimeMap m;
    m.eps_lo = eps_lo;
    m.eps_hi = eps_hi;
    m.xi_lo = xi_lo;
    m.xi_hi = xi_hi;
    m.n_eps = samples;
    m.n_xi = samples;
    m.cells.reserve(static_cast<std::size_t>(samples) * samples);
    for (int j = 0; j < samples; ++j) {
        const double xi = xi_lo + (xi_hi - xi_lo) * (j + 0.5) / samples;
        for (int i = 0; i < samples; ++i) {
            const double eps = eps_lo + (eps_hi - eps_lo) * (i + 0.5) / samples;
            m.cells.push_back(regime_classify(base, eps, xi));
        }
    }

    RegimeCurve b_zero{"b_zero", {}}, c_zero{"c_zero", {}}, slopes{"equal_slopes", {}};
    constexpr int kCurve = 400;
    for (int i = 0; i <= kCurve; ++i) {
        const double eps = eps_lo + (eps_hi - eps_lo) * i / kCurve;
        ModelParams p = base;
        p.epsilon = eps;
        auto keep = [&](RegimeCurve& c, double xi) {
            if (std::isfinite(xi) && xi >= xi_lo && xi <= xi_hi) c.points.emplace_back(eps, xi);
        };
        keep(b_zero, (p.delta - p.beta * (1.0 - eps)) * p.k / (p.beta * eps));
        const double den = p.beta - p.delta * p.alpha - p.beta * eps;
        if (den > 0) keep(c_zero, p.delta / den);
        if (eps < 1.0) keep(slopes, slope_comparison(p).xi_slope_bound);
    }
    m.curves = {b_zero, c_zero, slopes};
    return m;
}

std::string regime_svg(const RegimeMap& m, const SvgStyle& style) {
    if (m.cells.empty()) throw LayoutError("empty regime map");
    const Frame fr(m.eps_lo, m.eps_hi, m.xi_lo, m.xi_hi, style);
    std::ostringstream os;
    fr.open(os, "interference epsilon", "additional food xi");

    auto fill = [](Regime r) {
        switch (r) {
            case Regime::NoInterior: return "#f7f7f7";
            case Regime::OneInterior: return "#fddbc7";
            case Regime::TwoInterior: return "#d1e5f0";
            case Regime::DegenerateBoundary: return "#984ea3";
        }
        return "#ffffff";
    };
    const double de = (m.eps_hi - m.eps_lo) / m.n_eps, dx = (m.xi_hi - m.xi_lo) / m.n_xi;
    os << "<g id=\"regimes\" stroke=\"none\">\n";
    for (int j = 0; j < m.n_xi; ++j) {
        for (int i = 0; i < m.n_eps; ++i) {
            const Regime r = m.cells[static_cast<std::size_t>(j) * m.n_eps + i];
            const double e0 = m.eps_lo + de * i, x1 = m.xi_lo + dx * (j + 1);
            os << "<rect x=\"" << f6(fr.px(e0)) << "\" y=\"" << f6(fr.py(x1)) << "\" width=\""
               << f6(fr.px(e0 + de) - fr.px(e0)) << "\" height=\"" << f6(fr.py(x1 - dx) - fr.py(x1)) << "\" fill=\""
               << fill(r) << "\"/>\n";
        }
    }
    os << "</g>\n<g id=\"boundaries\" clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"2\" stroke-dasharray=\"8,4\">\n";
    const char* colours[] = {"#d73027", "#1a9850", "#8c510a"};
    for (std::size_t c = 0; c < m.curves.size(); ++c) {
        os << "<polyline class=\"boundary\" data-curve=\"" << m.curves[c].name << "\" stroke=\"" << colours[c % 3]
           << "\" points=\"" << fr.points(m.curves[c].points) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace afmi
