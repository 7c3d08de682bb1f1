#include "fracdrift/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fracdrift/io.hpp"

namespace fracdrift::plots {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kMarginL = 60, kMarginR = 20, kMarginT = 30, kMarginB = 40;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string render_line_svg(const std::vector<double>& x, const std::vector<double>& y,
                            const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(kWidth) << "\" height=\""
       << int(kHeight) << "\" viewBox=\"0 0 " << int(kWidth) << " " << int(kHeight) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    const double x0 = kMarginL, x1 = kWidth - kMarginR;
    const double y0 = kHeight - kMarginB, y1 = kMarginT;
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
       << "\" stroke=\"black\"/>\n";

    if (!x.empty() && x.size() == y.size()) {
        double xmin = *std::min_element(x.begin(), x.end());
        double xmax = *std::max_element(x.begin(), x.end());
        double ymin = *std::min_element(y.begin(), y.end());
        double ymax = *std::max_element(y.begin(), y.end());
        if (xmax == xmin) xmax = xmin + 1.0;
        if (ymax == ymin) ymax = ymin + 1.0;
        os << "<text x=\"" << x0 - 5 << "\" y=\"" << y0 << "\" text-anchor=\"end\" font-size=\"10\">"
           << fmt(ymin) << "</text>\n";
        os << "<text x=\"" << x0 - 5 << "\" y=\"" << y1 + 4
           << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(ymax) << "</text>\n";
        os << "<text x=\"" << x0 << "\" y=\"" << y0 + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xmin) << "</text>\n";
        os << "<text x=\"" << x1 << "\" y=\"" << y0 + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xmax) << "</text>\n";
        os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double px = x0 + (x[i] - xmin) / (xmax - xmin) * (x1 - x0);
            const double py = y0 - (y[i] - ymin) / (ymax - ymin) * (y0 - y1);
            os << io::format_double(px) << "," << io::format_double(py) << " ";
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir) {
    std::ifstream is(csv_path);
    if (!is) throw std::runtime_error("emit_plots: missing csv " + csv_path);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("emit_plots: empty csv " + csv_path);

    std::vector<std::string> columns;
    {
        std::istringstream hs(header);
        std::string tok;
        while (std::getline(hs, tok, ',')) columns.push_back(tok);
    }
    if (columns.empty()) throw std::runtime_error("emit_plots: bad header");

    std::vector<std::vector<double>> data(columns.size());
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::size_t c = 0;
        while (std::getline(ls, tok, ',') && c < columns.size()) data[c++].push_back(std::stod(tok));
    }

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    for (std::size_t c = 1; c < columns.size(); ++c) {
        const std::string svg = render_line_svg(data[0], data[c], columns[c] + " vs " + columns[0]);
        const std::string name = out_dir + "/" + columns[c] + ".svg";
        io::write_text_file(name, svg);
        written.push_back(name);
    }
    return written;
}

}  // namespace fracdrift::plots
