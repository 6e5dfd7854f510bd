#include "slskit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slskit/errors.hpp"

namespace slskit::io {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw ParseError("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

}  // namespace

void write_fir_block(std::ostream& os, const std::string& name, const FirTransferMatrix& m) {
    os << name << ' ' << m.rows() << ' ' << m.cols() << ' ' << m.start() << ' '
       << m.horizon() << '\n';
    for (int tau = m.start(); tau <= m.horizon(); ++tau) {
        const Matrix& c = m.at(tau);
        for (int i = 0; i < c.rows(); ++i) {
            for (int j = 0; j < c.cols(); ++j) {
                os << (j ? " " : "") << fmt17(c(i, j));
            }
            os << '\n';
        }
    }
}

std::map<std::string, FirTransferMatrix> read_fir_blocks(std::istream& is) {
    std::map<std::string, FirTransferMatrix> out;
    std::string name;
    while (is >> name) {
        int rows = 0, cols = 0, start = 0, horizon = 0;
        if (!(is >> rows >> cols >> start >> horizon)) {
            throw ParseError("parameter block '" + name + "': malformed header");
        }
        if (rows <= 0 || cols <= 0 || (start != 0 && start != 1) || horizon < start) {
            throw ParseError("parameter block '" + name + "': invalid header values");
        }
        FirTransferMatrix m(rows, cols, start, horizon);
        for (int tau = start; tau <= horizon; ++tau) {
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    double v = 0.0;
                    if (!(is >> v)) {
                        throw ParseError("parameter block '" + name +
                                         "': truncated data at spectral index " +
                                         std::to_string(tau));
                    }
                    m.at(tau)(i, j) = v;
                }
            }
        }
        if (!out.emplace(name, std::move(m)).second) {
            throw ParseError("parameter block '" + name + "' appears twice");
        }
    }
    return out;
}

void write_params_file(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, const FirTransferMatrix*>>& blocks) {
    auto os = open_out(path);
    for (const auto& [name, m] : blocks) {
        write_fir_block(os, name, *m);
    }
}

std::map<std::string, FirTransferMatrix> read_params_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ParseError("cannot open parameter file '" + path.string() + "'");
    }
    return read_fir_blocks(is);
}

const FirTransferMatrix& require_block(const std::map<std::string, FirTransferMatrix>& blocks,
                                       const std::string& name) {
    auto it = blocks.find(name);
    if (it == blocks.end()) {
        throw ParseError("parameter file is missing block '" + name + "'");
    }
    return it->second;
}

Matrix read_matrix(std::istream& is, const std::string& source_name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) {
                throw ParseError(source_name + ":" + std::to_string(lineno) +
                                 ": not a number: '" + tok + "'");
            }
            row.push_back(v);
        }
        if (row.empty()) {
            continue;  // blank line
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(source_name + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(rows.front().size()) + " entries, got " +
                             std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(source_name + ": empty matrix");
    }
    Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows.front().size(); ++j) {
            m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
        }
    }
    return m;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ParseError("cannot open matrix file '" + path.string() + "'");
    }
    return read_matrix(is, path.string());
}

void write_signal_csv(const std::filesystem::path& path, const Signal& s) {
    auto os = open_out(path);
    os << 't';
    for (int i = 0; i < s.dimension(); ++i) {
        os << ',' << i;
    }
    os << '\n';
    for (int t = 0; t < s.length(); ++t) {
        os << t;
        for (int i = 0; i < s.dimension(); ++i) {
            os << ',' << fmt9(s[t](i));
        }
        os << '\n';
    }
}

void write_signal_pgm(const std::filesystem::path& path, const Signal& s) {
    auto os = open_out(path);
    os << "P2\n" << s.length() << ' ' << s.dimension() << "\n255\n";
    for (int i = 0; i < s.dimension(); ++i) {
        for (int t = 0; t < s.length(); ++t) {
            const double a = std::abs(s[t](i));
            double l = a > 0.0 ? std::log10(a) : -8.0;
            l = std::clamp(l, -8.0, 1.0);
            const int pixel = static_cast<int>(std::lrint((l + 8.0) / 9.0 * 255.0));
            os << (t ? " " : "") << pixel;
        }
        os << '\n';
    }
}

}  // namespace slskit::io
