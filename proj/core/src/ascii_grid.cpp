#include "sddtm/ascii_grid.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "sddtm/errors.hpp"

namespace sddtm {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool parse_double(const std::string& tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;  // from_chars rejects a leading '+'
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_int(const std::string& tok, std::int64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool is_header_key(const std::string& tok) {
    if (tok.empty() || !(std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_'))
        return false;
    double ignored = 0.0;
    return !parse_double(tok, ignored);  // "nan"/"inf" open the data section, not a key
}

void format_value(std::string& line, double v, int decimals) {
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    if (res.ec != std::errc()) throw IoFailure("value does not fit fixed-point buffer");
    line.append(buf, res.ptr);
}

void format_shortest(std::string& line, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, res.ptr);
}

}  // namespace

void validate_grid(const Grid& g) {
    if (g.rows < 1 || g.cols < 1)
        throw DimensionMismatch("grid dimensions must be at least 1x1");
    if (g.values.size() != static_cast<std::size_t>(g.rows) * g.cols)
        throw DimensionMismatch("grid holds " + std::to_string(g.values.size()) +
                                " values, expected " + std::to_string(g.rows) + "x" +
                                std::to_string(g.cols));
    if (!(g.cell_size > 0.0)) throw MalformedHeader("cell size must be positive");
    for (double v : g.values)
        if (!std::isfinite(v)) throw NonFiniteValue("grid contains a non-finite value");
}

Grid read_ascii_grid(std::istream& in) {
    std::map<std::string, double> header;
    std::string tok;
    std::string pending_value_tok;

    // Header: alternating key / numeric value tokens until the first token
    // that is not a key.
    while (in >> tok) {
        if (!is_header_key(tok)) {
            pending_value_tok = tok;  // first data token
            break;
        }
        std::string key = lower(tok);
        std::string val_tok;
        if (!(in >> val_tok)) throw MalformedHeader("header key '" + key + "' has no value");
        double value = 0.0;
        if (key == "ncols" || key == "nrows") {
            std::int64_t n = 0;
            if (!parse_int(val_tok, n))
                throw MalformedHeader("header key '" + key + "' needs an integer, got '" +
                                      val_tok + "'");
            value = static_cast<double>(n);
        } else if (!parse_double(val_tok, value)) {
            throw MalformedHeader("header key '" + key + "' has non-numeric value '" + val_tok +
                                  "'");
        }
        if (!header.emplace(key, value).second)
            throw MalformedHeader("duplicate header key '" + key + "'");
    }

    auto require = [&](const std::string& key) {
        auto it = header.find(key);
        if (it == header.end()) throw MalformedHeader("missing header key '" + key + "'");
        return it->second;
    };

    const std::int64_t ncols = static_cast<std::int64_t>(require("ncols"));
    const std::int64_t nrows = static_cast<std::int64_t>(require("nrows"));
    if (ncols < 1 || nrows < 1) throw MalformedHeader("ncols and nrows must be positive");

    const double cell_size = require("cellsize");
    if (!(cell_size > 0.0)) throw MalformedHeader("cellsize must be positive");

    const bool has_xc = header.count("xllcorner") > 0;
    const bool has_xm = header.count("xllcenter") > 0;
    const bool has_yc = header.count("yllcorner") > 0;
    const bool has_ym = header.count("yllcenter") > 0;
    if (has_xc && has_xm) throw MalformedHeader("both xllcorner and xllcenter present");
    if (has_yc && has_ym) throw MalformedHeader("both yllcorner and yllcenter present");
    if (!has_xc && !has_xm) throw MalformedHeader("missing header key 'xllcorner'");
    if (!has_yc && !has_ym) throw MalformedHeader("missing header key 'yllcorner'");

    const double x_origin = has_xc ? header["xllcorner"] : header["xllcenter"] - cell_size / 2.0;
    const double y_origin = has_yc ? header["yllcorner"] : header["yllcenter"] - cell_size / 2.0;

    const bool has_nodata = header.count("nodata_value") > 0;
    const double nodata = has_nodata ? header["nodata_value"] : 0.0;

    Grid g;
    g.rows = static_cast<int>(nrows);
    g.cols = static_cast<int>(ncols);
    g.cell_size = cell_size;
    g.x_origin = x_origin;
    g.y_origin = y_origin;

    const std::size_t expected = static_cast<std::size_t>(nrows) * static_cast<std::size_t>(ncols);
    g.values.reserve(expected);

    auto consume = [&](const std::string& t) {
        double v = 0.0;
        if (!parse_double(t, v)) throw NonFiniteValue("non-numeric data token '" + t + "'");
        if (!std::isfinite(v)) throw NonFiniteValue("non-finite data value '" + t + "'");
        if (has_nodata && v == nodata)
            throw NodataPresent("raster contains the nodata sentinel; complete rasters required");
        if (g.values.size() == expected)
            throw DimensionMismatch("more data values than nrows*ncols");
        g.values.push_back(v);
    };

    if (!pending_value_tok.empty()) consume(pending_value_tok);
    while (in >> tok) consume(tok);

    if (g.values.size() != expected)
        throw DimensionMismatch("got " + std::to_string(g.values.size()) +
                                " data values, expected " + std::to_string(expected));
    return g;
}

Grid read_ascii_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "' for reading");
    return read_ascii_grid(in);
}

void write_ascii_grid(const Grid& g, std::ostream& out, int decimals) {
    if (decimals < 1 || decimals > 17)
        throw std::invalid_argument("decimals must be in [1, 17]");
    validate_grid(g);

    std::string line;
    line.reserve(static_cast<std::size_t>(g.cols) * (decimals + 8));

    line = "ncols ";
    line += std::to_string(g.cols);
    line += "\nnrows ";
    line += std::to_string(g.rows);
    line += "\nxllcorner ";
    format_shortest(line, g.x_origin);
    line += "\nyllcorner ";
    format_shortest(line, g.y_origin);
    line += "\ncellsize ";
    format_shortest(line, g.cell_size);
    line += '\n';
    out << line;

    for (int r = 0; r < g.rows; ++r) {
        line.clear();
        for (int c = 0; c < g.cols; ++c) {
            if (c > 0) line += ' ';
            format_value(line, g.at(r, c), decimals);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoFailure("write failed");
}

void write_ascii_grid_file(const Grid& g, const std::string& path, int decimals) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open '" + path + "' for writing");
    write_ascii_grid(g, out, decimals);
    out.close();
    if (!out) throw IoFailure("error closing '" + path + "'");
}

}  // namespace sddtm
