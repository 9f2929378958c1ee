#include "gl3lab/maass_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gl3lab/errors.hpp"
#include "gl3lab/kloosterman.hpp"

namespace gl3lab {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double parse_double(const std::string& s, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ParseError("not a number: '" + s + "'", line_no);
    return v;
}

long parse_long(const std::string& s, int line_no) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not an integer: '" + s + "'", line_no);
    return v;
}

}  // namespace

std::vector<MaassFormGL2> parse_maass_text(const std::string& text, const std::string& source_id) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    MaassFormGL2 f;
    f.source_id = source_id;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto w = split_ws(line);
        if (w.empty() || w[0][0] == '#') continue;
        if (!have_header) {
            if (w.size() != 4 || w[0] != "t" || w[2] != "parity")
                throw ParseError("expected 't <float> parity <even|odd>'", line_no);
            f.t_j = parse_double(w[1], line_no);
            if (w[3] == "even")
                f.parity = Parity::even;
            else if (w[3] == "odd")
                f.parity = Parity::odd;
            else
                throw ParseError("parity must be even or odd", line_no);
            have_header = true;
            continue;
        }
        if (w.size() != 4 || w[0] != "p" || w[2] != "lambda")
            throw ParseError("expected 'p <prime> lambda <float>'", line_no);
        long p = parse_long(w[1], line_no);
        if (!is_prime(p)) throw ParseError(std::to_string(p) + " is not prime", line_no);
        double l = parse_double(w[3], line_no);
        if (!f.lambda_p.emplace(p, l).second)
            throw DuplicatePrime("line " + std::to_string(line_no) + ": prime " + std::to_string(p) + " repeated");
    }
    if (!have_header) return {};
    return {f};
}

std::vector<MaassFormGL2> ingest_maass_data(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    std::vector<MaassFormGL2> out;
    for (const auto& p : files) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw IoError("cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        auto forms = parse_maass_text(ss.str(), p.filename().string());
        out.insert(out.end(), forms.begin(), forms.end());
    }
    return out;
}

std::string serialize_maass(const MaassFormGL2& f) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "t " << f.t_j << " parity " << (f.parity == Parity::even ? "even" : "odd") << "\n";
    for (const auto& [p, l] : f.lambda_p) out << "p " << p << " lambda " << l << "\n";
    return out.str();
}

}  // namespace gl3lab
