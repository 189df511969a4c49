#include "grasshopper/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "grasshopper/errors.hpp"
#include "grasshopper/objective.hpp"

namespace grasshopper {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& l : lines) {
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    }
    return lines;
}

std::vector<std::string_view> words_of(std::string_view line) {
    std::vector<std::string_view> out;
    for (auto w : split(line, ' ')) {
        if (!w.empty()) out.push_back(w);
    }
    return out;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return v;
}

// Parses "name=value" and returns value.
std::string_view field(std::string_view word, std::string_view name) {
    if (word.size() <= name.size() || word.substr(0, name.size()) != name ||
        word[name.size()] != '=') {
        throw ParseError("expected '" + std::string(name) + "=...' in header, got '" +
                         std::string(word) + "'");
    }
    return word.substr(name.size() + 1);
}

constexpr std::array<char, 8> kIndexMagic{'G', 'H', 'K', 'I', 'v', '1', 0, 0};

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void put_array(std::ostream& out, std::span<const T> values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
}

template <typename T>
bool get(std::istream& in, T& value) {
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

template <typename T>
bool get_array(std::istream& in, std::vector<T>& values, std::size_t n) {
    values.resize(n);
    return static_cast<bool>(
        in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(T))));
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text, std::string_view what) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return v;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                          ec.message());
}

std::string grid_to_text(const SphereGrid& grid) {
    std::string out = "GRIDv1 depth=" + std::to_string(grid.depth()) +
                      " n2=" + std::to_string(grid.size()) + "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3& v = grid.point(i);
        out += format_double(v.x);
        out += ' ';
        out += format_double(v.y);
        out += ' ';
        out += format_double(v.z);
        out += ' ';
        out += std::to_string(grid.antipode(i));
        out += '\n';
    }
    return out;
}

SphereGrid grid_from_text(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw ParseError("empty grid file");
    const auto header = words_of(lines[0]);
    if (header.size() != 3 || header[0] != "GRIDv1") {
        throw ParseError("grid header must be 'GRIDv1 depth=<k> n2=<2N>'");
    }
    const int depth = parse_int<int>(field(header[1], "depth"), "depth");
    const auto n2 = parse_int<std::size_t>(field(header[2], "n2"), "n2");
    if (depth < 0 || depth > kMaxDepth || n2 != point_count_for_depth(depth)) {
        throw ParseError("grid header depth/n2 are inconsistent");
    }
    if (lines.size() != n2 + 1) {
        throw ParseError("grid file has " + std::to_string(lines.size() - 1) +
                         " point lines, header says " + std::to_string(n2));
    }
    std::vector<Vec3> points(n2);
    std::vector<std::uint32_t> antipode(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        const auto w = words_of(lines[i + 1]);
        if (w.size() != 4) {
            throw ParseError("grid line " + std::to_string(i + 2) + " needs 4 fields");
        }
        points[i] = {parse_double(w[0], "x"), parse_double(w[1], "y"), parse_double(w[2], "z")};
        antipode[i] = parse_int<std::uint32_t>(w[3], "antipode index");
    }
    try {
        return SphereGrid(depth, std::move(points), std::move(antipode));
    } catch (const GeometryError& e) {
        throw ParseError(std::string("grid file violates grid invariants: ") + e.what());
    }
}

void write_grid(const fs::path& path, const SphereGrid& grid) {
    write_file_atomic(path, grid_to_text(grid));
}

SphereGrid read_grid(const fs::path& path) { return grid_from_text(read_text_file(path)); }

std::string colouring_to_text(int depth, double theta, const Colouring& c) {
    if (!c.is_binary()) throw ConfigError("only binary colourings can be persisted");
    std::string out = "COLv1 depth=" + std::to_string(depth) + " n=" + std::to_string(c.size()) +
                      " theta=" + format_double(theta) + "\n";
    out.reserve(out.size() + c.size() + 1);
    for (double v : c.values()) out += v == 1.0 ? '1' : '0';
    out += '\n';
    return out;
}

ColouringFile colouring_from_text(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.size() != 2) {
        throw ParseError("colouring file needs a header line and one data line");
    }
    const auto header = words_of(lines[0]);
    if (header.size() != 4 || header[0] != "COLv1") {
        throw ParseError("colouring header must be 'COLv1 depth=<k> n=<N> theta=<float>'");
    }
    ColouringFile file;
    file.depth = parse_int<int>(field(header[1], "depth"), "depth");
    const auto n = parse_int<std::size_t>(field(header[2], "n"), "n");
    file.theta = parse_double(field(header[3], "theta"), "theta");
    if (file.depth < 0 || file.depth > kMaxDepth || n != point_count_for_depth(file.depth) / 2) {
        throw ParseError("colouring header depth/n are inconsistent");
    }
    const std::string_view data = lines[1];
    if (data.size() != n) {
        throw ParseError("colouring line has " + std::to_string(data.size()) +
                         " characters, header says " + std::to_string(n));
    }
    std::vector<double> s(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (data[p] != '0' && data[p] != '1') {
            throw ParseError("colouring line has invalid character at position " +
                             std::to_string(p));
        }
        s[p] = data[p] == '1' ? 1.0 : 0.0;
    }
    file.colouring = Colouring(std::move(s));
    return file;
}

void write_colouring(const fs::path& path, int depth, double theta, const Colouring& c) {
    write_file_atomic(path, colouring_to_text(depth, theta, c));
}

ColouringFile read_colouring(const fs::path& path) {
    return colouring_from_text(read_text_file(path));
}

std::string ResultsRow::key() const {
    return format_double(theta) + "|" + algorithm + "|" + std::to_string(seed) + "|" + init;
}

ResultsRow make_results_row(const RunRecord& record, std::string init_label) {
    ResultsRow row;
    row.theta = record.theta;
    row.c = 2.0 * std::numbers::pi / record.theta;
    row.algorithm = std::string(to_string(record.algorithm));
    row.seed = record.seed;
    row.init = std::move(init_label);
    row.final_p = record.final_p;
    row.p_hem = hemisphere_reference(record.theta);
    row.p_minus_hem = row.final_p - row.p_hem;
    row.p_over_hem = row.final_p / row.p_hem;
    row.bell_c = bell_correlation(row.final_p);
    row.steps = record.steps;
    row.accepted = record.flips_accepted;
    row.wall_time = record.wall_seconds;
    return row;
}

std::string results_row_to_csv(const ResultsRow& r) {
    std::string out;
    out += format_double(r.theta) + ',' + format_double(r.c) + ',' + r.algorithm + ',' +
           std::to_string(r.seed) + ',' + r.init + ',' + format_double(r.final_p) + ',' +
           format_double(r.p_hem) + ',' + format_double(r.p_minus_hem) + ',' +
           format_double(r.p_over_hem) + ',' + format_double(r.bell_c) + ',' +
           std::to_string(r.steps) + ',' + std::to_string(r.accepted) + ',' +
           format_double(r.wall_time);
    return out;
}

ResultsRow results_row_from_csv(std::string_view line) {
    const auto f = split(line, ',');
    if (f.size() != 13) {
        throw ParseError("results row needs 13 columns, got " + std::to_string(f.size()));
    }
    ResultsRow r;
    r.theta = parse_double(f[0], "theta");
    r.c = parse_double(f[1], "c");
    r.algorithm = std::string(f[2]);
    r.seed = parse_int<std::uint64_t>(f[3], "seed");
    r.init = std::string(f[4]);
    r.final_p = parse_double(f[5], "final_p");
    r.p_hem = parse_double(f[6], "p_hem");
    r.p_minus_hem = parse_double(f[7], "p_minus_hem");
    r.p_over_hem = parse_double(f[8], "p_over_hem");
    r.bell_c = parse_double(f[9], "bell_c");
    r.steps = parse_int<std::uint64_t>(f[10], "steps");
    r.accepted = parse_int<std::uint64_t>(f[11], "accepted");
    r.wall_time = parse_double(f[12], "wall_time");
    return r;
}

void append_results_row(const fs::path& path, const ResultsRow& row) {
    std::string content;
    if (fs::exists(path)) {
        content = read_text_file(path);
        if (!content.empty() && content.back() != '\n') content += '\n';
    } else {
        content = std::string(kResultsHeader) + "\n";
    }
    content += results_row_to_csv(row) + "\n";
    write_file_atomic(path, content);
}

std::vector<ResultsRow> read_results(const fs::path& path) {
    const std::string text = read_text_file(path);
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != kResultsHeader) {
        throw ParseError("results file " + path.string() + " has an unexpected header");
    }
    std::vector<ResultsRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) rows.push_back(results_row_from_csv(lines[i]));
    return rows;
}

fs::path index_cache_path(const fs::path& dir, const SphereGrid& grid, double theta) {
    std::ostringstream name;
    name << "index_d" << grid.depth() << "_n" << grid.size() << "_t" << std::hex
         << std::bit_cast<std::uint64_t>(theta) << ".bin";
    return dir / name.str();
}

void save_index(const fs::path& path, const KernelIndex& index) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(kIndexMagic.data(), kIndexMagic.size());
        put(out, static_cast<std::int32_t>(index.depth()));
        put(out, static_cast<std::uint64_t>(index.size()));
        put(out, index.theta());
        put(out, index.resolution());
        put(out, static_cast<std::uint64_t>(index.entry_count()));
        put_array(out, index.offsets());
        put_array(out, index.ids());
        put_array(out, index.weights());
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::optional<KernelIndex> load_index(const fs::path& path, const SphereGrid& grid, double theta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::array<char, 8> magic{};
    std::int32_t depth = 0;
    std::uint64_t n2 = 0, entries = 0;
    double stored_theta = 0.0, h = 0.0;
    if (!in.read(magic.data(), magic.size()) || magic != kIndexMagic) return std::nullopt;
    if (!get(in, depth) || !get(in, n2) || !get(in, stored_theta) || !get(in, h) ||
        !get(in, entries)) {
        return std::nullopt;
    }
    if (depth != grid.depth() || n2 != grid.size() ||
        std::bit_cast<std::uint64_t>(stored_theta) != std::bit_cast<std::uint64_t>(theta) ||
        h != grid.resolution()) {
        return std::nullopt;
    }
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint32_t> ids;
    std::vector<double> weights;
    if (!get_array(in, offsets, n2 + 1) || offsets.back() != entries ||
        !get_array(in, ids, entries) || !get_array(in, weights, entries)) {
        return std::nullopt;
    }
    try {
        return KernelIndex(depth, stored_theta, h, std::move(offsets), std::move(ids),
                           std::move(weights));
    } catch (const Error&) {
        return std::nullopt;
    }
}

KernelIndex cached_index(const SphereGrid& grid, double theta,
                         const std::optional<fs::path>& cache_dir) {
    if (!cache_dir) return build_index(grid, theta);
    const fs::path path = index_cache_path(*cache_dir, grid, theta);
    if (auto hit = load_index(path, grid, theta)) return std::move(*hit);
    KernelIndex index = build_index(grid, theta);
    fs::create_directories(*cache_dir);
    save_index(path, index);
    return index;
}

}  // namespace grasshopper
