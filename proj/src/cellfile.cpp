#include "phxc/cellfile.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace phxc {

namespace {

using Section = std::map<std::string, std::vector<double>>;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double scalar(const Section& sec, const std::string& key,
              const std::string& where) {
    auto it = sec.find(key);
    if (it == sec.end() || it->second.size() != 1)
        throw std::runtime_error("cell file: missing scalar '" + key +
                                 "' in " + where);
    return it->second[0];
}

std::vector<double> vec(const Section& sec, const std::string& key, int dim,
                        const std::string& where) {
    auto it = sec.find(key);
    if (it == sec.end() || static_cast<int>(it->second.size()) != dim)
        throw std::runtime_error("cell file: '" + key + "' in " + where +
                                 " must have " + std::to_string(dim) +
                                 " components");
    return it->second;
}

}  // namespace

CellFile parse_cell_file(std::istream& in) {
    Section cell_sec, bg_sec;
    std::vector<Section> inclusions;
    Section* current = nullptr;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line == "[[inclusion]]") {
            inclusions.emplace_back();
            current = &inclusions.back();
            continue;
        }
        if (line == "[cell]") { current = &cell_sec; continue; }
        if (line == "[background]") { current = &bg_sec; continue; }
        if (line.front() == '[')
            throw std::runtime_error("cell file: unknown section " + line);
        const auto eq = line.find('=');
        if (eq == std::string::npos || !current)
            throw std::runtime_error("cell file: bad line " +
                                     std::to_string(lineno) + ": " + line);
        const std::string key = trim(line.substr(0, eq));
        std::istringstream vals(line.substr(eq + 1));
        std::vector<double> numbers;
        double x;
        while (vals >> x) numbers.push_back(x);
        if (numbers.empty() || !vals.eof())
            throw std::runtime_error("cell file: bad value on line " +
                                     std::to_string(lineno));
        (*current)[key] = std::move(numbers);
    }

    CellFile out;
    out.dimension = cell_sec.count("dimension")
                        ? static_cast<int>(scalar(cell_sec, "dimension", "[cell]"))
                        : 2;
    if (out.dimension == 2) {
        MaterialPhase bg{scalar(bg_sec, "rho", "[background]"),
                         scalar(bg_sec, "mu", "[background]")};
        std::vector<Inclusion> incs;
        for (std::size_t i = 0; i < inclusions.size(); ++i) {
            const std::string where = "inclusion " + std::to_string(i + 1);
            const auto c = vec(inclusions[i], "corner", 2, where);
            const auto s = vec(inclusions[i], "size", 2, where);
            incs.push_back({{c[0], c[1]},
                            {s[0], s[1]},
                            {scalar(inclusions[i], "rho", where),
                             scalar(inclusions[i], "mu", where)}});
        }
        out.cell2 = build_cell(scalar(cell_sec, "period1", "[cell]"),
                               scalar(cell_sec, "period2", "[cell]"), bg,
                               std::move(incs));
    } else if (out.dimension == 3) {
        auto phase = [](const Section& s, const std::string& where) {
            return ElasticPhase::isotropic(scalar(s, "rho", where),
                                           scalar(s, "lambda", where),
                                           scalar(s, "mu", where));
        };
        std::vector<Box> boxes;
        for (std::size_t i = 0; i < inclusions.size(); ++i) {
            const std::string where = "inclusion " + std::to_string(i + 1);
            const auto c = vec(inclusions[i], "corner", 3, where);
            const auto s = vec(inclusions[i], "size", 3, where);
            boxes.push_back({{c[0], c[1], c[2]},
                             {s[0], s[1], s[2]},
                             phase(inclusions[i], where)});
        }
        out.cell3 = ElasticCell(scalar(cell_sec, "period1", "[cell]"),
                                scalar(cell_sec, "period2", "[cell]"),
                                scalar(cell_sec, "period3", "[cell]"),
                                phase(bg_sec, "[background]"), std::move(boxes));
    } else {
        throw std::runtime_error("cell file: dimension must be 2 or 3");
    }
    return out;
}

CellFile load_cell_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cell file: " + path);
    return parse_cell_file(in);
}

}  // namespace phxc
