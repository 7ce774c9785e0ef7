#include "hypdet/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "hypdet/errors.hpp"
#include "hypdet/quadrature.hpp"

namespace hypdet::spectrum {

double buser_L0() { return 2.0 * std::asinh(1.0); }

namespace {

void require_covered(const LengthSpectrum& s, double L, const char* who) {
    if (L > s.cutoff_L + 1e-12)
        throw cutoff_exceeded(std::string(who) + ": L exceeds spectrum cutoff, count would be incomplete");
}

} // namespace

int64_t count_with_iterates(const LengthSpectrum& s, double L) {
    require_covered(s, L, "count_with_iterates");
    if (L <= 0) return 0;
    int64_t n = 0;
    for (const auto& c : s.classes) {
        if (c.length > L) break;
        n += c.oriented_multiplicity * static_cast<int64_t>(std::floor(L / c.length));
    }
    return n;
}

int64_t count_primitive(const LengthSpectrum& s, double L) {
    require_covered(s, L, "count_primitive");
    if (L <= 0) return 0;
    int64_t n = 0;
    for (const auto& c : s.classes) {
        if (c.length > L) break;
        n += c.oriented_multiplicity;
    }
    return n;
}

double systole(const LengthSpectrum& s) {
    if (s.classes.empty()) throw std::domain_error("systole: empty spectrum");
    return s.classes.front().length;
}

double reciprocal_sum(const LengthSpectrum& s, double L) {
    require_covered(s, L, "reciprocal_sum");
    KahanSum acc;
    for (const auto& c : s.classes) {
        if (c.length > L) break;
        acc.add(c.oriented_multiplicity / c.length);
    }
    return acc.value();
}

double buser_bound(int genus, double T, const LengthSpectrum& s) {
    if (genus < 2) throw std::invalid_argument("buser_bound: genus >= 2 required");
    if (T < 0) throw std::invalid_argument("buser_bound: T >= 0 required");
    const double L0 = buser_L0();
    if (s.cutoff_L + 1e-12 < L0)
        throw cutoff_exceeded("buser_bound: spectrum must be complete to 2 arcsinh(1)");
    const double n_short = static_cast<double>(count_with_iterates(s, L0));
    return (genus - 1) * std::exp(T + 6.0) + (2.0 / L0) * n_short * T;
}

bool check_H1(double gap, double eta) {
    if (!(eta > 0)) throw std::invalid_argument("check_H1: eta > 0 required");
    return gap >= eta;
}

bool check_H2(const LengthSpectrum& s, double C, double L, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("check_H2: 0 < alpha < 1 required");
    if (!(C > 0.0)) throw std::invalid_argument("check_H2: C > 0 required");
    const double n = static_cast<double>(count_with_iterates(s, L));
    return n <= C * std::pow(s.volume, alpha);
}

HypothesisReport hypothesis_report(const LengthSpectrum& s, double gap, double eta, double C,
                                   double L, double alpha) {
    HypothesisReport r;
    r.h1_holds = check_H1(gap, eta);
    r.h2_holds = check_H2(s, C, L, alpha);
    r.n_of_L = count_with_iterates(s, L);
    r.systole = s.classes.empty() ? 0.0 : systole(s);
    return r;
}

void save(const LengthSpectrum& s, std::ostream& out) {
    out << "# hypdet spectrum v1\n";
    out << "base " << s.base_name << "\n";
    out << std::setprecision(17);
    out << "cutoff " << s.cutoff_L << "\n";
    out << "volume " << s.volume << "\n";
    out << "genus " << (s.genus ? *s.genus : -1) << "\n";
    out << "exact " << (s.exact ? 1 : 0) << "\n";
    for (const auto& c : s.classes) {
        out << group::format_word(c.word) << ';';
        if (s.exact)
            out << c.trace_p << ';' << c.trace_q << ';';
        else
            out << std::setprecision(17) << c.trace_value << ';' << 0 << ';';
        out << std::setprecision(17) << c.length << ';' << c.oriented_multiplicity << "\n";
    }
}

LengthSpectrum load(std::istream& in) {
    LengthSpectrum s;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# hypdet spectrum", 0) != 0)
        throw std::runtime_error("spectrum load: bad header");
    int genus_raw = -1;
    int exact_raw = 1;
    while (in.peek() != EOF && std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        if (line.find(';') == std::string::npos) {
            ls >> tag;
            if (tag == "base") ls >> s.base_name;
            else if (tag == "cutoff") ls >> s.cutoff_L;
            else if (tag == "volume") ls >> s.volume;
            else if (tag == "genus") ls >> genus_raw;
            else if (tag == "exact") ls >> exact_raw;
            else throw std::runtime_error("spectrum load: unknown header tag " + tag);
            continue;
        }
        PrimitiveClass c;
        std::string field;
        std::vector<std::string> fields;
        std::istringstream fs(line);
        while (std::getline(fs, field, ';')) fields.push_back(field);
        if (fields.size() != 5) throw std::runtime_error("spectrum load: bad class line");
        s.exact = exact_raw != 0;
        c.word = group::parse_word(fields[0], 64);
        if (s.exact) {
            c.trace_p = std::stoll(fields[1]);
            c.trace_q = std::stoll(fields[2]);
            c.trace_value = static_cast<double>(c.trace_p) + std::sqrt(2.0) * static_cast<double>(c.trace_q);
        } else {
            c.trace_value = std::stod(fields[1]);
        }
        c.length = std::stod(fields[3]);
        c.oriented_multiplicity = std::stoi(fields[4]);
        s.classes.push_back(std::move(c));
    }
    if (genus_raw >= 0) s.genus = genus_raw;
    s.exact = exact_raw != 0;
    return s;
}

void save_file(const LengthSpectrum& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save(s, out);
}

LengthSpectrum load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load(in);
}

} // namespace hypdet::spectrum
