#include "primepairs/trace.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "primepairs/common.hpp"

namespace primepairs {

LinearForm LinearForm::make(std::int64_t m, std::int64_t k) {
    if (m < 1 || m > (std::int64_t{1} << 20)) throw UsageError("linear form: m must be in [1, 2^20]");
    if (k == 0) throw UsageError("linear form: k must be nonzero");
    const std::uint64_t ak = static_cast<std::uint64_t>(k < 0 ? -k : k);
    if (ak > (std::uint64_t{1} << 40)) throw UsageError("linear form: |k| must be <= 2^40");
    if (gcd_u64(static_cast<std::uint64_t>(m), ak) != 1) throw UsageError("linear form: gcd(m, k) must be 1");
    return LinearForm{m, k};
}

std::string LinearForm::label() const { return "(" + std::to_string(m) + "," + std::to_string(k) + ")"; }

std::optional<std::string> LinearForm::parity_warning() const {
    if (parity_admissible()) return std::nullopt;
    return "form " + label() + " has m+k even: m*p+k is even for every odd prime p";
}

void SumTrace::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].value) || !std::isfinite(points[i].x))
            throw UsageError("trace: non-finite value at checkpoint " + std::to_string(i));
        if (i > 0 && !(points[i].x > points[i - 1].x)) throw UsageError("trace: x must be strictly increasing");
    }
}

std::vector<double> SumTrace::xs() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.x);
    return v;
}

std::vector<double> SumTrace::values() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.value);
    return v;
}

std::vector<std::uint64_t> geometric_grid(double lo, double hi, double ratio) {
    if (!(lo >= 1) || !(hi >= lo) || !(ratio > 1)) throw UsageError("grid: need 1 <= lo <= hi and ratio > 1");
    std::vector<std::uint64_t> out;
    const double llo = std::log(lo), lr = std::log(ratio);
    for (int i = 0;; ++i) {
        const double v = std::exp(llo + i * lr);
        if (v > hi * (1 + 1e-12)) break;
        const auto n = static_cast<std::uint64_t>(std::llround(std::min(v, hi)));
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

std::uint64_t parse_count(const std::string& text) {
    if (text.empty()) throw UsageError("expected a number, got an empty string");
    // exact for plain integer spellings beyond 2^53
    if (text.size() <= 20 && text.find_first_not_of("0123456789") == std::string::npos) {
        errno = 0;
        const auto v = std::strtoull(text.c_str(), nullptr, 10);
        if (errno == ERANGE) throw UsageError("number out of range: '" + text + "'");
        return v;
    }
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
        throw UsageError("not a number: '" + text + "'");
    if (v < 0 || v != std::floor(v) || v > 1.8e19) throw UsageError("not a non-negative integer: '" + text + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string f; std::getline(ss, f, ':');) parts.push_back(f);
    if (parts.size() != 3) throw UsageError("grid must be lo:hi:ratio, got '" + spec + "'");
    auto num = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0' || !std::isfinite(v)) throw UsageError("bad grid field '" + s + "'");
        return v;
    };
    return geometric_grid(num(parts[0]), num(parts[1]), num(parts[2]));
}

void write_trace_csv(std::ostream& out, const SumTrace& trace) {
    out << "x,value,main,residual\n";
    for (const auto& p : trace.points) {
        out << format_g12(p.x) << ',' << format_g12(p.value) << ',';
        if (p.main) out << format_g12(*p.main);
        out << ',';
        if (p.residual) out << format_g12(*p.residual);
        out << '\n';
    }
}

SumTrace read_trace_csv(std::istream& in) {
    SumTrace t;
    t.operation = "csv";
    std::string line;
    if (!std::getline(in, line)) throw UsageError("trace file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,value,main,residual") throw UsageError("trace file: expected header x,value,main,residual");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 4) throw UsageError("trace file line " + std::to_string(lineno) + ": expected 4 fields");
        auto num = [&](const std::string& s) -> double {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (s.empty() || *end != '\0') throw UsageError("trace file line " + std::to_string(lineno) + ": bad number");
            return v;
        };
        TracePoint p;
        p.x = num(f[0]);
        p.value = num(f[1]);
        if (!f[2].empty()) p.main = num(f[2]);
        if (!f[3].empty()) p.residual = num(f[3]);
        t.points.push_back(p);
    }
    t.validate();
    return t;
}

}  // namespace primepairs
