#include <graphmatch/trace.hpp>

#include <graphmatch/instance.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <system_error>

namespace gm {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kHeader = "outer,inner,wall_time_s,objective,reg_objective,residual,nnz,lambda,epsilon";

double parse_field_double(const std::string& s, std::size_t line_no) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("trace: bad numeric field '" + s + "' on line " + std::to_string(line_no), line_no);
    return v;
}

int parse_field_int(const std::string& s, std::size_t line_no) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("trace: bad integer field '" + s + "' on line " + std::to_string(line_no), line_no);
    return v;
}

}  // namespace

void SolveTrace::write_csv(std::ostream& out) const {
    out << kHeader << '\n';
    std::string line;
    for (const auto& r : records) {
        line.clear();
        line += std::to_string(r.outer);
        line += ',';
        line += std::to_string(r.inner);
        line += ',';
        line += format_double(r.wall_time_s);
        line += ',';
        line += format_double(r.objective);
        line += ',';
        line += format_double(r.reg_objective);
        line += ',';
        if (r.residual) line += format_double(*r.residual);
        line += ',';
        line += std::to_string(r.nnz);
        line += ',';
        line += format_double(r.lambda);
        line += ',';
        line += format_double(r.epsilon);
        line += '\n';
        out << line;
    }
}

SolveTrace SolveTrace::read_csv(std::istream& in) {
    SolveTrace trace;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("trace: empty stream", 0);
    ++line_no;
    if (line == std::string(kHeader) + "\r") line.pop_back();
    if (line != kHeader) throw ParseError("trace: unexpected header '" + line + "'", line_no);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (fields.size() != 9)
            throw ParseError("trace: expected 9 fields, got " + std::to_string(fields.size()) + " on line " +
                                 std::to_string(line_no),
                             line_no);
        TraceRecord r;
        r.outer = parse_field_int(fields[0], line_no);
        r.inner = parse_field_int(fields[1], line_no);
        r.wall_time_s = parse_field_double(fields[2], line_no);
        r.objective = parse_field_double(fields[3], line_no);
        r.reg_objective = parse_field_double(fields[4], line_no);
        if (!fields[5].empty()) r.residual = parse_field_double(fields[5], line_no);
        r.nnz = parse_field_int(fields[6], line_no);
        r.lambda = parse_field_double(fields[7], line_no);
        r.epsilon = parse_field_double(fields[8], line_no);
        trace.records.push_back(r);
    }
    return trace;
}

void TraceLinter::feed(const TraceRecord& rec, const Matrix* iterate) {
    ++count_;
    auto flag = [this](const std::string& msg) {
        violations_.push_back("record " + std::to_string(count_) + ": " + msg);
    };
    if (!std::isfinite(rec.wall_time_s) || !std::isfinite(rec.objective) || !std::isfinite(rec.reg_objective) ||
        !std::isfinite(rec.lambda) || !std::isfinite(rec.epsilon))
        flag("non-finite field");
    if (rec.nnz < 1) flag("nnz < 1");
    if (have_prev_) {
        if (rec.wall_time_s < prev_.wall_time_s) flag("wall_time_s decreased");
        if (rec.lambda < prev_.lambda) flag("lambda decreased");
        if (rec.epsilon > prev_.epsilon) flag("epsilon increased");
    }
    if (iterate) {
        const auto n = iterate->rows();
        if (rec.nnz > n * n) flag("nnz > n^2");
        if (!is_doubly_stochastic(*iterate, feas_tol_)) flag("iterate not doubly stochastic at tol");
    }
    prev_ = rec;
    have_prev_ = true;
}

void TraceLinter::feed_all(const SolveTrace& trace) {
    for (const auto& r : trace.records) feed(r);
}

}  // namespace gm
