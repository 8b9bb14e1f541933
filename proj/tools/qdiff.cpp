#include "qdiff/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

namespace {

qd::Rat parse_T(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return qd::Rat(std::stoll(s));
        return qd::Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("-T", "expected an integer or p/r, got '" + s + "'");
    }
}

std::string slurp(std::istream& in) { return std::string(std::istreambuf_iterator<char>(in), {}); }

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdiff: exact q-difference equation toolkit"};
    std::string command, input, file, T = "32", format = "json";
    qd::Options opt;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool no_enlarge = false;

    std::string verbs;
    for (const auto& c : qd::commands()) verbs += c + ", ";
    app.add_option("command", command, "one of " + verbs + "batch")->required();
    app.add_option("input", input, "operator, matrix, system or equation text; '-' or omitted reads stdin");
    app.add_option("-f,--file", file, "read the input (or the batch list) from a file");
    app.add_option("-T,--precision", T, "series precision in exponent units")->capture_default_str();
    app.add_option("-B,--window", opt.B, "cohomology and theta window")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("-N,--ramification", opt.N, "declared q^(1/N)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("-M,--cyclotomic", opt.M, "declared zeta_M")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_flag("--no-enlarge", no_enlarge, "fail instead of raising T or B");
    app.add_option("-j,--jobs", jobs, "worker threads for batch")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        opt.T = parse_T(T);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }
    opt.enlarge = !no_enlarge;

    std::string payload;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) {
            std::cerr << "qdiff: cannot read " << file << "\n";
            return 2;
        }
        payload = slurp(in);
    } else if (input == "-" || (input.empty() && command != "theta")) {
        payload = slurp(std::cin);
    } else {
        payload = input;
    }

    auto emit = [&](const nlohmann::json& rep, bool compact) {
        if (format == "text")
            std::cout << qd::render_text(rep);
        else
            std::cout << rep.dump(compact ? -1 : 2) << "\n";
    };

    if (command == "batch") {
        // one request per line: "<command> <input>"; blank lines and # comments skipped
        std::vector<qd::Request> rs;
        std::istringstream lines(payload);
        for (std::string line; std::getline(lines, line);) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto sp = line.find_first_of(" \t");
            rs.push_back({line.substr(0, sp), sp == std::string::npos ? "" : trim(line.substr(sp)), opt});
        }
        int code = 0;
        for (const auto& o : qd::run_batch(rs, jobs)) {
            emit(o.report, true);
            code = std::max(code, o.exit_code);
        }
        return code;
    }

    const qd::Outcome o = qd::run({command, trim(payload), opt});
    emit(o.report, false);
    return o.exit_code;
}
