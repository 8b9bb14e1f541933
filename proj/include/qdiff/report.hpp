#pragma once

#include "qdiff/errors.hpp"
#include "qdiff/parse.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace qd {

inline constexpr const char* kReportSchema = "qdiff-report/1";

struct Options {
    Rat T = Rat(kDefaultPrecision);
    long long B = 20;  // cohomology and theta window
    long long N = 1;   // declared ramification of the scalars, q^(1/N)
    long long M = 1;   // declared cyclotomic order
    bool enlarge = true;  // retry with larger T or B instead of failing
};

struct Request {
    std::string command;
    std::string input;
    Options options;
};

struct Outcome {
    nlohmann::json report;
    int exit_code = 0;
};

const std::vector<std::string>& commands();
int exit_code(ErrorKind k);

Outcome run(const Request& r);
// Requests are independent; results come back in input order.
std::vector<Outcome> run_batch(const std::vector<Request>& rs, unsigned threads);

std::string render_text(const nlohmann::json& report);

}  // namespace qd
