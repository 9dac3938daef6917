#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace derinv::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParseOrIo = 1;
inline constexpr int kObstruction = 2;
inline constexpr int kInsufficient = 3;
inline constexpr int kValidation = 4;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Evaluates a Witt vector expression such as "(1,0)+(1,0)" or "V(F((2,1))*3)".
std::string witt_eval(const std::string& expr, uint32_t p, uint32_t a, int n);

}  // namespace derinv::cli
