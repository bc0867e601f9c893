#pragma once

#include <string>
#include <vector>

namespace tch::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kNumeric = 3;
inline constexpr int kIndistinguishable = 4;

// Entry point for `tchlab <gate|walk|dark|resonance> [flags]`.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

// "a:b:step" (inclusive), "x,y,z" or a single value.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace tch::cli
