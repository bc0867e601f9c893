#include "cli.hpp"

int main(int argc, char** argv) { return tch::cli::run(argc, argv); }
