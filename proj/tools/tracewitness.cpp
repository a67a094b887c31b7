// Command-line front end for the trace-distance witness simulator.

#include "tw/runner.hpp"

int main(int argc, char** argv) { return tw::runner::cli(argc, argv); }
