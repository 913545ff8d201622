#include "cbim/cli.hpp"

int main(int argc, char** argv) { return cbim::cli::run(argc, argv); }
