#include "gslab/cli.hpp"

int main(int argc, char** argv) { return gslab::cli::run(argc, argv); }
