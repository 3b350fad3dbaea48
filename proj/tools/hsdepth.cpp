#include "hsdepth/cli.hpp"

int main(int argc, char** argv) { return hsdepth::cli::run(argc, argv); }
