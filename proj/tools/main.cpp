#include "carlbm/cli.hpp"

int main(int argc, char** argv) { return carlbm::cli::run_main(argc, argv); }
