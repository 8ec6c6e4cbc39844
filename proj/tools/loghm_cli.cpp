#include "loghm/cli.hpp"

int main(int argc, char** argv) { return loghm::cli::run(argc, argv); }
