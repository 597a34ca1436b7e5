#include "qpg/cli.hpp"

int main(int argc, char** argv) { return qpg::cli::run(argc, argv); }
