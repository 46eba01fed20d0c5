#include "molrbf/cli.hpp"

int main(int argc, char** argv) { return molrbf::cli::run(argc, argv); }
